#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <vector>

#include "jointvec/rng.hpp"
#include "jointvec/vocab.hpp"

namespace jointvec {

// A block of fixed-length word-id tuples sampled for one training pass.
struct NgramBlock {
  int n = 0;
  std::vector<int> ids;  // size() * n, row-major

  int size() const { return n == 0 ? 0 : static_cast<int>(ids.size()) / n; }
  std::span<const int> tuple(int t) const {
    return {ids.data() + static_cast<std::size_t>(t) * n, static_cast<std::size_t>(n)};
  }
};

enum class CorruptPosition { Middle, Random };

// Count-weighted store of distinct n-grams over vocabulary ids. Immutable
// after construction; sampling takes the caller's random stream.
class NgramSource {
 public:
  // Sliding windows of length n over whitespace-tokenized lines.
  static NgramSource from_text(std::istream& in, const Vocabulary& vocab, int n);
  // TSV `count<TAB>w1 w2 ... wn`; all lines must agree on n.
  static NgramSource from_counted_tsv(std::istream& in, const Vocabulary& vocab);
  // For tests.
  static NgramSource from_tuples(int n, const std::vector<std::pair<std::vector<int>, std::int64_t>>& tuples);

  // block_size tuples sampled with replacement, weighted by token counts.
  NgramBlock sample_block(int block_size, Rng& rng) const;

  int n() const { return n_; }
  std::size_t type_count() const { return counts_.size(); }
  std::int64_t token_count() const { return total_; }
  bool empty() const { return counts_.empty(); }
  std::span<const int> tuple(std::size_t t) const {
    return {flat_.data() + t * n_, static_cast<std::size_t>(n_)};
  }
  std::int64_t count(std::size_t t) const { return counts_[t]; }

 private:
  void add(std::span<const int> ids, std::int64_t count);
  void finalize();

  int n_ = 0;
  std::vector<int> flat_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> cum_;  // inclusive prefix sums of counts_
  std::int64_t total_ = 0;
};

// Index replaced by corruption: the middle word, floor(n/2).
inline int corrupt_index(int n, CorruptPosition mode, Rng& rng) {
  return mode == CorruptPosition::Middle ? n / 2 : rng.uniform_index(n);
}

// Copy of `ngram` with one position replaced by a uniformly drawn vocabulary
// word, resampled until it differs from the original. Needs vocab size >= 2.
std::vector<int> corrupt_ngram(std::span<const int> ngram, const Vocabulary& vocab, Rng& rng,
                               CorruptPosition mode = CorruptPosition::Middle);

}  // namespace jointvec
