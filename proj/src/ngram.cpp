#include "jointvec/ngram.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace jointvec {

namespace {

std::string key_of(std::span<const int> ids) {
  std::string k;
  k.reserve(ids.size() * 4);
  for (int id : ids) {
    k += std::to_string(id);
    k += ',';
  }
  return k;
}

}  // namespace

void NgramSource::add(std::span<const int> ids, std::int64_t count) {
  flat_.insert(flat_.end(), ids.begin(), ids.end());
  counts_.push_back(count);
}

void NgramSource::finalize() {
  cum_.resize(counts_.size());
  std::int64_t run = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    run += counts_[i];
    cum_[i] = run;
  }
  total_ = run;
}

NgramSource NgramSource::from_text(std::istream& in, const Vocabulary& vocab, int n) {
  if (n < 1) throw std::invalid_argument("ngram length must be >= 1");
  NgramSource src;
  src.n_ = n;
  // Dedup in first-seen order so the sampling distribution is reproducible.
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::vector<int> sent;
  while (std::getline(in, line)) {
    sent.clear();
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) sent.push_back(vocab.id_or_rare(lowercase(std::move(tok))));
    if (static_cast<int>(sent.size()) < n) continue;
    for (std::size_t start = 0; start + n <= sent.size(); ++start) {
      std::span<const int> gram{sent.data() + start, static_cast<std::size_t>(n)};
      auto [it, inserted] = seen.emplace(key_of(gram), src.counts_.size());
      if (inserted) {
        src.add(gram, 1);
      } else {
        ++src.counts_[it->second];
      }
    }
  }
  src.finalize();
  return src;
}

NgramSource NgramSource::from_counted_tsv(std::istream& in, const Vocabulary& vocab) {
  NgramSource src;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  int line_no = 0;
  std::vector<int> gram;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("ngram tsv line " + std::to_string(line_no) + ": missing tab");
    std::int64_t count = 0;
    try {
      count = std::stoll(line.substr(0, tab));
    } catch (const std::exception&) {
      throw std::runtime_error("ngram tsv line " + std::to_string(line_no) + ": bad count");
    }
    gram.clear();
    std::istringstream ws(line.substr(tab + 1));
    std::string tok;
    while (ws >> tok) gram.push_back(vocab.id_or_rare(lowercase(std::move(tok))));
    if (gram.empty())
      throw std::runtime_error("ngram tsv line " + std::to_string(line_no) + ": no words");
    if (src.n_ == 0) src.n_ = static_cast<int>(gram.size());
    if (static_cast<int>(gram.size()) != src.n_)
      throw std::runtime_error("ngram tsv line " + std::to_string(line_no) +
                               ": expected " + std::to_string(src.n_) + " words, got " +
                               std::to_string(gram.size()));
    auto [it, inserted] = seen.emplace(key_of(gram), src.counts_.size());
    if (inserted) {
      src.add(gram, count);
    } else {
      src.counts_[it->second] += count;
    }
  }
  src.finalize();
  return src;
}

NgramSource NgramSource::from_tuples(
    int n, const std::vector<std::pair<std::vector<int>, std::int64_t>>& tuples) {
  NgramSource src;
  src.n_ = n;
  for (const auto& [ids, count] : tuples) {
    if (static_cast<int>(ids.size()) != n) throw std::invalid_argument("tuple length mismatch");
    src.add(ids, count);
  }
  src.finalize();
  return src;
}

NgramBlock NgramSource::sample_block(int block_size, Rng& rng) const {
  if (empty() || total_ <= 0) throw std::runtime_error("no n-gram training data to sample from");
  if (block_size < 1) throw std::invalid_argument("block_size must be >= 1");
  NgramBlock block;
  block.n = n_;
  block.ids.reserve(static_cast<std::size_t>(block_size) * n_);
  for (int b = 0; b < block_size; ++b) {
    const std::int64_t r = static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(total_)));
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), r);
    const std::size_t idx = static_cast<std::size_t>(it - cum_.begin());
    const auto gram = tuple(idx);
    block.ids.insert(block.ids.end(), gram.begin(), gram.end());
  }
  return block;
}

std::vector<int> corrupt_ngram(std::span<const int> ngram, const Vocabulary& vocab, Rng& rng,
                               CorruptPosition mode) {
  if (ngram.empty()) throw std::invalid_argument("cannot corrupt an empty ngram");
  if (vocab.size() < 2) throw std::runtime_error("vocabulary too small to corrupt against");
  std::vector<int> out(ngram.begin(), ngram.end());
  const int pos = corrupt_index(static_cast<int>(ngram.size()), mode, rng);
  const int original = out[pos];
  int repl = rng.uniform_index(vocab.size());
  while (repl == original) repl = rng.uniform_index(vocab.size());
  out[pos] = repl;
  return out;
}

}  // namespace jointvec
