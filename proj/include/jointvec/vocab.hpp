#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace jointvec {

// Word <-> id mapping with a reserved RARE token at id 0. Ids above 0 are
// assigned by descending corpus frequency (ties broken by word string), so
// an id doubles as a frequency rank. Immutable after construction and safe
// to share across threads.
class Vocabulary {
 public:
  static constexpr const char* kRareToken = "RARE";

  // Selects the top max_size words by frequency; everything else is folded
  // into RARE, whose count becomes the total of the dropped words.
  static Vocabulary from_counts(const std::unordered_map<std::string, std::int64_t>& counts,
                                std::size_t max_size);

  int rare_id() const { return 0; }
  int size() const { return static_cast<int>(words_.size()); }

  // Id for a token already lowercased; unknown words map to RARE.
  int id_or_rare(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? rare_id() : it->second;
  }

  // -1 when absent (does not fall back to RARE).
  int find(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& word(int id) const { return words_.at(id); }
  std::int64_t count(int id) const { return counts_.at(id); }
  const std::vector<std::string>& words() const { return words_; }

  // TSV `word<TAB>count`, ordered by id.
  void dump(std::ostream& out) const;
  static Vocabulary load(std::istream& in);

  // Rebuild from a plain word list (checkpoint files carry words but not
  // counts); counts are zero.
  static Vocabulary from_words(const std::vector<std::string>& words);

  // An empty placeholder (no RARE token); only useful as an assignment
  // target.
  Vocabulary() = default;

 private:
  void push(std::string word, std::int64_t count);

  std::vector<std::string> words_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

std::string lowercase(std::string s);

// Whitespace tokenization of one-sentence-per-line text; tokens lowercased.
std::unordered_map<std::string, std::int64_t> count_tokens_text(std::istream& in);

// Counted n-grams, TSV lines `count<TAB>w1 w2 ... wn`; each word receives the
// line's count.
std::unordered_map<std::string, std::int64_t> count_tokens_ngram_tsv(std::istream& in);

inline Vocabulary build_vocabulary(std::istream& text, std::size_t max_size) {
  return Vocabulary::from_counts(count_tokens_text(text), max_size);
}

}  // namespace jointvec
