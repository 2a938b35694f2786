#include "jointvec/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace jointvec {

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void Vocabulary::push(std::string word, std::int64_t count) {
  index_.emplace(word, static_cast<int>(words_.size()));
  words_.push_back(std::move(word));
  counts_.push_back(count);
}

Vocabulary Vocabulary::from_counts(const std::unordered_map<std::string, std::int64_t>& counts,
                                   std::size_t max_size) {
  if (max_size < 1) throw std::invalid_argument("vocabulary max_size must be >= 1");

  std::vector<std::pair<std::string, std::int64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.push(kRareToken, 0);
  std::int64_t dropped = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (i < max_size) {
      v.push(ranked[i].first, ranked[i].second);
    } else {
      dropped += ranked[i].second;
    }
  }
  v.counts_[0] = dropped;
  return v;
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
  Vocabulary v;
  for (const auto& w : words) {
    if (v.index_.count(w)) throw std::runtime_error("duplicate word in word list: " + w);
    v.push(w, 0);
  }
  if (v.index_.find(kRareToken) == v.index_.end()) v.push(kRareToken, 0);
  return v;
}

void Vocabulary::dump(std::ostream& out) const {
  for (int id = 0; id < size(); ++id) out << words_[id] << '\t' << counts_[id] << '\n';
}

Vocabulary Vocabulary::load(std::istream& in) {
  Vocabulary v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("vocabulary line " + std::to_string(line_no) + ": missing tab");
    std::string word = line.substr(0, tab);
    std::int64_t count = 0;
    try {
      count = std::stoll(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("vocabulary line " + std::to_string(line_no) + ": bad count");
    }
    if (v.index_.count(word))
      throw std::runtime_error("vocabulary line " + std::to_string(line_no) + ": duplicate word");
    v.push(std::move(word), count);
  }
  if (v.index_.find(kRareToken) == v.index_.end())
    throw std::runtime_error("vocabulary file has no RARE token");
  return v;
}

std::unordered_map<std::string, std::int64_t> count_tokens_text(std::istream& in) {
  std::unordered_map<std::string, std::int64_t> counts;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) ++counts[lowercase(std::move(tok))];
  }
  return counts;
}

std::unordered_map<std::string, std::int64_t> count_tokens_ngram_tsv(std::istream& in) {
  std::unordered_map<std::string, std::int64_t> counts;
  std::string line;
  int line_no = 0;
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
    if (count < 0)
      throw std::runtime_error("ngram tsv line " + std::to_string(line_no) + ": negative count");
    std::istringstream ws(line.substr(tab + 1));
    std::string tok;
    while (ws >> tok) counts[lowercase(std::move(tok))] += count;
  }
  return counts;
}

}  // namespace jointvec
