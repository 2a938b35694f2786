#include "jointvec/wordnet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "jointvec/kernels.hpp"

namespace jointvec {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

int SynsetGraph::intern(const std::string& name) {
  if (finalized_) throw std::logic_error("graph already finalized");
  auto it = id_.find(name);
  if (it != id_.end()) return it->second;
  const int s = static_cast<int>(names_.size());
  id_.emplace(name, s);
  names_.push_back(name);
  adj_.emplace_back();
  return s;
}

void SynsetGraph::load_edges(std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2)
      throw std::runtime_error("hypernym tsv line " + std::to_string(line_no) +
                               ": expected 2 fields");
    const int child = intern(fields[0]);
    const int parent = intern(fields[1]);
    pending_edges_.emplace_back(child, parent);
    has_parent_.insert(child);
  }
}

void SynsetGraph::finalize() {
  if (finalized_) return;
  root_ = static_cast<int>(names_.size());
  id_.emplace(kRootName, root_);
  names_.push_back(kRootName);
  adj_.emplace_back();

  for (auto [child, parent] : pending_edges_) {
    if (child == parent) continue;
    adj_[child].push_back(parent);
    adj_[parent].push_back(child);
  }
  pending_edges_.clear();
  // Every synset without a hypernym hangs off the common root, which makes
  // the graph connected.
  for (int s = 0; s < root_; ++s) {
    if (!has_parent_.count(s)) {
      adj_[s].push_back(root_);
      adj_[root_].push_back(s);
    }
  }
  has_parent_.clear();
  for (auto& nbrs : adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }

  depth_.assign(names_.size(), -1);
  std::deque<int> queue{root_};
  depth_[root_] = 0;
  max_depth_ = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int nb : adj_[u]) {
      if (depth_[nb] < 0) {
        depth_[nb] = depth_[u] + 1;
        max_depth_ = std::max(max_depth_, depth_[nb]);
        queue.push_back(nb);
      }
    }
  }
  finalized_ = true;
}

int SynsetGraph::bfs_len(int si, int sj) const {
  if (si == sj) return 1;
  std::vector<int> dist(names_.size(), -1);
  std::deque<int> queue{si};
  dist[si] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int nb : adj_[u]) {
      if (dist[nb] < 0) {
        dist[nb] = dist[u] + 1;
        if (nb == sj) return dist[nb] + 1;
        queue.push_back(nb);
      }
    }
  }
  throw std::runtime_error("synsets are not connected; graph not finalized?");
}

int SynsetGraph::shortest_path_len(int si, int sj) const {
  if (si < 0 || si >= size() || sj < 0 || sj >= size())
    throw std::out_of_range("unknown synset id");
  if (!finalized_) throw std::logic_error("graph not finalized");
  if (!cache_.empty()) return cache_[static_cast<std::size_t>(si) * size() + sj];
  return bfs_len(si, sj);
}

int SynsetGraph::min_path_len(std::span<const int> from, std::span<const int> to) const {
  if (!finalized_) throw std::logic_error("graph not finalized");
  if (from.empty() || to.empty()) throw std::invalid_argument("empty synset set");
  if (!cache_.empty()) {
    int best = std::numeric_limits<int>::max();
    for (int a : from)
      for (int b : to) best = std::min(best, static_cast<int>(cache_[static_cast<std::size_t>(a) * size() + b]));
    return best;
  }
  std::vector<int> dist(names_.size(), -1);
  std::vector<char> target(names_.size(), 0);
  for (int b : to) target[b] = 1;
  std::deque<int> queue;
  for (int a : from) {
    if (a < 0 || a >= size()) throw std::out_of_range("unknown synset id");
    if (target[a]) return 1;
    if (dist[a] < 0) {
      dist[a] = 0;
      queue.push_back(a);
    }
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int nb : adj_[u]) {
      if (dist[nb] < 0) {
        dist[nb] = dist[u] + 1;
        if (target[nb]) return dist[nb] + 1;
        queue.push_back(nb);
      }
    }
  }
  throw std::runtime_error("synset sets are not connected");
}

void SynsetGraph::build_distance_cache() {
  if (!finalized_) throw std::logic_error("graph not finalized");
  const std::size_t n = names_.size();
  if (n * n > (std::size_t{1} << 28))
    throw std::runtime_error("synset graph too large for the all-pairs distance cache");
  cache_.assign(n * n, 0);
  kernels::parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t src) {
    std::vector<int> dist(n, -1);
    std::deque<int> queue{static_cast<int>(src)};
    dist[src] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int nb : adj_[u]) {
        if (dist[nb] < 0) {
          dist[nb] = dist[u] + 1;
          queue.push_back(nb);
        }
      }
    }
    std::uint16_t* row = cache_.data() + static_cast<std::size_t>(src) * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = static_cast<std::uint16_t>(dist[j] + 1);
  });
}

double synset_similarity(const SynsetGraph& g, int si, int sj) {
  if (g.max_depth() < 1) throw std::runtime_error("graph has no non-root synsets");
  const int len = g.shortest_path_len(si, sj);
  return -std::log(static_cast<double>(len) / (2.0 * g.max_depth()));
}

void WordSynsetMap::add(int word_id, int synset_id) {
  if (frozen_) throw std::logic_error("map already frozen");
  syn_[word_id].push_back(synset_id);
  members_[synset_id].push_back(word_id);
}

void WordSynsetMap::load(std::istream& in, SynsetGraph& graph, const Vocabulary& vocab) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2)
      throw std::runtime_error("membership tsv line " + std::to_string(line_no) +
                               ": expected 2 fields");
    const int word = vocab.find(lowercase(fields[1]));
    if (word < 0) continue;
    const int synset = graph.intern(fields[0]);
    add(word, synset);
  }
}

void WordSynsetMap::freeze() {
  for (auto& [w, syns] : syn_) {
    std::sort(syns.begin(), syns.end());
    syns.erase(std::unique(syns.begin(), syns.end()), syns.end());
    wordnet_words_.push_back(w);
  }
  for (auto& [s, words] : members_) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
  }
  std::sort(wordnet_words_.begin(), wordnet_words_.end());
  frozen_ = true;
}

std::span<const int> WordSynsetMap::synsets_of(int word_id) const {
  auto it = syn_.find(word_id);
  if (it == syn_.end()) return {};
  return it->second;
}

std::span<const int> WordSynsetMap::members_of(int synset_id) const {
  auto it = members_.find(synset_id);
  if (it == members_.end()) return {};
  return it->second;
}

std::optional<double> word_similarity(const SynsetGraph& g, const WordSynsetMap& map, int wi,
                                      int wj) {
  const auto si = map.synsets_of(wi);
  const auto sj = map.synsets_of(wj);
  if (si.empty() || sj.empty()) return std::nullopt;
  const int len = g.min_path_len(si, sj);
  return -std::log(static_cast<double>(len) / (2.0 * g.max_depth()));
}

int RelationTupleSet::relation_index(const std::string& name) const {
  auto it = relation_id_.find(name);
  return it == relation_id_.end() ? -1 : it->second;
}

int RelationTupleSet::intern_relation(const std::string& name) {
  auto it = relation_id_.find(name);
  if (it != relation_id_.end()) return it->second;
  const int r = static_cast<int>(relations_.size());
  relation_id_.emplace(name, r);
  relations_.push_back(name);
  return r;
}

RelationTuple RelationTupleSet::parse_tuple(const std::string& left, const std::string& rel,
                                            const std::string& right, SynsetGraph& graph) {
  return {graph.intern(left), intern_relation(rel), graph.intern(right)};
}

void RelationTupleSet::load_train(std::istream& in, SynsetGraph& graph) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3)
      throw std::runtime_error("train tuple tsv line " + std::to_string(line_no) +
                               ": expected 3 fields");
    train_.push_back(parse_tuple(fields[0], fields[1], fields[2], graph));
  }
}

void RelationTupleSet::load_labeled(std::istream& in, SynsetGraph& graph,
                                    std::vector<LabeledTuple>& out) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4)
      throw std::runtime_error("labeled tuple tsv line " + std::to_string(line_no) +
                               ": expected 4 fields (label 1 or -1 required)");
    bool positive;
    if (fields[3] == "1")
      positive = true;
    else if (fields[3] == "-1")
      positive = false;
    else
      throw std::runtime_error("labeled tuple tsv line " + std::to_string(line_no) +
                               ": label must be 1 or -1");
    out.push_back({parse_tuple(fields[0], fields[1], fields[2], graph), positive});
  }
}

std::vector<std::pair<int, int>> sample_word_pairs(const WordSynsetMap& map,
                                                   const Vocabulary& vocab, int n_words,
                                                   int max_neighbors, Rng& rng) {
  const auto& pool = map.wordnet_word_ids();
  if (pool.empty()) throw std::runtime_error("no vocabulary word has WordNet synsets");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n_words) * max_neighbors);
  for (int i = 0; i < n_words; ++i) {
    const int w = rng.uniform_index(vocab.size());
    if (!map.has_synsets(w)) continue;
    for (int t = 0; t < max_neighbors; ++t) {
      const int v = pool[rng.uniform_index(static_cast<int>(pool.size()))];
      pairs.emplace_back(w, v);
    }
  }
  return pairs;
}

std::optional<WordTuple> instantiate_tuple(const RelationTuple& t, const WordSynsetMap& map,
                                           Rng& rng) {
  const auto left_members = map.members_of(t.left);
  const auto right_members = map.members_of(t.right);
  if (left_members.empty() || right_members.empty()) return std::nullopt;
  WordTuple out;
  out.slots[0] = left_members[rng.uniform_index(static_cast<int>(left_members.size()))];
  out.slots[1] = t.relation;
  out.slots[2] = right_members[rng.uniform_index(static_cast<int>(right_members.size()))];
  return out;
}

WordTuple corrupt_tuple(const WordTuple& t, const Vocabulary& vocab, int relation_count,
                        Rng& rng) {
  const auto domain_size = [&](int slot) { return slot == 1 ? relation_count : vocab.size(); };
  int slot = rng.uniform_index(3);
  // A one-element domain cannot produce a different value; fall back to the
  // next slot instead of resampling forever.
  for (int tries = 0; domain_size(slot) < 2; ++tries) {
    if (tries >= 2) throw std::runtime_error("no tuple slot can be corrupted");
    slot = (slot + 1) % 3;
  }
  WordTuple out = t;
  int repl = rng.uniform_index(domain_size(slot));
  while (repl == t.slots[slot]) repl = rng.uniform_index(domain_size(slot));
  out.slots[slot] = repl;
  return out;
}

ContrastivePair sample_relation_tuple(const RelationTupleSet& tuples, const WordSynsetMap& map,
                                      const Vocabulary& vocab, Rng& rng) {
  const auto& train = tuples.train();
  if (train.empty()) throw std::runtime_error("relation train split is empty");
  const auto usable = [&](const RelationTuple& t) {
    return !map.members_of(t.left).empty() && !map.members_of(t.right).empty();
  };
  if (std::none_of(train.begin(), train.end(), usable))
    throw std::runtime_error("no train tuple has in-vocabulary members on both sides");
  while (true) {
    const auto& t = train[rng.uniform_index(static_cast<int>(train.size()))];
    const auto clean = instantiate_tuple(t, map, rng);
    if (!clean) continue;  // skip-and-resample
    return {*clean,
            corrupt_tuple(*clean, vocab, static_cast<int>(tuples.relations().size()), rng)};
  }
}

}  // namespace jointvec
