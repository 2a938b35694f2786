#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "jointvec/rng.hpp"
#include "jointvec/vocab.hpp"

namespace jointvec {

// Undirected hypernym graph over synsets with an artificial common root, so
// every shortest path is defined. Immutable once finalized; all queries are
// read-only and safe to run concurrently.
class SynsetGraph {
 public:
  static constexpr const char* kRootName = "<ROOT>";

  // TSV `child_synset<TAB>parent_synset`.
  void load_edges(std::istream& in);
  // Registers a synset that may have no hypernym edges (it will hang off the
  // root at finalize time).
  int intern(const std::string& name);
  // Adds the root, attaches every parentless synset to it, runs BFS depths.
  void finalize();

  bool finalized() const { return finalized_; }
  int size() const { return static_cast<int>(names_.size()); }
  int root() const { return root_; }
  int find(const std::string& name) const {
    auto it = id_.find(name);
    return it == id_.end() ? -1 : it->second;
  }
  const std::string& name(int s) const { return names_.at(s); }
  int depth(int s) const { return depth_.at(s); }
  int max_depth() const { return max_depth_; }
  const std::vector<int>& neighbors(int s) const { return adj_.at(s); }

  // Shortest undirected path length counted in NODES (edges + 1), so
  // len(s, s) = 1. BFS unless the all-pairs cache is built.
  int shortest_path_len(int si, int sj) const;

  // Smallest node-count path length from any synset in `from` to any in
  // `to`; one multi-source BFS.
  int min_path_len(std::span<const int> from, std::span<const int> to) const;

  // All-pairs node-count distances via one BFS per source (OpenMP when the
  // parallel kernels are enabled). Only sensible at desk scale.
  void build_distance_cache();
  bool has_distance_cache() const { return !cache_.empty(); }

 private:
  int bfs_len(int si, int sj) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, int> id_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> pending_edges_;
  std::unordered_set<int> has_parent_;
  int root_ = -1;
  std::vector<int> depth_;
  int max_depth_ = 0;
  bool finalized_ = false;
  std::vector<std::uint16_t> cache_;  // size * size node-count distances
};

// Leacock-Chodorow similarity -log(len / (2 max_depth)), natural log.
double synset_similarity(const SynsetGraph& g, int si, int sj);

// word-id <-> synset membership, mutually consistent inverses.
class WordSynsetMap {
 public:
  // TSV `synset<TAB>word`; words not in the vocabulary are dropped. Unknown
  // synset names are interned into the graph (call before finalize()).
  void load(std::istream& in, SynsetGraph& graph, const Vocabulary& vocab);
  void add(int word_id, int synset_id);

  std::span<const int> synsets_of(int word_id) const;
  std::span<const int> members_of(int synset_id) const;
  bool has_synsets(int word_id) const { return !synsets_of(word_id).empty(); }

  // Word ids with at least one synset, ascending. This is the WordNet side
  // of the shared vocabulary I.
  const std::vector<int>& wordnet_word_ids() const { return wordnet_words_; }
  void freeze();

 private:
  std::unordered_map<int, std::vector<int>> syn_;
  std::unordered_map<int, std::vector<int>> members_;
  std::vector<int> wordnet_words_;
  bool frozen_ = false;
};

// Max similarity over the two words' synset pairs; empty when either word
// has no synsets.
std::optional<double> word_similarity(const SynsetGraph& g, const WordSynsetMap& map, int wi,
                                      int wj);

struct RelationTuple {
  int left;      // synset id
  int relation;  // index into relations()
  int right;     // synset id
};

struct LabeledTuple {
  RelationTuple tuple;
  bool positive;
};

// Typed (left synset, relation, right synset) triples, train/dev/test.
class RelationTupleSet {
 public:
  // TSV `left<TAB>relation<TAB>right[<TAB>label]`. Labels 1/-1 are required
  // when `labeled` (dev/test) and rejected otherwise.
  void load_train(std::istream& in, SynsetGraph& graph);
  void load_labeled(std::istream& in, SynsetGraph& graph, std::vector<LabeledTuple>& out);
  void load_dev(std::istream& in, SynsetGraph& graph) { load_labeled(in, graph, dev_); }
  void load_test(std::istream& in, SynsetGraph& graph) { load_labeled(in, graph, test_); }

  int relation_index(const std::string& name) const;
  int intern_relation(const std::string& name);
  const std::vector<std::string>& relations() const { return relations_; }
  const std::vector<RelationTuple>& train() const { return train_; }
  const std::vector<LabeledTuple>& dev() const { return dev_; }
  const std::vector<LabeledTuple>& test() const { return test_; }

 private:
  RelationTuple parse_tuple(const std::string& left, const std::string& rel,
                            const std::string& right, SynsetGraph& graph);

  std::vector<std::string> relations_;
  std::unordered_map<std::string, int> relation_id_;
  std::vector<RelationTuple> train_;
  std::vector<LabeledTuple> dev_;
  std::vector<LabeledTuple> test_;
};

// Word pairs with defined graph similarity: n_words draws of w from the full
// vocabulary; each w that has synsets contributes max_neighbors partners
// drawn from the WordNet-covered words (self-pairs allowed).
std::vector<std::pair<int, int>> sample_word_pairs(const WordSynsetMap& map,
                                                   const Vocabulary& vocab, int n_words,
                                                   int max_neighbors, Rng& rng);

struct WordTuple {
  std::array<int, 3> slots;  // word id, relation index, word id
  int left() const { return slots[0]; }
  int relation() const { return slots[1]; }
  int right() const { return slots[2]; }
};

struct ContrastivePair {
  WordTuple clean;
  WordTuple corrupted;
};

// Word-level instantiation of a synset tuple: one uniformly sampled
// in-vocabulary member per synset. Empty when a synset has no in-vocabulary
// member.
std::optional<WordTuple> instantiate_tuple(const RelationTuple& t, const WordSynsetMap& map,
                                           Rng& rng);

// Corruption of exactly one slot: word slots re-drawn from the vocabulary,
// the relation slot from the relation list, resampled until different. A
// slot whose domain has a single element falls back to the next slot.
WordTuple corrupt_tuple(const WordTuple& t, const Vocabulary& vocab, int relation_count, Rng& rng);

// Samples a usable train tuple, instantiates and corrupts it. Throws when no
// train tuple has in-vocabulary members on both sides.
ContrastivePair sample_relation_tuple(const RelationTupleSet& tuples, const WordSynsetMap& map,
                                      const Vocabulary& vocab, Rng& rng);

}  // namespace jointvec
