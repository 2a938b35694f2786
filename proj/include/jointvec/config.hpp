#pragma once

#include <cstdint>
#include <string>

#include "jointvec/ngram.hpp"

namespace jointvec {

enum class OffsetAgg { Mean, Max };

// Training/evaluation configuration. Defaults follow the reference setup:
// 50-dimensional embeddings, rho = 0.05, equal objective weighting, 1000
// iterations, 100k-n-gram blocks, 100k sampled words with up to 5 neighbors,
// 50k-word vocabulary, k = 64 clusters, no L2.
struct RunConfig {
  int dim = 50;
  double rho = 0.05;
  double alpha = 0.5;
  int iterations = 1000;
  int ngram_block = 100000;
  int gd_word_sample = 100000;
  int gd_max_neighbors = 5;
  double lr_nlm = 0.01;
  double lr_gd = 0.01;
  double lr_kb = 0.01;
  int vocab_max = 50000;
  int ngram_n = 5;
  int nlm_hidden = 16;
  int ntn_hidden = 4;
  int kmeans_k = 64;
  double l2 = 0.0;
  std::uint64_t seed = 1;
  int checkpoint_every = 50;
  CorruptPosition corrupt_position = CorruptPosition::Middle;
  OffsetAgg analogy_agg = OffsetAgg::Mean;
  bool parallel = true;
  // all-pairs synset distance cache: "on", "off", or "auto" (build when the
  // graph has at most 4096 synsets)
  std::string distance_cache = "auto";

  void validate() const;
};

std::string to_string(CorruptPosition p);
CorruptPosition corrupt_position_from_string(const std::string& s);
std::string to_string(OffsetAgg a);
OffsetAgg offset_agg_from_string(const std::string& s);

}  // namespace jointvec
