#include "jointvec/config.hpp"

#include <stdexcept>

namespace jointvec {

void RunConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (ngram_block < 1) throw std::invalid_argument("ngram_block must be >= 1");
  if (gd_word_sample < 0) throw std::invalid_argument("gd_word_sample must be >= 0");
  if (gd_max_neighbors < 1) throw std::invalid_argument("gd_max_neighbors must be >= 1");
  if (lr_nlm < 0.0 || lr_gd < 0.0 || lr_kb < 0.0)
    throw std::invalid_argument("learning rates must be >= 0");
  if (vocab_max < 1) throw std::invalid_argument("vocab_max must be >= 1");
  if (ngram_n < 1) throw std::invalid_argument("ngram_n must be >= 1");
  if (nlm_hidden < 1 || ntn_hidden < 1) throw std::invalid_argument("hidden sizes must be >= 1");
  if (kmeans_k < 1) throw std::invalid_argument("kmeans_k must be >= 1");
  if (l2 < 0.0) throw std::invalid_argument("l2 must be >= 0");
  if (checkpoint_every < 1) throw std::invalid_argument("checkpoint_every must be >= 1");
  if (distance_cache != "on" && distance_cache != "off" && distance_cache != "auto")
    throw std::invalid_argument("distance_cache must be on, off or auto");
}

std::string to_string(CorruptPosition p) {
  return p == CorruptPosition::Middle ? "middle" : "random";
}

CorruptPosition corrupt_position_from_string(const std::string& s) {
  if (s == "middle") return CorruptPosition::Middle;
  if (s == "random") return CorruptPosition::Random;
  throw std::invalid_argument("corrupt_position must be middle or random");
}

std::string to_string(OffsetAgg a) { return a == OffsetAgg::Mean ? "mean" : "max"; }

OffsetAgg offset_agg_from_string(const std::string& s) {
  if (s == "mean") return OffsetAgg::Mean;
  if (s == "max") return OffsetAgg::Max;
  throw std::invalid_argument("analogy_agg must be mean or max");
}

}  // namespace jointvec
