#pragma once

#include <span>
#include <vector>

#include "jointvec/coupling.hpp"
#include "jointvec/embedding.hpp"
#include "jointvec/nlm.hpp"

namespace jointvec {

// Scale/offset mapping WordNet similarity onto the cosine range.
struct GdParams {
  double a = 1.0;
  double b = 0.0;
  bool initialized = false;
};

// Throws on a zero-norm vector.
double cosine(std::span<const double> vi, std::span<const double> vj);

// (cos(v_i, v_j) - [a ws + b])^2
double gd_loss(const GdParams& p, std::span<const double> vi, std::span<const double> vj,
               double ws);

struct GdGradients {
  double loss = 0.0;
  std::vector<double> vi, vj;
  double da = 0.0, db = 0.0;
};

GdGradients gd_gradients(const GdParams& p, std::span<const double> vi,
                         std::span<const double> vj, double ws);

struct GdPair {
  int i = 0, j = 0;
  double ws = 0.0;  // defined WordSim value, precomputed by the sampler
};

struct GdStepOptions {
  double lr = 0.01;
  double weight = 1.0;  // objective weight (1 - alpha side)
  double l2 = 0.0;
  CouplingView coupling;
};

// Per-pair SGD over the sampled pairs; shared words also receive the
// penalty gradient (v-side sign).
SgdStepStats gd_sgd_step(GdParams& p, EmbeddingTable& emb, std::span<const GdPair> pairs,
                         const GdStepOptions& opt);

double gd_eval_loss(const GdParams& p, const EmbeddingTable& emb, std::span<const GdPair> pairs);

}  // namespace jointvec
