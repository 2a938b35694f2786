#pragma once

#include <map>
#include <span>
#include <vector>

#include "jointvec/coupling.hpp"
#include "jointvec/embedding.hpp"
#include "jointvec/ngram.hpp"
#include "jointvec/rng.hpp"
#include "jointvec/vocab.hpp"

namespace jointvec {

// Two-layer scoring network over concatenated embeddings:
// S(x) = u . sigmoid(A x + b), x = [w_1; ...; w_n].
struct NlmParams {
  int n = 0;  // context length
  int d = 0;  // embedding dimension
  int h = 0;  // hidden size
  std::vector<double> A;  // h x (n*d), row-major
  std::vector<double> b;  // h
  std::vector<double> u;  // h

  static NlmParams init(int n, int d, int h, Rng& rng);
};

double score_ngram(const NlmParams& p, const EmbeddingTable& emb, std::span<const int> ngram);

inline double hinge_loss(double s_pos, double s_neg) {
  const double m = 1.0 - s_pos + s_neg;
  return m > 0.0 ? m : 0.0;
}

struct NlmGradients {
  double loss = 0.0;
  std::vector<double> A, b, u;
  std::map<int, std::vector<double>> emb;  // per distinct touched word
};

// Exact gradients of hinge_loss(S(clean), S(corrupted)) with respect to all
// parameters and every touched embedding; all zero when the margin is met
// (subgradient 0 at the kink).
NlmGradients nlm_gradients(const NlmParams& p, const EmbeddingTable& emb,
                           std::span<const int> clean, std::span<const int> corrupted);

struct SgdStepStats {
  double mean_loss = 0.0;
  int instances = 0;
};

struct NlmStepOptions {
  double lr = 0.01;
  double weight = 1.0;  // objective weight (alpha side)
  double l2 = 0.0;
  CorruptPosition corrupt_position = CorruptPosition::Middle;
  CouplingView coupling;  // inactive when coupling.coupling == nullptr
};

// One SGD pass over the block: per n-gram, one corruption, immediate
// parameter update. Shared words additionally receive the penalty gradient.
SgdStepStats nlm_sgd_step(NlmParams& p, EmbeddingTable& emb, const NgramBlock& block,
                          const Vocabulary& vocab, const NlmStepOptions& opt, Rng& rng);

// Mean hinge loss over a block at fixed parameters (corruptions drawn from
// `rng`); used for diagnostics.
double nlm_eval_loss(const NlmParams& p, const EmbeddingTable& emb, const NgramBlock& block,
                     const Vocabulary& vocab, CorruptPosition mode, Rng& rng);

}  // namespace jointvec
