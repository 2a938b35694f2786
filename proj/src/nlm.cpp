#include "jointvec/nlm.hpp"

#include <cmath>
#include <stdexcept>

#include "jointvec/errors.hpp"

#include "jointvec/vec_ops.hpp"

namespace jointvec {

NlmParams NlmParams::init(int n, int d, int h, Rng& rng) {
  NlmParams p;
  p.n = n;
  p.d = d;
  p.h = h;
  p.A.resize(static_cast<std::size_t>(h) * n * d);
  p.b.assign(h, 0.0);
  p.u.resize(h);
  const double a_std = 1.0 / std::sqrt(static_cast<double>(n) * d);
  for (auto& x : p.A) x = rng.gaussian(0.0, a_std);
  const double u_std = 1.0 / std::sqrt(static_cast<double>(h));
  for (auto& x : p.u) x = rng.gaussian(0.0, u_std);
  return p;
}

namespace {

// Pre-activations z = A x + b without materializing the concatenation.
void forward(const NlmParams& p, const EmbeddingTable& emb, std::span<const int> ngram,
             std::vector<double>& z) {
  z.assign(p.h, 0.0);
  for (int k = 0; k < p.h; ++k) {
    const double* arow = p.A.data() + static_cast<std::size_t>(k) * p.n * p.d;
    double acc = p.b[k];
    for (int pos = 0; pos < p.n; ++pos) {
      const auto w = emb.vec(ngram[pos]);
      const double* a = arow + static_cast<std::size_t>(pos) * p.d;
      for (int j = 0; j < p.d; ++j) acc += a[j] * w[j];
    }
    z[k] = acc;
  }
}

double score_from_z(const NlmParams& p, const std::vector<double>& z) {
  double s = 0.0;
  for (int k = 0; k < p.h; ++k) s += p.u[k] * sigmoid(z[k]);
  return s;
}

// Adds coef * dS/d(params, embeddings) for one network evaluation.
void accumulate(const NlmParams& p, const EmbeddingTable& emb, std::span<const int> ngram,
                const std::vector<double>& z, double coef, NlmGradients& g) {
  for (int k = 0; k < p.h; ++k) {
    const double sig = sigmoid(z[k]);
    g.u[k] += coef * sig;
    const double dz = coef * p.u[k] * sig * (1.0 - sig);  // d(coef*S)/dz_k
    g.b[k] += dz;
    const double* arow = p.A.data() + static_cast<std::size_t>(k) * p.n * p.d;
    double* garow = g.A.data() + static_cast<std::size_t>(k) * p.n * p.d;
    for (int pos = 0; pos < p.n; ++pos) {
      const auto w = emb.vec(ngram[pos]);
      double* ge = g.emb.find(ngram[pos])->second.data();
      const double* a = arow + static_cast<std::size_t>(pos) * p.d;
      double* ga = garow + static_cast<std::size_t>(pos) * p.d;
      for (int j = 0; j < p.d; ++j) {
        ga[j] += dz * w[j];
        ge[j] += dz * a[j];
      }
    }
  }
}

}  // namespace

double score_ngram(const NlmParams& p, const EmbeddingTable& emb, std::span<const int> ngram) {
  if (static_cast<int>(ngram.size()) != p.n)
    throw std::invalid_argument("ngram length does not match the network context length");
  if (emb.dim() != p.d) throw std::invalid_argument("embedding dimension mismatch");
  std::vector<double> z;
  forward(p, emb, ngram, z);
  return score_from_z(p, z);
}

NlmGradients nlm_gradients(const NlmParams& p, const EmbeddingTable& emb,
                           std::span<const int> clean, std::span<const int> corrupted) {
  NlmGradients g;
  // Every word in either tuple counts as touched, margin or not; the ADMM
  // penalty gradient applies to touched shared words regardless of hinge
  // activity.
  for (int id : clean) g.emb.try_emplace(id, std::vector<double>(p.d, 0.0));
  for (int id : corrupted) g.emb.try_emplace(id, std::vector<double>(p.d, 0.0));

  std::vector<double> z_pos, z_neg;
  forward(p, emb, clean, z_pos);
  forward(p, emb, corrupted, z_neg);
  g.loss = hinge_loss(score_from_z(p, z_pos), score_from_z(p, z_neg));
  if (g.loss <= 0.0) {
    g.A.assign(p.A.size(), 0.0);
    g.b.assign(p.b.size(), 0.0);
    g.u.assign(p.u.size(), 0.0);
    return g;
  }

  g.A.assign(p.A.size(), 0.0);
  g.b.assign(p.b.size(), 0.0);
  g.u.assign(p.u.size(), 0.0);
  // L = 1 - S(x) + S(x_c): the clean tuple contributes -dS, the corrupted
  // one +dS; a word present in both accumulates both paths.
  accumulate(p, emb, clean, z_pos, -1.0, g);
  accumulate(p, emb, corrupted, z_neg, +1.0, g);
  return g;
}

SgdStepStats nlm_sgd_step(NlmParams& p, EmbeddingTable& emb, const NgramBlock& block,
                          const Vocabulary& vocab, const NlmStepOptions& opt, Rng& rng) {
  if (opt.lr < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  SgdStepStats stats;
  std::vector<double> cgrad(p.d);
  double loss_sum = 0.0;
  for (int t = 0; t < block.size(); ++t) {
    const auto clean = block.tuple(t);
    const auto corrupted = corrupt_ngram(clean, vocab, rng, opt.corrupt_position);
    const auto g = nlm_gradients(p, emb, clean, corrupted);
    loss_sum += g.loss;
    ++stats.instances;

    if (g.loss > 0.0) {
      for (std::size_t i = 0; i < p.A.size(); ++i) p.A[i] -= opt.lr * (opt.weight * g.A[i]);
      for (int k = 0; k < p.h; ++k) {
        p.b[k] -= opt.lr * (opt.weight * g.b[k]);
        p.u[k] -= opt.lr * (opt.weight * g.u[k]);
      }
    }
    for (const auto& [id, ge] : g.emb) {
      const bool shared = opt.coupling.grad(id, emb, cgrad);
      if (!shared && g.loss <= 0.0) continue;
      auto w = emb.vec(id);
      for (int j = 0; j < p.d; ++j) {
        const double cg = shared ? cgrad[j] : 0.0;
        w[j] -= opt.lr * (opt.weight * ge[j] + cg);
      }
    }
    if (opt.l2 != 0.0) {
      for (auto& x : p.A) x -= opt.lr * (2.0 * opt.l2 * x);
      for (auto& x : p.b) x -= opt.lr * (2.0 * opt.l2 * x);
      for (auto& x : p.u) x -= opt.lr * (2.0 * opt.l2 * x);
      for (const auto& [id, ge] : g.emb) {
        auto w = emb.vec(id);
        for (int j = 0; j < p.d; ++j) w[j] -= opt.lr * (2.0 * opt.l2 * w[j]);
      }
    }
  }
  stats.mean_loss = stats.instances > 0 ? loss_sum / stats.instances : 0.0;
  if (!std::isfinite(stats.mean_loss))
    throw DivergenceError("NLM step diverged (non-finite loss)");
  return stats;
}

double nlm_eval_loss(const NlmParams& p, const EmbeddingTable& emb, const NgramBlock& block,
                     const Vocabulary& vocab, CorruptPosition mode, Rng& rng) {
  double loss_sum = 0.0;
  for (int t = 0; t < block.size(); ++t) {
    const auto clean = block.tuple(t);
    const auto corrupted = corrupt_ngram(clean, vocab, rng, mode);
    loss_sum += hinge_loss(score_ngram(p, emb, clean), score_ngram(p, emb, corrupted));
  }
  return block.size() > 0 ? loss_sum / block.size() : 0.0;
}

}  // namespace jointvec
