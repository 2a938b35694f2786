#include "jointvec/graphdist.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "jointvec/errors.hpp"

#include "jointvec/vec_ops.hpp"

namespace jointvec {

double cosine(std::span<const double> vi, std::span<const double> vj) {
  const double ni = l2_norm(vi);
  const double nj = l2_norm(vj);
  if (ni == 0.0 || nj == 0.0) throw std::runtime_error("cosine of a zero-norm vector");
  return dot(vi, vj) / (ni * nj);
}

double gd_loss(const GdParams& p, std::span<const double> vi, std::span<const double> vj,
               double ws) {
  const double r = cosine(vi, vj) - (p.a * ws + p.b);
  return r * r;
}

GdGradients gd_gradients(const GdParams& p, std::span<const double> vi,
                         std::span<const double> vj, double ws) {
  const std::size_t d = vi.size();
  GdGradients g;
  g.vi.assign(d, 0.0);
  g.vj.assign(d, 0.0);

  const double ni = l2_norm(vi);
  const double nj = l2_norm(vj);
  if (ni == 0.0 || nj == 0.0) throw std::runtime_error("cosine of a zero-norm vector");
  const double cos = dot(vi, vj) / (ni * nj);
  const double r = cos - (p.a * ws + p.b);
  g.loss = r * r;

  // dL/dcos = 2r; dcos/dv_i = v_j/(|v_i||v_j|) - cos v_i/|v_i|^2.
  const double dcos = 2.0 * r;
  for (std::size_t k = 0; k < d; ++k) {
    g.vi[k] = dcos * (vj[k] / (ni * nj) - cos * vi[k] / (ni * ni));
    g.vj[k] = dcos * (vi[k] / (ni * nj) - cos * vj[k] / (nj * nj));
  }
  g.da = -dcos * ws;
  g.db = -dcos;
  return g;
}

SgdStepStats gd_sgd_step(GdParams& p, EmbeddingTable& emb, std::span<const GdPair> pairs,
                         const GdStepOptions& opt) {
  if (opt.lr < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  SgdStepStats stats;
  const int d = emb.dim();
  std::vector<double> cgrad(d);
  std::map<int, std::vector<double>> acc;  // handles i == j pairs
  double loss_sum = 0.0;
  for (const auto& pair : pairs) {
    const auto g = gd_gradients(p, emb.vec(pair.i), emb.vec(pair.j), pair.ws);
    loss_sum += g.loss;
    ++stats.instances;

    acc.clear();
    auto& gi = acc.emplace(pair.i, std::vector<double>(d, 0.0)).first->second;
    for (int k = 0; k < d; ++k) gi[k] += g.vi[k];
    auto& gj = acc.try_emplace(pair.j, std::vector<double>(d, 0.0)).first->second;
    for (int k = 0; k < d; ++k) gj[k] += g.vj[k];

    p.a -= opt.lr * (opt.weight * g.da);
    p.b -= opt.lr * (opt.weight * g.db);
    for (const auto& [id, ge] : acc) {
      const bool shared = opt.coupling.grad(id, emb, cgrad);
      auto v = emb.vec(id);
      for (int k = 0; k < d; ++k) {
        const double cg = shared ? cgrad[k] : 0.0;
        v[k] -= opt.lr * (opt.weight * ge[k] + cg);
      }
    }
    if (opt.l2 != 0.0) {
      for (const auto& [id, ge] : acc) {
        auto v = emb.vec(id);
        for (int k = 0; k < d; ++k) v[k] -= opt.lr * (2.0 * opt.l2 * v[k]);
      }
    }
  }
  stats.mean_loss = stats.instances > 0 ? loss_sum / stats.instances : 0.0;
  if (!std::isfinite(stats.mean_loss))
    throw DivergenceError("graph-distance step diverged (non-finite loss)");
  return stats;
}

double gd_eval_loss(const GdParams& p, const EmbeddingTable& emb, std::span<const GdPair> pairs) {
  double loss_sum = 0.0;
  for (const auto& pair : pairs) loss_sum += gd_loss(p, emb.vec(pair.i), emb.vec(pair.j), pair.ws);
  return pairs.empty() ? 0.0 : loss_sum / static_cast<double>(pairs.size());
}

}  // namespace jointvec
