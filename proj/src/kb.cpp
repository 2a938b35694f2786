#include "jointvec/kb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jointvec/errors.hpp"

#include "jointvec/vec_ops.hpp"

namespace jointvec {

TransEParams TransEParams::init(std::vector<std::string> names, int d, Rng& rng) {
  TransEParams p;
  p.d = d;
  p.relation_names = std::move(names);
  p.rel.resize(p.relation_names.size() * static_cast<std::size_t>(d));
  const double r = 0.5 / d;
  for (auto& x : p.rel) x = rng.uniform(-r, r);
  return p;
}

NtnParams NtnParams::init(std::vector<std::string> names, int d, int h, Rng& rng) {
  NtnParams p;
  p.d = d;
  p.h = h;
  p.relation_names = std::move(names);
  const std::size_t nrel = p.relation_names.size();
  p.W.resize(nrel * h * static_cast<std::size_t>(d) * d);
  p.V.resize(nrel * h * static_cast<std::size_t>(2) * d);
  p.b.assign(nrel * static_cast<std::size_t>(h), 0.0);
  p.U.resize(h);
  const double t_std = 1.0 / d;
  for (auto& x : p.W) x = rng.gaussian(0.0, t_std);
  for (auto& x : p.V) x = rng.gaussian(0.0, t_std);
  const double u_std = 1.0 / std::sqrt(static_cast<double>(h));
  for (auto& x : p.U) x = rng.gaussian(0.0, u_std);
  return p;
}

namespace {

void check_relation(int r, int count) {
  if (r < 0 || r >= count) throw std::out_of_range("unknown relation index");
}

double transe_residual(const TransEParams& p, const EmbeddingTable& emb, int wl, int r, int wr,
                       std::vector<double>& t) {
  const auto vl = emb.vec(wl);
  const auto vr = emb.vec(wr);
  const auto rel = p.relation(r);
  t.resize(p.d);
  double sq = 0.0;
  for (int k = 0; k < p.d; ++k) {
    t[k] = vl[k] + rel[k] - vr[k];
    sq += t[k] * t[k];
  }
  return std::sqrt(sq);
}

// Hidden pre-activations z_k = v_l' W_k v_r + V_k [v_l; v_r] + b_k.
void ntn_forward(const NtnParams& p, const EmbeddingTable& emb, int wl, int r, int wr,
                 std::vector<double>& z) {
  const auto vl = emb.vec(wl);
  const auto vr = emb.vec(wr);
  const auto b = p.b_row(r);
  z.assign(p.h, 0.0);
  for (int k = 0; k < p.h; ++k) {
    const double* w = p.W.data() + p.w_off(r, k);
    double acc = b[k];
    for (int i = 0; i < p.d; ++i) {
      const double* wrow = w + static_cast<std::size_t>(i) * p.d;
      double row = 0.0;
      for (int j = 0; j < p.d; ++j) row += wrow[j] * vr[j];
      acc += vl[i] * row;
    }
    const auto v = p.v_row(r, k);
    for (int j = 0; j < p.d; ++j) acc += v[j] * vl[j] + v[p.d + j] * vr[j];
    z[k] = acc;
  }
}

struct KbGradWorkspace {
  std::vector<double> t, z_pos, z_neg;
};

void transe_accumulate(const TransEParams& p, const WordTuple& t, std::span<const double> resid,
                       double norm, double coef, KbGradients& g) {
  // dS/dv_l = -t/||t||, dS/dR = -t/||t||, dS/dv_r = +t/||t||; zero
  // subgradient at t = 0.
  if (norm == 0.0) return;
  auto& gl = g.emb.find(t.left())->second;
  auto& gr = g.emb.find(t.right())->second;
  auto it = g.rel_vec.find(t.relation());
  if (it == g.rel_vec.end())
    it = g.rel_vec.emplace(t.relation(), std::vector<double>(p.d, 0.0)).first;
  auto& grel = it->second;
  for (int k = 0; k < p.d; ++k) {
    const double u = coef * (-resid[k] / norm);  // coef * dS/dv_l
    gl[k] += u;
    grel[k] += u;
    gr[k] -= u;
  }
}

void ntn_accumulate(const NtnParams& p, const EmbeddingTable& emb, const WordTuple& t,
                    const std::vector<double>& z, double coef, KbGradients& g) {
  const auto vl = emb.vec(t.left());
  const auto vr = emb.vec(t.right());
  const int r = t.relation();
  auto it = g.ntn_rel.find(r);
  if (it == g.ntn_rel.end()) {
    KbGradients::NtnRelGrad zero;
    zero.W.assign(static_cast<std::size_t>(p.h) * p.d * p.d, 0.0);
    zero.V.assign(static_cast<std::size_t>(p.h) * 2 * p.d, 0.0);
    zero.b.assign(p.h, 0.0);
    it = g.ntn_rel.emplace(r, std::move(zero)).first;
  }
  auto& rel = it->second;
  auto& gl = g.emb.find(t.left())->second;
  auto& gr = g.emb.find(t.right())->second;

  for (int k = 0; k < p.h; ++k) {
    const double sig = sigmoid(z[k]);
    g.U[k] += coef * sig;
    const double dz = coef * p.U[k] * sig * (1.0 - sig);
    rel.b[k] += dz;
    const double* w = p.W.data() + p.w_off(r, k);
    double* gw = rel.W.data() + (static_cast<std::size_t>(k) * p.d) * p.d;
    const auto v = p.v_row(r, k);
    double* gv = rel.V.data() + static_cast<std::size_t>(k) * 2 * p.d;
    for (int i = 0; i < p.d; ++i) {
      const double* wrow = w + static_cast<std::size_t>(i) * p.d;
      double* gwrow = gw + static_cast<std::size_t>(i) * p.d;
      double wv = 0.0;  // (W_k v_r)_i
      for (int j = 0; j < p.d; ++j) {
        gwrow[j] += dz * vl[i] * vr[j];
        wv += wrow[j] * vr[j];
      }
      gl[i] += dz * (wv + v[i]);
      gv[i] += dz * vl[i];
    }
    for (int j = 0; j < p.d; ++j) {
      double vw = 0.0;  // (v_l' W_k)_j
      for (int i = 0; i < p.d; ++i) vw += vl[i] * w[static_cast<std::size_t>(i) * p.d + j];
      gr[j] += dz * (vw + v[p.d + j]);
      gv[p.d + j] += dz * vr[j];
    }
  }
}

}  // namespace

double transe_score(const TransEParams& p, const EmbeddingTable& emb, int wl, int r, int wr) {
  check_relation(r, p.relation_count());
  std::vector<double> t;
  return -transe_residual(p, emb, wl, r, wr, t);
}

double ntn_score(const NtnParams& p, const EmbeddingTable& emb, int wl, int r, int wr) {
  check_relation(r, p.relation_count());
  if (emb.dim() != p.d) throw std::invalid_argument("embedding dimension mismatch");
  std::vector<double> z;
  ntn_forward(p, emb, wl, r, wr, z);
  double s = 0.0;
  for (int k = 0; k < p.h; ++k) s += p.U[k] * sigmoid(z[k]);
  return s;
}

double kb_score(const KbParams& p, const EmbeddingTable& emb, int wl, int r, int wr) {
  if (const auto* te = std::get_if<TransEParams>(&p)) return transe_score(*te, emb, wl, r, wr);
  return ntn_score(std::get<NtnParams>(p), emb, wl, r, wr);
}

int kb_relation_count(const KbParams& p) {
  return std::visit([](const auto& params) { return params.relation_count(); }, p);
}

const std::vector<std::string>& kb_relation_names(const KbParams& p) {
  return std::visit(
      [](const auto& params) -> const std::vector<std::string>& { return params.relation_names; },
      p);
}

KbGradients kb_gradients(const KbParams& p, const EmbeddingTable& emb, const WordTuple& clean,
                         const WordTuple& corrupted) {
  const int d = emb.dim();
  KbGradients g;
  for (const auto& t : {clean, corrupted}) {
    g.emb.try_emplace(t.left(), std::vector<double>(d, 0.0));
    g.emb.try_emplace(t.right(), std::vector<double>(d, 0.0));
  }
  if (const auto* ntn = std::get_if<NtnParams>(&p)) g.U.assign(ntn->h, 0.0);

  const double s_pos = kb_score(p, emb, clean);
  const double s_neg = kb_score(p, emb, corrupted);
  g.loss = hinge_loss(s_pos, s_neg);
  if (g.loss <= 0.0) return g;

  // coef is dL/dS: -1 for the clean tuple, +1 for the corrupted one.
  if (const auto* te = std::get_if<TransEParams>(&p)) {
    std::vector<double> t;
    const double n_pos = transe_residual(*te, emb, clean.left(), clean.relation(), clean.right(), t);
    transe_accumulate(*te, clean, t, n_pos, -1.0, g);
    const double n_neg =
        transe_residual(*te, emb, corrupted.left(), corrupted.relation(), corrupted.right(), t);
    transe_accumulate(*te, corrupted, t, n_neg, +1.0, g);
  } else {
    const auto& ntn = std::get<NtnParams>(p);
    std::vector<double> z;
    ntn_forward(ntn, emb, clean.left(), clean.relation(), clean.right(), z);
    ntn_accumulate(ntn, emb, clean, z, -1.0, g);
    ntn_forward(ntn, emb, corrupted.left(), corrupted.relation(), corrupted.right(), z);
    ntn_accumulate(ntn, emb, corrupted, z, +1.0, g);
  }
  return g;
}

SgdStepStats kb_sgd_step(KbParams& p, EmbeddingTable& emb, const RelationTupleSet& tuples,
                         const WordSynsetMap& map, const Vocabulary& vocab,
                         const KbStepOptions& opt, Rng& rng) {
  if (opt.lr < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  const auto& train = tuples.train();
  if (train.empty()) throw std::runtime_error("relation train split is empty");

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates with the caller's stream; deterministic for a fixed seed.
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_int(i)]);

  const int d = emb.dim();
  const int relation_count = static_cast<int>(tuples.relations().size());
  SgdStepStats stats;
  std::vector<double> cgrad(d);
  double loss_sum = 0.0;
  for (const std::size_t idx : order) {
    const auto clean = instantiate_tuple(train[idx], map, rng);
    if (!clean) continue;  // no in-vocabulary member on some side
    const WordTuple corrupted = corrupt_tuple(*clean, vocab, relation_count, rng);
    const auto g = kb_gradients(p, emb, *clean, corrupted);
    loss_sum += g.loss;
    ++stats.instances;

    if (g.loss > 0.0) {
      if (auto* te = std::get_if<TransEParams>(&p)) {
        for (const auto& [r, gr] : g.rel_vec) {
          auto rel = te->relation(r);
          for (int k = 0; k < d; ++k) rel[k] -= opt.lr * (opt.weight * gr[k]);
        }
      } else {
        auto& ntn = std::get<NtnParams>(p);
        for (const auto& [r, gr] : g.ntn_rel) {
          double* w = ntn.W.data() + ntn.w_off(r, 0);
          for (std::size_t i = 0; i < gr.W.size(); ++i) w[i] -= opt.lr * (opt.weight * gr.W[i]);
          double* v = ntn.V.data() + static_cast<std::size_t>(r) * ntn.h * 2 * ntn.d;
          for (std::size_t i = 0; i < gr.V.size(); ++i) v[i] -= opt.lr * (opt.weight * gr.V[i]);
          auto b = ntn.b_row(r);
          for (int k = 0; k < ntn.h; ++k) b[k] -= opt.lr * (opt.weight * gr.b[k]);
        }
        for (int k = 0; k < ntn.h; ++k) ntn.U[k] -= opt.lr * (opt.weight * g.U[k]);
      }
    }
    for (const auto& [id, ge] : g.emb) {
      const bool shared = opt.coupling.grad(id, emb, cgrad);
      if (!shared && g.loss <= 0.0) continue;
      auto v = emb.vec(id);
      for (int k = 0; k < d; ++k) {
        const double cg = shared ? cgrad[k] : 0.0;
        v[k] -= opt.lr * (opt.weight * ge[k] + cg);
      }
    }
    if (opt.l2 != 0.0) {
      for (const auto& [id, ge] : g.emb) {
        auto v = emb.vec(id);
        for (int k = 0; k < d; ++k) v[k] -= opt.lr * (2.0 * opt.l2 * v[k]);
      }
      if (auto* te = std::get_if<TransEParams>(&p)) {
        for (auto& x : te->rel) x -= opt.lr * (2.0 * opt.l2 * x);
      } else {
        auto& ntn = std::get<NtnParams>(p);
        for (auto& x : ntn.W) x -= opt.lr * (2.0 * opt.l2 * x);
        for (auto& x : ntn.V) x -= opt.lr * (2.0 * opt.l2 * x);
        for (auto& x : ntn.b) x -= opt.lr * (2.0 * opt.l2 * x);
        for (auto& x : ntn.U) x -= opt.lr * (2.0 * opt.l2 * x);
      }
    }
  }
  if (stats.instances == 0)
    throw std::runtime_error("no train tuple has in-vocabulary members on both sides");
  stats.mean_loss = loss_sum / stats.instances;
  if (!std::isfinite(stats.mean_loss))
    throw DivergenceError("relational step diverged (non-finite loss)");
  return stats;
}

double kb_eval_loss(const KbParams& p, const EmbeddingTable& emb, const RelationTupleSet& tuples,
                    const WordSynsetMap& map, const Vocabulary& vocab, Rng& rng) {
  const int relation_count = static_cast<int>(tuples.relations().size());
  double loss_sum = 0.0;
  int n = 0;
  for (const auto& t : tuples.train()) {
    const auto clean = instantiate_tuple(t, map, rng);
    if (!clean) continue;
    const WordTuple corrupted = corrupt_tuple(*clean, vocab, relation_count, rng);
    loss_sum += hinge_loss(kb_score(p, emb, *clean), kb_score(p, emb, corrupted));
    ++n;
  }
  return n > 0 ? loss_sum / n : 0.0;
}

}  // namespace jointvec
