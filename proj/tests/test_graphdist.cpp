#include "doctest.h"

#include <cmath>
#include <sstream>

#include "jointvec/graphdist.hpp"
#include "testutil.hpp"

using namespace jointvec;

namespace {

// Scalar re-implementation of the loss for random-instance cross-checks.
double gd_loss_oracle(double a, double b, std::span<const double> vi, std::span<const double> vj,
                      double ws) {
  double dot = 0.0, ni = 0.0, nj = 0.0;
  for (std::size_t k = 0; k < vi.size(); ++k) {
    dot += vi[k] * vj[k];
    ni += vi[k] * vi[k];
    nj += vj[k] * vj[k];
  }
  const double cos = dot / (std::sqrt(ni) * std::sqrt(nj));
  const double r = cos - (a * ws + b);
  return r * r;
}

}  // namespace

TEST_CASE("cosine basics") {
  const std::vector<double> x = {1.0, 2.0, -1.0};
  CHECK(cosine(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> e1 = {1.0, 0.0}, e2 = {0.0, 1.0}, d11 = {1.0, 1.0};
  CHECK(cosine(e1, e2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosine(d11, e1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_AS(cosine(zero, e1), std::runtime_error);
}

TEST_CASE("loss vanishes when the scaled target matches the cosine") {
  GdParams p{0.5, 0.25, true};
  const std::vector<double> vi = {1.0, 0.0}, vj = {1.0, 0.0};  // cos = 1
  CHECK(gd_loss(p, vi, vj, 1.5) == doctest::Approx(0.0).epsilon(1e-12));  // 0.5*1.5+0.25 = 1
  GdParams q{0.5, 0.0, true};
  CHECK(gd_loss(q, vi, vj, 1.0) == doctest::Approx(0.25).epsilon(1e-12));  // (1-0.5)^2
}

TEST_CASE("loss matches an independent scalar evaluation") {
  Rng rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + rng.uniform_index(4);
    std::vector<double> vi(d), vj(d);
    for (auto& x : vi) x = rng.uniform(-2.0, 2.0);
    for (auto& x : vj) x = rng.uniform(-2.0, 2.0);
    if (std::all_of(vi.begin(), vi.end(), [](double x) { return x == 0.0; })) continue;
    if (std::all_of(vj.begin(), vj.end(), [](double x) { return x == 0.0; })) continue;
    GdParams p{rng.uniform(0.1, 2.0), rng.uniform(-0.5, 0.5), true};
    const double ws = rng.uniform(0.0, 3.0);
    CHECK(gd_loss(p, vi, vj, ws) ==
          doctest::Approx(gd_loss_oracle(p.a, p.b, vi, vj, ws)).epsilon(1e-12));
  }
}

TEST_CASE("zero residual produces zero gradients") {
  GdParams p{1.0, 0.0, true};
  const std::vector<double> vi = {2.0, 0.0}, vj = {2.0, 0.0};
  const auto g = gd_gradients(p, vi, vj, 1.0);  // cos=1, target=1
  CHECK(g.loss == doctest::Approx(0.0).epsilon(1e-15));
  for (double x : g.vi) CHECK(x == doctest::Approx(0.0).epsilon(1e-12));
  for (double x : g.vj) CHECK(x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.da == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.db == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences and the stated a,b forms") {
  Rng rng(16);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + rng.uniform_index(4);
    std::vector<double> vi(d), vj(d);
    for (auto& x : vi) x = rng.uniform(0.1, 2.0) * (rng.uniform_index(2) ? 1 : -1);
    for (auto& x : vj) x = rng.uniform(0.1, 2.0) * (rng.uniform_index(2) ? 1 : -1);
    GdParams p{rng.uniform(0.2, 1.5), rng.uniform(-0.4, 0.4), true};
    const double ws = rng.uniform(0.0, 2.5);
    const auto g = gd_gradients(p, vi, vj, ws);

    const auto f = [&] { return gd_loss(p, vi, vj, ws); };
    CHECK(testutil::gradient_error(g.vi, testutil::finite_difference(vi, f)) < 1e-4);
    CHECK(testutil::gradient_error(g.vj, testutil::finite_difference(vj, f)) < 1e-4);
    std::vector<double> ab = {p.a, p.b};
    const auto fd_ab = testutil::finite_difference(ab, [&] {
      GdParams q{ab[0], ab[1], true};
      return gd_loss(q, vi, vj, ws);
    });
    CHECK(testutil::gradient_error(std::vector<double>{g.da, g.db}, fd_ab) < 1e-4);

    // closed forms: dL/da = -2 r ws, dL/db = -2 r
    const double r = cosine(vi, vj) - (p.a * ws + p.b);
    CHECK(g.da == doctest::Approx(-2.0 * r * ws).epsilon(1e-12));
    CHECK(g.db == doctest::Approx(-2.0 * r).epsilon(1e-12));
  }
}

TEST_CASE("the loss is symmetric in the pair") {
  Rng rng(17);
  std::vector<double> vi = {0.3, -1.2, 0.8}, vj = {1.1, 0.4, -0.2};
  GdParams p{0.7, 0.1, true};
  CHECK(gd_loss(p, vi, vj, 1.3) == doctest::Approx(gd_loss(p, vj, vi, 1.3)).epsilon(1e-12));
}

TEST_CASE("empty pair lists change nothing") {
  Rng rng(18);
  auto emb = EmbeddingTable::uniform_init(4, 3, 1.0, rng);
  const auto before = emb;
  GdParams p;
  const auto stats = gd_sgd_step(p, emb, {}, {});
  CHECK(stats.instances == 0);
  CHECK(emb == before);
}

TEST_CASE("a zeroed coupling reproduces the uncoupled GD step bitwise") {
  Rng rng(19);
  auto emb0 = EmbeddingTable::uniform_init(6, 3, 1.0, rng);
  auto other = EmbeddingTable::uniform_init(6, 3, 1.0, rng);
  std::vector<GdPair> pairs = {{1, 2, 0.8}, {2, 2, 1.2}, {3, 4, 0.5}};

  GdParams p_plain{0.9, 0.05, true};
  auto emb_plain = emb0;
  {
    GdStepOptions opt;
    opt.lr = 0.02;
    opt.weight = 0.5;
    gd_sgd_step(p_plain, emb_plain, pairs, opt);
  }
  GdParams p_coupled{0.9, 0.05, true};
  auto emb_coupled = emb0;
  {
    AdmmCoupling coupling({0, 1, 2, 3, 4, 5}, 3, 0.0, 0.5);
    GdStepOptions opt;
    opt.lr = 0.02;
    opt.weight = 0.5;
    opt.coupling = {&coupling, &other, CouplingSide::V};
    gd_sgd_step(p_coupled, emb_coupled, pairs, opt);
  }
  CHECK(p_plain.a == p_coupled.a);
  CHECK(p_plain.b == p_coupled.b);
  CHECK(emb_plain == emb_coupled);
}

TEST_CASE("one coupled pair step equals lr times the finite-difference gradient") {
  Rng rng(20);
  const int d = 3;
  auto emb = EmbeddingTable::uniform_init(5, d, 1.0, rng);
  auto other = EmbeddingTable::uniform_init(5, d, 1.0, rng);
  AdmmCoupling coupling({0, 1, 2, 3, 4}, d, 0.05, 0.5);
  for (auto& y : coupling.mutable_y()) y = rng.uniform(-0.2, 0.2);
  GdParams p{0.8, -0.1, true};
  const std::vector<GdPair> pairs = {{1, 3, 1.4}};
  const double lr = 1e-3, weight = 0.5;

  std::vector<double> ab = {p.a, p.b};
  const auto f = [&] {
    GdParams q{ab[0], ab[1], true};
    double loss = weight * gd_loss(q, emb.vec(1), emb.vec(3), 1.4);
    for (int id : {1, 3}) {
      const auto y = coupling.y_row(coupling.slot(id));
      const auto w = other.vec(id);
      const auto v = emb.vec(id);
      for (int k = 0; k < d; ++k) {
        const double diff = w[k] - v[k];
        loss += y[k] * diff + 0.5 * coupling.rho() * diff * diff;
      }
    }
    return loss;
  };
  const auto fd1 = testutil::finite_difference(emb.vec(1), f);
  const auto fd3 = testutil::finite_difference(emb.vec(3), f);
  const auto fd_ab = testutil::finite_difference(ab, f);

  const auto emb_before = emb;
  const GdParams p_before = p;
  GdStepOptions opt;
  opt.lr = lr;
  opt.weight = weight;
  opt.coupling = {&coupling, &other, CouplingSide::V};
  gd_sgd_step(p, emb, pairs, opt);

  for (int k = 0; k < d; ++k) {
    CHECK(emb.vec(1)[k] == doctest::Approx(emb_before.vec(1)[k] - lr * fd1[k]).epsilon(1e-6));
    CHECK(emb.vec(3)[k] == doctest::Approx(emb_before.vec(3)[k] - lr * fd3[k]).epsilon(1e-6));
  }
  CHECK(p.a == doctest::Approx(p_before.a - lr * fd_ab[0]).epsilon(1e-6));
  CHECK(p.b == doctest::Approx(p_before.b - lr * fd_ab[1]).epsilon(1e-6));
}

TEST_CASE("self pairs are handled without blowups") {
  Rng rng(21);
  auto emb = EmbeddingTable::uniform_init(3, 2, 1.0, rng);
  GdParams p{1.0, 0.0, true};
  const std::vector<GdPair> pairs = {{1, 1, 0.6}};
  GdStepOptions opt;
  opt.lr = 0.1;
  const auto before = emb.vec(1)[0];
  const auto stats = gd_sgd_step(p, emb, pairs, opt);
  CHECK(std::isfinite(stats.mean_loss));
  // cos(v,v)=1 has zero gradient wrt v (up to roundoff); only a and b move
  CHECK(emb.vec(1)[0] == doctest::Approx(before).epsilon(1e-12));
}
