#include "doctest.h"

#include <vector>

#include "jointvec/kernels.hpp"
#include "jointvec/rng.hpp"

using namespace jointvec;

namespace {

struct KernelFixture {
  int dim = 7;
  std::vector<int> ids;
  EmbeddingTable w, v;
  std::vector<double> y;

  KernelFixture() {
    Rng rng(99);
    const int n_words = 40;
    w = EmbeddingTable::uniform_init(n_words, dim, 1.0, rng);
    v = EmbeddingTable::uniform_init(n_words, dim, 1.0, rng);
    for (int i = 1; i < n_words; i += 2) ids.push_back(i);
    y.resize(ids.size() * dim);
    for (auto& x : y) x = rng.uniform(-2.0, 2.0);
  }
};

}  // namespace

TEST_CASE("serial and OpenMP multiplier updates agree bitwise") {
  KernelFixture f;
  auto y_serial = f.y;
  auto y_omp = f.y;
  kernels::multiplier_update_serial(f.ids, f.w, f.v, 0.05, y_serial, f.dim);
  kernels::multiplier_update_omp(f.ids, f.w, f.v, 0.05, y_omp, f.dim);
  CHECK(y_serial == y_omp);
}

TEST_CASE("serial and OpenMP penalty terms agree bitwise") {
  KernelFixture f;
  std::vector<double> t_serial(f.ids.size()), t_omp(f.ids.size());
  kernels::penalty_terms_serial(f.ids, f.w, f.v, f.y, 0.1, f.dim, t_serial);
  kernels::penalty_terms_omp(f.ids, f.w, f.v, f.y, 0.1, f.dim, t_omp);
  CHECK(t_serial == t_omp);
  CHECK(kernels::ordered_sum(t_serial) == kernels::ordered_sum(t_omp));
}

TEST_CASE("serial and OpenMP residual stats agree bitwise") {
  KernelFixture f;
  std::vector<double> yn_s(f.ids.size()), sr_s(f.ids.size());
  std::vector<double> yn_p(f.ids.size()), sr_p(f.ids.size());
  kernels::residual_stats_serial(f.ids, f.w, f.v, f.y, f.dim, yn_s, sr_s);
  kernels::residual_stats_omp(f.ids, f.w, f.v, f.y, f.dim, yn_p, sr_p);
  CHECK(yn_s == yn_p);
  CHECK(sr_s == sr_p);
}

TEST_CASE("serial and OpenMP k-means assignment agree bitwise") {
  Rng rng(123);
  const int n = 200, d = 5, k = 7;
  std::vector<double> points(n * d), centroids(k * d);
  for (auto& x : points) x = rng.uniform(-1.0, 1.0);
  for (auto& x : centroids) x = rng.uniform(-1.0, 1.0);
  std::vector<int> a_s(n), a_p(n);
  std::vector<double> d_s(n), d_p(n);
  kernels::kmeans_assign_serial(points, n, d, centroids, k, a_s, d_s);
  kernels::kmeans_assign_omp(points, n, d, centroids, k, a_p, d_p);
  CHECK(a_s == a_p);
  CHECK(d_s == d_p);
}

TEST_CASE("the runtime switch selects a working implementation") {
  KernelFixture f;
  auto y_on = f.y;
  auto y_off = f.y;
  kernels::set_parallel(true);
  kernels::multiplier_update(f.ids, f.w, f.v, 0.2, y_on, f.dim);
  kernels::set_parallel(false);
  kernels::multiplier_update(f.ids, f.w, f.v, 0.2, y_off, f.dim);
  kernels::set_parallel(true);
  CHECK(y_on == y_off);
}
