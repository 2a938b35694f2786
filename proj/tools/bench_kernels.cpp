// Timings for the OpenMP kernels against their serial references. The two
// variants produce bitwise-identical outputs; this only reports speed.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jointvec/kernels.hpp"
#include "jointvec/rng.hpp"

using namespace jointvec;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const std::string& name, double serial_ms, double omp_ms) {
  std::printf("%-22s serial %9.3f ms   omp %9.3f ms   speedup %.2fx\n", name.c_str(), serial_ms,
              omp_ms, omp_ms > 0 ? serial_ms / omp_ms : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  int n_shared = 200000, dim = 50, reps = 5;
  if (argc > 1) n_shared = std::atoi(argv[1]);
  if (argc > 2) dim = std::atoi(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the same serial code\n");
#endif
  std::printf("shared words %d, dim %d, %d reps per timing\n\n", n_shared, dim, reps);

  Rng rng(2024);
  EmbeddingTable w = EmbeddingTable::uniform_init(n_shared, dim, 1.0, rng);
  EmbeddingTable v = EmbeddingTable::uniform_init(n_shared, dim, 1.0, rng);
  std::vector<int> ids(n_shared);
  for (int i = 0; i < n_shared; ++i) ids[i] = i;
  std::vector<double> y(static_cast<std::size_t>(n_shared) * dim);
  for (auto& x : y) x = rng.uniform(-1.0, 1.0);

  report("multiplier_update",
         time_of([&] { kernels::multiplier_update_serial(ids, w, v, 0.05, y, dim); }, reps),
         time_of([&] { kernels::multiplier_update_omp(ids, w, v, 0.05, y, dim); }, reps));

  std::vector<double> terms(n_shared);
  report("penalty_terms",
         time_of([&] { kernels::penalty_terms_serial(ids, w, v, y, 0.05, dim, terms); }, reps),
         time_of([&] { kernels::penalty_terms_omp(ids, w, v, y, 0.05, dim, terms); }, reps));

  std::vector<double> y_norm(n_shared), scaled(n_shared);
  report("residual_stats",
         time_of([&] { kernels::residual_stats_serial(ids, w, v, y, dim, y_norm, scaled); }, reps),
         time_of([&] { kernels::residual_stats_omp(ids, w, v, y, dim, y_norm, scaled); }, reps));

  const int n_points = 20000, k = 64;
  EmbeddingTable pts = EmbeddingTable::uniform_init(n_points, dim, 1.0, rng);
  std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
  for (auto& x : centroids) x = rng.uniform(-1.0, 1.0);
  std::vector<int> assign(n_points);
  std::vector<double> sqdist(n_points);
  report("kmeans_assign",
         time_of(
             [&] {
               kernels::kmeans_assign_serial(pts.raw(), n_points, dim, centroids, k, assign,
                                             sqdist);
             },
             reps),
         time_of(
             [&] {
               kernels::kmeans_assign_omp(pts.raw(), n_points, dim, centroids, k, assign, sqdist);
             },
             reps));
  return 0;
}
