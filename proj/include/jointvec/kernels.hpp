#pragma once

#include <cstdint>
#include <span>

#include "jointvec/embedding.hpp"

namespace jointvec::kernels {

// Runtime switch between the serial reference kernels and the OpenMP ones.
// Both variants produce bitwise-identical results: parallel loops write
// disjoint elements and reductions go through per-element buffers that are
// summed in index order, so flipping the switch (or OMP_NUM_THREADS) never
// changes an output byte.
void set_parallel(bool enabled);
bool parallel_enabled();

template <class F>
void parallel_for(std::int64_t n, F&& f) {
#ifdef _OPENMP
  if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) f(i);
}

// Sum in index order; used after a buffered parallel fill.
inline double ordered_sum(std::span<const double> terms) {
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

// y_i += rho * (w_i - v_i) for every shared id; y is row-major, row r
// belongs to ids[r].
void multiplier_update_serial(std::span<const int> ids, const EmbeddingTable& w,
                              const EmbeddingTable& v, double rho, std::span<double> y, int dim);
void multiplier_update_omp(std::span<const int> ids, const EmbeddingTable& w,
                           const EmbeddingTable& v, double rho, std::span<double> y, int dim);
void multiplier_update(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                       double rho, std::span<double> y, int dim);

// Per-id augmented-Lagrangian term y_i.(w_i - v_i) + (rho/2)||w_i - v_i||^2
// into out_terms; the caller sums with ordered_sum.
void penalty_terms_serial(std::span<const int> ids, const EmbeddingTable& w,
                          const EmbeddingTable& v, std::span<const double> y, double rho, int dim,
                          std::span<double> out_terms);
void penalty_terms_omp(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                       std::span<const double> y, double rho, int dim, std::span<double> out_terms);
void penalty_terms(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                   std::span<const double> y, double rho, int dim, std::span<double> out_terms);

// Per-id ||y_i||_2 and ||w_i - v_i|| / (0.5 (||w_i|| + ||v_i||)); a zero
// denominator with a zero residual reports 0.
void residual_stats_serial(std::span<const int> ids, const EmbeddingTable& w,
                           const EmbeddingTable& v, std::span<const double> y, int dim,
                           std::span<double> out_y_norm, std::span<double> out_scaled_residual);
void residual_stats_omp(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                        std::span<const double> y, int dim, std::span<double> out_y_norm,
                        std::span<double> out_scaled_residual);
void residual_stats(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                    std::span<const double> y, int dim, std::span<double> out_y_norm,
                    std::span<double> out_scaled_residual);

// Nearest-centroid assignment; ties go to the lowest centroid index.
void kmeans_assign_serial(std::span<const double> points, int n_points, int dim,
                          std::span<const double> centroids, int k, std::span<int> out_assign,
                          std::span<double> out_sqdist);
void kmeans_assign_omp(std::span<const double> points, int n_points, int dim,
                       std::span<const double> centroids, int k, std::span<int> out_assign,
                       std::span<double> out_sqdist);
void kmeans_assign(std::span<const double> points, int n_points, int dim,
                   std::span<const double> centroids, int k, std::span<int> out_assign,
                   std::span<double> out_sqdist);

}  // namespace jointvec::kernels
