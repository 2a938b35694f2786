#include "jointvec/kernels.hpp"

#include <atomic>
#include <cmath>

#include "jointvec/vec_ops.hpp"

namespace jointvec::kernels {

namespace {
std::atomic<bool> g_parallel{true};

inline void update_row(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                       double rho, std::span<double> y, int dim, std::int64_t r) {
  const auto wi = w.vec(ids[r]);
  const auto vi = v.vec(ids[r]);
  double* yr = y.data() + r * dim;
  for (int k = 0; k < dim; ++k) yr[k] += rho * (wi[k] - vi[k]);
}

inline double penalty_row(std::span<const int> ids, const EmbeddingTable& w,
                          const EmbeddingTable& v, std::span<const double> y, double rho, int dim,
                          std::int64_t r) {
  const auto wi = w.vec(ids[r]);
  const auto vi = v.vec(ids[r]);
  const double* yr = y.data() + r * dim;
  double lin = 0.0, sq = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = wi[k] - vi[k];
    lin += yr[k] * d;
    sq += d * d;
  }
  return lin + 0.5 * rho * sq;
}

inline void stats_row(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                      std::span<const double> y, int dim, std::span<double> out_y_norm,
                      std::span<double> out_scaled, std::int64_t r) {
  const auto wi = w.vec(ids[r]);
  const auto vi = v.vec(ids[r]);
  const double* yr = y.data() + r * dim;
  double ysq = 0.0, dsq = 0.0, wsq = 0.0, vsq = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = wi[k] - vi[k];
    ysq += yr[k] * yr[k];
    dsq += d * d;
    wsq += wi[k] * wi[k];
    vsq += vi[k] * vi[k];
  }
  out_y_norm[r] = std::sqrt(ysq);
  const double denom = 0.5 * (std::sqrt(wsq) + std::sqrt(vsq));
  out_scaled[r] = denom > 0.0 ? std::sqrt(dsq) / denom : 0.0;
}

inline void assign_row(std::span<const double> points, int dim, std::span<const double> centroids,
                       int k, std::span<int> out_assign, std::span<double> out_sqdist,
                       std::int64_t p) {
  const double* x = points.data() + p * dim;
  int best = 0;
  double best_d = 0.0;
  for (int c = 0; c < k; ++c) {
    const double* m = centroids.data() + static_cast<std::size_t>(c) * dim;
    double d = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double t = x[j] - m[j];
      d += t * t;
    }
    if (c == 0 || d < best_d) {
      best = c;
      best_d = d;
    }
  }
  out_assign[p] = best;
  out_sqdist[p] = best_d;
}

}  // namespace

void set_parallel(bool enabled) { g_parallel.store(enabled); }
bool parallel_enabled() { return g_parallel.load(); }

void multiplier_update_serial(std::span<const int> ids, const EmbeddingTable& w,
                              const EmbeddingTable& v, double rho, std::span<double> y, int dim) {
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
  for (std::int64_t r = 0; r < n; ++r) update_row(ids, w, v, rho, y, dim, r);
}

void multiplier_update_omp(std::span<const int> ids, const EmbeddingTable& w,
                           const EmbeddingTable& v, double rho, std::span<double> y, int dim) {
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t r = 0; r < n; ++r) update_row(ids, w, v, rho, y, dim, r);
}

void multiplier_update(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                       double rho, std::span<double> y, int dim) {
  if (parallel_enabled())
    multiplier_update_omp(ids, w, v, rho, y, dim);
  else
    multiplier_update_serial(ids, w, v, rho, y, dim);
}

void penalty_terms_serial(std::span<const int> ids, const EmbeddingTable& w,
                          const EmbeddingTable& v, std::span<const double> y, double rho, int dim,
                          std::span<double> out_terms) {
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
  for (std::int64_t r = 0; r < n; ++r) out_terms[r] = penalty_row(ids, w, v, y, rho, dim, r);
}

void penalty_terms_omp(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                       std::span<const double> y, double rho, int dim, std::span<double> out_terms) {
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t r = 0; r < n; ++r) out_terms[r] = penalty_row(ids, w, v, y, rho, dim, r);
}

void penalty_terms(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                   std::span<const double> y, double rho, int dim, std::span<double> out_terms) {
  if (parallel_enabled())
    penalty_terms_omp(ids, w, v, y, rho, dim, out_terms);
  else
    penalty_terms_serial(ids, w, v, y, rho, dim, out_terms);
}

void residual_stats_serial(std::span<const int> ids, const EmbeddingTable& w,
                           const EmbeddingTable& v, std::span<const double> y, int dim,
                           std::span<double> out_y_norm, std::span<double> out_scaled_residual) {
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
  for (std::int64_t r = 0; r < n; ++r)
    stats_row(ids, w, v, y, dim, out_y_norm, out_scaled_residual, r);
}

void residual_stats_omp(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                        std::span<const double> y, int dim, std::span<double> out_y_norm,
                        std::span<double> out_scaled_residual) {
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t r = 0; r < n; ++r)
    stats_row(ids, w, v, y, dim, out_y_norm, out_scaled_residual, r);
}

void residual_stats(std::span<const int> ids, const EmbeddingTable& w, const EmbeddingTable& v,
                    std::span<const double> y, int dim, std::span<double> out_y_norm,
                    std::span<double> out_scaled_residual) {
  if (parallel_enabled())
    residual_stats_omp(ids, w, v, y, dim, out_y_norm, out_scaled_residual);
  else
    residual_stats_serial(ids, w, v, y, dim, out_y_norm, out_scaled_residual);
}

void kmeans_assign_serial(std::span<const double> points, int n_points, int dim,
                          std::span<const double> centroids, int k, std::span<int> out_assign,
                          std::span<double> out_sqdist) {
  for (std::int64_t p = 0; p < n_points; ++p)
    assign_row(points, dim, centroids, k, out_assign, out_sqdist, p);
}

void kmeans_assign_omp(std::span<const double> points, int n_points, int dim,
                       std::span<const double> centroids, int k, std::span<int> out_assign,
                       std::span<double> out_sqdist) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t p = 0; p < n_points; ++p)
    assign_row(points, dim, centroids, k, out_assign, out_sqdist, p);
}

void kmeans_assign(std::span<const double> points, int n_points, int dim,
                   std::span<const double> centroids, int k, std::span<int> out_assign,
                   std::span<double> out_sqdist) {
  if (parallel_enabled())
    kmeans_assign_omp(points, n_points, dim, centroids, k, out_assign, out_sqdist);
  else
    kmeans_assign_serial(points, n_points, dim, centroids, k, out_assign, out_sqdist);
}

}  // namespace jointvec::kernels
