#include "jointvec/coupling.hpp"

#include <stdexcept>

#include "jointvec/kernels.hpp"

namespace jointvec {

AdmmCoupling::AdmmCoupling(std::vector<int> shared_ids, int dim, double rho, double alpha)
    : shared_ids_(std::move(shared_ids)),
      dim_(dim),
      rho_(rho),
      alpha_(alpha),
      y_(shared_ids_.size() * static_cast<std::size_t>(dim), 0.0) {
  if (rho_ < 0.0) throw std::invalid_argument("rho must be >= 0");
  if (alpha_ < 0.0 || alpha_ > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  for (std::size_t r = 0; r < shared_ids_.size(); ++r)
    slot_.emplace(shared_ids_[r], static_cast<int>(r));
}

double AdmmCoupling::penalty_loss(const EmbeddingTable& w, const EmbeddingTable& v) const {
  std::vector<double> terms(shared_ids_.size());
  kernels::penalty_terms(shared_ids_, w, v, y_, rho_, dim_, terms);
  return kernels::ordered_sum(terms);
}

void AdmmCoupling::update_multipliers(const EmbeddingTable& w, const EmbeddingTable& v) {
  kernels::multiplier_update(shared_ids_, w, v, rho_, y_, dim_);
}

AdmmCoupling::Stats AdmmCoupling::stats(const EmbeddingTable& w, const EmbeddingTable& v) const {
  Stats s;
  if (shared_ids_.empty()) return s;
  std::vector<double> y_norm(shared_ids_.size());
  std::vector<double> scaled(shared_ids_.size());
  kernels::residual_stats(shared_ids_, w, v, y_, dim_, y_norm, scaled);
  s.mean_y_norm = kernels::ordered_sum(y_norm) / static_cast<double>(shared_ids_.size());
  s.mean_scaled_residual = kernels::ordered_sum(scaled) / static_cast<double>(shared_ids_.size());
  return s;
}

bool CouplingView::grad(int id, const EmbeddingTable& own, std::span<double> out) const {
  if (!coupling) return false;
  const int slot = coupling->slot(id);
  if (slot < 0) return false;
  const auto y = coupling->y_row(slot);
  const auto own_vec = own.vec(id);
  const auto other_vec = other->vec(id);
  const double rho = coupling->rho();
  if (side == CouplingSide::W) {
    // d/dw_i [ y.(w-v) + rho/2 ||w-v||^2 ] = y + rho (w - v)
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = y[k] + rho * (own_vec[k] - other_vec[k]);
  } else {
    // d/dv_i = -y + rho (v - w)
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = -y[k] + rho * (own_vec[k] - other_vec[k]);
  }
  return true;
}

}  // namespace jointvec
