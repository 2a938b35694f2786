#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "jointvec/embedding.hpp"

namespace jointvec {

// Augmented-Lagrangian state tying the w-side and v-side embeddings of the
// shared vocabulary I: one multiplier vector y_i per shared word, the
// penalty weight rho (also the dual step size), and the objective weight
// alpha.
class AdmmCoupling {
 public:
  AdmmCoupling(std::vector<int> shared_ids, int dim, double rho, double alpha);

  const std::vector<int>& shared_ids() const { return shared_ids_; }
  int dim() const { return dim_; }
  double rho() const { return rho_; }
  double alpha() const { return alpha_; }

  // Row into y for a word id, -1 when the id is not shared.
  int slot(int id) const {
    auto it = slot_.find(id);
    return it == slot_.end() ? -1 : it->second;
  }

  std::span<const double> y_row(int slot) const {
    return {y_.data() + static_cast<std::size_t>(slot) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> y() const { return y_; }
  std::span<double> mutable_y() { return y_; }

  // Exact evaluation of sum_i y_i.(w_i - v_i) + (rho/2) sum_i ||w_i - v_i||^2.
  double penalty_loss(const EmbeddingTable& w, const EmbeddingTable& v) const;

  // Step 3: y_i += rho (w_i - v_i).
  void update_multipliers(const EmbeddingTable& w, const EmbeddingTable& v);

  struct Stats {
    double mean_y_norm = 0.0;
    double mean_scaled_residual = 0.0;
  };
  Stats stats(const EmbeddingTable& w, const EmbeddingTable& v) const;

 private:
  std::vector<int> shared_ids_;
  std::unordered_map<int, int> slot_;
  int dim_;
  double rho_;
  double alpha_;
  std::vector<double> y_;  // |I| x dim, zero-initialized
};

// Which side of the split a gradient step is updating.
enum class CouplingSide { W, V };

// View handed to an SGD step: the coupling plus the frozen other-side table.
// grad() is the derivative of the penalty with respect to this side's
// embedding of a shared word; exactly zero for non-shared words.
struct CouplingView {
  const AdmmCoupling* coupling = nullptr;
  const EmbeddingTable* other = nullptr;
  CouplingSide side = CouplingSide::W;

  // Writes the penalty gradient for word `id` into `out` (length dim);
  // returns false (out untouched) when the id is not shared.
  bool grad(int id, const EmbeddingTable& own, std::span<double> out) const;
};

}  // namespace jointvec
