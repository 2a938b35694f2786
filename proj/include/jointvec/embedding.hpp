#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "jointvec/rng.hpp"

namespace jointvec {

// Dense id-indexed table of d-dimensional word vectors. Ids are vocabulary
// ids, rows are contiguous.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(int size, int dim) : dim_(dim), data_(static_cast<std::size_t>(size) * dim, 0.0) {}

  static EmbeddingTable uniform_init(int size, int dim, double half_range, Rng& rng) {
    EmbeddingTable t(size, dim);
    for (auto& x : t.data_) x = rng.uniform(-half_range, half_range);
    return t;
  }

  int size() const { return dim_ == 0 ? 0 : static_cast<int>(data_.size() / dim_); }
  int dim() const { return dim_; }

  std::span<double> vec(int id) {
    check(id);
    return {data_.data() + static_cast<std::size_t>(id) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> vec(int id) const {
    check(id);
    return {data_.data() + static_cast<std::size_t>(id) * dim_, static_cast<std::size_t>(dim_)};
  }

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  void check(int id) const {
    if (id < 0 || id >= size()) throw std::out_of_range("embedding id out of range");
  }

  int dim_ = 0;
  std::vector<double> data_;
};

}  // namespace jointvec
