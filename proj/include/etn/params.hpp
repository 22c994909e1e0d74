#ifndef ETN_PARAMS_HPP
#define ETN_PARAMS_HPP

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "etn/matrix.hpp"

namespace etn {

/// One dense layer: weight matrix and bias row vector, each with a
/// shape-identical gradient buffer and momentum buffer.
struct ParamEntry {
  std::string name;
  Matrix weight;      // in_dim x out_dim
  RowVector bias;     // 1 x out_dim
  Matrix grad_weight;
  RowVector grad_bias;
  Matrix vel_weight;
  RowVector vel_bias;

  Index in_dim() const { return weight.rows(); }
  Index out_dim() const { return weight.cols(); }
};

/// An ordered collection of uniquely named layers. Holds one of the four
/// trainable parameter groups of the model.
class ParamSet {
 public:
  /// Adds a zero-initialized layer. Throws UsageError on duplicate names.
  int add(std::string name, Index in_dim, Index out_dim);

  /// Adds a layer with weights uniform in [-a, a], a = sqrt(6/(in+out)),
  /// and zero bias.
  int add_initialized(std::string name, Index in_dim, Index out_dim,
                      std::mt19937_64& rng);

  ParamEntry& entry(int i) { return entries_[static_cast<size_t>(i)]; }
  const ParamEntry& entry(int i) const {
    return entries_[static_cast<size_t>(i)];
  }
  int index_of(std::string_view name) const;  // -1 when absent

  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }

  std::vector<ParamEntry>& entries() { return entries_; }
  const std::vector<ParamEntry>& entries() const { return entries_; }

  void zero_grads();
  void zero_velocity();

  /// Total number of scalar parameters (weights + biases).
  Index coefficient_count() const;

 private:
  std::vector<ParamEntry> entries_;
};

/// v <- momentum * v + grad; param <- param - lr * v; grads zeroed after.
void sgd_momentum_step(ParamSet& params, double lr, double momentum);

}  // namespace etn

#endif  // ETN_PARAMS_HPP
