#include "etn/params.hpp"

#include <cmath>

#include "etn/errors.hpp"

namespace etn {

int ParamSet::add(std::string name, Index in_dim, Index out_dim) {
  if (in_dim < 1 || out_dim < 1) {
    throw ShapeError("layer '" + name + "' has non-positive dimensions");
  }
  if (index_of(name) >= 0) {
    throw UsageError("duplicate parameter name '" + name + "'");
  }
  ParamEntry e;
  e.name = std::move(name);
  e.weight = Matrix::Zero(in_dim, out_dim);
  e.bias = RowVector::Zero(out_dim);
  e.grad_weight = Matrix::Zero(in_dim, out_dim);
  e.grad_bias = RowVector::Zero(out_dim);
  e.vel_weight = Matrix::Zero(in_dim, out_dim);
  e.vel_bias = RowVector::Zero(out_dim);
  entries_.push_back(std::move(e));
  return static_cast<int>(entries_.size()) - 1;
}

int ParamSet::add_initialized(std::string name, Index in_dim, Index out_dim,
                              std::mt19937_64& rng) {
  const int idx = add(std::move(name), in_dim, out_dim);
  const double a =
      std::sqrt(6.0 / (static_cast<double>(in_dim) + static_cast<double>(out_dim)));
  std::uniform_real_distribution<double> dist(-a, a);
  ParamEntry& e = entries_[static_cast<size_t>(idx)];
  for (Index r = 0; r < e.weight.rows(); ++r) {
    for (Index c = 0; c < e.weight.cols(); ++c) {
      e.weight(r, c) = dist(rng);
    }
  }
  return idx;
}

int ParamSet::index_of(std::string_view name) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

void ParamSet::zero_grads() {
  for (ParamEntry& e : entries_) {
    e.grad_weight.setZero();
    e.grad_bias.setZero();
  }
}

void ParamSet::zero_velocity() {
  for (ParamEntry& e : entries_) {
    e.vel_weight.setZero();
    e.vel_bias.setZero();
  }
}

Index ParamSet::coefficient_count() const {
  Index n = 0;
  for (const ParamEntry& e : entries_) {
    n += e.weight.size() + e.bias.size();
  }
  return n;
}

void sgd_momentum_step(ParamSet& params, double lr, double momentum) {
  for (ParamEntry& e : params.entries()) {
    e.vel_weight = momentum * e.vel_weight + e.grad_weight;
    e.vel_bias = momentum * e.vel_bias + e.grad_bias;
    e.weight -= lr * e.vel_weight;
    e.bias -= lr * e.vel_bias;
    e.grad_weight.setZero();
    e.grad_bias.setZero();
  }
}

}  // namespace etn
