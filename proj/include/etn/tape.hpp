#ifndef ETN_TAPE_HPP
#define ETN_TAPE_HPP

#include <functional>
#include <limits>
#include <vector>

#include "etn/matrix.hpp"
#include "etn/params.hpp"

namespace etn {

class Tape;

/// Handle to a node on a tape. Cheap to copy; valid for the tape's lifetime.
struct Value {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
  const Matrix& val() const;
  Index rows() const { return val().rows(); }
  Index cols() const { return val().cols(); }
  /// The held scalar; throws UsageError if not 1x1.
  double scalar() const;
};

/// Ordered record of one forward pass. Replaying it backward accumulates
/// exact reverse-mode gradients into node buffers and into the gradient
/// buffers of every ParamSet that participated. A tape and its parameters
/// form one single-threaded unit.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Matrix& upstream)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf node carrying data; receives a gradient buffer but propagates
  /// nothing further down.
  Value constant(Matrix v);

  /// Interior node. `back` receives the accumulated upstream gradient and
  /// must push contributions into input nodes (via add_grad) and parameter
  /// buffers.
  Value node(Matrix v, BackwardFn back);

  /// Registers a parameter set whose gradient buffers must be zeroed at the
  /// start of backward. Ops that touch parameters call this.
  void track(ParamSet& params);

  void add_grad(int id, const Matrix& g);

  const Matrix& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }
  const Matrix& value(Value v) const { return value(v.id); }
  /// Gradient accumulated at a node; zero matrix before backward touches it.
  const Matrix& grad(Value v) const;

  /// Reverse pass from a scalar loss node. Zeros all tracked parameter
  /// gradients and node gradients first, then accumulates exactly once per
  /// recorded use. Throws UsageError if `loss` is not 1x1.
  void backward(Value loss);

  int size() const { return static_cast<int>(nodes_.size()); }

  /// Smallest |x| seen at any relu input on this tape; +inf if none.
  /// Lets tests keep finite-difference probes away from the kink.
  double min_relu_input_abs() const { return min_relu_input_abs_; }
  void note_relu_input(const Matrix& x);

 private:
  struct NodeRec {
    Matrix value;
    Matrix grad;
    BackwardFn back;
    bool grad_live = false;
  };
  std::vector<NodeRec> nodes_;
  std::vector<ParamSet*> tracked_;
  double min_relu_input_abs_ = std::numeric_limits<double>::infinity();
};

// ---- primitives -----------------------------------------------------------

/// x * W + b (bias broadcast over rows), recorded with exact backward.
Value affine(Value x, ParamSet& params, int entry_index);

/// Elementwise max(0, x); subgradient at 0 is 0.
Value relu(Value x);

/// Elementwise logistic function, overflow-safe.
Value sigmoid(Value x);

/// Row-wise softmax with max-subtraction; rows sum to 1.
Value softmax(Value x);

/// Row-wise exp(z_c) / (num_classes + sum_c' exp(z_c')). Every entry lies in
/// (0,1) and each row sums to strictly less than 1. Stabilized with
/// m = max(0, max_c z_c) applied to numerator and denominator alike.
Value leaky_softmax(Value z, int num_classes);

/// Identity forward; backward multiplies the upstream gradient by -mu.
Value grad_reverse(Value x, double mu);

/// Identity forward; backward stops here.
Value detach(Value x);

/// Row slice [start, start+count).
Value rows(Value x, Index start, Index count);

/// Per-row sum, n x 1.
Value row_sum(Value x);

/// Elementwise sum of two same-shaped nodes.
Value add(Value a, Value b);

/// c * a.
Value scale(Value a, double c);

}  // namespace etn

#endif  // ETN_TAPE_HPP
