#include "etn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "etn/errors.hpp"

namespace etn {

namespace {

void require_finite(const Matrix& x, const char* op) {
  if (!x.allFinite()) {
    throw NumericError(std::string(op) + ": non-finite input");
  }
}

void require_same_tape(Value a, Value b, const char* op) {
  if (a.tape != b.tape) {
    throw UsageError(std::string(op) + ": operands live on different tapes");
  }
}

}  // namespace

const Matrix& Value::val() const { return tape->value(id); }

double Value::scalar() const {
  const Matrix& v = val();
  if (v.rows() != 1 || v.cols() != 1) {
    throw UsageError("scalar() on a non-scalar node");
  }
  return v(0, 0);
}

Value Tape::constant(Matrix v) {
  nodes_.push_back(NodeRec{std::move(v), Matrix(), BackwardFn(), false});
  return Value{this, static_cast<int>(nodes_.size()) - 1};
}

Value Tape::node(Matrix v, BackwardFn back) {
  nodes_.push_back(NodeRec{std::move(v), Matrix(), std::move(back), false});
  return Value{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::track(ParamSet& params) {
  if (std::find(tracked_.begin(), tracked_.end(), &params) == tracked_.end()) {
    tracked_.push_back(&params);
  }
}

void Tape::add_grad(int id, const Matrix& g) {
  NodeRec& n = nodes_[static_cast<size_t>(id)];
  if (!n.grad_live) {
    n.grad = g;
    n.grad_live = true;
  } else {
    n.grad += g;
  }
}

const Matrix& Tape::grad(Value v) const {
  const NodeRec& n = nodes_[static_cast<size_t>(v.id)];
  if (!n.grad_live) {
    throw UsageError("grad: no gradient present; run backward first");
  }
  return n.grad;
}

void Tape::backward(Value loss) {
  if (loss.tape != this) {
    throw UsageError("backward: loss node belongs to a different tape");
  }
  const Matrix& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw UsageError("backward: loss must be a scalar (1x1) node");
  }
  for (ParamSet* ps : tracked_) {
    ps->zero_grads();
  }
  for (NodeRec& n : nodes_) {
    n.grad_live = false;
    n.grad.resize(0, 0);
  }
  NodeRec& seed = nodes_[static_cast<size_t>(loss.id)];
  seed.grad = Matrix::Ones(1, 1);
  seed.grad_live = true;
  for (int i = loss.id; i >= 0; --i) {
    NodeRec& n = nodes_[static_cast<size_t>(i)];
    if (n.grad_live && n.back) {
      n.back(*this, n.grad);
    }
  }
  // Nodes that never received a gradient keep an unsized buffer; expose
  // zeros of the right shape instead.
  for (NodeRec& n : nodes_) {
    if (!n.grad_live) {
      n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
      n.grad_live = true;
    }
  }
}

void Tape::note_relu_input(const Matrix& x) {
  if (x.size() > 0) {
    min_relu_input_abs_ =
        std::min(min_relu_input_abs_, x.cwiseAbs().minCoeff());
  }
}

// ---- primitives -----------------------------------------------------------

Value affine(Value x, ParamSet& params, int entry_index) {
  Tape& tape = *x.tape;
  ParamEntry& e = params.entry(entry_index);
  const Matrix& xv = tape.value(x);
  if (xv.cols() != e.weight.rows()) {
    throw ShapeError("affine '" + e.name + "': input has " +
                     std::to_string(xv.cols()) + " columns, weight expects " +
                     std::to_string(e.weight.rows()));
  }
  tape.track(params);
  Matrix y = xv * e.weight;
  y.rowwise() += e.bias;
  const int xid = x.id;
  ParamEntry* entry = &e;
  return tape.node(std::move(y), [xid, entry](Tape& t, const Matrix& g) {
    const Matrix& xin = t.value(xid);
    entry->grad_weight.noalias() += xin.transpose() * g;
    entry->grad_bias += g.colwise().sum();
    t.add_grad(xid, g * entry->weight.transpose());
  });
}

Value relu(Value x) {
  Tape& tape = *x.tape;
  const Matrix& xv = tape.value(x);
  require_finite(xv, "relu");
  tape.note_relu_input(xv);
  Matrix y = xv.cwiseMax(0.0);
  const int xid = x.id;
  return tape.node(std::move(y), [xid](Tape& t, const Matrix& g) {
    const Matrix& xin = t.value(xid);
    t.add_grad(xid, (xin.array() > 0.0).select(g, Matrix::Zero(g.rows(), g.cols())));
  });
}

Value sigmoid(Value x) {
  Tape& tape = *x.tape;
  const Matrix& xv = tape.value(x);
  require_finite(xv, "sigmoid");
  Matrix y(xv.rows(), xv.cols());
  for (Index r = 0; r < xv.rows(); ++r) {
    for (Index c = 0; c < xv.cols(); ++c) {
      const double v = xv(r, c);
      y(r, c) = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                         : std::exp(v) / (1.0 + std::exp(v));
    }
  }
  const int xid = x.id;
  const int yid = tape.size();
  return tape.node(std::move(y), [xid, yid](Tape& t, const Matrix& g) {
    const Matrix& yv = t.value(yid);
    t.add_grad(xid, (g.array() * yv.array() * (1.0 - yv.array())).matrix());
  });
}

Value softmax(Value x) {
  Tape& tape = *x.tape;
  const Matrix& xv = tape.value(x);
  require_finite(xv, "softmax");
  Matrix p(xv.rows(), xv.cols());
  for (Index r = 0; r < xv.rows(); ++r) {
    const double m = xv.row(r).maxCoeff();
    RowVector e = (xv.row(r).array() - m).exp();
    p.row(r) = e / e.sum();
  }
  const int xid = x.id;
  const int yid = tape.size();
  return tape.node(std::move(p), [xid, yid](Tape& t, const Matrix& g) {
    const Matrix& pv = t.value(yid);
    Matrix gx(pv.rows(), pv.cols());
    for (Index r = 0; r < pv.rows(); ++r) {
      const double dot = g.row(r).dot(pv.row(r));
      gx.row(r) = pv.row(r).array() * (g.row(r).array() - dot);
    }
    t.add_grad(xid, gx);
  });
}

Value leaky_softmax(Value z, int num_classes) {
  Tape& tape = *z.tape;
  const Matrix& zv = tape.value(z);
  require_finite(zv, "leaky_softmax");
  if (zv.cols() != num_classes) {
    throw ShapeError("leaky_softmax: input has " + std::to_string(zv.cols()) +
                     " columns, expected " + std::to_string(num_classes));
  }
  Matrix p(zv.rows(), zv.cols());
  for (Index r = 0; r < zv.rows(); ++r) {
    const double m = std::max(0.0, zv.row(r).maxCoeff());
    RowVector e = (zv.row(r).array() - m).exp();
    const double denom = num_classes * std::exp(-m) + e.sum();
    p.row(r) = e / denom;
  }
  const int xid = z.id;
  const int yid = tape.size();
  // d p_c / d z_j = p_c (delta_cj - p_j): softmax form, row sums below 1.
  return tape.node(std::move(p), [xid, yid](Tape& t, const Matrix& g) {
    const Matrix& pv = t.value(yid);
    Matrix gx(pv.rows(), pv.cols());
    for (Index r = 0; r < pv.rows(); ++r) {
      const double dot = g.row(r).dot(pv.row(r));
      gx.row(r) = pv.row(r).array() * (g.row(r).array() - dot);
    }
    t.add_grad(xid, gx);
  });
}

Value grad_reverse(Value x, double mu) {
  if (mu < 0.0) {
    throw UsageError("grad_reverse: mu must be non-negative");
  }
  Tape& tape = *x.tape;
  const int xid = x.id;
  return tape.node(tape.value(x), [xid, mu](Tape& t, const Matrix& g) {
    t.add_grad(xid, (-mu) * g);
  });
}

Value detach(Value x) {
  Tape& tape = *x.tape;
  return tape.node(tape.value(x), BackwardFn{});
}

Value rows(Value x, Index start, Index count) {
  Tape& tape = *x.tape;
  const Matrix& xv = tape.value(x);
  if (start < 0 || count < 0 || start + count > xv.rows()) {
    throw ShapeError("rows: slice [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") out of range for " +
                     std::to_string(xv.rows()) + " rows");
  }
  const int xid = x.id;
  return tape.node(xv.middleRows(start, count),
                   [xid, start, count](Tape& t, const Matrix& g) {
                     const Matrix& xin = t.value(xid);
                     Matrix gx = Matrix::Zero(xin.rows(), xin.cols());
                     gx.middleRows(start, count) = g;
                     t.add_grad(xid, gx);
                   });
}

Value row_sum(Value x) {
  Tape& tape = *x.tape;
  const Matrix& xv = tape.value(x);
  Matrix y = xv.rowwise().sum();
  const int xid = x.id;
  return tape.node(std::move(y), [xid](Tape& t, const Matrix& g) {
    const Matrix& xin = t.value(xid);
    t.add_grad(xid, g * Matrix::Ones(1, xin.cols()));
  });
}

Value add(Value a, Value b) {
  require_same_tape(a, b, "add");
  Tape& tape = *a.tape;
  const Matrix& av = tape.value(a);
  const Matrix& bv = tape.value(b);
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    throw ShapeError("add: operand shapes differ");
  }
  const int aid = a.id;
  const int bid = b.id;
  return tape.node(av + bv, [aid, bid](Tape& t, const Matrix& g) {
    t.add_grad(aid, g);
    t.add_grad(bid, g);
  });
}

Value scale(Value a, double c) {
  Tape& tape = *a.tape;
  const int aid = a.id;
  return tape.node(c * tape.value(a), [aid, c](Tape& t, const Matrix& g) {
    t.add_grad(aid, c * g);
  });
}

}  // namespace etn
