#include "etn/losses.hpp"

#include <cmath>
#include <string>

#include "etn/errors.hpp"

namespace etn {

namespace {

double clamp_prob(double p) {
  return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}

bool in_clamp_range(double p) {
  return p > kProbClamp && p < 1.0 - kProbClamp;
}

Matrix scalar(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

void require_labels_match(Index rows, size_t labels, const char* op) {
  if (static_cast<size_t>(rows) != labels) {
    throw ShapeError(std::string(op) + ": " + std::to_string(rows) +
                     " probability rows vs " + std::to_string(labels) +
                     " labels");
  }
}

void require_column(const Matrix& m, const char* op) {
  if (m.cols() != 1) {
    throw ShapeError(std::string(op) + ": expected a single column");
  }
}

}  // namespace

double entropy(const RowVector& probs) {
  double h = 0.0;
  for (Index c = 0; c < probs.size(); ++c) {
    const double p = probs(c);
    if (p < 0.0) {
      throw NumericError("entropy: negative probability " + std::to_string(p));
    }
    if (p > 0.0) h -= p * std::log(clamp_prob(p));
  }
  return h;
}

Value weighted_cross_entropy(Tape& tape, Value probs,
                             const std::vector<int>& labels,
                             const ColVector& weights) {
  const Matrix& p = tape.value(probs);
  require_labels_match(p.rows(), labels.size(), "weighted_cross_entropy");
  if (weights.size() != p.rows()) {
    throw ShapeError("weighted_cross_entropy: weight count mismatch");
  }
  const Index n = p.rows();
  for (int y : labels) {
    if (y < 0 || y >= p.cols()) {
      throw ValidationError("weighted_cross_entropy: label " +
                            std::to_string(y) + " outside [0, " +
                            std::to_string(p.cols()) + ")");
    }
  }
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    loss -= weights(i) * std::log(clamp_prob(p(i, labels[static_cast<size_t>(i)])));
  }
  loss /= static_cast<double>(n);
  const int pid = probs.id;
  ColVector w = weights;
  std::vector<int> lab = labels;
  return tape.node(scalar(loss), [pid, w, lab, n](Tape& t, const Matrix& g) {
    const Matrix& pv = t.value(pid);
    Matrix gp = Matrix::Zero(pv.rows(), pv.cols());
    const double up = g(0, 0) / static_cast<double>(n);
    for (Index i = 0; i < pv.rows(); ++i) {
      const double pi = pv(i, lab[static_cast<size_t>(i)]);
      if (in_clamp_range(pi)) {
        gp(i, lab[static_cast<size_t>(i)]) = -up * w(i) / pi;
      }
    }
    t.add_grad(pid, gp);
  });
}

Value mean_entropy(Tape& tape, Value probs) {
  const Matrix& p = tape.value(probs);
  const Index n = p.rows();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < p.cols(); ++c) {
      const double v = p(i, c);
      if (v < 0.0) {
        throw NumericError("mean_entropy: negative probability");
      }
      if (v > 0.0) total -= v * std::log(clamp_prob(v));
    }
  }
  total /= static_cast<double>(n);
  const int pid = probs.id;
  return tape.node(scalar(total), [pid, n](Tape& t, const Matrix& g) {
    const Matrix& pv = t.value(pid);
    Matrix gp(pv.rows(), pv.cols());
    const double up = g(0, 0) / static_cast<double>(n);
    for (Index i = 0; i < pv.rows(); ++i) {
      for (Index c = 0; c < pv.cols(); ++c) {
        const double v = pv(i, c);
        // Derivative of the clamped expression actually computed above:
        // -(log v + 1) inside the clamp range, -log(clamp(v)) outside.
        gp(i, c) = in_clamp_range(v) ? -up * (std::log(v) + 1.0)
                                     : -up * std::log(clamp_prob(v));
      }
    }
    t.add_grad(pid, gp);
  });
}

Value binary_cross_entropy(Tape& tape, Value probs,
                           const std::vector<double>& targets,
                           const ColVector& weights) {
  const Matrix& d = tape.value(probs);
  require_column(d, "binary_cross_entropy");
  require_labels_match(d.rows(), targets.size(), "binary_cross_entropy");
  if (weights.size() != d.rows()) {
    throw ShapeError("binary_cross_entropy: weight count mismatch");
  }
  const Index n = d.rows();
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double t = targets[static_cast<size_t>(i)];
    const double di = d(i, 0);
    loss -= weights(i) * (t * std::log(clamp_prob(di)) +
                          (1.0 - t) * std::log(clamp_prob(1.0 - di)));
  }
  loss /= static_cast<double>(n);
  const int did = probs.id;
  ColVector w = weights;
  std::vector<double> tv = targets;
  return tape.node(scalar(loss), [did, w, tv, n](Tape& t, const Matrix& g) {
    const Matrix& dv = t.value(did);
    Matrix gd = Matrix::Zero(dv.rows(), 1);
    const double up = g(0, 0) / static_cast<double>(n);
    for (Index i = 0; i < dv.rows(); ++i) {
      const double di = dv(i, 0);
      const double ti = tv[static_cast<size_t>(i)];
      double acc = 0.0;
      if (ti != 0.0 && in_clamp_range(di)) acc -= ti / di;
      if (ti != 1.0 && in_clamp_range(1.0 - di)) acc += (1.0 - ti) / (1.0 - di);
      gd(i, 0) = up * w(i) * acc;
    }
    t.add_grad(did, gd);
  });
}

Value loss_classifier(Tape& tape, Value probs_s, const std::vector<int>& labels_s,
                      const ColVector& weights, Value probs_t, double gamma) {
  if (gamma < 0.0) {
    throw UsageError("loss_classifier: gamma must be non-negative");
  }
  Value ce = weighted_cross_entropy(tape, probs_s, labels_s, weights);
  if (!probs_t.valid()) {
    if (gamma == 0.0) return ce;
    throw UsageError("loss_classifier: gamma > 0 requires target predictions");
  }
  Value ent = mean_entropy(tape, probs_t);
  return add(ce, scale(ent, gamma));
}

Value loss_discriminator(Tape& tape, Value d_s, const ColVector& weights,
                         Value d_t) {
  const std::vector<double> ones_s(static_cast<size_t>(d_s.rows()), 1.0);
  const std::vector<double> zeros_t(static_cast<size_t>(d_t.rows()), 0.0);
  Value source_term = binary_cross_entropy(tape, d_s, ones_s, weights);
  Value target_term = binary_cross_entropy(tape, d_t, zeros_t,
                                           ColVector::Ones(d_t.rows()));
  return add(source_term, target_term);
}

Value loss_aux_label(Tape& tape, Value aux_scores_s,
                     const std::vector<int>& labels_s, double lambda) {
  if (lambda < 0.0) {
    throw UsageError("loss_aux_label: lambda must be non-negative");
  }
  const Matrix& s = tape.value(aux_scores_s);
  require_labels_match(s.rows(), labels_s.size(), "loss_aux_label");
  const Index n = s.rows();
  const Index classes = s.cols();
  for (int y : labels_s) {
    if (y < 0 || y >= classes) {
      throw ValidationError("loss_aux_label: label out of range");
    }
  }
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const int yi = labels_s[static_cast<size_t>(i)];
    for (Index c = 0; c < classes; ++c) {
      const double v = s(i, c);
      if (c == yi) {
        loss -= std::log(clamp_prob(v));
      } else {
        loss -= std::log(clamp_prob(1.0 - v));
      }
    }
  }
  loss *= lambda / static_cast<double>(n);
  const int sid = aux_scores_s.id;
  std::vector<int> lab = labels_s;
  return tape.node(scalar(loss), [sid, lab, lambda, n](Tape& t, const Matrix& g) {
    const Matrix& sv = t.value(sid);
    Matrix gs(sv.rows(), sv.cols());
    const double up = g(0, 0) * lambda / static_cast<double>(n);
    for (Index i = 0; i < sv.rows(); ++i) {
      const int yi = lab[static_cast<size_t>(i)];
      for (Index c = 0; c < sv.cols(); ++c) {
        const double v = sv(i, c);
        double der = 0.0;
        if (c == yi) {
          if (in_clamp_range(v)) der = -1.0 / v;
        } else {
          if (in_clamp_range(1.0 - v)) der = 1.0 / (1.0 - v);
        }
        gs(i, c) = up * der;
      }
    }
    t.add_grad(sid, gs);
  });
}

Value loss_aux_domain(Tape& tape, Value gd_tilde_s, Value gd_tilde_t) {
  const std::vector<double> ones_s(static_cast<size_t>(gd_tilde_s.rows()), 1.0);
  const std::vector<double> zeros_t(static_cast<size_t>(gd_tilde_t.rows()), 0.0);
  Value source_term = binary_cross_entropy(tape, gd_tilde_s, ones_s,
                                           ColVector::Ones(gd_tilde_s.rows()));
  Value target_term = binary_cross_entropy(tape, gd_tilde_t, zeros_t,
                                           ColVector::Ones(gd_tilde_t.rows()));
  return add(source_term, target_term);
}

Value loss_dann(Tape& tape, Value probs_s, const std::vector<int>& labels_s,
                Value d_all, const std::vector<int>& domain_labels) {
  require_labels_match(tape.value(d_all).rows(), domain_labels.size(),
                       "loss_dann");
  Value ce = weighted_cross_entropy(tape, probs_s, labels_s,
                                    ColVector::Ones(probs_s.rows()));
  std::vector<double> targets;
  targets.reserve(domain_labels.size());
  for (int d : domain_labels) {
    if (d != 0 && d != 1) {
      throw ValidationError("loss_dann: domain labels must be 0 or 1");
    }
    targets.push_back(static_cast<double>(d));
  }
  Value domain_term = binary_cross_entropy(tape, d_all, targets,
                                           ColVector::Ones(d_all.rows()));
  return add(ce, domain_term);
}

}  // namespace etn
