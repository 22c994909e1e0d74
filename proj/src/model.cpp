#include "etn/model.hpp"

#include <cmath>
#include <sstream>

#include "etn/errors.hpp"
#include "etn/rng.hpp"

namespace etn {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kEtn: return "etn";
    case Variant::kEtnWoClassifier: return "etn_wo_classifier";
    case Variant::kEtnWoAuxiliary: return "etn_wo_auxiliary";
    case Variant::kDann: return "dann";
    case Variant::kSourceOnly: return "source_only";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& s) {
  if (s == "etn") return Variant::kEtn;
  if (s == "etn_wo_classifier") return Variant::kEtnWoClassifier;
  if (s == "etn_wo_auxiliary") return Variant::kEtnWoAuxiliary;
  if (s == "dann") return Variant::kDann;
  if (s == "source_only") return Variant::kSourceOnly;
  throw ValidationError("unknown variant '" + s +
                        "' (expected etn, etn_wo_classifier, "
                        "etn_wo_auxiliary, dann, or source_only)");
}

bool variant_has_weights(Variant v) {
  return v == Variant::kEtn || v == Variant::kEtnWoClassifier ||
         v == Variant::kEtnWoAuxiliary;
}

void ETNArchitecture::validate() const {
  std::ostringstream problems;
  auto check = [&](bool ok, const char* msg) {
    if (!ok) problems << "  - " << msg << "\n";
  };
  check(input_dim >= 1, "input_dim must be >= 1");
  check(feature_dim >= 1, "feature_dim must be >= 1");
  check(num_classes >= 1, "num_classes must be >= 1");
  for (int w : feature_hidden) check(w >= 1, "feature_hidden widths must be >= 1");
  for (int w : classifier_hidden) check(w >= 1, "classifier_hidden widths must be >= 1");
  for (int w : discriminator_hidden) check(w >= 1, "discriminator_hidden widths must be >= 1");
  for (int w : aux_hidden) check(w >= 1, "aux_hidden widths must be >= 1");
  const std::string text = problems.str();
  if (!text.empty()) {
    throw ValidationError("invalid architecture:\n" + text);
  }
}

namespace {

void add_mlp(ParamSet& ps, const std::string& prefix, int in_dim,
             const std::vector<int>& hidden, int out_dim,
             std::mt19937_64& rng) {
  int cur = in_dim;
  int layer = 0;
  for (int width : hidden) {
    ps.add_initialized(prefix + std::to_string(layer++), cur, width, rng);
    cur = width;
  }
  ps.add_initialized(prefix + std::to_string(layer), cur, out_dim, rng);
}

}  // namespace

ETNParams init_params(const ETNArchitecture& arch, Variant variant,
                      std::uint64_t seed) {
  arch.validate();
  ETNParams p;
  p.arch = arch;
  p.variant = variant;
  std::mt19937_64 rng = make_rng(seed, "init");
  add_mlp(p.theta_f, "f", arch.input_dim, arch.feature_hidden,
          arch.feature_dim, rng);
  add_mlp(p.theta_y, "y", arch.feature_dim, arch.classifier_hidden,
          arch.num_classes, rng);
  add_mlp(p.theta_d, "d", arch.feature_dim, arch.discriminator_hidden, 1, rng);
  if (variant == Variant::kEtn || variant == Variant::kEtnWoClassifier) {
    add_mlp(p.theta_y_tilde, "a", arch.feature_dim, arch.aux_hidden,
            arch.num_classes, rng);
  } else if (variant == Variant::kEtnWoAuxiliary) {
    // Standalone discriminator with the same widths as G_d; isolates the
    // effect of discriminative information in the weight quantifier.
    add_mlp(p.theta_y_tilde, "a", arch.feature_dim, arch.discriminator_hidden,
            1, rng);
  }
  return p;
}

namespace detail {

Value mlp_linear_out(ParamSet& params, Value x) {
  Value h = x;
  const int n = params.size();
  for (int i = 0; i < n; ++i) {
    h = affine(h, params, i);
    if (i + 1 < n) h = relu(h);
  }
  return h;
}

}  // namespace detail

Value features(Tape& tape, ETNParams& params, const Matrix& x) {
  return features(tape, params, tape.constant(x));
}

Value features(Tape& tape, ETNParams& params, Value x) {
  if (x.tape != &tape) {
    throw UsageError("features: value belongs to a different tape");
  }
  if (x.cols() != params.arch.input_dim) {
    throw ShapeError("features: input has " + std::to_string(x.cols()) +
                     " columns, architecture expects " +
                     std::to_string(params.arch.input_dim));
  }
  return detail::mlp_linear_out(params.theta_f, x);
}

Value classify(Tape& tape, ETNParams& params, Value f) {
  if (f.tape != &tape) {
    throw UsageError("classify: value belongs to a different tape");
  }
  if (f.cols() != params.arch.feature_dim) {
    throw ShapeError("classify: feature width mismatch");
  }
  return softmax(detail::mlp_linear_out(params.theta_y, f));
}

Value discriminate(Tape& tape, ETNParams& params, Value f, double mu) {
  if (f.tape != &tape) {
    throw UsageError("discriminate: value belongs to a different tape");
  }
  if (f.cols() != params.arch.feature_dim) {
    throw ShapeError("discriminate: feature width mismatch");
  }
  Value reversed = grad_reverse(f, mu);
  return sigmoid(detail::mlp_linear_out(params.theta_d, reversed));
}

Value aux_predict(Tape& tape, ETNParams& params, Value f_detached) {
  if (f_detached.tape != &tape) {
    throw UsageError("aux_predict: value belongs to a different tape");
  }
  if (params.variant != Variant::kEtn &&
      params.variant != Variant::kEtnWoClassifier) {
    throw UsageError("aux_predict: variant '" + to_string(params.variant) +
                     "' has no auxiliary label predictor");
  }
  if (f_detached.cols() != params.arch.feature_dim) {
    throw ShapeError("aux_predict: feature width mismatch");
  }
  Value z = detail::mlp_linear_out(params.theta_y_tilde, f_detached);
  return leaky_softmax(z, params.arch.num_classes);
}

Value aux_score_sum(Tape& tape, Value aux_scores) {
  if (aux_scores.tape != &tape) {
    throw UsageError("aux_score_sum: value belongs to a different tape");
  }
  return row_sum(aux_scores);
}

Value aux_discriminate(Tape& tape, ETNParams& params, Value f_detached) {
  if (params.variant == Variant::kEtnWoAuxiliary) {
    if (f_detached.cols() != params.arch.feature_dim) {
      throw ShapeError("aux_discriminate: feature width mismatch");
    }
    return sigmoid(
        detail::mlp_linear_out(params.theta_y_tilde, f_detached));
  }
  return aux_score_sum(tape, aux_predict(tape, params, f_detached));
}

TransferWeights transferability(ETNParams& params, const Matrix& x_source) {
  if (!variant_has_weights(params.variant)) {
    throw NotApplicableError("transferability: variant '" +
                             to_string(params.variant) +
                             "' defines no weights");
  }
  Tape tape;
  Value f = detach(features(tape, params, x_source));
  Value gd = aux_discriminate(tape, params, f);
  TransferWeights w;
  w.values = ColVector::Ones(gd.rows()) - tape.value(gd).col(0);
  return w;
}

ColVector normalize_weights(const ColVector& raw) {
  if (raw.size() < 1) {
    throw UsageError("normalize_weights: empty batch");
  }
  const double mean = raw.mean();
  if (mean < 1e-12) {
    throw NumericError("normalize_weights: degenerate batch, mean weight " +
                       std::to_string(mean));
  }
  return raw / mean;
}

TransferWeights normalize_weights(const TransferWeights& raw) {
  TransferWeights out;
  out.values = normalize_weights(raw.values);
  out.normalized = true;
  return out;
}

}  // namespace etn
