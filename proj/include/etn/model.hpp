#ifndef ETN_MODEL_HPP
#define ETN_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "etn/matrix.hpp"
#include "etn/params.hpp"
#include "etn/tape.hpp"

namespace etn {

enum class Variant {
  kEtn,
  kEtnWoClassifier,  // no weights on the classifier loss
  kEtnWoAuxiliary,   // weights from a plain sigmoid domain discriminator
  kDann,
  kSourceOnly,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);  // throws ValidationError
bool variant_has_weights(Variant v);

/// Layer widths of the five networks. The classifier and auxiliary label
/// predictor end in num_classes units; the domain discriminators end in a
/// single sigmoid unit.
struct ETNArchitecture {
  int input_dim = 2;
  std::vector<int> feature_hidden{64, 64};
  int feature_dim = 32;
  std::vector<int> classifier_hidden{32};
  std::vector<int> discriminator_hidden{32, 32};
  // Hidden widths of the transform producing the |Cs|-dimensional logits
  // inside the auxiliary predictor; configurable because a single affine
  // map is also defensible.
  std::vector<int> aux_hidden{32};
  int num_classes = 10;

  void validate() const;  // throws ValidationError listing all violations
};

/// The four trainable parameter groups. The auxiliary domain discriminator
/// owns no parameters of its own: it is the row-sum of the auxiliary
/// predictor's leaky-softmax scores (or, for the kEtnWoAuxiliary variant,
/// theta_y_tilde holds a standalone sigmoid discriminator instead).
struct ETNParams {
  ETNArchitecture arch;
  Variant variant = Variant::kEtn;
  ParamSet theta_f;
  ParamSet theta_y;
  ParamSet theta_d;
  ParamSet theta_y_tilde;
};

/// Seeded uniform [-a, a] initialization, a = sqrt(6/(fan_in + fan_out)).
ETNParams init_params(const ETNArchitecture& arch, Variant variant,
                      std::uint64_t seed);

// ---- forward passes (recorded on the tape) ---------------------------------

Value features(Tape& tape, ETNParams& params, const Matrix& x);
Value features(Tape& tape, ETNParams& params, Value x);

/// Softmax class probabilities over all num_classes classes.
Value classify(Tape& tape, ETNParams& params, Value f);

/// Gradient reversal at coefficient mu, then the discriminator layers ending
/// in a sigmoid unit. Output column holds the probability of source domain.
Value discriminate(Tape& tape, ETNParams& params, Value f, double mu);

/// Leaky-softmax scores of the auxiliary label predictor. Expects features
/// whose gradient flow into theta_f has been severed (detach) so the
/// auxiliary branch never trains the feature extractor.
Value aux_predict(Tape& tape, ETNParams& params, Value f_detached);

/// Probability of source-domain membership: the per-row element-sum of
/// aux_predict, or the standalone sigmoid head for kEtnWoAuxiliary.
Value aux_discriminate(Tape& tape, ETNParams& params, Value f_detached);

/// Row-sum of already computed auxiliary scores; shares the forward pass.
Value aux_score_sum(Tape& tape, Value aux_scores);

// ---- transferability weights ------------------------------------------------

/// Per-source-example transferability weights.
struct TransferWeights {
  ColVector values;
  bool normalized = false;
};

/// Raw weights w(x) = 1 - aux_discriminate(features(x)), evaluated with no
/// gradient tracking; each value lies in (0,1). Weights are constants
/// downstream: no gradient flows through them into the losses.
TransferWeights transferability(ETNParams& params, const Matrix& x_source);

/// Divides by the batch mean so the normalized mean is 1. Throws
/// NumericError when the batch mean falls below 1e-12.
TransferWeights normalize_weights(const TransferWeights& raw);
ColVector normalize_weights(const ColVector& raw);

namespace detail {
/// Hidden relu layers followed by a final affine map; used by every network.
Value mlp_linear_out(ParamSet& params, Value x);
}  // namespace detail

}  // namespace etn

#endif  // ETN_MODEL_HPP
