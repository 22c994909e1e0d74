#ifndef ETN_LOSSES_HPP
#define ETN_LOSSES_HPP

#include <vector>

#include "etn/matrix.hpp"
#include "etn/tape.hpp"

namespace etn {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] inside every
/// log so losses stay finite; the gradient of the clamped region is zero,
/// matching what finite differences see.
inline constexpr double kProbClamp = 1e-12;

/// Scalar values of the objectives that make up one training step. Losses a
/// variant does not use stay 0. entropy_term is the mean target prediction
/// entropy before the gamma scaling.
struct LossBreakdown {
  double e_gy = 0.0;
  double e_gd = 0.0;
  double e_aux_label = 0.0;
  double e_aux_domain = 0.0;
  double entropy_term = 0.0;
};

/// -sum_c p_c log p_c with 0 log 0 = 0. Throws NumericError on negative
/// probabilities.
double entropy(const RowVector& probs);

/// (1/n) sum_i weights_i * (-log probs(i, labels_i)).
Value weighted_cross_entropy(Tape& tape, Value probs,
                             const std::vector<int>& labels,
                             const ColVector& weights);

/// (1/n) sum_i entropy(probs row i).
Value mean_entropy(Tape& tape, Value probs);

/// Binary cross-entropy of a probability column against a constant target,
/// optionally weighted: -(1/n) sum_i w_i [t log p + (1-t) log(1-p)].
Value binary_cross_entropy(Tape& tape, Value probs,
                           const std::vector<double>& targets,
                           const ColVector& weights);

/// Weighted source cross-entropy plus gamma-scaled mean target entropy.
Value loss_classifier(Tape& tape, Value probs_s, const std::vector<int>& labels_s,
                      const ColVector& weights, Value probs_t, double gamma);

/// Weighted domain loss, source as positive class, per-domain averaging:
/// -(1/n_s) sum w log d_s - (1/n_t) sum log(1 - d_t).
Value loss_discriminator(Tape& tape, Value d_s, const ColVector& weights,
                         Value d_t);

/// One-vs-rest multitask loss over all classes, scaled by lambda.
Value loss_aux_label(Tape& tape, Value aux_scores_s,
                     const std::vector<int>& labels_s, double lambda);

/// Unweighted domain loss of the auxiliary discriminator, source positive.
Value loss_aux_domain(Tape& tape, Value gd_tilde_s, Value gd_tilde_t);

/// Baseline objective: unweighted source cross-entropy plus the domain term
/// averaged jointly over the union of both domains. The adversarial sign is
/// realized by the gradient reversal inside the discriminator, not by
/// explicit subtraction, so the value is a plain sum.
Value loss_dann(Tape& tape, Value probs_s, const std::vector<int>& labels_s,
                Value d_all, const std::vector<int>& domain_labels);

}  // namespace etn

#endif  // ETN_LOSSES_HPP
