#ifndef ETN_TRAINER_HPP
#define ETN_TRAINER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etn/datagen.hpp"
#include "etn/losses.hpp"
#include "etn/model.hpp"

namespace etn {

/// All hyper-parameters of one training run.
struct TrainConfig {
  Variant variant = Variant::kEtn;
  double gamma = 0.1;    // target entropy trade-off
  double lambda = 1.0;   // auxiliary label loss scale
  double eta0 = 0.01;    // initial learning rate
  double alpha = 10.0;   // learning rate decay shape
  double beta = 0.75;    // learning rate decay exponent
  double momentum = 0.9;
  int batch_size = 32;
  int total_iterations = 3000;
  int log_interval = 50;
  std::uint64_t seed = 0;
  ETNArchitecture architecture;

  void validate() const;  // throws ValidationError listing all violations
};

/// eta0 / (1 + alpha * p)^beta for training progress p in [0, 1].
double lr_at(double p, double eta0, double alpha, double beta);

/// Flip-coefficient ramp 2 / (1 + exp(-10 p)) - 1: zero at p = 0 and
/// approaching 1 from below.
double grl_mu(double p);

/// One logged state of a run.
struct LogPoint {
  int iteration = 0;   // 0-based step index
  double progress = 0.0;
  double eta = 0.0;
  double mu = 0.0;
  LossBreakdown losses;
  double target_accuracy = 0.0;
  // Mean raw transferability over the full source set, split by whether the
  // true label is shared with the target domain. Absent for variants without
  // weights, or when a group is empty.
  std::optional<double> mean_weight_shared;
  std::optional<double> mean_weight_outlier;
};

struct TrainHistory {
  std::vector<LogPoint> points;
};

/// Carried by TrainAbortError when a step produces a non-finite loss.
struct DiagnosticSnapshot {
  int iteration = 0;
  LossBreakdown losses;
  double max_abs_param = 0.0;
};

class TrainAbortError : public std::runtime_error {
 public:
  TrainAbortError(const std::string& msg, DiagnosticSnapshot snap)
      : std::runtime_error(msg), snapshot(snap) {}
  DiagnosticSnapshot snapshot;
};

struct TrainResult {
  ETNParams params;
  TrainHistory history;
};

/// Runs the minimax optimization: per step draw a mini-batch pair, compute
/// transferability weights from the current auxiliary predictor, forward all
/// branches of the variant's objective, one backward, one SGD-with-momentum
/// step per trainable group at the scheduled learning rate.
TrainResult train(const PDATask& task, const TrainConfig& config);

/// One cell of a class-overlap sweep.
struct SweepCell {
  int target_classes = 0;
  Variant variant = Variant::kEtn;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::string status;  // "ok" or the error message
};

/// Trains every (target size, variant, seed) combination on tasks whose
/// shared label space is the first t classes of the base spec. Cell failures
/// are recorded in the cell status; other cells continue. Cells run on up to
/// `jobs` threads; each cell owns its task, parameters, and random streams.
std::vector<SweepCell> sweep_class_overlap(
    const PDATaskSpec& base_spec, const TrainConfig& base_config,
    const std::vector<int>& target_sizes, const std::vector<Variant>& variants,
    const std::vector<std::uint64_t>& seeds, int jobs = 1);

/// Architecture with input width and class count matching the task.
ETNArchitecture architecture_for_task(ETNArchitecture base, const PDATask& task);

}  // namespace etn

#endif  // ETN_TRAINER_HPP
