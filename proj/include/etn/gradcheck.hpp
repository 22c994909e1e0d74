#ifndef ETN_GRADCHECK_HPP
#define ETN_GRADCHECK_HPP

#include <cstdint>
#include <functional>

#include "etn/params.hpp"
#include "etn/tape.hpp"

namespace etn {

/// Builds one forward pass over `params` on the given tape and returns the
/// scalar loss node. Must be deterministic in `params`.
using LossBuilder = std::function<Value(Tape&, ParamSet&)>;

struct GradCheckOptions {
  double eps = 1e-5;
  // Bounded test runtime: at most this many sampled coordinates per entry.
  int max_coords_per_entry = 200;
  std::uint64_t seed = 0;
};

/// Compares reverse-mode gradients against central differences.
/// Returns max over sampled coordinates of
///   |analytic - fd| / max(1e-8, |analytic| + |fd|),
/// where fd = (f(x+eps) - f(x-eps)) / (2 eps).
double check_gradient(const LossBuilder& build, ParamSet& params,
                      const GradCheckOptions& opts = {});

}  // namespace etn

#endif  // ETN_GRADCHECK_HPP
