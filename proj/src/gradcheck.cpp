#include "etn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "etn/errors.hpp"

namespace etn {

namespace {

double evaluate(const LossBuilder& build, ParamSet& params) {
  Tape tape;
  return build(tape, params).scalar();
}

// Indices of the coordinates to probe: all of them when the entry is small,
// otherwise a uniform sample without replacement.
std::vector<Index> sample_coords(Index total, int max_coords,
                                 std::mt19937_64& rng) {
  std::vector<Index> all(static_cast<size_t>(total));
  std::iota(all.begin(), all.end(), Index{0});
  if (total <= max_coords) return all;
  for (int i = 0; i < max_coords; ++i) {
    std::uniform_int_distribution<Index> pick(i, total - 1);
    std::swap(all[static_cast<size_t>(i)], all[static_cast<size_t>(pick(rng))]);
  }
  all.resize(static_cast<size_t>(max_coords));
  return all;
}

}  // namespace

double check_gradient(const LossBuilder& build, ParamSet& params,
                      const GradCheckOptions& opts) {
  if (opts.eps <= 0.0) {
    throw UsageError("check_gradient: eps must be positive");
  }
  // One reverse pass for the analytic gradients.
  std::vector<Matrix> analytic_w;
  std::vector<RowVector> analytic_b;
  {
    Tape tape;
    Value loss = build(tape, params);
    tape.backward(loss);
    for (const ParamEntry& e : params.entries()) {
      analytic_w.push_back(e.grad_weight);
      analytic_b.push_back(e.grad_bias);
    }
  }

  std::mt19937_64 rng(opts.seed);
  double max_rel = 0.0;
  auto probe = [&](double& coord, double analytic) {
    const double saved = coord;
    coord = saved + opts.eps;
    const double up = evaluate(build, params);
    coord = saved - opts.eps;
    const double down = evaluate(build, params);
    coord = saved;
    const double fd = (up - down) / (2.0 * opts.eps);
    const double rel = std::abs(analytic - fd) /
                       std::max(1e-8, std::abs(analytic) + std::abs(fd));
    max_rel = std::max(max_rel, rel);
  };

  for (int i = 0; i < params.size(); ++i) {
    ParamEntry& e = params.entry(i);
    const Index total = e.weight.size() + e.bias.size();
    for (Index k : sample_coords(total, opts.max_coords_per_entry, rng)) {
      if (k < e.weight.size()) {
        probe(e.weight.data()[k], analytic_w[static_cast<size_t>(i)].data()[k]);
      } else {
        const Index j = k - e.weight.size();
        probe(e.bias.data()[j], analytic_b[static_cast<size_t>(i)].data()[j]);
      }
    }
  }
  return max_rel;
}

}  // namespace etn
