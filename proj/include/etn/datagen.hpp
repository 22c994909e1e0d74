#ifndef ETN_DATAGEN_HPP
#define ETN_DATAGEN_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "etn/matrix.hpp"

namespace etn {

/// Affine shift applied to target examples: rotate in the first two
/// coordinates, then scale, then translate.
struct DomainShift {
  double rotation_radians = 0.0;
  double scale = 1.0;
  ColVector translation = ColVector::Zero(2);
};

Matrix apply_shift(const DomainShift& shift, const Matrix& x);
Matrix invert_shift(const DomainShift& shift, const Matrix& x);

/// Generative parameters of a synthetic partial domain adaptation task.
/// Source classes sit on isotropic Gaussians whose means are equally spaced
/// on a circle; target examples are drawn only for the shared classes and
/// pushed through the domain shift. Defaults are the desk-scale task used
/// by the experiment suite.
struct PDATaskSpec {
  int num_source_classes = 10;
  std::vector<int> target_classes{0, 1, 2, 3};
  int source_examples_per_class = 100;
  int target_examples_per_class = 50;
  double class_mean_radius = 4.0;
  double class_std = 0.8;
  DomainShift shift{0.5235987755982988 /* 30 deg */, 1.1,
                    (ColVector(2) << 1.0, 0.5).finished()};
  int input_dim = 2;
  std::uint64_t seed = 0;

  void validate() const;  // throws ValidationError listing all violations
};

/// A source dataset over the full label space and a target dataset over a
/// subset of it. Target labels are hidden: evaluation reads them, training
/// never does.
struct PDATask {
  PDATaskSpec spec;
  Matrix source_x;  // n_s x d
  std::vector<int> source_labels;
  Matrix target_x;  // n_t x d
  std::vector<int> target_hidden_labels;
  Matrix target_pre_shift;  // samples before the domain shift

  Index source_size() const { return source_x.rows(); }
  Index target_size() const { return target_x.rows(); }
  int num_classes() const { return spec.num_source_classes; }
  int input_dim() const { return spec.input_dim; }
  bool is_shared_class(int label) const;
};

PDATask generate(const PDATaskSpec& spec);

/// CSV schema: header feature_0..feature_{d-1},label,domain with
/// domain in {source, target}. Target labels are stored hidden.
PDATask load_csv(const std::string& path);
void save_csv(const PDATask& task, const std::string& path);

/// One mini-batch: B source examples with labels and B target examples.
struct Minibatch {
  Matrix source_x;
  std::vector<int> source_labels;
  Matrix target_x;
};

/// Deterministic stream of mini-batches drawn from shuffled cyclic passes
/// over each domain. Single consumer.
class MinibatchStream {
 public:
  MinibatchStream(const PDATask& task, int batch_size, std::uint64_t seed);
  Minibatch next();

 private:
  class CyclicSampler {
   public:
    CyclicSampler(Index n, std::uint64_t seed);
    Index next();

   private:
    std::vector<Index> order_;
    size_t pos_ = 0;
    std::mt19937_64 rng_;
  };

  const PDATask& task_;
  int batch_size_;
  CyclicSampler source_sampler_;
  CyclicSampler target_sampler_;
};

}  // namespace etn

#endif  // ETN_DATAGEN_HPP
