#include "etn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "etn/errors.hpp"
#include "etn/rng.hpp"

namespace etn {

namespace {

Matrix rotate_planar(const Matrix& x, double angle) {
  Matrix out = x;
  if (x.cols() >= 2) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    out.col(0) = c * x.col(0) - s * x.col(1);
    out.col(1) = s * x.col(0) + c * x.col(1);
  }
  return out;
}

}  // namespace

Matrix apply_shift(const DomainShift& shift, const Matrix& x) {
  if (shift.translation.size() != x.cols()) {
    throw ShapeError("apply_shift: translation has " +
                     std::to_string(shift.translation.size()) +
                     " entries, data has " + std::to_string(x.cols()) +
                     " columns");
  }
  Matrix out = rotate_planar(x, shift.rotation_radians) * shift.scale;
  out.rowwise() += shift.translation.transpose();
  return out;
}

Matrix invert_shift(const DomainShift& shift, const Matrix& x) {
  if (shift.translation.size() != x.cols()) {
    throw ShapeError("invert_shift: translation size mismatch");
  }
  if (shift.scale == 0.0) {
    throw NumericError("invert_shift: zero scale is not invertible");
  }
  Matrix out = x;
  out.rowwise() -= shift.translation.transpose();
  out /= shift.scale;
  return rotate_planar(out, -shift.rotation_radians);
}

void PDATaskSpec::validate() const {
  std::ostringstream problems;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) problems << "  - " << msg << "\n";
  };
  check(num_source_classes >= 1, "num_source_classes must be >= 1");
  check(!target_classes.empty(), "target_classes must be nonempty");
  std::set<int> seen;
  for (int c : target_classes) {
    check(c >= 0 && c < num_source_classes,
          "target class " + std::to_string(c) + " outside source label space");
    check(seen.insert(c).second,
          "target class " + std::to_string(c) + " listed twice");
  }
  check(source_examples_per_class >= 1, "source_examples_per_class must be >= 1");
  check(target_examples_per_class >= 1, "target_examples_per_class must be >= 1");
  check(class_std > 0.0, "class_std must be positive");
  check(class_mean_radius >= 0.0, "class_mean_radius must be non-negative");
  check(input_dim >= 2, "input_dim must be >= 2");
  check(shift.translation.size() == input_dim,
        "shift translation must have input_dim entries");
  check(shift.scale != 0.0, "shift scale must be nonzero");
  const std::string text = problems.str();
  if (!text.empty()) {
    throw ValidationError("invalid task spec:\n" + text);
  }
}

bool PDATask::is_shared_class(int label) const {
  return std::find(spec.target_classes.begin(), spec.target_classes.end(),
                   label) != spec.target_classes.end();
}

PDATask generate(const PDATaskSpec& spec) {
  spec.validate();
  PDATask task;
  task.spec = spec;

  const int C = spec.num_source_classes;
  const int d = spec.input_dim;
  Matrix means = Matrix::Zero(C, d);
  for (int c = 0; c < C; ++c) {
    const double angle = 2.0 * M_PI * c / C;
    means(c, 0) = spec.class_mean_radius * std::cos(angle);
    means(c, 1) = spec.class_mean_radius * std::sin(angle);
  }

  std::mt19937_64 rng = make_rng(spec.seed, "data");
  std::normal_distribution<double> noise(0.0, spec.class_std);
  auto sample_class = [&](int c) {
    RowVector x = means.row(c);
    for (int j = 0; j < d; ++j) x(j) += noise(rng);
    return x;
  };

  const Index n_s = static_cast<Index>(C) * spec.source_examples_per_class;
  task.source_x.resize(n_s, d);
  task.source_labels.reserve(static_cast<size_t>(n_s));
  Index row = 0;
  for (int c = 0; c < C; ++c) {
    for (int k = 0; k < spec.source_examples_per_class; ++k) {
      task.source_x.row(row++) = sample_class(c);
      task.source_labels.push_back(c);
    }
  }

  const Index n_t = static_cast<Index>(spec.target_classes.size()) *
                    spec.target_examples_per_class;
  task.target_pre_shift.resize(n_t, d);
  task.target_hidden_labels.reserve(static_cast<size_t>(n_t));
  row = 0;
  for (int c : spec.target_classes) {
    for (int k = 0; k < spec.target_examples_per_class; ++k) {
      task.target_pre_shift.row(row++) = sample_class(c);
      task.target_hidden_labels.push_back(c);
    }
  }
  task.target_x = apply_shift(spec.shift, task.target_pre_shift);
  return task;
}

// ---- CSV -------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_csv(const PDATask& task, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("save_csv: cannot open '" + path + "' for writing");
  }
  const int d = static_cast<int>(task.source_x.cols());
  for (int j = 0; j < d; ++j) out << "feature_" << j << ",";
  out << "label,domain\n";
  for (Index i = 0; i < task.source_x.rows(); ++i) {
    for (int j = 0; j < d; ++j) out << format_double(task.source_x(i, j)) << ",";
    out << task.source_labels[static_cast<size_t>(i)] << ",source\n";
  }
  for (Index i = 0; i < task.target_x.rows(); ++i) {
    for (int j = 0; j < d; ++j) out << format_double(task.target_x(i, j)) << ",";
    out << task.target_hidden_labels[static_cast<size_t>(i)] << ",target\n";
  }
  if (!out.good()) {
    throw ParseError("save_csv: write failure on '" + path + "'");
  }
}

PDATask load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("load_csv: cannot open '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("load_csv: '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3) {
    throw ParseError("load_csv: line 1: expected feature_*,label,domain header");
  }
  const int d = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < d; ++j) {
    if (header[static_cast<size_t>(j)] != "feature_" + std::to_string(j)) {
      throw ParseError("load_csv: line 1: column " + std::to_string(j + 1) +
                       " must be feature_" + std::to_string(j));
    }
  }
  if (header[static_cast<size_t>(d)] != "label" ||
      header[static_cast<size_t>(d) + 1] != "domain") {
    throw ParseError("load_csv: line 1: trailing columns must be label,domain");
  }

  std::vector<RowVector> src_rows, tgt_rows;
  std::vector<int> src_labels, tgt_labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("load_csv: line " + std::to_string(line_no) + ": got " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    }
    RowVector x(d);
    for (int j = 0; j < d; ++j) {
      const std::string& cell = cells[static_cast<size_t>(j)];
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty()) {
        throw ParseError("load_csv: line " + std::to_string(line_no) +
                         ": non-numeric feature '" + cell + "'");
      }
      x(j) = v;
    }
    const std::string& label_cell = cells[static_cast<size_t>(d)];
    int label = 0;
    try {
      size_t used = 0;
      label = std::stoi(label_cell, &used);
      if (used != label_cell.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("load_csv: line " + std::to_string(line_no) +
                       ": bad label '" + label_cell + "'");
    }
    if (label < 0) {
      throw ParseError("load_csv: line " + std::to_string(line_no) +
                       ": negative label");
    }
    const std::string& domain = cells[static_cast<size_t>(d) + 1];
    if (domain == "source") {
      src_rows.push_back(x);
      src_labels.push_back(label);
    } else if (domain == "target") {
      tgt_rows.push_back(x);
      tgt_labels.push_back(label);
    } else {
      throw ParseError("load_csv: line " + std::to_string(line_no) +
                       ": domain must be 'source' or 'target', got '" + domain +
                       "'");
    }
  }

  const std::set<int> source_set(src_labels.begin(), src_labels.end());
  for (int y : tgt_labels) {
    if (source_set.find(y) == source_set.end()) {
      throw ValidationError("load_csv: target label " + std::to_string(y) +
                            " does not occur in the source label set");
    }
  }

  PDATask task;
  task.source_x.resize(static_cast<Index>(src_rows.size()), d);
  for (size_t i = 0; i < src_rows.size(); ++i) {
    task.source_x.row(static_cast<Index>(i)) = src_rows[i];
  }
  task.source_labels = std::move(src_labels);
  task.target_x.resize(static_cast<Index>(tgt_rows.size()), d);
  for (size_t i = 0; i < tgt_rows.size(); ++i) {
    task.target_x.row(static_cast<Index>(i)) = tgt_rows[i];
  }
  task.target_hidden_labels = std::move(tgt_labels);
  task.target_pre_shift = task.target_x;  // identity shift for loaded tasks

  // Best-effort spec echo for ingested data; generative fields stay unset.
  PDATaskSpec spec;
  spec.input_dim = d;
  spec.num_source_classes =
      source_set.empty() ? 0 : *source_set.rbegin() + 1;
  const std::set<int> target_set(task.target_hidden_labels.begin(),
                                 task.target_hidden_labels.end());
  spec.target_classes.assign(target_set.begin(), target_set.end());
  spec.source_examples_per_class = 0;
  spec.target_examples_per_class = 0;
  spec.shift = DomainShift{0.0, 1.0, ColVector::Zero(d)};
  spec.seed = 0;
  task.spec = spec;
  return task;
}

// ---- mini-batches ----------------------------------------------------------

MinibatchStream::CyclicSampler::CyclicSampler(Index n, std::uint64_t seed)
    : rng_(seed) {
  order_.resize(static_cast<size_t>(n));
  std::iota(order_.begin(), order_.end(), Index{0});
  std::shuffle(order_.begin(), order_.end(), rng_);
}

Index MinibatchStream::CyclicSampler::next() {
  if (pos_ == order_.size()) {
    std::shuffle(order_.begin(), order_.end(), rng_);
    pos_ = 0;
  }
  return order_[pos_++];
}

MinibatchStream::MinibatchStream(const PDATask& task, int batch_size,
                                 std::uint64_t seed)
    : task_(task),
      batch_size_(batch_size),
      source_sampler_(task.source_size(), derive_seed(seed, "source")),
      target_sampler_(task.target_size(), derive_seed(seed, "target")) {
  if (batch_size < 1) {
    throw ValidationError("minibatches: batch size must be >= 1");
  }
  if (task.source_size() == 0 || task.target_size() == 0) {
    throw ValidationError("minibatches: task has an empty domain");
  }
}

Minibatch MinibatchStream::next() {
  Minibatch b;
  const int d = task_.input_dim();
  b.source_x.resize(batch_size_, d);
  b.target_x.resize(batch_size_, d);
  b.source_labels.reserve(static_cast<size_t>(batch_size_));
  for (int i = 0; i < batch_size_; ++i) {
    const Index s = source_sampler_.next();
    b.source_x.row(i) = task_.source_x.row(s);
    b.source_labels.push_back(task_.source_labels[static_cast<size_t>(s)]);
    b.target_x.row(i) = task_.target_x.row(target_sampler_.next());
  }
  return b;
}

}  // namespace etn
