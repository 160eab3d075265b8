#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cc/errors.hpp"

namespace cc {

/// Layer structure of a graded nilpotent Lie algebra: dimensions n_1..n_M of
/// the quotients H_j/H_{j-1}.  Basis indices are 0-based and ordered by layer.
class Grading {
public:
  explicit Grading(std::vector<int> layer_dims) : dims_(std::move(layer_dims)) {
    if (dims_.empty()) throw ConfigError("Grading: at least one layer required");
    starts_.resize(dims_.size() + 1, 0);
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      if (dims_[j] <= 0) throw ConfigError("Grading: layer dims must be positive");
      starts_[j + 1] = starts_[j] + dims_[j];
    }
    deg_.reserve(dim());
    for (std::size_t j = 0; j < dims_.size(); ++j)
      deg_.insert(deg_.end(), dims_[j], static_cast<int>(j) + 1);
  }

  int depth() const { return static_cast<int>(dims_.size()); }  // M
  int dim() const { return starts_.back(); }                    // N

  int layer_dim(int j) const { return dims_.at(j - 1); }        // n_j, j in 1..M
  int layer_start(int j) const { return starts_.at(j - 1); }    // 0-based offset
  int degree(int k) const { return deg_.at(k); }                // k in 0..N-1

  const std::vector<int>& layer_dims() const { return dims_; }

  /// Hausdorff dimension of the group with respect to d_2: sum_j j*n_j.
  int homogeneous_dimension() const {
    int nu = 0;
    for (int j = 1; j <= depth(); ++j) nu += j * layer_dim(j);
    return nu;
  }

  bool operator==(const Grading& o) const { return dims_ == o.dims_; }

private:
  std::vector<int> dims_;
  std::vector<int> starts_;
  std::vector<int> deg_;
};

/// Volume of the Euclidean unit ball in dimension n.
inline double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Lebesgue volume of Box_2(0,r) = B^{n_1}(0,r) x B^{n_2}(0,r^2) x ... x B^{n_M}(0,r^M).
/// Scales as r^nu.
inline double box_volume(const Grading& g, double r) {
  if (r <= 0.0) throw ConfigError("box_volume: radius must be positive");
  double v = 1.0;
  for (int j = 1; j <= g.depth(); ++j)
    v *= unit_ball_volume(g.layer_dim(j)) * std::pow(r, double(j) * g.layer_dim(j));
  return v;
}

}  // namespace cc
