#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <utility>
#include <vector>

#include "cc/group.hpp"

namespace cc {

inline constexpr double kHomResidualTol = 1e-10;

/// Layered block matrix L between two Carnot algebras, mapping layer j of the
/// preimage into layer j of the image.  Determined by its horizontal block
/// when the preimage is horizontally generated.
class HorizontalHomomorphism {
public:
  HorizontalHomomorphism(CarnotAlgebra pre, CarnotAlgebra im, std::vector<Eigen::MatrixXd> blocks)
      : pre_(std::move(pre)), im_(std::move(im)), blocks_(std::move(blocks)) {
    const Grading& gp = pre_.grading();
    const Grading& gi = im_.grading();
    if (gp.depth() > gi.depth())
      throw ConfigError("HorizontalHomomorphism: preimage depth exceeds image depth");
    if (gp.layer_dim(1) > gi.layer_dim(1))
      throw ConfigError("HorizontalHomomorphism: dim H_1 > dim H~_1");
    if (static_cast<int>(blocks_.size()) != gp.depth())
      throw ConfigError("HorizontalHomomorphism: one block per preimage layer required");
    for (int j = 1; j <= gp.depth(); ++j) {
      if (blocks_[j - 1].rows() != gi.layer_dim(j) || blocks_[j - 1].cols() != gp.layer_dim(j))
        throw ConfigError("HorizontalHomomorphism: block shape mismatch");
    }
    full_ = Eigen::MatrixXd::Zero(gi.dim(), gp.dim());
    for (int j = 1; j <= gp.depth(); ++j)
      full_.block(gi.layer_start(j), gp.layer_start(j), gi.layer_dim(j), gp.layer_dim(j)) =
          blocks_[j - 1];
  }

  const CarnotAlgebra& pre() const { return pre_; }
  const CarnotAlgebra& im() const { return im_; }
  const Eigen::MatrixXd& block(int j) const { return blocks_.at(j - 1); }
  const Eigen::MatrixXd& full_matrix() const { return full_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return full_ * x; }

  /// max over basis pairs of || L[X_i,X_j] - [L X_i, L X_j] ||_inf.
  double homomorphism_residual() const {
    const int n = pre_.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Eigen::VectorXd br = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) br[k] = pre_.c(i, j, k);
        const Eigen::VectorXd lhs = full_ * br;
        const Eigen::VectorXd rhs = im_.bracket(full_.col(i), full_.col(j));
        worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
      }
    return worst;
  }

private:
  CarnotAlgebra pre_, im_;
  std::vector<Eigen::MatrixXd> blocks_;
  Eigen::MatrixXd full_;
};

/// Propagate a horizontal block to all layers via brackets: each layer-(j+1)
/// basis element is written as a combination of brackets H_1 x H_j and its
/// image is the corresponding bracket of images.  The result is validated
/// against the homomorphism property over all basis pairs.
inline HorizontalHomomorphism extend_from_horizontal(const CarnotAlgebra& pre,
                                                     const CarnotAlgebra& im,
                                                     const Eigen::MatrixXd& b1) {
  const Grading& gp = pre.grading();
  const Grading& gi = im.grading();
  if (b1.rows() != gi.layer_dim(1) || b1.cols() != gp.layer_dim(1))
    throw ConfigError("extend_from_horizontal: horizontal block shape mismatch");

  std::vector<Eigen::MatrixXd> blocks;
  blocks.push_back(b1);

  // Full-matrix columns assembled layer by layer.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(gi.dim(), gp.dim());
  full.block(gi.layer_start(1), gp.layer_start(1), gi.layer_dim(1), gp.layer_dim(1)) = b1;

  for (int j = 1; j < gp.depth(); ++j) {
    const int n1 = gp.layer_dim(1), nj = gp.layer_dim(j), njp = gp.layer_dim(j + 1);
    // Coefficient matrix of the bracket H_1 x H_j -> H_{j+1} in the preimage.
    Eigen::MatrixXd A(njp, n1 * nj);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < nj; ++b)
        for (int k = 0; k < njp; ++k)
          A(k, a * nj + b) =
              pre.c(gp.layer_start(1) + a, gp.layer_start(j) + b, gp.layer_start(j + 1) + k);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);

    Eigen::MatrixXd bjp = Eigen::MatrixXd::Zero(gi.layer_dim(j + 1), njp);
    for (int k = 0; k < njp; ++k) {
      const Eigen::VectorXd w = cod.solve(Eigen::VectorXd::Unit(njp, k));
      if ((A * w - Eigen::VectorXd::Unit(njp, k)).lpNorm<Eigen::Infinity>() > kHomResidualTol)
        throw EquiregularityError(
            "extend_from_horizontal: preimage is not horizontally generated");
      Eigen::VectorXd img = Eigen::VectorXd::Zero(gi.dim());
      for (int a = 0; a < n1; ++a)
        for (int b = 0; b < nj; ++b) {
          const double wab = w[a * nj + b];
          if (wab == 0.0) continue;
          img += wab * im.bracket(full.col(gp.layer_start(1) + a), full.col(gp.layer_start(j) + b));
        }
      bjp.col(k) = img.segment(gi.layer_start(j + 1), gi.layer_dim(j + 1));
    }
    blocks.push_back(bjp);
    full.block(gi.layer_start(j + 1), gp.layer_start(j + 1), gi.layer_dim(j + 1), njp) = bjp;
  }

  HorizontalHomomorphism L(pre, im, std::move(blocks));
  const double res = L.homomorphism_residual();
  if (res > kHomResidualTol)
    throw NotExtendableError("extend_from_horizontal: inconsistent bracket propagation", res);
  return L;
}

/// Identity homomorphism of a group onto itself.
inline HorizontalHomomorphism identity_homomorphism(const CarnotAlgebra& alg) {
  const Grading& g = alg.grading();
  std::vector<Eigen::MatrixXd> blocks;
  for (int j = 1; j <= g.depth(); ++j)
    blocks.push_back(Eigen::MatrixXd::Identity(g.layer_dim(j), g.layer_dim(j)));
  return HorizontalHomomorphism(alg, alg, std::move(blocks));
}

/// Dilation delta_r as a homomorphism: block j is r^j * I.
inline HorizontalHomomorphism dilation_homomorphism(const CarnotAlgebra& alg, double r) {
  const Grading& g = alg.grading();
  std::vector<Eigen::MatrixXd> blocks;
  for (int j = 1; j <= g.depth(); ++j)
    blocks.push_back(std::pow(r, j) * Eigen::MatrixXd::Identity(g.layer_dim(j), g.layer_dim(j)));
  return HorizontalHomomorphism(alg, alg, std::move(blocks));
}

/// Composition L o K (apply K first).
inline HorizontalHomomorphism compose(const HorizontalHomomorphism& L,
                                      const HorizontalHomomorphism& K) {
  const Grading& gk = K.pre().grading();
  std::vector<Eigen::MatrixXd> blocks;
  for (int j = 1; j <= gk.depth(); ++j) blocks.push_back(L.block(j) * K.block(j));
  return HorizontalHomomorphism(K.pre(), L.im(), std::move(blocks));
}

/// Sub-Riemannian Jacobian sqrt(det(F^T F)) of the full block matrix, with the
/// frame bases taken orthonormal in both preimage and image.
inline double sr_jacobian(const HorizontalHomomorphism& L) {
  const Eigen::MatrixXd& f = L.full_matrix();
  const Eigen::MatrixXd gram = f.transpose() * f;
  const double det = gram.determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

inline int rank(const HorizontalHomomorphism& L) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L.full_matrix());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankRelTol * sv[0]) ++r;
  return r;
}

inline bool is_degenerate(const HorizontalHomomorphism& L) {
  return rank(L) < L.pre().dim();
}

/// Pansu difference-quotient estimate of the hc-differential of `map` at `u`:
/// for each t, evaluate w |-> delta_{1/t}(map(u)^{-1} map(u delta_t w)) on the
/// horizontal basis directions, project to the first layer, and extend.
struct PansuEstimate {
  HorizontalHomomorphism differential;
  std::vector<std::pair<double, double>> error_curve;  // (t, ||B1(t) - B1(t_min)||_F)
};

template <class Map>
PansuEstimate pansu_estimate(const CarnotAlgebra& pre, const CarnotAlgebra& im, Map&& map,
                             const GroupPoint& u, const std::vector<double>& t_schedule) {
  if (t_schedule.empty()) throw ConfigError("pansu_estimate: empty schedule");
  const Grading& gp = pre.grading();
  const Grading& gi = im.grading();
  const int n1 = gp.layer_dim(1);
  const GroupPoint fu_inv = inverse(im, map(u));

  auto b1_at = [&](double t) -> Eigen::MatrixXd {
    Eigen::MatrixXd b1(gi.layer_dim(1), n1);
    for (int i = 0; i < n1; ++i) {
      const GroupPoint dir = Eigen::VectorXd::Unit(gp.dim(), gp.layer_start(1) + i);
      const GroupPoint probe = multiply(pre, u, dilate(gp, t, dir));
      const GroupPoint q = dilate(gi, 1.0 / t, multiply(im, fu_inv, map(probe)));
      b1.col(i) = q.segment(gi.layer_start(1), gi.layer_dim(1));
    }
    return b1;
  };

  std::vector<Eigen::MatrixXd> b1s;
  b1s.reserve(t_schedule.size());
  for (double t : t_schedule) {
    if (t <= 0.0) throw ConfigError("pansu_estimate: schedule must be positive");
    b1s.push_back(b1_at(t));
  }
  const Eigen::MatrixXd& b1_final = b1s.back();

  PansuEstimate out{extend_from_horizontal(pre, im, b1_final), {}};
  for (std::size_t s = 0; s < t_schedule.size(); ++s)
    out.error_curve.emplace_back(t_schedule[s], (b1s[s] - b1_final).norm());
  return out;
}

}  // namespace cc
