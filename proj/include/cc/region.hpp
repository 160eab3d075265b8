#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cc/frame.hpp"
#include "cc/rng.hpp"

namespace cc {

/// Uniform Lebesgue sample of Box_2(0,r), the product of per-layer Euclidean
/// balls of radii r^j: Gaussian directions with radial inversion per layer.
inline Eigen::VectorXd sample_box2(const Grading& g, double r, CounterRng& rng) {
  Eigen::VectorXd v(g.dim());
  for (int j = 1; j <= g.depth(); ++j) {
    const int nj = g.layer_dim(j);
    Eigen::VectorXd dir(nj);
    for (int i = 0; i < nj; ++i) {
      double u1 = rng.next_double(), u2 = rng.next_double();
      while (u1 <= 0.0) u1 = rng.next_double();
      dir[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    const double nrm = dir.norm();
    const double rad =
        std::pow(r, j) * std::pow(rng.next_double(), 1.0 / nj) / (nrm > 0 ? nrm : 1.0);
    v.segment(g.layer_start(j), nj) = rad * dir;
  }
  return v;
}

/// Integration domain: either a single d_2-box or a finite union of disjoint
/// coordinate boxes ("pieces").  Provides membership, exact Lebesgue volume,
/// and uniform Lebesgue sampling.
class Region {
public:
  /// d_2-box of the given group: Box_2(center, radius).
  static Region d2_box(const CarnotAlgebra& alg, GroupPoint center, double radius) {
    if (radius <= 0.0) throw ConfigError("Region: radius must be positive");
    Region r;
    r.alg_ = std::make_shared<CarnotAlgebra>(alg);
    r.center_ = std::move(center);
    r.radius_ = radius;
    return r;
  }

  static Region coord_boxes(std::vector<CoordBox> pieces) {
    if (pieces.empty()) throw ConfigError("Region: at least one piece required");
    Region r;
    r.pieces_ = std::move(pieces);
    return r;
  }

  bool is_d2_box() const { return alg_ != nullptr; }
  int piece_count() const { return is_d2_box() ? 1 : static_cast<int>(pieces_.size()); }
  const std::vector<CoordBox>& pieces() const { return pieces_; }
  const GroupPoint& center() const { return center_; }
  double radius() const { return radius_; }

  bool contains(const Eigen::VectorXd& p) const {
    if (is_d2_box()) {
      if (center_.isZero(0.0)) return layered_norm(alg_->grading(), p) <= radius_;
      return d2(*alg_, p, center_) <= radius_;
    }
    for (const auto& b : pieces_)
      if (b.contains(p)) return true;
    return false;
  }

  /// Index of the piece containing p, or -1.
  int piece_of(const Eigen::VectorXd& p) const {
    if (is_d2_box()) return contains(p) ? 0 : -1;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      if (pieces_[i].contains(p)) return static_cast<int>(i);
    return -1;
  }

  double lebesgue() const {
    if (is_d2_box()) return box_volume(alg_->grading(), radius_);
    double v = 0.0;
    for (const auto& b : pieces_) v += b.volume();
    return v;
  }

  CoordBox bounding_box() const {
    if (is_d2_box()) {
      const Grading& g = alg_->grading();
      // The d_2-box at `center` is the left translate of the product of balls;
      // bound it crudely by propagating the anisotropic radii through BCH.
      Eigen::VectorXd half(g.dim());
      for (int i = 0; i < g.dim(); ++i) half[i] = std::pow(radius_, g.degree(i));
      // Pad for the polynomial shear of the translation.
      Eigen::VectorXd pad = 4.0 * (half + Eigen::VectorXd::Constant(g.dim(), 1.0));
      return CoordBox{center_ - half - pad, center_ + half + pad};
    }
    CoordBox out = pieces_.front();
    for (const auto& b : pieces_) {
      out.lo = out.lo.cwiseMin(b.lo);
      out.hi = out.hi.cwiseMax(b.hi);
    }
    return out;
  }

  /// Uniform Lebesgue sample.  For the d_2-box: per-layer direction/radius
  /// sampling of the product of balls at the origin, then left translation.
  Eigen::VectorXd sample(CounterRng& rng) const {
    if (is_d2_box()) {
      // Left translation is unimodular in these coordinates, so translating a
      // uniform sample of the centered box stays uniform.
      const Eigen::VectorXd v = sample_box2(alg_->grading(), radius_, rng);
      return multiply(*alg_, center_, v);
    }
    // Pick a piece proportionally to volume, then sample inside it.
    double total = lebesgue();
    double x = rng.next_double() * total;
    std::size_t pick = pieces_.size() - 1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      x -= pieces_[i].volume();
      if (x <= 0.0) {
        pick = i;
        break;
      }
    }
    const CoordBox& b = pieces_[pick];
    Eigen::VectorXd p(b.dim());
    for (int i = 0; i < b.dim(); ++i) p[i] = rng.uniform(b.lo[i], b.hi[i]);
    return p;
  }

private:
  Region() = default;

  std::shared_ptr<CarnotAlgebra> alg_;  // set iff d2-box
  GroupPoint center_;
  double radius_ = 0.0;
  std::vector<CoordBox> pieces_;
};

}  // namespace cc
