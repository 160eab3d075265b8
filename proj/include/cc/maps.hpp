#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cc/differential.hpp"
#include "cc/frame.hpp"

namespace cc {

/// One injective piece of a catalog map: a domain box, the point map, its
/// constant hc-differential, and an analytic d_2-Lipschitz upper bound.
struct MapPiece {
  CoordBox box;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  HorizontalHomomorphism diff;
  double lip_upper = 1.0;
};

/// Piecewise catalog map between two group models.  Single-piece maps carry an
/// unbounded domain box; two_piece carries one box per piece.
class CatalogMap {
public:
  CatalogMap(CarnotAlgebra pre, CarnotAlgebra im, std::vector<MapPiece> pieces, std::string name)
      : pre_(std::move(pre)), im_(std::move(im)), pieces_(std::move(pieces)), name_(std::move(name)) {
    if (pieces_.empty()) throw ConfigError("CatalogMap: at least one piece required");
  }

  const CarnotAlgebra& pre() const { return pre_; }
  const CarnotAlgebra& im() const { return im_; }
  const std::string& name() const { return name_; }
  const std::vector<MapPiece>& pieces() const { return pieces_; }

  int piece_for(const Eigen::VectorXd& p) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      if (pieces_[i].box.contains(p)) return static_cast<int>(i);
    return -1;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& p) const {
    const int i = piece_for(p);
    if (i < 0) throw Error("CatalogMap: point outside every piece of " + name_);
    return pieces_[i].apply(p);
  }

  /// Differential at p (constant on each piece).
  const HorizontalHomomorphism& diff_at(const Eigen::VectorXd& p) const {
    const int i = piece_for(p);
    if (i < 0) throw Error("CatalogMap: point outside every piece of " + name_);
    return pieces_[i].diff;
  }

  double lip_upper() const {
    double c = 0.0;
    for (const auto& pc : pieces_) c = std::max(c, pc.lip_upper);
    return c;
  }

private:
  CarnotAlgebra pre_, im_;
  std::vector<MapPiece> pieces_;
  std::string name_;
};

namespace maps {

inline CoordBox unbounded_box(int dim) {
  return CoordBox{Eigen::VectorXd::Constant(dim, -1e30), Eigen::VectorXd::Constant(dim, 1e30)};
}

/// d_2-Lipschitz upper bound of a layered block matrix: max_j ||B_j||^{1/j}.
inline double homomorphism_lip_upper(const HorizontalHomomorphism& L) {
  double c = 0.0;
  for (int j = 1; j <= L.pre().depth(); ++j)
    c = std::max(c, std::pow(L.block(j).operatorNorm(), 1.0 / j));
  return std::max(c, 1e-12);
}

inline CatalogMap homomorphism(const CarnotAlgebra& pre, const CarnotAlgebra& im,
                               const Eigen::MatrixXd& b1) {
  HorizontalHomomorphism L = extend_from_horizontal(pre, im, b1);
  Eigen::MatrixXd F = L.full_matrix();
  MapPiece piece{unbounded_box(pre.dim()),
                 [F](const Eigen::VectorXd& p) -> Eigen::VectorXd { return F * p; }, L,
                 homomorphism_lip_upper(L)};
  return CatalogMap(pre, im, {std::move(piece)}, "homomorphism");
}

inline CatalogMap identity(const CarnotAlgebra& alg) {
  HorizontalHomomorphism L = identity_homomorphism(alg);
  MapPiece piece{unbounded_box(alg.dim()),
                 [](const Eigen::VectorXd& p) -> Eigen::VectorXd { return p; }, L, 1.0};
  return CatalogMap(alg, alg, {std::move(piece)}, "identity");
}

inline CatalogMap left_translate(const CarnotAlgebra& alg, const GroupPoint& g) {
  auto algp = std::make_shared<CarnotAlgebra>(alg);
  GroupPoint gc = g;
  MapPiece piece{unbounded_box(alg.dim()),
                 [algp, gc](const Eigen::VectorXd& p) -> Eigen::VectorXd {
                   return multiply(*algp, gc, p);
                 },
                 identity_homomorphism(alg), 1.0};
  return CatalogMap(alg, alg, {std::move(piece)}, "left_translate");
}

inline CatalogMap dilation(const CarnotAlgebra& alg, double r) {
  if (r <= 0.0) throw ConfigError("dilation map: factor must be positive");
  const Grading& g = alg.grading();
  Eigen::VectorXd scale(g.dim());
  for (int i = 0; i < g.dim(); ++i) scale[i] = std::pow(r, g.degree(i));
  MapPiece piece{unbounded_box(alg.dim()),
                 [scale](const Eigen::VectorXd& p) -> Eigen::VectorXd {
                   return p.cwiseProduct(scale);
                 },
                 dilation_homomorphism(alg, r), r};
  return CatalogMap(alg, alg, {std::move(piece)}, "dilate");
}

/// Composition maps.front() o ... o maps.back() (last applied first).
inline CatalogMap composition(const std::vector<CatalogMap>& chain) {
  if (chain.empty()) throw ConfigError("composition: empty chain");
  for (const auto& m : chain)
    if (m.pieces().size() != 1)
      throw ConfigError("composition: only single-piece maps can be composed");
  const CatalogMap& inner = chain.back();
  const CatalogMap& outer = chain.front();
  std::vector<CatalogMap> copy = chain;
  auto apply = [copy](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    Eigen::VectorXd q = p;
    for (auto it = copy.rbegin(); it != copy.rend(); ++it) q = it->apply(q);
    return q;
  };
  HorizontalHomomorphism L = chain.back().pieces()[0].diff;
  double lip = chain.back().pieces()[0].lip_upper;
  for (auto it = std::next(chain.rbegin()); it != chain.rend(); ++it) {
    L = compose(it->pieces()[0].diff, L);
    lip *= it->pieces()[0].lip_upper;
  }
  MapPiece piece{unbounded_box(inner.pre().dim()), apply, L, lip};
  return CatalogMap(inner.pre(), outer.im(), {std::move(piece)}, "compose");
}

/// Two injective pieces on disjoint boxes; used to exercise the Banach
/// indicatrix (multiplicity > 1) in the area formula.
inline CatalogMap two_piece(const CatalogMap& map_a, const CoordBox& box_a,
                            const CatalogMap& map_b, const CoordBox& box_b) {
  if (map_a.pieces().size() != 1 || map_b.pieces().size() != 1)
    throw ConfigError("two_piece: pieces must be single maps");
  MapPiece pa = map_a.pieces()[0];
  pa.box = box_a;
  MapPiece pb = map_b.pieces()[0];
  pb.box = box_b;
  return CatalogMap(map_a.pre(), map_a.im(), {std::move(pa), std::move(pb)}, "two_piece");
}

}  // namespace maps

}  // namespace cc
