#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "cc/group.hpp"

namespace cc {

/// Axis-aligned coordinate box.
struct CoordBox {
  Eigen::VectorXd lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Eigen::VectorXd& p, double margin = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] + margin || p[i] > hi[i] - margin) return false;
    return true;
  }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
  }
};

/// A Carnot manifold presented by a C^1 frame on a coordinate domain.
/// `fields(p)` returns the N x N matrix whose columns are X_1(p)..X_N(p);
/// `bracket_constants(i,j,k,p)` returns c_ijk(p) in closed form.
class FramedManifold {
public:
  using FieldEval = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using StructEval = std::function<double(int, int, int, const Eigen::VectorXd&)>;

  FramedManifold(Grading grading, FieldEval fields, StructEval brackets, CoordBox domain,
                 std::string name)
      : grading_(std::move(grading)),
        fields_(std::move(fields)),
        brackets_(std::move(brackets)),
        domain_(std::move(domain)),
        name_(std::move(name)) {
    if (domain_.dim() != grading_.dim())
      throw ConfigError("FramedManifold: domain dimension does not match grading");
  }

  const Grading& grading() const { return grading_; }
  int dim() const { return grading_.dim(); }
  const CoordBox& domain() const { return domain_; }
  const std::string& name() const { return name_; }

  Eigen::MatrixXd fields(const Eigen::VectorXd& p) const { return fields_(p); }
  double structure_constant(int i, int j, int k, const Eigen::VectorXd& p) const {
    return brackets_(i, j, k, p);
  }

private:
  Grading grading_;
  FieldEval fields_;
  StructEval brackets_;
  CoordBox domain_;
  std::string name_;
};

inline constexpr int kFlowSteps = 256;
inline constexpr double kNewtonTol = 1e-10;
inline constexpr int kNewtonMaxIter = 50;
inline constexpr int kNewtonRestarts = 3;

/// theta_u(v) = exp(sum v_i X_i)(u), fixed-step RK4 over unit time.
/// Throws DomainEscapeError if the trajectory leaves the domain box.
inline Eigen::VectorXd flow(const FramedManifold& frame, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v, int steps = kFlowSteps) {
  if (u.size() != frame.dim() || v.size() != frame.dim())
    throw ConfigError("flow: dimension mismatch");
  const double h = 1.0 / steps;
  Eigen::VectorXd p = u;
  auto rhs = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd { return frame.fields(q) * v; };
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = rhs(p);
    const Eigen::VectorXd k2 = rhs(p + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(p + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!frame.domain().contains(p))
      throw DomainEscapeError("flow: trajectory left the domain of " + frame.name(),
                              double(s + 1) * h);
  }
  return p;
}

/// Normal coordinates of the first kind: v with flow(u, v) = w, by Newton
/// iteration with finite-difference Jacobian and step-halving line search.
inline Eigen::VectorXd normal_coords(const FramedManifold& frame, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& w) {
  const int n = frame.dim();
  auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return flow(frame, u, v) - w;
  };

  double last_res = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= kNewtonRestarts; ++attempt) {
    Eigen::VectorXd v = w - u;
    if (attempt > 0) v += Eigen::VectorXd::Constant(n, 1e-3 * attempt);
    Eigen::VectorXd r = residual(v);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      if (r.lpNorm<Eigen::Infinity>() <= kNewtonTol) return v;
      Eigen::MatrixXd J(n, n);
      const double h = 1e-6;
      for (int c = 0; c < n; ++c) {
        Eigen::VectorXd vp = v, vm = v;
        vp[c] += h;
        vm[c] -= h;
        J.col(c) = (residual(vp) - residual(vm)) / (2.0 * h);
      }
      const Eigen::VectorXd dv = J.fullPivLu().solve(-r);
      double step = 1.0;
      bool improved = false;
      const double r0 = r.norm();
      for (int ls = 0; ls < 24; ++ls) {
        Eigen::VectorXd cand = v + step * dv;
        Eigen::VectorXd rc = residual(cand);
        if (rc.norm() < r0) {
          v = cand;
          r = rc;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;  // stalled; restart from a perturbed guess
    }
    if (r.lpNorm<Eigen::Infinity>() <= kNewtonTol) return v;
    last_res = r.lpNorm<Eigen::Infinity>();
  }
  throw InversionError("normal_coords: Newton failed on " + frame.name(), last_res);
}

/// Manifold quasimetric: layered norm of the normal coordinates of w at u.
inline double d2_frame(const FramedManifold& frame, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& w) {
  return layered_norm(frame.grading(), normal_coords(frame, u, w));
}

/// Freeze the structure constants at u and truncate to the graded part.
/// Throws EquiregularityError if horizontal generation fails at u.
inline CarnotAlgebra nilpotentize(const FramedManifold& frame, const Eigen::VectorXd& u) {
  const Grading& g = frame.grading();
  const int n = g.dim();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (g.degree(i) + g.degree(j) == g.degree(k))
          c[(static_cast<std::size_t>(i) * n + j) * n + k] = frame.structure_constant(i, j, k, u);
  CarnotAlgebra alg(g, std::move(c));
  ValidationReport rep = validate_algebra(alg);
  if (const auto* hg = rep.find("horizontal-generation"); hg && !hg->pass)
    throw EquiregularityError("nilpotentize: horizontal generation fails at the given point");
  if (!rep.accepted)
    throw ConfigError("nilpotentize: frozen constants do not define a graded algebra");
  return alg;
}

/// Nilpotent tangent cone at u: the frozen algebra plus the base point.
struct TangentCone {
  Eigen::VectorXd base;
  CarnotAlgebra algebra;
};

inline TangentCone tangent_cone(const FramedManifold& frame, const Eigen::VectorXd& u) {
  return TangentCone{u, nilpotentize(frame, u)};
}

/// d_2^u(w, v): box quasimetric of the cone at u, composed with the normal
/// coordinates of w and v at the base point.
inline double d2_cone(const FramedManifold& frame, const TangentCone& cone,
                      const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  const Eigen::VectorXd a = normal_coords(frame, cone.base, w);
  const Eigen::VectorXd b = normal_coords(frame, cone.base, v);
  return d2(cone.algebra, b, a);
}

namespace frames {

/// Left-invariant group frame of a Carnot algebra, with the identity chart of
/// the first kind.  Columns of the field matrix are d/dt BCH(p, t e_i)|_{t=0}.
inline FramedManifold group_frame(const CarnotAlgebra& alg, double half_width = 2.0) {
  const int n = alg.dim();
  auto algp = std::make_shared<CarnotAlgebra>(alg);
  auto fields = [algp, n](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
    Eigen::MatrixXd F(n, n);
    for (int i = 0; i < n; ++i) F.col(i) = bch_dleft(*algp, p, Eigen::VectorXd::Unit(n, i));
    return F;
  };
  auto brackets = [algp](int i, int j, int k, const Eigen::VectorXd&) -> double {
    return algp->c(i, j, k);
  };
  CoordBox dom{Eigen::VectorXd::Constant(n, -half_width), Eigen::VectorXd::Constant(n, half_width)};
  return FramedManifold(alg.grading(), fields, brackets, dom, "group_frame");
}

/// Variable Heisenberg frame on |x| < 1/2:
///   X1 = d/dx, X2 = d/dy + beta(x) d/dt, X3 = d/dt, beta(x) = x + x^2/2.
/// [X1, X2] = beta'(x) X3 with beta'(x) = 1 + x >= 1/2 on the domain.
inline FramedManifold variable_heisenberg() {
  auto fields = [](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
    const double beta = p[0] + 0.5 * p[0] * p[0];
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(3, 3);
    F(0, 0) = 1.0;
    F(1, 1) = 1.0;
    F(2, 1) = beta;
    F(2, 2) = 1.0;
    return F;
  };
  auto brackets = [](int i, int j, int k, const Eigen::VectorXd& p) -> double {
    const double dbeta = 1.0 + p[0];
    if (i == 0 && j == 1 && k == 2) return dbeta;
    if (i == 1 && j == 0 && k == 2) return -dbeta;
    return 0.0;
  };
  Eigen::VectorXd lo(3), hi(3);
  lo << -0.5, -2.0, -2.0;
  hi << 0.5, 2.0, 2.0;
  return FramedManifold(Grading({2, 1}), fields, brackets, CoordBox{lo, hi},
                        "variable_heisenberg");
}

}  // namespace frames

}  // namespace cc
