#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "cc/grading.hpp"

namespace cc {

struct BracketTerm {
  int i, j, k;
  double value;  // coefficient of X_k in [X_i, X_j]
};

/// Graded nilpotent Lie algebra given by its structure-constant tensor
/// [X_i, X_j] = sum_k c_ijk X_k in a basis adapted to the grading.
/// Immutable after construction.
class CarnotAlgebra {
public:
  CarnotAlgebra(Grading grading, std::vector<double> tensor)
      : grading_(std::move(grading)), c_(std::move(tensor)) {
    const int n = grading_.dim();
    if (static_cast<int>(c_.size()) != n * n * n)
      throw ConfigError("CarnotAlgebra: tensor size does not match grading");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (c_[idx(i, j, k)] != 0.0)
            nonzeros_.push_back({i, j, k, c_[idx(i, j, k)]});
  }

  /// Build from a list of 0-based triples (i,j,k,value) giving the upper part;
  /// the antisymmetric counterpart (j,i,k,-value) is filled in automatically.
  static CarnotAlgebra from_triples(Grading grading,
                                    const std::vector<std::tuple<int, int, int, double>>& triples) {
    const int n = grading.dim();
    std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
    for (const auto& [i, j, k, v] : triples) {
      if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n)
        throw ConfigError("CarnotAlgebra: bracket triple index out of range");
      c[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
      c[(static_cast<std::size_t>(j) * n + i) * n + k] = -v;
    }
    return CarnotAlgebra(std::move(grading), std::move(c));
  }

  const Grading& grading() const { return grading_; }
  int dim() const { return grading_.dim(); }
  int depth() const { return grading_.depth(); }

  double c(int i, int j, int k) const { return c_[idx(i, j, k)]; }
  const std::vector<BracketTerm>& nonzeros() const { return nonzeros_; }

  /// [a, b]_k = sum_{ij} a_i b_j c_ijk.
  Eigen::VectorXd bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    for (const auto& t : nonzeros_) out[t.k] += t.value * a[t.i] * b[t.j];
    return out;
  }

  void bracket_into(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                    Eigen::VectorXd& out) const {
    out.setZero();
    for (const auto& t : nonzeros_) out[t.k] += t.value * a[t.i] * b[t.j];
  }

private:
  std::size_t idx(int i, int j, int k) const {
    const int n = grading_.dim();
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }

  Grading grading_;
  std::vector<double> c_;
  std::vector<BracketTerm> nonzeros_;
};

struct AlgebraCheck {
  std::string name;
  bool pass;
  double residual;
};

struct ValidationReport {
  std::vector<AlgebraCheck> checks;
  std::vector<int> generation_ranks;  // rank of H_1 x H_j -> H_{j+1}, j = 1..M-1
  bool accepted = false;

  const AlgebraCheck* find(const std::string& name) const {
    for (const auto& ch : checks)
      if (ch.name == name) return &ch;
    return nullptr;
  }
};

inline constexpr double kJacobiTol = 1e-12;
inline constexpr double kRankRelTol = 1e-10;

/// Runs the four structural checks: antisymmetry, grading compatibility,
/// Jacobi identity, horizontal generation.  The algebra is accepted iff all pass.
inline ValidationReport validate_algebra(const CarnotAlgebra& alg) {
  const Grading& g = alg.grading();
  const int n = g.dim();
  ValidationReport rep;

  double anti = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        anti = std::max(anti, std::abs(alg.c(i, j, k) + alg.c(j, i, k)));
  rep.checks.push_back({"antisymmetry", anti <= kJacobiTol, anti});

  double grad = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (g.degree(k) != g.degree(i) + g.degree(j))
          grad = std::max(grad, std::abs(alg.c(i, j, k)));
  rep.checks.push_back({"grading-compatibility", grad <= kJacobiTol, grad});

  // [[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j] = 0, all triples.
  double jac = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int l = 0; l < n; ++l)
            s += alg.c(i, j, l) * alg.c(l, k, m) + alg.c(j, k, l) * alg.c(l, i, m) +
                 alg.c(k, i, l) * alg.c(l, j, m);
          jac = std::max(jac, std::abs(s));
        }
  rep.checks.push_back({"jacobi", jac <= kJacobiTol, jac});

  // Surjectivity of the bracket H_1 x H_j -> H_{j+1} via the coefficient matrix.
  bool gen_ok = true;
  double worst_defect = 0.0;
  for (int j = 1; j < g.depth(); ++j) {
    const int n1 = g.layer_dim(1), nj = g.layer_dim(j), njp = g.layer_dim(j + 1);
    Eigen::MatrixXd coef(n1 * nj, njp);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < nj; ++b)
        for (int k = 0; k < njp; ++k)
          coef(a * nj + b, k) =
              alg.c(g.layer_start(1) + a, g.layer_start(j) + b, g.layer_start(j + 1) + k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(coef);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int s = 0; s < sv.size(); ++s)
      if (sv[s] > kRankRelTol * sv[0]) ++rank;
    rep.generation_ranks.push_back(rank);
    if (rank < njp) {
      gen_ok = false;
      worst_defect = std::max(worst_defect, double(njp - rank));
    }
  }
  rep.checks.push_back({"horizontal-generation", gen_ok, worst_defect});

  rep.accepted = true;
  for (const auto& ch : rep.checks) rep.accepted = rep.accepted && ch.pass;
  return rep;
}

namespace algebras {

/// First Heisenberg group: layers (2,1), [X1,X2] = X3.
inline CarnotAlgebra heisenberg() {
  return CarnotAlgebra::from_triples(Grading({2, 1}), {{0, 1, 2, 1.0}});
}

/// Engel group: layers (2,1,1), [X1,X2] = X3, [X1,X3] = X4.
inline CarnotAlgebra engel() {
  return CarnotAlgebra::from_triples(Grading({2, 1, 1}), {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}});
}

/// Abelian R^n, a single layer with trivial brackets.
inline CarnotAlgebra abelian(int n) {
  return CarnotAlgebra::from_triples(Grading({n}), {});
}

}  // namespace algebras

}  // namespace cc
