#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "cc/algebra.hpp"

namespace cc {

/// A point of a Carnot group in exponential coordinates of the first kind.
/// The exponential chart is the identity, so the coordinate vector is the point.
using GroupPoint = Eigen::VectorXd;

namespace detail {

// One word of the Dynkin series: letters[0..m-1] in {0 = X, 1 = Y}, evaluated
// as the right-nested bracket [l_0,[l_1,[...,[l_{m-2}, l_{m-1}]...]]].
struct DynkinTerm {
  std::vector<std::uint8_t> letters;
  double coeff;
};

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Enumerate Dynkin's expansion of log(exp X exp Y) up to commutator weight
// `max_weight`.  Terms whose two innermost letters coincide are dropped
// (their nested bracket vanishes identically), and equal words are merged.
inline std::vector<DynkinTerm> build_dynkin_terms(int max_weight) {
  std::map<std::vector<std::uint8_t>, double> acc;

  // Sequences (p_1,q_1,...,p_n,q_n), p_i + q_i >= 1, total length <= max_weight.
  std::vector<int> pq;  // flattened pairs
  auto emit = [&](int n, const std::vector<int>& pairs) {
    int len = 0;
    double denom_fact = 1.0;
    for (int i = 0; i < n; ++i) {
      len += pairs[2 * i] + pairs[2 * i + 1];
      denom_fact *= factorial(pairs[2 * i]) * factorial(pairs[2 * i + 1]);
    }
    std::vector<std::uint8_t> word;
    word.reserve(len);
    for (int i = 0; i < n; ++i) {
      word.insert(word.end(), pairs[2 * i], 0);
      word.insert(word.end(), pairs[2 * i + 1], 1);
    }
    if (word.size() >= 2 && word[word.size() - 1] == word[word.size() - 2]) return;
    const double coeff =
        ((n % 2 == 1) ? 1.0 : -1.0) / double(n) / double(len) / denom_fact;
    acc[word] += coeff;
  };

  std::vector<int> pairs;
  auto rec = [&](auto&& self, int n, int used) -> void {
    if (n > 0) emit(n, pairs);
    if (used >= max_weight) return;
    for (int p = 0; p <= max_weight - used; ++p) {
      for (int q = (p == 0 ? 1 : 0); p + q <= max_weight - used; ++q) {
        pairs.push_back(p);
        pairs.push_back(q);
        self(self, n + 1, used + p + q);
        pairs.pop_back();
        pairs.pop_back();
      }
    }
  };
  rec(rec, 0, 0);

  std::vector<DynkinTerm> out;
  for (auto& [word, coeff] : acc)
    if (std::abs(coeff) > 1e-300) out.push_back({word, coeff});
  return out;
}

inline const std::vector<DynkinTerm>& dynkin_terms(int max_weight) {
  static std::mutex mtx;
  static std::map<int, std::vector<DynkinTerm>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(max_weight);
  if (it == cache.end()) it = cache.emplace(max_weight, build_dynkin_terms(max_weight)).first;
  return it->second;
}

}  // namespace detail

/// Group law z = BCH(a, b) by the Dynkin commutator series truncated at weight
/// M; exact for step-M nilpotent algebras.
inline GroupPoint multiply(const CarnotAlgebra& alg, const GroupPoint& a, const GroupPoint& b) {
  const int n = alg.dim();
  if (a.size() != n || b.size() != n)
    throw ConfigError("multiply: point dimension does not match algebra");
  const auto& terms = detail::dynkin_terms(alg.depth());
  GroupPoint z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v(n), tmp(n);
  for (const auto& t : terms) {
    const auto& w = t.letters;
    v = (w.back() == 0) ? a : b;
    for (int i = static_cast<int>(w.size()) - 2; i >= 0; --i) {
      alg.bracket_into(w[i] == 0 ? a : b, v, tmp);
      v.swap(tmp);
    }
    z += t.coeff * v;
  }
  return z;
}

/// Group inverse; in first-kind exponential coordinates this is negation.
inline GroupPoint inverse(const CarnotAlgebra& alg, const GroupPoint& a) {
  if (a.size() != alg.dim())
    throw ConfigError("inverse: point dimension does not match algebra");
  return -a;
}

/// Anisotropic dilation: coordinate i is scaled by t^{deg(i)}.
inline GroupPoint dilate(const Grading& g, double t, const GroupPoint& a) {
  if (t <= 0.0) throw ConfigError("dilate: factor must be positive");
  GroupPoint out = a;
  for (int i = 0; i < g.dim(); ++i) out[i] *= std::pow(t, g.degree(i));
  return out;
}

inline GroupPoint dilate(const CarnotAlgebra& alg, double t, const GroupPoint& a) {
  return dilate(alg.grading(), t, a);
}

/// Layered norm of a coordinate vector: max_j ||layer_j||_2^{1/j}.
inline double layered_norm(const Grading& g, const Eigen::VectorXd& v) {
  double best = 0.0;
  for (int j = 1; j <= g.depth(); ++j) {
    const double nrm = v.segment(g.layer_start(j), g.layer_dim(j)).norm();
    best = std::max(best, std::pow(nrm, 1.0 / j));
  }
  return best;
}

/// Diagnostic only: d_inf(x, 0) = max_i |x_i|^{1/deg(i)}.
inline double dinf_norm(const Grading& g, const Eigen::VectorXd& v) {
  double best = 0.0;
  for (int i = 0; i < g.dim(); ++i)
    best = std::max(best, std::pow(std::abs(v[i]), 1.0 / g.degree(i)));
  return best;
}

/// Box quasimetric d_2(x, u), evaluated on the coordinates of u^{-1} x.
/// Left-invariant and homogeneous of degree 1 under dilations.
inline double d2(const CarnotAlgebra& alg, const GroupPoint& x, const GroupPoint& u) {
  return layered_norm(alg.grading(), multiply(alg, inverse(alg, u), x));
}

inline int homogeneous_dimension(const Grading& g) { return g.homogeneous_dimension(); }

/// Directional derivative of BCH in the second slot at the identity:
/// d/dt BCH(x, t w) |_{t=0}.  Collects the Dynkin terms containing exactly one
/// Y letter.  This is the left-invariant vector field of w evaluated at x.
inline Eigen::VectorXd bch_dleft(const CarnotAlgebra& alg, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& w) {
  const auto& terms = detail::dynkin_terms(alg.depth());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(alg.dim());
  Eigen::VectorXd v(alg.dim()), tmp(alg.dim());
  for (const auto& t : terms) {
    int ys = 0;
    for (auto l : t.letters) ys += l;
    if (ys != 1) continue;
    v = (t.letters.back() == 0) ? x : w;
    for (int i = static_cast<int>(t.letters.size()) - 2; i >= 0; --i) {
      alg.bracket_into(t.letters[i] == 0 ? x : w, v, tmp);
      v.swap(tmp);
    }
    out += t.coeff * v;
  }
  return out;
}

}  // namespace cc
