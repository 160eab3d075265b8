#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cc/maps.hpp"
#include "cc/region.hpp"

namespace cc {

/// Normalizing multiple of the spherical Hausdorff measure.  The area formula
/// holds for any common value, and every quantitative check here is a ratio
/// test in which it cancels.
inline constexpr double kOmegaNu = 1.0;

struct MeasureEstimate {
  double value = 0.0;
  double delta = 0.0;
  std::uint64_t count = 0;
  double omega_nu = kOmegaNu;
};

namespace detail {

/// Anisotropic grid: pitch delta^deg(i) along coordinate i, anchored at 0.
struct AnisoGrid {
  std::vector<double> pitch;
  std::vector<std::int64_t> lo_idx;
  std::vector<std::int64_t> counts;

  AnisoGrid(const Grading& g, const CoordBox& bbox, double delta, std::uint64_t cell_cap) {
    const int n = g.dim();
    pitch.resize(n);
    lo_idx.resize(n);
    counts.resize(n);
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
      pitch[i] = std::pow(delta, g.degree(i));
      lo_idx[i] = static_cast<std::int64_t>(std::floor(bbox.lo[i] / pitch[i]));
      const auto hi = static_cast<std::int64_t>(std::floor(bbox.hi[i] / pitch[i]));
      counts[i] = hi - lo_idx[i] + 1;
      if (counts[i] <= 0) counts[i] = 1;
      if (total > cell_cap / static_cast<std::uint64_t>(counts[i]))
        throw ResourceError("grid: cell count exceeds the configured cap");
      total *= static_cast<std::uint64_t>(counts[i]);
    }
  }

  std::uint64_t total_cells() const {
    std::uint64_t t = 1;
    for (auto c : counts) t *= static_cast<std::uint64_t>(c);
    return t;
  }

  /// Linear cell index of point p, or -1 if outside the grid.
  std::int64_t cell_of(const Eigen::VectorXd& p) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < pitch.size(); ++i) {
      const auto c = static_cast<std::int64_t>(std::floor(p[i] / pitch[i])) - lo_idx[i];
      if (c < 0 || c >= counts[i]) return -1;
      idx = idx * counts[i] + c;
    }
    return idx;
  }

  /// Center of the cell with the given linear index.
  void center_into(std::int64_t idx, Eigen::VectorXd& p) const {
    const int n = static_cast<int>(pitch.size());
    for (int i = n - 1; i >= 0; --i) {
      const std::int64_t c = idx % counts[i];
      idx /= counts[i];
      p[i] = (double(lo_idx[i] + c) + 0.5) * pitch[i];
    }
  }
};

inline void parallel_for(std::uint64_t n, int workers, const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (workers <= 1 || n < 4096) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t b = std::min<std::uint64_t>(w * chunk, n);
    const std::uint64_t e = std::min<std::uint64_t>(b + chunk, n);
    if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Box-counting estimate of the spherical H^nu measure of a full-dimensional
/// set given by a membership predicate: cells of the anisotropic grid whose
/// center lies in the set, value = omega * count * delta^nu.
template <class Pred>
MeasureEstimate hausdorff_estimate(const Grading& g, const CoordBox& bbox, Pred&& inside,
                                   double nu, double delta,
                                   std::uint64_t cell_cap = (std::uint64_t(1) << 31),
                                   int workers = 1) {
  if (delta <= 0.0) throw ConfigError("hausdorff_estimate: delta must be positive");
  detail::AnisoGrid grid(g, bbox, delta, cell_cap);
  const std::uint64_t total = grid.total_cells();
  std::atomic<std::uint64_t> count{0};
  detail::parallel_for(total, workers, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t local = 0;
    Eigen::VectorXd p(g.dim());
    for (std::uint64_t i = b; i < e; ++i) {
      grid.center_into(static_cast<std::int64_t>(i), p);
      if (inside(p)) ++local;
    }
    count += local;
  });
  return {kOmegaNu * double(count.load()) * std::pow(delta, nu), delta, count.load(), kOmegaNu};
}

/// Occupied-cell estimate from a point sample of the set; appropriate for
/// lower-dimensional sets where center testing cannot see the set.
inline MeasureEstimate hausdorff_estimate_points(const Grading& g,
                                                 const std::vector<Eigen::VectorXd>& pts,
                                                 double nu, double delta) {
  if (delta <= 0.0) throw ConfigError("hausdorff_estimate_points: delta must be positive");
  std::unordered_set<std::uint64_t> occupied;
  occupied.reserve(pts.size());
  for (const auto& p : pts) {
    std::uint64_t key = 0xcbf29ce484222325ull;
    for (int i = 0; i < g.dim(); ++i) {
      const auto c = static_cast<std::int64_t>(std::floor(p[i] / std::pow(delta, g.degree(i))));
      key = (key ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ull;
      key ^= key >> 29;
    }
    occupied.insert(key);
  }
  const auto count = static_cast<std::uint64_t>(occupied.size());
  return {kOmegaNu * double(count) * std::pow(delta, nu), delta, count, kOmegaNu};
}

/// Monte Carlo estimate of the area-formula left side, integral of J^SR over
/// the region against H^nu = (omega/box_volume(1)) * Lebesgue.
struct AreaLhsResult {
  double value = 0.0;
  double stderror = 0.0;
  std::size_t samples = 0;
};

inline AreaLhsResult area_lhs(const CatalogMap& map, const Region& region, std::size_t samples,
                              std::uint64_t seed, int workers = 1) {
  if (samples == 0) throw ConfigError("area_lhs: samples must be positive");
  const double hmeas =
      kOmegaNu / box_volume(map.pre().grading(), 1.0) * region.lebesgue();
  std::vector<double> jac(samples);
  detail::parallel_for(samples, workers, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) {
      CounterRng rng(seed, i);
      const Eigen::VectorXd x = region.sample(rng);
      jac[i] = sr_jacobian(map.diff_at(x));
    }
  });
  // Fixed-order reduction: identical bytes at any worker count.
  double sum = 0.0, sumsq = 0.0;
  for (double j : jac) {
    sum += j;
    sumsq += j * j;
  }
  const double mean = sum / double(samples);
  const double var = std::max(0.0, sumsq / double(samples) - mean * mean);
  return {hmeas * mean, hmeas * std::sqrt(var / double(samples)), samples};
}

/// Options for the image-measure (right side) estimator.
struct AreaRhsOptions {
  double image_delta = 1.0 / 32.0;
  bool refine = true;            // two-scale boundary extrapolation 2*v(d) - v(2d)
  bool grid_sampling = true;     // deterministic anisotropic domain grid
  std::size_t random_samples = 1'000'000;  // used when grid_sampling is false
  double domain_oversample = 2.0;
  std::uint64_t seed = 0;
  int workers = 1;
  bool injective_counting = false;  // count occupied cells once, ignore multiplicity
  std::uint64_t cell_cap = (std::uint64_t(1) << 28);
};

struct AreaRhsResult {
  double value = 0.0;        // refined if requested, else fine-scale raw
  double fine_value = 0.0;   // raw counting value at image_delta
  double coarse_value = 0.0; // raw counting value at 2*image_delta
  std::uint64_t occupied_cells = 0;
  std::uint64_t multiplicity_total = 0;
  bool low_occupancy_warning = false;
  double image_delta = 0.0;
};

namespace detail {

struct DomainGrid {
  CoordBox box;
  std::vector<double> pitch;
  std::vector<std::int64_t> counts;

  DomainGrid(const Grading& g, const CoordBox& b, double delta_dom) : box(b) {
    const int n = g.dim();
    pitch.resize(n);
    counts.resize(n);
    for (int i = 0; i < n; ++i) {
      pitch[i] = std::pow(delta_dom, g.degree(i));
      counts[i] = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil((b.hi[i] - b.lo[i]) / pitch[i])));
    }
  }

  std::uint64_t total() const {
    std::uint64_t t = 1;
    for (auto c : counts) t *= static_cast<std::uint64_t>(c);
    return t;
  }

  void point_into(std::uint64_t idx, Eigen::VectorXd& p) const {
    const int n = static_cast<int>(pitch.size());
    for (int i = n - 1; i >= 0; --i) {
      const std::int64_t c = static_cast<std::int64_t>(idx % counts[i]);
      idx /= counts[i];
      p[i] = box.lo[i] + (double(c) + 0.5) * pitch[i];
    }
  }
};

// Pads an image bounding box by a fraction of its extent plus a few cells.
inline CoordBox pad_bbox(const Grading& g, const CoordBox& bb, double delta) {
  CoordBox out = bb;
  for (int i = 0; i < g.dim(); ++i) {
    const double cell = std::pow(delta, g.degree(i));
    const double pad = 0.25 * (bb.hi[i] - bb.lo[i]) + 4.0 * cell;
    out.lo[i] -= pad;
    out.hi[i] += pad;
  }
  return out;
}

}  // namespace detail

/// Image-measure estimate of the area-formula right side: push a dense sample
/// of the region through the map, bin on the anisotropic image grid, count
/// each occupied cell with its multiplicity (number of distinct domain pieces
/// reaching it), and weight cells by (omega/box_volume(1)) * delta^nu.
inline AreaRhsResult area_rhs_multiplicity(const CatalogMap& map, const Region& region,
                                           const AreaRhsOptions& opt) {
  if (opt.image_delta <= 0.0) throw ConfigError("area_rhs: image_delta must be positive");
  const Grading& gd = map.pre().grading();
  const Grading& gi = map.im().grading();
  const double nu_im = gi.homogeneous_dimension();
  const double cell_h_unit = kOmegaNu / box_volume(gi, 1.0);
  if (static_cast<int>(map.pieces().size()) > 8)
    throw ConfigError("area_rhs: at most 8 map pieces supported");

  // Collect the domain traversal: either grid points per region piece or
  // counter-based random samples.
  struct Traversal {
    std::vector<detail::DomainGrid> grids;  // grid mode
    std::size_t random_samples = 0;         // random mode
  } trav;

  if (opt.grid_sampling) {
    const double delta_dom =
        opt.image_delta / (opt.domain_oversample * std::max(1.0, map.lip_upper()));
    if (region.is_d2_box()) {
      const Grading& g = gd;
      Eigen::VectorXd half(g.dim());
      for (int i = 0; i < g.dim(); ++i) half[i] = std::pow(region.radius(), g.degree(i));
      // Tight for a centered box; general centers are filtered by membership.
      CoordBox bb{region.center() - half, region.center() + half};
      trav.grids.emplace_back(g, bb, delta_dom);
    } else {
      for (const auto& piece : region.pieces()) trav.grids.emplace_back(gd, piece, delta_dom);
    }
  } else {
    trav.random_samples = opt.random_samples;
  }

  auto domain_point = [&](std::uint64_t i, Eigen::VectorXd& out) -> bool {
    if (opt.grid_sampling) {
      for (const auto& grd : trav.grids) {
        const std::uint64_t t = grd.total();
        if (i < t) {
          grd.point_into(i, out);
          return region.contains(out);
        }
        i -= t;
      }
      return false;
    }
    CounterRng rng(opt.seed, i);
    out = region.sample(rng);
    return true;
  };

  std::uint64_t total_points = trav.random_samples;
  if (opt.grid_sampling) {
    total_points = 0;
    for (const auto& grd : trav.grids) total_points += grd.total();
  }

  // Pre-pass on a sparse subset to locate the image bounding box.
  const std::uint64_t stride = std::max<std::uint64_t>(1, total_points / 65536);
  CoordBox image_bb{Eigen::VectorXd::Constant(gi.dim(), 1e300),
                    Eigen::VectorXd::Constant(gi.dim(), -1e300)};
  {
    Eigen::VectorXd p(gd.dim());
    for (std::uint64_t i = 0; i < total_points; i += stride) {
      if (!domain_point(i, p)) continue;
      if (map.piece_for(p) < 0) continue;
      const Eigen::VectorXd y = map.apply(p);
      image_bb.lo = image_bb.lo.cwiseMin(y);
      image_bb.hi = image_bb.hi.cwiseMax(y);
    }
  }
  if (image_bb.lo[0] > image_bb.hi[0]) throw ConfigError("area_rhs: empty traversal");
  image_bb = detail::pad_bbox(gi, image_bb, opt.image_delta);

  detail::AnisoGrid fine(gi, image_bb, opt.image_delta, opt.cell_cap);
  detail::AnisoGrid coarse(gi, image_bb, 2.0 * opt.image_delta, opt.cell_cap);

  std::vector<std::atomic<std::uint8_t>> fine_mask(fine.total_cells());
  std::vector<std::atomic<std::uint8_t>> coarse_mask(coarse.total_cells());
  std::atomic<std::uint64_t> escaped{0}, pushed{0};

  detail::parallel_for(total_points, opt.workers, [&](std::uint64_t b, std::uint64_t e) {
    Eigen::VectorXd p(gd.dim());
    std::uint64_t local_escaped = 0, local_pushed = 0;
    for (std::uint64_t i = b; i < e; ++i) {
      if (!domain_point(i, p)) continue;
      const int piece = map.piece_for(p);
      if (piece < 0) continue;
      const Eigen::VectorXd y = map.pieces()[piece].apply(p);
      const std::int64_t cf = fine.cell_of(y);
      const std::int64_t cc = coarse.cell_of(y);
      ++local_pushed;
      if (cf < 0 || cc < 0) {
        ++local_escaped;
        continue;
      }
      const auto bit = static_cast<std::uint8_t>(1u << piece);
      fine_mask[static_cast<std::size_t>(cf)].fetch_or(bit, std::memory_order_relaxed);
      coarse_mask[static_cast<std::size_t>(cc)].fetch_or(bit, std::memory_order_relaxed);
    }
    escaped += local_escaped;
    pushed += local_pushed;
  });
  if (escaped.load() > 0)
    throw ResourceError("area_rhs: image bounding box pre-pass missed " +
                        std::to_string(escaped.load()) + " points");

  auto tally = [&](const std::vector<std::atomic<std::uint8_t>>& mask, double delta,
                   std::uint64_t& occupied, std::uint64_t& mult_total) -> double {
    occupied = 0;
    mult_total = 0;
    for (const auto& m : mask) {
      const std::uint8_t v = m.load(std::memory_order_relaxed);
      if (v == 0) continue;
      ++occupied;
      mult_total += opt.injective_counting ? 1 : std::popcount(v);
    }
    return double(mult_total) * cell_h_unit * std::pow(delta, nu_im);
  };

  AreaRhsResult out;
  out.image_delta = opt.image_delta;
  std::uint64_t occ_c = 0, mult_c = 0;
  out.fine_value = tally(fine_mask, opt.image_delta, out.occupied_cells, out.multiplicity_total);
  out.coarse_value = tally(coarse_mask, 2.0 * opt.image_delta, occ_c, mult_c);
  out.value = opt.refine ? 2.0 * out.fine_value - out.coarse_value : out.fine_value;
  out.low_occupancy_warning =
      out.occupied_cells > 0 && pushed.load() / out.occupied_cells < 4;
  return out;
}

/// Local measure distortion: H^nu(map(Box_2(x,t))) / (omega * t^nu), the
/// image measure counted injectively.  Converges to sr_jacobian for
/// homomorphisms as t -> 0 (and is t-independent for them).
inline double local_distortion(const CatalogMap& map, const GroupPoint& x, double t,
                               double image_delta_factor = 16.0, int workers = 1) {
  if (t <= 0.0) throw ConfigError("local_distortion: t must be positive");
  Region region = Region::d2_box(map.pre(), x, t);
  AreaRhsOptions opt;
  opt.image_delta = t / image_delta_factor;
  opt.refine = true;
  opt.injective_counting = true;
  opt.workers = workers;
  const AreaRhsResult rhs = area_rhs_multiplicity(map, region, opt);
  const double nu = map.pre().grading().homogeneous_dimension();
  return rhs.value / (kOmegaNu * std::pow(t, nu));
}

}  // namespace cc
