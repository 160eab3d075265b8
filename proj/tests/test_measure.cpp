#include <doctest.h>

#include "cc/measure.hpp"

using namespace cc;

namespace {

// [DERIVED] Monte Carlo rejection oracle for the Lebesgue volume of Box_2(0,r)
// inside the anisotropic bounding box.
double box_volume_mc(const Grading& g, double r, std::size_t samples, std::uint64_t seed) {
  Eigen::VectorXd half(g.dim());
  for (int i = 0; i < g.dim(); ++i) half[i] = std::pow(r, g.degree(i));
  double env = 1.0;
  for (int i = 0; i < g.dim(); ++i) env *= 2.0 * half[i];
  std::size_t hits = 0;
  CounterRng rng(seed, 0);
  Eigen::VectorXd p(g.dim());
  for (std::size_t s = 0; s < samples; ++s) {
    for (int i = 0; i < g.dim(); ++i) p[i] = rng.uniform(-half[i], half[i]);
    if (layered_norm(g, p) <= r) ++hits;
  }
  return env * double(hits) / double(samples);
}

}  // namespace

TEST_CASE("box volume formula vs monte carlo oracle") {
  const Grading heis({2, 1});
  // [DERIVED] V = pi * 2 = 2*pi for r = 1 on the heisenberg grading.
  CHECK(box_volume(heis, 1.0) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(box_volume(heis, 0.5) ==
        doctest::Approx(2.0 * std::numbers::pi * std::pow(0.5, 4)).epsilon(1e-14));
  CHECK(box_volume_mc(heis, 1.0, 400000, 5) ==
        doctest::Approx(box_volume(heis, 1.0)).epsilon(0.01));

  const Grading engel({2, 1, 1});
  CHECK(box_volume_mc(engel, 1.0, 400000, 6) ==
        doctest::Approx(box_volume(engel, 1.0)).epsilon(0.01));
}

TEST_CASE("box sampling is uniform in the box") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const Region region = Region::d2_box(alg, Eigen::Vector3d::Zero(), 1.0);
  CounterRng rng(9, 0);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd p = region.sample(rng);
    CHECK(region.contains(p));
    mean += p;
  }
  mean /= double(n);
  CHECK(mean.lpNorm<Eigen::Infinity>() <= 0.02);  // symmetric box, mean ~ 0
}

TEST_CASE("hausdorff estimate of the unit d2 box") {
  const Grading g({2, 1});
  const CarnotAlgebra alg = algebras::heisenberg();
  Eigen::Vector3d half(1.0, 1.0, 1.0);
  const CoordBox bbox{-half, half};
  const auto est = hausdorff_estimate(
      g, bbox, [&](const Eigen::VectorXd& p) { return layered_norm(g, p) <= 1.0; }, 4.0,
      1.0 / 32.0, (std::uint64_t(1) << 31), 2);
  CHECK(est.value == doctest::Approx(box_volume(g, 1.0)).epsilon(0.05));
}

TEST_CASE("point-sample hausdorff estimate agrees on a full box") {
  const Grading g({2, 1});
  const CarnotAlgebra alg = algebras::heisenberg();
  const Region region = Region::d2_box(alg, Eigen::Vector3d::Zero(), 1.0);
  CounterRng rng(3, 0);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 400000; ++i) pts.push_back(region.sample(rng));
  const auto est = hausdorff_estimate_points(g, pts, 4.0, 1.0 / 8.0);
  // Coarse cells + dense sample: occupied cells cover the box with boundary slop.
  CHECK(est.value / box_volume(g, 1.0) == doctest::Approx(1.0).epsilon(0.35));
}

TEST_CASE("area lhs of the identity is the region measure") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const CatalogMap ident = maps::identity(alg);
  Eigen::Vector3d lo(0, 0, 0), hi(1, 1, 1);
  const Region region = Region::coord_boxes({CoordBox{lo, hi}});
  const AreaLhsResult lhs = area_lhs(ident, region, 10000, 1, 2);
  // [DERIVED] H^4 of the unit cube = 1 / box_volume(1) = 1/(2*pi); J = 1.
  CHECK(lhs.value == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(lhs.stderror <= 1e-12);  // constant integrand
}

TEST_CASE("area rhs of the identity matches the region measure") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const CatalogMap ident = maps::identity(alg);
  const Region region = Region::coord_boxes(
      {CoordBox{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1)}});
  AreaRhsOptions opt;
  opt.image_delta = 1.0 / 16.0;
  opt.workers = 2;
  const AreaRhsResult rhs = area_rhs_multiplicity(ident, region, opt);
  CHECK(rhs.value == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(0.05));
}

TEST_CASE("area formula holds for a dilation") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const CatalogMap dil = maps::dilation(alg, 1.5);
  const Region region = Region::coord_boxes(
      {CoordBox{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1)}});
  const AreaLhsResult lhs = area_lhs(dil, region, 10000, 1, 2);
  AreaRhsOptions opt;
  opt.image_delta = 1.0 / 16.0;
  opt.workers = 2;
  const AreaRhsResult rhs = area_rhs_multiplicity(dil, region, opt);
  CHECK(lhs.value / rhs.value == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("local distortion of a homomorphism equals its jacobian") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const CatalogMap dil = maps::dilation(alg, 0.75);
  const double jac = sr_jacobian(dil.pieces()[0].diff);
  const double ld = local_distortion(dil, Eigen::Vector3d::Zero(), 1.0, 16.0, 2);
  CHECK(ld / jac == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("estimators are deterministic across worker counts") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const CatalogMap dil = maps::dilation(alg, 1.5);
  const Region region = Region::coord_boxes(
      {CoordBox{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1)}});
  const AreaLhsResult a1 = area_lhs(dil, region, 20000, 77, 1);
  const AreaLhsResult a4 = area_lhs(dil, region, 20000, 77, 4);
  CHECK(a1.value == a4.value);
  CHECK(a1.stderror == a4.stderror);

  AreaRhsOptions o1, o4;
  o1.image_delta = o4.image_delta = 1.0 / 16.0;
  o1.workers = 1;
  o4.workers = 4;
  const AreaRhsResult r1 = area_rhs_multiplicity(dil, region, o1);
  const AreaRhsResult r4 = area_rhs_multiplicity(dil, region, o4);
  CHECK(r1.value == r4.value);
  CHECK(r1.occupied_cells == r4.occupied_cells);
}

TEST_CASE("resource cap raises a resource error") {
  const Grading g({2, 1});
  const CoordBox bbox{Eigen::Vector3d(-1, -1, -1), Eigen::Vector3d(1, 1, 1)};
  CHECK_THROWS_AS(hausdorff_estimate(
                      g, bbox, [](const Eigen::VectorXd&) { return true; }, 4.0, 1e-4, 1000, 1),
                  ResourceError);
}
