#include <doctest.h>

#include "cc/differential.hpp"

using namespace cc;

TEST_CASE("horizontal extension on the heisenberg group") {
  const CarnotAlgebra alg = algebras::heisenberg();
  // [DERIVED] b1 = diag(a, b) extends with layer-2 block (a*b), since
  // L X3 = L[X1,X2] = [a X1, b X2] = a*b X3.
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
  b1(0, 0) = 2.0;
  b1(1, 1) = 3.0;
  const HorizontalHomomorphism L = extend_from_horizontal(alg, alg, b1);
  CHECK(L.block(2)(0, 0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(L.homomorphism_residual() <= kHomResidualTol);
  // [DERIVED] sr_jacobian = |det diag(2,3,6)| = 36 = (a*b)^2.
  CHECK(sr_jacobian(L) == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(rank(L) == 3);
  CHECK(!is_degenerate(L));
}

TEST_CASE("dilation homomorphism has jacobian r^nu") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const HorizontalHomomorphism D = dilation_homomorphism(alg, 0.5);
  // [DERIVED] nu = 4, so J = (1/2)^4 = 1/16.
  CHECK(sr_jacobian(D) == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  CHECK(D.homomorphism_residual() <= kHomResidualTol);
}

TEST_CASE("identity homomorphism is exact") {
  for (const CarnotAlgebra& alg : {algebras::heisenberg(), algebras::engel()}) {
    const HorizontalHomomorphism I = identity_homomorphism(alg);
    CHECK(I.homomorphism_residual() <= 1e-15);
    CHECK(sr_jacobian(I) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("composition multiplies blocks") {
  const CarnotAlgebra alg = algebras::heisenberg();
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
  b1(0, 0) = 2.0;
  b1(1, 1) = 3.0;
  const HorizontalHomomorphism L = extend_from_horizontal(alg, alg, b1);
  const HorizontalHomomorphism D = dilation_homomorphism(alg, 2.0);
  const HorizontalHomomorphism C = compose(L, D);
  CHECK(C.block(1)(0, 0) == doctest::Approx(4.0));
  CHECK(C.block(2)(0, 0) == doctest::Approx(24.0));
  CHECK(sr_jacobian(C) == doctest::Approx(sr_jacobian(L) * sr_jacobian(D)).epsilon(1e-12));
}

TEST_CASE("degenerate horizontal block is detected") {
  const CarnotAlgebra alg = algebras::heisenberg();
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
  b1(0, 0) = 1.0;  // kills X2: layer 2 image is [X1, 0] = 0
  const HorizontalHomomorphism L = extend_from_horizontal(alg, alg, b1);
  CHECK(sr_jacobian(L) == 0.0);
  CHECK(rank(L) == 1);
  CHECK(is_degenerate(L));
}

TEST_CASE("non-extendable block on the engel group throws") {
  const CarnotAlgebra alg = algebras::engel();
  // [DERIVED] Swapping the generators (with a sign) forces
  // L[X2,X3] = 0 but [L X2, L X3] = [-X1, X3] = -X4: not a homomorphism.
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
  b1(1, 0) = 1.0;
  b1(0, 1) = -1.0;
  CHECK_THROWS_AS(extend_from_horizontal(alg, alg, b1), NotExtendableError);
}

TEST_CASE("pansu estimator recovers the differential of a homomorphism") {
  const CarnotAlgebra alg = algebras::heisenberg();
  Eigen::MatrixXd b1(2, 2);
  b1 << 1.5, 0.25, -0.5, 2.0;
  const HorizontalHomomorphism L = extend_from_horizontal(alg, alg, b1);
  const Eigen::MatrixXd F = L.full_matrix();
  const GroupPoint g = (Eigen::Vector3d() << 0.3, -0.4, 0.7).finished();

  // f(p) = g * L(p): a left translate of a homomorphism.  Its hc-differential
  // at every point is L.
  auto f = [&](const GroupPoint& p) -> GroupPoint { return multiply(alg, g, F * p); };
  const GroupPoint u = (Eigen::Vector3d() << 0.2, 0.1, -0.3).finished();
  const std::vector<double> t_schedule{0.5, 0.25, 0.125, 1.0 / 16, 1.0 / 32};
  const PansuEstimate est = pansu_estimate(alg, alg, f, u, t_schedule);
  CHECK((est.differential.full_matrix() - F).lpNorm<Eigen::Infinity>() <= 1e-9);
  for (const auto& [t, err] : est.error_curve) CHECK(err <= 1e-9);
}

TEST_CASE("homomorphism shape validation") {
  const CarnotAlgebra heis = algebras::heisenberg();
  const CarnotAlgebra ab = algebras::abelian(2);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 2);
  CHECK_THROWS_AS(extend_from_horizontal(heis, heis, bad), ConfigError);
  // Preimage deeper than image is rejected outright.
  CHECK_THROWS_AS(
      HorizontalHomomorphism(heis, ab,
                             {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(1, 1)}),
      ConfigError);
}
