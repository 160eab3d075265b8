#include <doctest.h>

#include "cc/frame.hpp"

using namespace cc;

namespace {

// [DERIVED] Closed-form unit-time flow of a*X1 + b*X2 + c*X3 from the origin
// for the variable Heisenberg frame (X2 = d/dy + (x + x^2/2) d/dt):
//   x(1) = a, y(1) = b, t(1) = c + a*b/2 + a^2*b/6.
Eigen::Vector3d vh_flow_oracle(double a, double b, double c) {
  return {a, b, c + a * b / 2.0 + a * a * b / 6.0};
}

}  // namespace

TEST_CASE("variable heisenberg flow matches the closed form") {
  const FramedManifold frame = frames::variable_heisenberg();
  Eigen::Vector3d v(0.4, 1.0, 0.1);
  const Eigen::VectorXd w = flow(frame, Eigen::Vector3d::Zero(), v);
  CHECK((w - vh_flow_oracle(0.4, 1.0, 0.1)).lpNorm<Eigen::Infinity>() <= 1e-10);

  v << -0.3, 0.7, -0.2;
  const Eigen::VectorXd w2 = flow(frame, Eigen::Vector3d::Zero(), v);
  CHECK((w2 - vh_flow_oracle(-0.3, 0.7, -0.2)).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("rk4 flow is converged at the fixed step count") {
  const FramedManifold frame = frames::variable_heisenberg();
  Eigen::Vector3d u(0.1, -0.5, 0.3), v(0.2, 0.8, -0.4);
  const Eigen::VectorXd a = flow(frame, u, v, kFlowSteps);
  const Eigen::VectorXd b = flow(frame, u, v, 2 * kFlowSteps);
  CHECK((a - b).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("flow throws on domain escape") {
  const FramedManifold frame = frames::variable_heisenberg();
  CHECK_THROWS_AS(flow(frame, Eigen::Vector3d::Zero(), Eigen::Vector3d(0.9, 0.0, 0.0)),
                  DomainEscapeError);
}

TEST_CASE("normal coordinates invert the flow") {
  const FramedManifold frame = frames::variable_heisenberg();
  const Eigen::Vector3d v(0.4, 1.0, 0.1);
  const Eigen::Vector3d w = vh_flow_oracle(0.4, 1.0, 0.1);
  const Eigen::VectorXd back = normal_coords(frame, Eigen::Vector3d::Zero(), w);
  CHECK((back - v).lpNorm<Eigen::Infinity>() <= 1e-8);

  // Round-trip from a non-origin base point.
  const Eigen::Vector3d u(0.1, 0.2, -0.3), v2(-0.2, 0.5, 0.4);
  const Eigen::VectorXd w2 = flow(frame, u, v2);
  CHECK((normal_coords(frame, u, w2) - v2).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("group frame chart agrees with the group law") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const FramedManifold frame = frames::group_frame(alg);
  // exp(sum v_i X_i)(u) = u * exp(v) for the left-invariant frame.
  const Eigen::Vector3d u(0.3, -0.2, 0.5), v(0.4, 0.7, -0.1);
  const Eigen::VectorXd via_flow = flow(frame, u, v);
  const Eigen::VectorXd via_mul = multiply(alg, u, v);
  CHECK((via_flow - via_mul).lpNorm<Eigen::Infinity>() <= 1e-9);
  CHECK(d2_frame(frame, u, via_flow) ==
        doctest::Approx(layered_norm(alg.grading(), v)).epsilon(1e-8));
}

TEST_CASE("nilpotentization freezes the structure constants") {
  const FramedManifold frame = frames::variable_heisenberg();
  // [DERIVED] c_123(x) = 1 + x: equal to 1 at the origin, 5/4 at x = 1/4.
  const CarnotAlgebra at0 = nilpotentize(frame, Eigen::Vector3d::Zero());
  CHECK(at0.c(0, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(validate_algebra(at0).accepted);

  const CarnotAlgebra at14 = nilpotentize(frame, Eigen::Vector3d(0.25, 0.0, 0.0));
  CHECK(at14.c(0, 1, 2) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(validate_algebra(at14).accepted);

  // Idempotence: nilpotentizing the frozen group frame returns the same constants.
  const FramedManifold frozen = frames::group_frame(at14);
  const CarnotAlgebra again = nilpotentize(frozen, Eigen::Vector3d::Zero());
  CHECK(again.c(0, 1, 2) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("tangent cone metric matches the frame metric on a group frame") {
  const CarnotAlgebra alg = algebras::heisenberg();
  const FramedManifold frame = frames::group_frame(alg);
  const TangentCone cone = tangent_cone(frame, Eigen::Vector3d::Zero());
  const Eigen::Vector3d w(0.2, 0.3, 0.1), v(-0.1, 0.4, -0.2);
  // For a genuine group frame the cone reproduces the group itself.
  CHECK(d2_cone(frame, cone, w, v) == doctest::Approx(d2(alg, v, w)).epsilon(1e-8));
}

TEST_CASE("nilpotentize rejects a degenerate frame") {
  // X2 carries no d/dy component anywhere: [X1,X2] = 0, layer 2 not generated.
  auto fields = [](const Eigen::VectorXd&) -> Eigen::MatrixXd {
    return Eigen::MatrixXd::Identity(3, 3);
  };
  auto brackets = [](int, int, int, const Eigen::VectorXd&) -> double { return 0.0; };
  const FramedManifold degenerate(
      Grading({2, 1}), fields, brackets,
      CoordBox{Eigen::Vector3d(-1, -1, -1), Eigen::Vector3d(1, 1, 1)}, "degenerate");
  CHECK_THROWS_AS(nilpotentize(degenerate, Eigen::Vector3d::Zero()), EquiregularityError);
}
