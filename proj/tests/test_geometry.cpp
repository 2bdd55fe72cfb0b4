#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "arcwidom/geometry.hpp"

using namespace arcwidom;

namespace {

double dist(cplx a, cplx b) { return std::abs(a - b); }

}  // namespace

TEST(ArcSpec, CircularEndpointsLieOnCircle) {
  const auto s = ArcSpec::circular(2.0, 1.0, {0.5, -0.25});
  EXPECT_NEAR(std::abs(s.start() - cplx(0.5, -0.25)), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(s.end() - cplx(0.5, -0.25)), 2.0, 1e-14);
  // chord = 2 r sin(alpha)
  EXPECT_NEAR(std::abs(s.end() - s.start()), 4.0 * std::sin(1.0), 1e-13);
}

TEST(ArcSpec, ArcLengthMatchesClosedForms) {
  EXPECT_NEAR(arc_length(ArcSpec::segment({1, 1}, {4, 5})), 5.0, 1e-12);
  // circular arc with half-angle alpha has length 2 r alpha
  EXPECT_NEAR(arc_length(ArcSpec::circular(1.5, 0.8)), 2.4, 1e-6);
  // y = 0.3 (1 - x^2): int sqrt(1 + 0.36 x^2) dx over [-1, 1]
  const double k = 0.6;
  const double oracle = std::sqrt(1 + k * k) + std::asinh(k) / k;
  EXPECT_NEAR(arc_length(ArcSpec::parametric({0, 1}, {0.3, 0, -0.3})), oracle, 1e-6);
}

TEST(ArcSpec, RejectsBadInput) {
  EXPECT_THROW(normalize_endpoints(ArcSpec::segment({1, 1}, {1, 1})), InputError);
  EXPECT_THROW(parse_arc_spec("{\"kind\": \"circular-arc\", \"r\": 1, \"alpha\": 3.2}"), InputError);
  EXPECT_THROW(parse_arc_spec("{\"kind\": \"circular-arc\", \"r\": -1, \"alpha\": 1}"), InputError);
  EXPECT_THROW(parse_arc_spec("{\"kind\": \"spline\"}"), InputError);
  EXPECT_THROW(parse_arc_spec("not json"), InputError);
  // closed loop: start and end coincide
  EXPECT_THROW(parse_arc_spec(R"({"kind": "parametric", "x": [0, 0, 1], "y": [0.5]})"), InputError);
  // x = t^2 - 1/2, y = t^3 - t crosses itself at t = +-1
  EXPECT_THROW(normalize_endpoints(ArcSpec::parametric({-0.5, 0, 1.2}, {0, -1, 0, 1})), InputError);
  // degree above 12
  EXPECT_THROW(parse_arc_spec(R"({"kind": "parametric", "x": [0,1,0,0,0,0,0,0,0,0,0,0,0,0.01], "y": [0]})"),
               InputError);
}

TEST(ArcSpec, JsonRoundTrip) {
  const auto s = ArcSpec::parametric({0.1, 1.0, 0.2}, {0.0, 0.3, -0.1});
  const auto back = parse_arc_spec(arc_spec_to_json(s).dump());
  for (double t : {-1.0, -0.3, 0.4, 1.0}) EXPECT_EQ(spec_point(back, t), spec_point(s, t));
}

TEST(NormalizedArc, EndpointsMapToMinusOnePlusOne) {
  for (const auto& s : {ArcSpec::segment({0, 0}, std::polar(2.0, 0.5)), ArcSpec::circular(1.3, 2.2, {1, 1}),
                        ArcSpec::parametric({0, 1}, {0.3, 0, -0.3})}) {
    const auto arc = normalize_endpoints(s);
    EXPECT_EQ(arc.point(-1.0), cplx(-1.0, 0.0));
    EXPECT_EQ(arc.point(1.0), cplx(1.0, 0.0));
    EXPECT_LT(dist(arc.to_normalized(s.start()), {-1, 0}), 1e-14);
    EXPECT_LT(dist(arc.to_normalized(s.end()), {1, 0}), 1e-14);
    for (double t : {-0.7, 0.1, 0.9}) {
      EXPECT_LT(dist(arc.original_point(t), spec_point(s, t)), 1e-13);
      // finite-difference check of the derivative
      const double h = 1e-6;
      const cplx fd = (arc.point(t + h) - arc.point(t - h)) / (2 * h);
      EXPECT_LT(dist(fd, arc.d1(t)), 1e-7);
    }
  }
}

TEST(Joukowski, LiftInvertsOffTheSlit) {
  for (const cplx z : {cplx(2, 0), cplx(0, 0.1), cplx(-0.5, -0.3), cplx(-3, 1), cplx(0.999, 1e-8)}) {
    const cplx u = joukowski_lift(z);
    EXPECT_GT(std::abs(u), 1.0);
    EXPECT_LT(dist(inverse_lift(u), z), 1e-12);
  }
  // z + sqrt(z^2 - 1) with the principal branch, valid for Re z > 0
  const cplx z(1.5, 0.7);
  EXPECT_LT(dist(joukowski_lift(z), z + std::sqrt(z * z - 1.0)), 1e-14);
}

TEST(Joukowski, SlitNeedsASide) {
  EXPECT_EQ(joukowski_lift({0.6, 0.0}, Side::Plus), cplx(0.6, 0.8));
  EXPECT_EQ(joukowski_lift({0.6, 0.0}, Side::Minus), cplx(0.6, -0.8));
  EXPECT_THROW(joukowski_lift({0.6, 0.0}), DomainError);
  EXPECT_THROW(joukowski_lift({1.0, 0.0}, Side::Plus), DomainError);
}

TEST(LiftedCurve, IntervalLiftsToUnitCircle) {
  const auto curve = build_lifted_curve(normalize_endpoints(ArcSpec::segment({-1, 0}, {1, 0})), 512);
  for (double s = 0.0; s < kTwoPi; s += 0.37) EXPECT_NEAR(std::abs(curve.eta(s)), 1.0, 1e-14);
  EXPECT_TRUE(curve.is_star_shaped());
  EXPECT_EQ(curve.winding_number({0.0, 0.0}), 1);
  EXPECT_EQ(curve.winding_number({3.0, 0.0}), 0);
}

TEST(LiftedCurve, CurvePointsProjectToTheArc) {
  const auto arc = normalize_endpoints(ArcSpec::circular(1.0, 1.2));
  const auto curve = build_lifted_curve(arc, 1024);
  for (double s = 0.05; s < kTwoPi; s += 0.3) {
    EXPECT_LT(dist(inverse_lift(curve.eta(s)), arc.point(std::cos(s))), 1e-12);
    const double h = 1e-6;
    const cplx fd = (curve.eta(s + h) - curve.eta(s - h)) / (2 * h);
    EXPECT_LT(dist(fd, curve.eta_prime(s)), 1e-6);
  }
  // counter-clockwise about the origin
  EXPECT_EQ(curve.winding_number({0.0, 0.0}), 1);
}

TEST(LiftedCurve, ExteriorLiftIsOutsideTheCurve) {
  const auto arc = normalize_endpoints(ArcSpec::circular(1.0, 2.5));
  const auto curve = build_lifted_curve(arc, 1024);
  for (const cplx zeta : {cplx(0.0, 0.5), cplx(0.0, -0.5), cplx(0.3, 0.2), cplx(5, 5)}) {
    const cplx u = curve.lift(zeta);
    EXPECT_EQ(curve.winding_number(u), 0);
    EXPECT_LT(dist(inverse_lift(u), zeta), 1e-12);
  }
}
