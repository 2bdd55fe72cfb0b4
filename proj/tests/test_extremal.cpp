#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include <gtest/gtest.h>

#include "arcwidom/extremal.hpp"

using namespace arcwidom;

namespace {

std::shared_ptr<const EquilibriumData> equilibrium(const ArcSpec& s, std::size_t n = 1024) {
  auto map = std::make_shared<const ExteriorMap>(build_map_for(s, n));
  return std::make_shared<const EquilibriumData>(equilibrium_data(map, n));
}

/// Monic Chebyshev polynomial 2^{1-n} T_n(x) by the three-term recurrence.
cplx monic_chebyshev(std::size_t n, cplx x) {
  cplx a = 1.0;
  cplx b = x;
  for (std::size_t k = 1; k < n; ++k) {
    const cplx c = 2.0 * x * b - a;
    a = b;
    b = c;
  }
  return n == 0 ? 1.0 : b * std::pow(2.0, 1.0 - static_cast<double>(n));
}

}  // namespace

TEST(MonicPolynomial, MonomialForm) {
  const auto p = MonicPolynomial::from_monomial({2.0, 0.0, -4.0, 2.0});
  EXPECT_EQ(p.degree(), 3u);
  const cplx z(0.4, -1.1);
  EXPECT_LT(std::abs(p(z) - (1.0 - 2.0 * z * z + z * z * z)), 1e-14);
  EXPECT_THROW(MonicPolynomial::from_monomial({1.0, 0.0}), InputError);
}

TEST(Orthogonal, IntervalW2IsTwo) {
  const auto eq = equilibrium(ArcSpec::segment({-1, 0}, {1, 0}));
  const auto o = orthonormal_polys(*eq, WeightSpec{}, 40);
  EXPECT_NEAR(o.w2[0], 1.0, 1e-14);
  for (std::size_t n = 1; n <= 40; ++n) EXPECT_NEAR(o.w2[n] * o.w2[n], 2.0, 1e-10) << n;
  for (const double x : {-0.9, 0.1, 0.7}) EXPECT_LT(std::abs(o.polys[6](x) - monic_chebyshev(6, x)), 1e-12);
  EXPECT_THROW(orthonormal_polys(*eq, WeightSpec{}, 129), InputError);
}

TEST(Orthogonal, CircularArcW2ApproachesNu) {
  const auto eq = equilibrium(ArcSpec::circular(1.0, kPi / 2));
  const auto o = orthonormal_polys(*eq, WeightSpec{}, 40);
  const double nu = 1.0 + std::cos(kPi / 4);
  EXPECT_NEAR(o.w2[40] * o.w2[40], nu, 1e-8);
  EXPECT_NEAR(o.w2[20] * o.w2[20], nu, 1e-8);
}

TEST(Minimax, IntervalRecoversChebyshev) {
  const auto arc = normalize_endpoints(ArcSpec::segment({-1, 0}, {1, 0}));
  const auto grid = make_arc_grid(arc);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto r = chebyshev_minimax(grid, WeightSpec{}, n, 1e-5, 0.5);
    EXPECT_NEAR(r.tn, std::pow(2.0, 1.0 - static_cast<double>(n)), 1e-4 * r.tn) << n;
    EXPECT_LE(r.lower, r.tn);
    EXPECT_NEAR(r.winf, 2.0, 1e-4);
    for (const double x : {-0.8, 0.3}) EXPECT_NEAR(std::abs(r.poly(x) - monic_chebyshev(n, x)), 0.0, 1e-3 * r.tn);
  }
}

TEST(Minimax, SegmentScalesWithLength) {
  const cplx A(1, 1);
  const cplx B = A + std::polar(3.0, 1.0);
  const auto arc = normalize_endpoints(ArcSpec::segment(A, B));
  const auto r = chebyshev_minimax(make_arc_grid(arc), WeightSpec{}, 5, 1e-5, 0.75);
  EXPECT_NEAR(r.tn, 2.0 * std::pow(0.75, 5), 1e-4 * r.tn);
  // the rotated, rescaled monic Chebyshev polynomial, monic in the original variable
  const cplx mid = 0.5 * (A + B);
  const cplx half = 0.5 * (B - A);
  for (const cplx z : {mid + 100.0, A, cplx(0, 2)}) {
    const cplx oracle = std::pow(half, 5) * monic_chebyshev(5, (z - mid) / half);
    EXPECT_LT(std::abs(r.poly(z) - oracle), 1e-3 * std::max(r.tn, std::abs(oracle)));
  }
}

TEST(Minimax, CircularArcSitsBelowTheBound) {
  const auto eq = equilibrium(ArcSpec::circular(1.0, 2.0));
  const auto grid = make_arc_grid(eq->map->arc());
  const auto b = sup_bounds(*eq, WeightSpec{});
  const auto r = chebyshev_minimax(grid, WeightSpec{}, 20, 1e-4, eq->cap);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.winf, b.sahi + 0.05);
  EXPECT_GT(r.winf, 1.0);
}

TEST(Bounds, CircularArcClosedForms) {
  const double alpha = kPi / 2;
  const auto eq = equilibrium(ArcSpec::circular(1.0, alpha));
  const auto b = sup_bounds(*eq, WeightSpec{});
  const double nu = 1.0 + std::cos(alpha / 2);
  EXPECT_NEAR(b.upp, std::sqrt(2.0 * nu), 1e-10);
  EXPECT_NEAR(b.two_S, 2.0, 1e-14);
  EXPECT_NEAR(b.nu_limit, nu, 1e-10);
  EXPECT_LE(b.sahi, b.upp * (1 + 1e-12));
  EXPECT_LT(b.upp, b.two_S);
  EXPECT_THROW(sup_bounds(*eq, parse_weight_spec("|z-(1,0)|^-0.5")), InputError);
}

TEST(Qn, IntervalIsChebyshev) {
  const auto eq = equilibrium(ArcSpec::segment({-1, 0}, {1, 0}));
  const SzegoData sz(eq, WeightSpec{});
  const auto grid = make_arc_grid(eq->map->arc());
  for (const std::size_t n : {5u, 20u}) {
    const auto q = widom_qn(sz, n);
    EXPECT_LT(q.lead_error, 1e-6);
    EXPECT_NEAR(sup_norm(q.poly, WeightSpec{}, grid) / std::pow(0.5, static_cast<double>(n)), 2.0, 1e-6);
    for (const double x : {-0.6, 0.2}) EXPECT_LT(std::abs(q.poly(x) - monic_chebyshev(n, x)), 1e-8);
  }
  EXPECT_THROW(widom_qn(sz, 10, 1.005), DomainError);
}

TEST(Report, ParabolicRowsAreConsistent) {
  const auto eq = equilibrium(ArcSpec::parametric({0, 1}, {0.3, 0, -0.3}));
  const auto rep = widom_report(eq, WeightSpec{}, {4, 12});
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& row : rep.rows) {
    EXPECT_NEAR(row.winf, row.tn / std::pow(rep.cap, static_cast<double>(row.n)), 1e-12 * row.winf);
    EXPECT_LE(row.winf, rep.bounds.sahi + 0.05);
    EXPECT_GE(row.qn_ratio, row.winf * (1 - row.spread) - 1e-9);
  }
  EXPECT_NEAR(rep.rows[1].w2sq, rep.bounds.nu_limit, 0.05);
}

TEST(Report, WeightedIntervalApproachesTwoS) {
  const auto eq = equilibrium(ArcSpec::segment({-1, 0}, {1, 0}));
  const auto rho = parse_weight_spec("|z-(2,0)|^-1");
  const auto rep = widom_report(eq, rho, {16});
  EXPECT_NEAR(rep.rows[0].winf, rep.bounds.two_S, 0.02 * rep.bounds.two_S);
}
