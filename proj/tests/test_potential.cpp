#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "arcwidom/potential.hpp"

using namespace arcwidom;

namespace {

std::shared_ptr<const EquilibriumData> equilibrium(const ArcSpec& s, std::size_t n = 1024) {
  auto map = std::make_shared<const ExteriorMap>(build_map_for(s, n));
  return std::make_shared<const EquilibriumData>(equilibrium_data(map, n));
}

/// integral over [0, pi] of g, split at interior log singularities.
template <class G>
double split_integral(G g, std::vector<double> breaks) {
  boost::math::quadrature::tanh_sinh<double> ts;
  breaks.push_back(0.0);
  breaks.push_back(kPi);
  std::sort(breaks.begin(), breaks.end());
  double v = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] > breaks[k]) v += ts.integrate(g, breaks[k], breaks[k + 1]);
  }
  return v;
}

/// exp of the arcsine average of log f over [-1, 1], with x = cos(theta).
double interval_szego_oracle(const WeightSpec& f) {
  std::vector<double> breaks;
  for (const auto& a : f.factors) {
    if (a.anchor.imag() == 0.0 && std::abs(a.anchor.real()) < 1.0) breaks.push_back(std::acos(a.anchor.real()));
  }
  // cos th - cos ph = -2 sin((th + ph)/2) sin((th - ph)/2) keeps on-arc anchors accurate
  auto log_f = [&](double th) {
    double acc = std::log(f.c);
    for (const auto& a : f.factors) {
      double l = 0.0;
      if (a.anchor.imag() == 0.0 && std::abs(a.anchor.real()) <= 1.0) {
        const double ph = std::acos(a.anchor.real());
        l = std::log(2.0) + std::log(std::abs(std::sin(0.5 * (th + ph)))) + std::log(std::abs(std::sin(0.5 * (th - ph))));
      } else {
        l = std::log(std::abs(std::cos(th) - a.anchor));
      }
      acc += a.exponent * l;
    }
    return acc;
  };
  return std::exp(split_integral([&](double th) { return log_f(th) / kPi; }, breaks));
}

}  // namespace

TEST(WeightSpec, ParsesProductForm) {
  const auto w = parse_weight_spec("2 * |z-(1,0.5)|^0.25*|z+(1,0)| * |z|^-1");
  ASSERT_EQ(w.factors.size(), 3u);
  EXPECT_EQ(w.c, 2.0);
  EXPECT_EQ(w.factors[0].anchor, cplx(1, 0.5));
  EXPECT_EQ(w.factors[1].anchor, cplx(-1, 0));
  EXPECT_EQ(w.factors[2].exponent, -1.0);
  const cplx z(0.3, -0.2);
  EXPECT_NEAR(w(z), 2 * std::pow(std::abs(z - cplx(1, 0.5)), 0.25) * std::abs(z + 1.0) / std::abs(z), 1e-14);
  const auto back = parse_weight_spec(w.to_string());
  EXPECT_EQ(back(z), w(z));
  EXPECT_TRUE(parse_weight_spec("1").is_constant());
}

TEST(WeightSpec, RejectsMalformedAndInadmissible) {
  EXPECT_THROW(parse_weight_spec("|z-(1,0|"), InputError);
  EXPECT_THROW(parse_weight_spec("|w-(1,0)|"), InputError);
  EXPECT_THROW(parse_weight_spec("-1"), InputError);
  EXPECT_THROW(parse_weight_spec("2 3"), InputError);
  const auto arc = normalize_endpoints(ArcSpec::segment({-1, 0}, {1, 0}));
  EXPECT_THROW(check_admissible(arc, parse_weight_spec("|z-(0,0)|^-0.5"), WeightRole::Density), InputError);
  EXPECT_NO_THROW(check_admissible(arc, parse_weight_spec("|z-(0,0)|^-0.4"), WeightRole::Density));
  EXPECT_THROW(check_admissible(arc, parse_weight_spec("|z-(0,0)|^-0.4"), WeightRole::SupWeight), InputError);
  EXPECT_NO_THROW(check_admissible(arc, parse_weight_spec("|z-(0,2)|^-3"), WeightRole::SupWeight));
}

TEST(Equilibrium, NodeCountGuard) {
  auto map = std::make_shared<const ExteriorMap>(build_map_for(ArcSpec::segment({-1, 0}, {1, 0}), 512));
  EXPECT_THROW(equilibrium_data(map, 300), InputError);
  EXPECT_THROW(equilibrium_data(map, 128), InputError);
}

TEST(Equilibrium, IntervalIsArcsine) {
  const auto eq = equilibrium(ArcSpec::segment({-1, 0}, {1, 0}));
  EXPECT_NEAR(eq->mass(), 1.0, 1e-14);
  for (std::size_t j = 0; j < eq->n; j += 97) {
    const double x = eq->nodes[j].real();
    EXPECT_NEAR(eq->omega[j], 1.0 / (kPi * std::sqrt(1 - x * x)), 1e-8 / std::sqrt(1 - x * x));
  }
  EXPECT_NEAR(nu_gamma(*eq), 2.0, 1e-12);
  EXPECT_NEAR(r_infinity_gamma(*eq), 2.0 / kPi, 1e-12);
  EXPECT_LT(symmetry_defect(*eq), 1e-12);
}

TEST(Equilibrium, CircularArcNuMatchesClosedForm) {
  for (const double alpha : {0.5, 1.0, kPi / 2, 2.0, 2.8}) {
    const auto eq = equilibrium(ArcSpec::circular(1.0, alpha));
    // the nearly closed arc converges more slowly in N
    EXPECT_NEAR(nu_gamma(*eq), 1.0 + std::cos(alpha / 2.0), alpha > 2.5 ? 1e-7 : 1e-9) << "alpha=" << alpha;
    EXPECT_GT(symmetry_defect(*eq), 0.1);
  }
}

TEST(Equilibrium, GreenFunctionPotentialForm) {
  const auto eq = equilibrium(ArcSpec::segment({-1, 0}, {1, 0}));
  for (const cplx z : {cplx(1.5, 0.5), cplx(0, -0.3), cplx(-4, 2)}) {
    const cplx sq = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
    const double oracle = std::log(std::max(std::abs(z + sq), std::abs(z - sq)));
    EXPECT_NEAR(green_potential_form(*eq, z), oracle, 1e-10);
    EXPECT_NEAR(green_eval(*eq->map, z), oracle, 1e-12);
  }
}

TEST(Szego, IntervalIntegralAgainstTanhSinh) {
  const auto eq = equilibrium(ArcSpec::segment({-1, 0}, {1, 0}));
  for (const char* spec : {"1", "3", "2*|z-(0.3,0.4)|^0.7*|z-(1.5,0)|^0.3", "|z-(1,0)|^0.5*|z+(1,0)|^0.5",
                           "|z-(0.2,0)|^-0.3*|z-(0,1)|^2"}) {
    const auto w = parse_weight_spec(spec);
    EXPECT_NEAR(szego_integral(*eq, w), interval_szego_oracle(w), 1e-9) << spec;
  }
  // sqrt(1 - x^2) has geometric mean 1/2 under the arcsine law
  EXPECT_NEAR(szego_integral(*eq, parse_weight_spec("|z-(1,0)|^0.5*|z+(1,0)|^0.5")), 0.5, 1e-14);
}

TEST(Szego, CircularArcIntegralAgainstSymmDensity) {
  const auto eq = equilibrium(ArcSpec::circular(1.0, 1.2));
  const auto symm = symm_oracle(eq->map->arc(), 128);
  // psi(cos th) sin th = sum c_k cos(k th) / pi is smooth
  auto smooth_psi = [&](double th) {
    double acc = 0.0;
    for (std::size_t k = 0; k < symm.coeffs.size(); ++k) acc += symm.coeffs[k] * std::cos(static_cast<double>(k) * th);
    return acc / kPi;
  };
  for (const char* spec : {"|z-(0,0)|", "|z-(0.5,-0.5)|^1.5", "|z-(2,1)|^-1"}) {
    const auto w = parse_weight_spec(spec);
    const double v = split_integral(
        [&](double th) { return w.log_value(symm.arc->original_point(std::cos(th))) * smooth_psi(th); }, {});
    EXPECT_NEAR(szego_integral(*eq, w), std::exp(v), 1e-9) << spec;
  }
}

TEST(Szego, QuadratureVariantsConverge) {
  const auto eq = equilibrium(ArcSpec::parametric({0, 1}, {0.3, 0, -0.3}), 2048);
  const auto w = parse_weight_spec("|z-(0.2,0.9)|^0.5");
  EXPECT_NEAR(szego_integral_quadrature(*eq, w), szego_integral(*eq, w), 1e-10);
  EXPECT_NEAR(r_infinity_quadrature(*eq, w), r_infinity(*eq, w), 1e-3 * r_infinity(*eq, w));
  EXPECT_NEAR(nu(*eq, w), kTwoPi * r_infinity(*eq, w) * eq->cap, 1e-14);
}

TEST(Szego, ExtremalFunctionAttainsNu) {
  const auto eq = equilibrium(ArcSpec::circular(1.0, 2.0));
  for (const char* spec : {"1", "|z-(0.3,0.2)|^2", "|z-(1,0)|^0.25"}) {
    const auto w = parse_weight_spec(spec);
    const SzegoData sz(eq, w);
    EXPECT_NEAR(extremality_norm(sz), sz.nu(), 1e-8 * sz.nu()) << spec;
    // normalized at infinity
    EXPECT_NEAR(std::abs(f_mu_eval(sz, {1e7, 2e7}) - 1.0), 0.0, 1e-5);
  }
  EXPECT_NEAR(trial_norm_constant(*eq, WeightSpec{}), 2.0, 1e-14);
  EXPECT_GT(trial_norm_constant(*eq, WeightSpec{}), nu_gamma(*eq));
}

TEST(Symm, ConditionAndCapacity) {
  const auto arc = normalize_endpoints(ArcSpec::circular(2.0, 0.9));
  const auto r = symm_oracle(arc, 96);
  EXPECT_NEAR(r.cap, 2.0 * std::sin(0.45), 1e-12);
  EXPECT_LT(r.condition, 1e4);
  EXPECT_THROW(symm_oracle(arc, 32), InputError);
}
