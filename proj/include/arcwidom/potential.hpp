#pragma once

// Equilibrium measure, Green function, Szego integrals, nu, the Szego
// function R_mu and the extremal function F_mu for an arc, plus a Symm
// integral-equation solver used to cross-check capacities and densities.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conformal.hpp"
#include "error.hpp"
#include "fourier.hpp"
#include "geometry.hpp"

namespace arcwidom {

// ---------------------------------------------------------------- weights

struct WeightFactor {
  cplx anchor;
  double exponent = 1.0;
};

/// f(z) = c * prod_k |z - a_k|^{s_k}, in original coordinates.
struct WeightSpec {
  double c = 1.0;
  std::vector<WeightFactor> factors;

  double operator()(cplx z) const {
    double v = c;
    for (const auto& f : factors) v *= std::pow(std::abs(z - f.anchor), f.exponent);
    return v;
  }

  double log_value(cplx z) const {
    double v = std::log(c);
    for (const auto& f : factors) v += f.exponent * std::log(std::abs(z - f.anchor));
    return v;
  }

  bool is_constant() const { return factors.empty(); }

  WeightSpec pow(double p) const {
    WeightSpec w{std::pow(c, p), factors};
    for (auto& f : w.factors) f.exponent *= p;
    return w;
  }

  WeightSpec scaled(double k) const { return {c * k, factors}; }

  std::string to_string() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    std::string s = buf;
    for (const auto& f : factors) {
      std::snprintf(buf, sizeof buf, " * |z-(%.17g,%.17g)|^%.17g", f.anchor.real(), f.anchor.imag(), f.exponent);
      s += buf;
    }
    return s;
  }
};

namespace detail {

class WeightParser {
 public:
  explicit WeightParser(std::string text) : s_(std::move(text)) {}

  WeightSpec parse() {
    WeightSpec w;
    skip();
    if (pos_ == s_.size()) return w;
    for (;;) {
      factor(w);
      skip();
      if (pos_ == s_.size()) break;
      expect('*');
    }
    if (!(w.c > 0.0) || !std::isfinite(w.c)) throw InputError("weight constant must be positive");
    return w;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char ch) {
    skip();
    return pos_ < s_.size() && s_[pos_] == ch;
  }

  void expect(char ch) {
    if (!peek(ch)) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("weight spec: " + why + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  double number() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  void factor(WeightSpec& w) {
    if (!peek('|')) {
      w.c *= number();
      return;
    }
    ++pos_;
    expect('z');
    WeightFactor f{cplx{}, 1.0};
    if (peek('-') || peek('+')) {
      const double sign = s_[pos_] == '-' ? 1.0 : -1.0;
      ++pos_;
      expect('(');
      const double re = number();
      expect(',');
      const double im = number();
      expect(')');
      f.anchor = sign * cplx(re, im);
    }
    expect('|');
    if (peek('^')) {
      ++pos_;
      f.exponent = number();
    }
    if (!std::isfinite(f.exponent)) fail("non-finite exponent");
    w.factors.push_back(f);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: factors joined by '*'; a factor is a number or |z-(re,im)|^s.
inline WeightSpec parse_weight_spec(const std::string& text) { return detail::WeightParser(text).parse(); }

/// Nearest arc parameter to a normalized point.
inline double nearest_arc_parameter(const NormalizedArc& arc, cplx zeta) {
  const std::size_t m = 2048;
  std::size_t best = 0;
  double dbest = INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
    const double d = std::abs(arc.point(t) - zeta);
    if (d < dbest) {
      dbest = d;
      best = i;
    }
  }
  const double h = 2.0 / static_cast<double>(m - 1);
  double lo = std::max(-1.0, -1.0 + h * (static_cast<double>(best) - 1.0));
  double hi = std::min(1.0, -1.0 + h * (static_cast<double>(best) + 1.0));
  // golden section on the bracket
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = std::abs(arc.point(x1) - zeta);
  double f2 = std::abs(arc.point(x2) - zeta);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(arc.point(x1) - zeta);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(arc.point(x2) - zeta);
    }
  }
  return 0.5 * (lo + hi);
}

inline double distance_to_arc(const NormalizedArc& arc, cplx zeta) {
  return std::abs(arc.point(nearest_arc_parameter(arc, zeta)) - zeta);
}

/// Anchor is on the arc when its normalized distance is below this.
inline constexpr double kOnArcTolerance = 1e-9;

enum class WeightRole { Density, SupWeight };

/// Szego-class and boundedness checks for the product form.
inline void check_admissible(const NormalizedArc& arc, const WeightSpec& w, WeightRole role) {
  if (!(w.c > 0.0) || !std::isfinite(w.c)) throw InputError("weight constant must be positive");
  for (const auto& f : w.factors) {
    const bool on_arc = distance_to_arc(arc, arc.to_normalized(f.anchor)) < kOnArcTolerance;
    if (!on_arc) continue;
    if (role == WeightRole::Density && !(f.exponent > -0.5)) {
      throw InputError("weight exponent at an on-arc anchor must exceed -1/2 (divergent log integral)");
    }
    if (role == WeightRole::SupWeight && f.exponent < 0.0) {
      throw InputError("sup-norm weight must be bounded on the arc (negative exponent at an on-arc anchor)");
    }
  }
}

// ---------------------------------------------------------------- equilibrium

struct EquilibriumData {
  std::shared_ptr<const ExteriorMap> map;
  std::size_t n = 0;
  /// Midpoint angles theta_j = 2 pi (j + 1/2) / N in the normalized w-plane.
  std::vector<double> theta;
  /// Partner angles over the same arc points.
  std::vector<double> theta_hat;
  std::vector<double> t;
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::vector<Side> side;
  std::vector<double> gplus;
  std::vector<double> gminus;
  std::vector<double> omega;
  /// g' of the other side over g' of the node's own side.
  std::vector<double> ratio;
  double cap = 0.0;

  double mass() const {
    double m = 0.0;
    for (const auto& v : weights) m += v;
    return m;
  }
};

inline EquilibriumData equilibrium_data(std::shared_ptr<const ExteriorMap> map, std::size_t n) {
  if (n < 256 || !is_power_of_two(n)) throw InputError("equilibrium grid needs N >= 256, a power of two");
  EquilibriumData eq;
  eq.map = map;
  eq.n = n;
  eq.cap = map->capacity();
  eq.theta.resize(n);
  eq.theta_hat.resize(n);
  eq.t.resize(n);
  eq.nodes.resize(n);
  eq.weights.assign(n, 1.0 / static_cast<double>(n));
  eq.side.resize(n);
  eq.gplus.resize(n);
  eq.gminus.resize(n);
  eq.omega.resize(n);
  eq.ratio.resize(n);
  const auto& arc = map->arc();
  for (std::size_t j = 0; j < n; ++j) {
    const double th = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    const double s = map->S(th);
    const double t = std::cos(s);
    const double th_hat = map->theta_of(kTwoPi - s);
    const double self = map->g_prime(th);
    const double r = map->S_prime(th) / map->S_prime(th_hat);
    const double other = self * r;
    eq.theta[j] = th;
    eq.theta_hat[j] = th_hat;
    eq.t[j] = t;
    eq.nodes[j] = arc.original_point(t);
    eq.side[j] = map->curve().side_of(s);
    eq.ratio[j] = r;
    if (eq.side[j] == Side::Plus) {
      eq.gplus[j] = self;
      eq.gminus[j] = other;
    } else {
      eq.gplus[j] = other;
      eq.gminus[j] = self;
    }
    eq.omega[j] = (self + other) / kTwoPi;
  }
  return eq;
}

inline EquilibriumData equilibrium_data(const ExteriorMap& map, std::size_t n) {
  return equilibrium_data(std::make_shared<const ExteriorMap>(map), n);
}

// ---------------------------------------------------------------- Green function

inline double green_eval(const ExteriorMap& map, cplx z) { return std::log(std::abs(map.phi(z))); }

/// -log Cap + integral of log|z - zeta| against the discrete equilibrium measure.
inline double green_potential_form(const EquilibriumData& eq, cplx z) {
  double acc = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) acc += eq.weights[j] * std::log(std::abs(z - eq.nodes[j]));
  return acc - std::log(eq.cap);
}

// ---------------------------------------------------------------- Szego quantities

/// nu(mu_Gamma) = 2 exp(mean log((1 + ratio)/2)).
///
/// log omega = log g'_self + log((1 + ratio)/2pi) on the circle, and the mean
/// of log g'_self = -log|Psi'| is -log Cap; the remaining factor is smooth.
inline double nu_gamma(const EquilibriumData& eq) {
  double acc = 0.0;
  for (const auto& r : eq.ratio) acc += std::log(0.5 * (1.0 + r));
  return 2.0 * std::exp(acc / static_cast<double>(eq.n));
}

inline double symmetry_defect(const EquilibriumData& eq) {
  double d = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) {
    d = std::max(d, std::abs(eq.gplus[j] - eq.gminus[j]) / (eq.gplus[j] + eq.gminus[j]));
  }
  return d;
}

/// Whether the weight anchor lies on the arc, and phi at it when it does not.
struct AnchorInfo {
  bool on_arc = false;
  cplx w{};  // phi(anchor) in the original w-plane
};

inline std::vector<AnchorInfo> classify_anchors(const ExteriorMap& map, const WeightSpec& w) {
  std::vector<AnchorInfo> out;
  for (const auto& f : w.factors) {
    AnchorInfo info;
    info.on_arc = distance_to_arc(map.arc(), map.arc().to_normalized(f.anchor)) < kOnArcTolerance;
    if (!info.on_arc) info.w = map.phi(f.anchor);
    out.push_back(info);
  }
  return out;
}

/// S(f) = exp(integral log f dmu_Gamma), from the identity
/// integral log|z - a| dmu_Gamma = log Cap + g(a).
inline double szego_integral(const EquilibriumData& eq, const WeightSpec& w) {
  check_admissible(eq.map->arc(), w, WeightRole::Density);
  const auto anchors = classify_anchors(*eq.map, w);
  double acc = std::log(w.c);
  for (std::size_t k = 0; k < w.factors.size(); ++k) {
    const double g = anchors[k].on_arc ? 0.0 : std::log(std::abs(anchors[k].w));
    acc += w.factors[k].exponent * (std::log(eq.cap) + g);
  }
  return std::exp(acc);
}

/// S(f) by the midpoint rule on the node set.
inline double szego_integral_quadrature(const EquilibriumData& eq, const WeightSpec& w) {
  check_admissible(eq.map->arc(), w, WeightRole::Density);
  double acc = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) acc += eq.weights[j] * w.log_value(eq.nodes[j]);
  return std::exp(acc);
}

inline double r_infinity_gamma(const EquilibriumData& eq) { return nu_gamma(eq) / (kTwoPi * eq.cap); }

/// R_mu(infinity) = R_{mu_Gamma}(infinity) S(f).
inline double r_infinity(const EquilibriumData& eq, const WeightSpec& w) {
  return r_infinity_gamma(eq) * szego_integral(eq, w);
}

/// exp(mean log(f omega)) by the midpoint rule.
inline double r_infinity_quadrature(const EquilibriumData& eq, const WeightSpec& w) {
  double acc = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) acc += eq.weights[j] * (w.log_value(eq.nodes[j]) + std::log(eq.omega[j]));
  return std::exp(acc);
}

/// nu(mu) = 2 pi R_mu(infinity) Cap.
inline double nu(const EquilibriumData& eq, const WeightSpec& w) { return kTwoPi * r_infinity(eq, w) * eq.cap; }

/// Szego function data for mu = f dmu_Gamma.
///
/// R_mu(z) = exp(e(w) + l_f(w)) / (pi Psi'(w)), w = phi(z), where e is the
/// exterior function with real boundary part log((1 + ratio)/2) and l_f the
/// one with real boundary part log f.
class SzegoData {
 public:
  SzegoData(std::shared_ptr<const EquilibriumData> eq, WeightSpec w) : eq_(std::move(eq)), w_(std::move(w)) {
    const auto& map = *eq_->map;
    S_ = szego_integral(*eq_, w_);
    nu_gamma_ = arcwidom::nu_gamma(*eq_);
    r_inf_ = nu_gamma_ / (kTwoPi * eq_->cap) * S_;
    nu_ = kTwoPi * r_inf_ * eq_->cap;
    anchors_ = classify_anchors(map, w_);
    std::vector<double> data(eq_->n);
    for (std::size_t j = 0; j < eq_->n; ++j) data[j] = std::log(0.5 * (1.0 + eq_->ratio[j]));
    boundary_e_ = TrigInterpolant(data, 0.5);
    e_ = exterior_from_real_part(boundary_e_, eq_->n / 2 - 1);
  }

  const EquilibriumData& eq() const { return *eq_; }
  const ExteriorMap& map() const { return *eq_->map; }
  const WeightSpec& weight() const { return w_; }
  double S() const { return S_; }
  double r_inf() const { return r_inf_; }
  double nu() const { return nu_; }
  double nu_gamma() const { return nu_gamma_; }

  /// e + l_f at a point of the original w-plane, |w| > 1.
  cplx log_r_mu_numerator(cplx w) const { return e_(map().arc().rotation() * w) + log_weight_part(w); }

  /// l_f(w): log c + sum s_k log A_k(w), continued from infinity.
  cplx log_weight_part(cplx w) const {
    cplx acc(std::log(w_.c), 0.0);
    for (std::size_t k = 0; k < w_.factors.size(); ++k) {
      acc += w_.factors[k].exponent * continued_log(k, w);
    }
    return acc;
  }

  cplx r_mu_at(cplx w) const { return std::exp(log_r_mu_numerator(w)) / (kPi * map().psi_prime(w)); }

  cplx f_mu_at(cplx w) const {
    return std::sqrt(kPi * r_inf_ * eq_->cap) * std::exp(-0.5 * log_r_mu_numerator(w));
  }

  /// |F_mu|^2 at a boundary angle of the normalized w-plane.
  double f_mu_boundary_abs2(double th) const {
    const double e_re = boundary_series_real(th);
    const cplx z = map().arc().original_point(map().t_of(th));
    return kPi * r_inf_ * eq_->cap * std::exp(-e_re) / w_(z);
  }

  /// Real part of the e-series evaluated on the unit circle.
  double boundary_series_real(double th) const { return e_(std::polar(1.0, th)).real(); }

  /// The factor A_k(w) whose log is continued; tends to Cap |phi(a_k)| at infinity.
  cplx anchor_factor(std::size_t k, cplx w) const {
    const cplx a = w_.factors[k].anchor;
    cplx v = (map().psi(w) - a) / w;
    if (!anchors_[k].on_arc) {
      const cplx wa = anchors_[k].w;
      v *= (1.0 - std::conj(wa) * w) / (w - wa) * (-wa / std::abs(wa));
    }
    return v;
  }

  /// log A_k continued along the ray from a large radius down to w.
  cplx continued_log(std::size_t k, cplx w) const {
    const double rw = std::abs(w);
    const cplx dir = w / rw;
    double r0 = std::max(4.0 * rw, 64.0);
    cplx prev = anchor_factor(k, r0 * dir);
    cplx acc = std::log(prev);
    while (std::abs(acc.imag()) > 0.5) {
      r0 *= 4.0;
      prev = anchor_factor(k, r0 * dir);
      acc = std::log(prev);
      if (r0 > 1e12) throw ConvergenceError("weight factor has no usable limit at infinity");
    }
    // step geometrically in (r - 1)
    double x = std::log(r0 - 1.0);
    const double x_end = std::log(std::max(rw - 1.0, 1e-300));
    double h = 0.25;
    double r = r0;
    while (r > rw) {
      double x_next = std::max(x - h, x_end);
      double r_next = x_next <= x_end ? rw : 1.0 + std::exp(x_next);
      const cplx cur = anchor_factor(k, r_next * dir);
      const cplx inc = std::log(cur / prev);
      if (std::abs(inc.imag()) > 0.3 && h > 1e-6) {
        h *= 0.5;
        continue;
      }
      acc += inc;
      prev = cur;
      x = x_next;
      r = r_next;
      if (std::abs(inc.imag()) < 0.05) h = std::min(2.0 * h, 1.0);
    }
    return acc;
  }

 private:
  std::shared_ptr<const EquilibriumData> eq_;
  WeightSpec w_;
  std::vector<AnchorInfo> anchors_;
  TrigInterpolant boundary_e_;
  LaurentSeries e_;
  double S_ = 0.0;
  double r_inf_ = 0.0;
  double nu_ = 0.0;
  double nu_gamma_ = 0.0;
};

inline SzegoData build_szego(std::shared_ptr<const EquilibriumData> eq, const WeightSpec& w) {
  return SzegoData(std::move(eq), w);
}

inline cplx r_mu_eval(const SzegoData& sz, cplx z) { return sz.r_mu_at(sz.map().phi(z)); }

inline cplx f_mu_eval(const SzegoData& sz, cplx z) { return sz.f_mu_at(sz.map().phi(z)); }

/// (1/N) sum_j (|F(theta_j)|^2 + |F(theta^_j)|^2) f(z_j): the two-sided H2 norm of F_mu.
inline double extremality_norm(const SzegoData& sz) {
  const auto& eq = sz.eq();
  double acc = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) {
    const double f = sz.weight()(eq.nodes[j]);
    acc += eq.weights[j] * (sz.f_mu_boundary_abs2(eq.theta[j]) + sz.f_mu_boundary_abs2(eq.theta_hat[j])) * f;
  }
  return acc;
}

/// The same norm for the trial function F = 1.
inline double trial_norm_constant(const EquilibriumData& eq, const WeightSpec& w) {
  double acc = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) acc += eq.weights[j] * 2.0 * w(eq.nodes[j]);
  return acc;
}

// ---------------------------------------------------------------- Symm oracle

struct SymmResult {
  double cap = 0.0;
  double cap_normalized = 0.0;
  double condition = 0.0;
  /// psi(t) = sum c_k T_k(t) / (pi sqrt(1 - t^2)), c_0 = 1.
  std::vector<double> coeffs;
  std::vector<double> t;
  /// Density against arc length at the collocation points.
  std::vector<double> density;
  std::shared_ptr<const NormalizedArc> arc;

  double psi(double tt) const {
    double acc = 0.0;
    double tkm1 = 1.0;
    double tk = tt;
    acc += coeffs[0];
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
      acc += coeffs[k] * tk;
      const double next = 2.0 * tt * tk - tkm1;
      tkm1 = tk;
      tk = next;
    }
    return acc / (kPi * std::sqrt((1.0 - tt) * (1.0 + tt)));
  }

  double density_at(double tt) const { return psi(tt) / std::abs(arc->original_d1(tt)); }
};

/// Chebyshev collocation for integral log|gamma(t) - gamma(tau)| psi(tau) dtau = V.
/// The log|t - tau| part is integrated exactly; log|divided difference| is
/// smooth and handled by Gauss-Chebyshev quadrature.
inline SymmResult symm_oracle(const NormalizedArc& arc, std::size_t m) {
  if (m < 64) throw InputError("Symm oracle needs at least 64 collocation points");
  const std::size_t nq = 4 * m;
  std::vector<double> tc(m);
  std::vector<double> tq(nq);
  for (std::size_t i = 0; i < m; ++i) tc[i] = std::cos((static_cast<double>(i) + 0.5) * kPi / static_cast<double>(m));
  for (std::size_t q = 0; q < nq; ++q) tq[q] = std::cos((static_cast<double>(q) + 0.5) * kPi / static_cast<double>(nq));

  // Chebyshev values at quadrature nodes: T_k(tq) = cos(k * angle)
  Eigen::MatrixXd tkq(nq, m);
  for (std::size_t q = 0; q < nq; ++q) {
    const double ang = (static_cast<double>(q) + 0.5) * kPi / static_cast<double>(nq);
    for (std::size_t k = 0; k < m; ++k) tkq(q, k) = std::cos(static_cast<double>(k) * ang);
  }
  Eigen::MatrixXd K(m, m);  // column k: response of T_k, column 0 holds V
  Eigen::VectorXd rhs(m);
  Eigen::VectorXd smooth(nq);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t q = 0; q < nq; ++q) smooth(q) = std::log(std::abs(arc.divided_difference(tc[i], tq[q])));
    const double ang = (static_cast<double>(i) + 0.5) * kPi / static_cast<double>(m);
    Eigen::VectorXd proj = (tkq.transpose() * smooth) / static_cast<double>(nq);
    // k = 0 term goes to the right-hand side with c_0 = 1
    rhs(i) = -(-std::log(2.0) + proj(0));
    K(i, 0) = -1.0;
    for (std::size_t k = 1; k < m; ++k) {
      K(i, static_cast<Eigen::Index>(k)) = -std::cos(static_cast<double>(k) * ang) / static_cast<double>(k) + proj(k);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < 1e13)) throw ConvergenceError("Symm system is ill-conditioned (condition " + std::to_string(cond) + ")");
  const Eigen::VectorXd x = svd.solve(rhs);

  SymmResult out;
  out.arc = std::make_shared<const NormalizedArc>(arc);
  out.condition = cond;
  out.cap_normalized = std::exp(x(0));
  out.cap = out.cap_normalized / arc.scale();
  out.coeffs.resize(m);
  out.coeffs[0] = 1.0;
  for (std::size_t k = 1; k < m; ++k) out.coeffs[k] = x(static_cast<Eigen::Index>(k));
  out.t = tc;
  out.density.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.density[i] = out.density_at(tc[i]);
  return out;
}

}  // namespace arcwidom
