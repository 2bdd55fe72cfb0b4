#pragma once

// Jordan arcs on [-1,1], endpoint normalization to -1/+1 and the lift
// u = z + sqrt(z^2 - 1) that opens the slit arc into a closed curve.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "fourier.hpp"

namespace arcwidom {

enum class ArcKind { Segment, CircularArc, Parametric };

enum class Side { Plus, Minus, Off };

inline constexpr std::size_t kMaxPolynomialDegree = 12;
inline constexpr std::size_t kInjectivitySamples = 2048;
/// Distance from t = +-1 below which side-dependent evaluations are refused.
inline constexpr double kEndpointExclusion = 1e-6;

struct ArcSpec {
  ArcKind kind = ArcKind::Segment;
  // segment
  cplx A{-1.0, 0.0};
  cplx B{1.0, 0.0};
  // circular arc: center + r * exp(i alpha t)
  double r = 1.0;
  double alpha = 0.0;
  cplx center{};
  // parametric: ascending coefficients in t
  std::vector<double> x;
  std::vector<double> y;

  static ArcSpec segment(cplx a, cplx b) {
    ArcSpec s;
    s.kind = ArcKind::Segment;
    s.A = a;
    s.B = b;
    return s;
  }

  static ArcSpec circular(double radius, double half_angle, cplx c = {}) {
    ArcSpec s;
    s.kind = ArcKind::CircularArc;
    s.r = radius;
    s.alpha = half_angle;
    s.center = c;
    return s;
  }

  static ArcSpec parametric(std::vector<double> xs, std::vector<double> ys) {
    ArcSpec s;
    s.kind = ArcKind::Parametric;
    s.x = std::move(xs);
    s.y = std::move(ys);
    return s;
  }

  /// Complex polynomial coefficients of a parametric arc.
  std::vector<cplx> complex_coefficients() const {
    std::vector<cplx> p(std::max(x.size(), y.size()), cplx{});
    for (std::size_t k = 0; k < x.size(); ++k) p[k] += x[k];
    for (std::size_t k = 0; k < y.size(); ++k) p[k] += cplx(0.0, y[k]);
    while (p.size() > 1 && p.back() == cplx{}) p.pop_back();
    return p;
  }

  cplx start() const {
    switch (kind) {
      case ArcKind::Segment: return A;
      case ArcKind::CircularArc: return center + std::polar(r, -alpha);
      case ArcKind::Parametric: break;
    }
    cplx acc{};
    const auto p = complex_coefficients();
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * -1.0 + p[k];
    return acc;
  }

  cplx end() const {
    switch (kind) {
      case ArcKind::Segment: return B;
      case ArcKind::CircularArc: return center + std::polar(r, alpha);
      case ArcKind::Parametric: break;
    }
    cplx acc{};
    for (const auto& c : complex_coefficients()) acc += c;
    return acc;
  }
};

namespace detail {

inline cplx json_complex(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError(std::string("field '") + name + "' must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<double> json_reals(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw InputError(std::string("field '") + name + "' must be a non-empty list");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(std::string("field '") + name + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline double json_real(const nlohmann::json& obj, const char* name) {
  if (!obj.contains(name) || !obj[name].is_number()) {
    throw InputError(std::string("missing numeric field '") + name + "'");
  }
  return obj[name].get<double>();
}

// Proper crossing of segments pq and rs.
inline bool segments_cross(cplx p, cplx q, cplx r, cplx s) {
  auto orient = [](cplx a, cplx b, cplx c) {
    const cplx u = b - a;
    const cplx v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
  };
  const double d1 = orient(p, q, r);
  const double d2 = orient(p, q, s);
  const double d3 = orient(r, s, p);
  const double d4 = orient(r, s, q);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline cplx horner(const std::vector<cplx>& p, double t) {
  cplx acc{};
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * t + p[k];
  return acc;
}

inline std::vector<cplx> derivative_coefficients(const std::vector<cplx>& p) {
  if (p.size() <= 1) return {cplx{}};
  std::vector<cplx> d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace detail

/// Points and derivatives of the raw (original-coordinate) parametrization.
inline cplx spec_point(const ArcSpec& s, double t) {
  switch (s.kind) {
    case ArcKind::Segment: return 0.5 * (s.A + s.B) + 0.5 * t * (s.B - s.A);
    case ArcKind::CircularArc: return s.center + std::polar(s.r, s.alpha * t);
    case ArcKind::Parametric: return detail::horner(s.complex_coefficients(), t);
  }
  return {};
}

inline cplx spec_derivative(const ArcSpec& s, double t) {
  switch (s.kind) {
    case ArcKind::Segment: return 0.5 * (s.B - s.A);
    case ArcKind::CircularArc: return cplx(0.0, s.alpha) * std::polar(s.r, s.alpha * t);
    case ArcKind::Parametric: return detail::horner(detail::derivative_coefficients(s.complex_coefficients()), t);
  }
  return {};
}

/// Polyline length of the arc on a uniform t grid.
inline double arc_length(const ArcSpec& s, std::size_t samples = kInjectivitySamples) {
  double len = 0.0;
  cplx prev = spec_point(s, -1.0);
  for (std::size_t i = 1; i < samples; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
    const cplx cur = spec_point(s, t);
    len += std::abs(cur - prev);
    prev = cur;
  }
  return len;
}

/// Field ranges, nonvanishing derivative and injectivity on sampled points.
inline void validate_arc(const ArcSpec& s) {
  switch (s.kind) {
    case ArcKind::Segment:
      if (!std::isfinite(s.A.real()) || !std::isfinite(s.A.imag()) || !std::isfinite(s.B.real()) ||
          !std::isfinite(s.B.imag())) {
        throw InputError("segment endpoints must be finite");
      }
      break;
    case ArcKind::CircularArc:
      if (!(s.r > 0.0) || !std::isfinite(s.r)) throw InputError("circular arc radius must be positive");
      if (!(s.alpha > 0.0 && s.alpha < kPi)) throw InputError("circular arc half-angle must lie in (0, pi)");
      break;
    case ArcKind::Parametric: {
      const auto p = s.complex_coefficients();
      if (p.size() - 1 > kMaxPolynomialDegree) throw InputError("parametric arcs are limited to degree 12");
      for (const auto& c : p) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("non-finite coefficient");
      }
      break;
    }
  }
  const cplx a = s.start();
  const cplx b = s.end();
  if (std::abs(b - a) <= 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) {
    throw InputError("arc endpoints coincide");
  }
  if (s.kind == ArcKind::Segment) return;

  const std::size_t n = kInjectivitySamples;
  std::vector<cplx> z(n);
  double dmin = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    z[i] = spec_point(s, t);
    dmin = std::min(dmin, std::abs(spec_derivative(s, t)));
  }
  const double len = arc_length(s, n);
  if (!(dmin > 1e-10 * len)) throw InputError("parametrization has a vanishing derivative");
  const double eps = 1e-9 * len;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(z[i] - z[j]) < eps) throw InputError("parametrization is not injective (sample collision)");
      if (j >= i + 2 && i + 1 < n && j + 1 < n && detail::segments_cross(z[i], z[i + 1], z[j], z[j + 1])) {
        throw InputError("parametrization is not injective (self-intersection)");
      }
    }
  }
}

inline ArcSpec arc_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InputError("arc spec must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  ArcSpec s;
  if (kind == "segment") {
    if (!j.contains("A") || !j.contains("B")) throw InputError("segment needs fields A and B");
    s = ArcSpec::segment(detail::json_complex(j["A"], "A"), detail::json_complex(j["B"], "B"));
  } else if (kind == "circular-arc") {
    cplx c{};
    if (j.contains("center")) c = detail::json_complex(j["center"], "center");
    s = ArcSpec::circular(detail::json_real(j, "r"), detail::json_real(j, "alpha"), c);
  } else if (kind == "parametric") {
    if (!j.contains("x") || !j.contains("y")) throw InputError("parametric arc needs fields x and y");
    s = ArcSpec::parametric(detail::json_reals(j["x"], "x"), detail::json_reals(j["y"], "y"));
  } else {
    throw InputError("unknown arc kind '" + kind + "'");
  }
  validate_arc(s);
  return s;
}

inline ArcSpec parse_arc_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed arc spec: ") + e.what());
  }
  return arc_spec_from_json(j);
}

inline nlohmann::json arc_spec_to_json(const ArcSpec& s) {
  auto pair = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  switch (s.kind) {
    case ArcKind::Segment: return {{"kind", "segment"}, {"A", pair(s.A)}, {"B", pair(s.B)}};
    case ArcKind::CircularArc:
      return {{"kind", "circular-arc"}, {"r", s.r}, {"alpha", s.alpha}, {"center", pair(s.center)}};
    case ArcKind::Parametric: return {{"kind", "parametric"}, {"x", s.x}, {"y", s.y}};
  }
  return {};
}

/// The arc after the affine change z -> a z + b that sends A, B to -1, +1.
class NormalizedArc {
 public:
  explicit NormalizedArc(ArcSpec spec) : spec_(std::move(spec)) {
    const cplx A = spec_.start();
    const cplx B = spec_.end();
    if (std::abs(B - A) == 0.0) throw InputError("arc endpoints coincide");
    a_ = 2.0 / (B - A);
    b_ = -(A + B) / (B - A);
    switch (spec_.kind) {
      case ArcKind::Segment:
        poly_ = {cplx{}, cplx{1.0, 0.0}};
        break;
      case ArcKind::CircularArc:
        k_ = a_ * spec_.r;
        m_ = a_ * spec_.center + b_;
        break;
      case ArcKind::Parametric:
        poly_ = spec_.complex_coefficients();
        for (auto& c : poly_) c *= a_;
        poly_[0] += b_;
        if (poly_.size() < 2) poly_.resize(2);
        break;
    }
    if (!poly_.empty()) dpoly_ = detail::derivative_coefficients(poly_);
    if (!dpoly_.empty()) ddpoly_ = detail::derivative_coefficients(dpoly_);
  }

  const ArcSpec& source() const { return spec_; }
  cplx a() const { return a_; }
  cplx b() const { return b_; }
  double scale() const { return std::abs(a_); }
  /// a / |a|: the rotation part of the normalization.
  cplx rotation() const { return a_ / std::abs(a_); }
  bool is_segment() const { return spec_.kind == ArcKind::Segment; }

  cplx point(double t) const {
    if (t == 1.0) return {1.0, 0.0};
    if (t == -1.0) return {-1.0, 0.0};
    if (is_circle()) return k_ * std::polar(1.0, spec_.alpha * t) + m_;
    return detail::horner(poly_, t);
  }

  cplx d1(double t) const {
    if (is_circle()) return cplx(0.0, spec_.alpha) * k_ * std::polar(1.0, spec_.alpha * t);
    return detail::horner(dpoly_, t);
  }

  cplx d2(double t) const {
    if (is_circle()) return -spec_.alpha * spec_.alpha * k_ * std::polar(1.0, spec_.alpha * t);
    return detail::horner(ddpoly_, t);
  }

  /// (gamma(t) - gamma(t0)) / (t - t0), continuous through t = t0.
  cplx divided_difference(double t, double t0) const {
    if (is_circle()) {
      const double x = spec_.alpha * (t - t0);
      return k_ * std::polar(1.0, spec_.alpha * t0) * cplx(0.0, spec_.alpha) * detail::sinc(0.5 * x) *
             std::polar(1.0, 0.5 * x);
    }
    // synthetic division by (t - t0)
    const std::size_t n = poly_.size();
    cplx bk{};
    cplx acc{};
    for (std::size_t k = n; k-- > 1;) {
      bk = poly_[k] + t0 * bk;
      acc = acc * t + bk;
    }
    return acc;
  }

  cplx to_original(cplx zeta) const { return (zeta - b_) / a_; }
  cplx to_normalized(cplx z) const { return a_ * z + b_; }
  cplx original_point(double t) const { return to_original(point(t)); }
  cplx original_d1(double t) const { return d1(t) / a_; }

 private:
  bool is_circle() const { return spec_.kind == ArcKind::CircularArc; }

  ArcSpec spec_;
  cplx a_{1.0, 0.0};
  cplx b_{};
  std::vector<cplx> poly_;
  std::vector<cplx> dpoly_;
  std::vector<cplx> ddpoly_;
  cplx k_{};
  cplx m_{};
};

inline NormalizedArc normalize_endpoints(const ArcSpec& spec) {
  validate_arc(spec);
  return NormalizedArc(spec);
}

/// u = z + sqrt(z^2 - 1) with u/z -> 2 at infinity, for the slit [-1, 1].
/// On (-1, 1) the side selects the boundary value from above (+) or below (-).
inline cplx joukowski_lift(cplx z, Side side = Side::Off) {
  const bool on_slit = z.imag() == 0.0 && std::abs(z.real()) <= 1.0;
  if (on_slit && std::abs(z.real()) == 1.0) {
    if (side != Side::Off) throw DomainError("lift side is undefined at an endpoint");
    return z;
  }
  if (on_slit) {
    const double y = std::sqrt((1.0 - z.real()) * (1.0 + z.real()));
    switch (side) {
      case Side::Plus: return {z.real(), y};
      case Side::Minus: return {z.real(), -y};
      case Side::Off: throw DomainError("point lies on the slit; a side is required");
    }
  }
  // both roots of u^2 - 2 z u + 1 = 0; the exterior one has |u| > 1
  const cplx r = std::abs(z) >= 1.0 ? z * std::sqrt(1.0 - 1.0 / (z * z)) : std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  const cplx u1 = z + r;
  const cplx u2 = z - r;
  return std::abs(u1) >= std::abs(u2) ? u1 : u2;
}

inline cplx inverse_lift(cplx u) { return 0.5 * (u + 1.0 / u); }

/// The closed curve L(arc): eta(s) = gamma(cos s) + i sin s sqrt(h(cos s)),
/// h(t) = (gamma(t)^2 - 1)/(t^2 - 1), traversed counter-clockwise.
class LiftedCurve {
 public:
  LiftedCurve(std::shared_ptr<const NormalizedArc> arc, std::size_t n) : arc_(std::move(arc)), n_(n) {
    if (n_ < 64 || !is_power_of_two(n_)) throw InputError("lifted curve needs N >= 64, a power of two");
    build_branch_table();
    sign_ = 1.0;
    // orientation from the signed area of a dense polygon
    const std::size_t m = kDense;
    std::vector<cplx> p(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = eta(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
    double area = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const cplx q = p[(j + 1) % m];
      area += p[j].real() * q.imag() - q.real() * p[j].imag();
    }
    if (area < 0.0) {
      sign_ = -1.0;
      std::reverse(p.begin() + 1, p.end());
    }
    dense_ = std::move(p);
    centroid_ = cplx{};
    for (const auto& q : dense_) centroid_ += q;
    centroid_ /= static_cast<double>(dense_.size());
    check_simple();
    resolve_sides();
  }

  const NormalizedArc& arc() const { return *arc_; }
  std::shared_ptr<const NormalizedArc> arc_ptr() const { return arc_; }
  std::size_t size() const { return n_; }
  /// +1 when eta0(s) is already counter-clockwise, -1 when it was reversed.
  double orientation() const { return sign_; }
  cplx centroid() const { return centroid_; }

  cplx eta(double s) const {
    const double ss = sign_ * s;
    const double c = std::cos(ss);
    return arc_->point(c) + cplx(0.0, std::sin(ss)) * sqrt_h(c);
  }

  cplx eta_prime(double s) const {
    const double c = std::cos(s);
    return cplx(0.0, 1.0) * arc_->d1(c) * eta(s) / (sign_ * sqrt_h(c));
  }

  /// u_j = eta(2 pi j / N).
  std::vector<cplx> samples() const {
    std::vector<cplx> u(n_);
    for (std::size_t j = 0; j < n_; ++j) u[j] = eta(kTwoPi * static_cast<double>(j) / static_cast<double>(n_));
    return u;
  }

  /// Curve parameter s of the lift of gamma(t) from the given side.
  double parameter_of(double t, Side side) const {
    if (side == Side::Off) throw DomainError("on-arc lift needs a side");
    const double s0 = std::acos(std::clamp(t, -1.0, 1.0));
    const bool upper = (side == Side::Plus) == plus_is_upper_;
    return upper ? s0 : kTwoPi - s0;
  }

  /// Side of the arc that eta(s) lies over.
  Side side_of(double s) const {
    const double m = std::fmod(std::fmod(s, kTwoPi) + kTwoPi, kTwoPi);
    const bool upper = m < kPi;
    return upper == plus_is_upper_ ? Side::Plus : Side::Minus;
  }

  cplx lift_on_arc(double t, Side side) const {
    if (std::abs(std::abs(t) - 1.0) < kEndpointExclusion) throw DomainError("arc parameter too close to an endpoint");
    return eta(parameter_of(t, side));
  }

  /// Winding number of the dense polygon around u.
  int winding_number(cplx u) const {
    double total = 0.0;
    const std::size_t m = dense_.size();
    for (std::size_t j = 0; j < m; ++j) total += std::arg((dense_[(j + 1) % m] - u) / (dense_[j] - u));
    return static_cast<int>(std::lround(total / kTwoPi));
  }

  /// Lift of a normalized point off the arc into the exterior of the curve.
  cplx lift(cplx zeta) const {
    if (arc_->is_segment()) return joukowski_lift(zeta, Side::Off);
    const cplx u0 = joukowski_lift(zeta, Side::Off);
    const cplx u1 = 1.0 / u0;
    const int w0 = winding_number(u0);
    const int w1 = winding_number(u1);
    if (w0 == 0 && w1 != 0) return u0;
    if (w1 == 0 && w0 != 0) return u1;
    throw DomainError("point is too close to the arc to resolve its lift");
  }

  /// arg(eta - centroid) strictly increasing along the curve.
  bool is_star_shaped() const {
    const std::size_t m = dense_.size();
    for (std::size_t j = 0; j < m; ++j) {
      const double step = std::arg((dense_[(j + 1) % m] - centroid_) / (dense_[j] - centroid_));
      if (!(step > 0.0)) return false;
    }
    return winding_number(centroid_) == 1;
  }

 private:
  static constexpr std::size_t kDense = 4096;
  static constexpr std::size_t kTable = 4097;

  cplx h(double t) const { return arc_->divided_difference(t, 1.0) * arc_->divided_difference(t, -1.0); }

  void build_branch_table() {
    // unwrapped arg h along t = cos(s), s in [0, pi]
    table_.resize(kTable);
    double prev = 0.0;
    for (std::size_t k = 0; k < kTable; ++k) {
      const double s = kPi * static_cast<double>(k) / static_cast<double>(kTable - 1);
      const double a = std::arg(h(std::cos(s)));
      if (k == 0) {
        prev = a;
      } else {
        prev = a + kTwoPi * std::round((prev - a) / kTwoPi);
      }
      table_[k] = prev;
    }
    const double shift = kTwoPi * std::round(table_[0] / kTwoPi);
    for (auto& v : table_) v -= shift;
  }

  cplx sqrt_h(double t) const {
    const cplx v = h(t);
    const double s = std::acos(std::clamp(t, -1.0, 1.0));
    const double x = s / kPi * static_cast<double>(kTable - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(x), kTable - 2);
    const double f = x - static_cast<double>(i);
    const double ref = (1.0 - f) * table_[i] + f * table_[i + 1];
    const double a0 = std::arg(v);
    const double a = a0 + kTwoPi * std::round((ref - a0) / kTwoPi);
    return std::polar(std::sqrt(std::abs(v)), 0.5 * a);
  }

  void check_simple() const {
    // segment crossings on a subsample
    const std::size_t m = 1024;
    const std::size_t stride = dense_.size() / m;
    std::vector<cplx> p(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = dense_[j * stride];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;
        if (detail::segments_cross(p[i], p[i + 1], p[j], p[(j + 1) % m])) {
          throw UnsupportedGeometry("lifted curve is not simple");
        }
      }
    }
  }

  void resolve_sides() {
    if (arc_->is_segment()) {
      plus_is_upper_ = true;
      return;
    }
    // push the midpoint slightly along the left normal i gamma'/|gamma'| and
    // see which lift of gamma(0) it approaches
    const cplx z0 = arc_->point(0.0);
    const cplx g1 = arc_->d1(0.0);
    const cplx nrm = cplx(0.0, 1.0) * g1 / std::abs(g1);
    const cplx up = eta(0.5 * kPi);
    const cplx down = eta(1.5 * kPi);
    const double eps = 1e-4 * std::abs(up - down);
    const cplx u = lift(z0 + eps * nrm);
    plus_is_upper_ = std::abs(u - up) < std::abs(u - down);
  }

  std::shared_ptr<const NormalizedArc> arc_;
  std::size_t n_;
  double sign_ = 1.0;
  std::vector<double> table_;
  std::vector<cplx> dense_;
  cplx centroid_{};
  bool plus_is_upper_ = true;
};

inline LiftedCurve build_lifted_curve(const NormalizedArc& arc, std::size_t n) {
  return LiftedCurve(std::make_shared<const NormalizedArc>(arc), n);
}

}  // namespace arcwidom
