#pragma once

// Exterior Riemann map of the lifted curve, built by a damped Newton
// iteration on the boundary correspondence, and the induced map for the arc.
//
// Psi~(e^{i theta}) = eta(S(theta)); the arc map is Psi = (Psi~ + 1/Psi~)/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fourier.hpp"
#include "geometry.hpp"

namespace arcwidom {

inline constexpr std::size_t kMapIterationCap = 200;
inline constexpr double kDefaultMapTol = 1e-12;

struct BoundaryCorrespondence {
  double t = 0.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double gplus = 0.0;
  double gminus = 0.0;
};

class ExteriorMap {
 public:
  ExteriorMap(std::shared_ptr<const LiftedCurve> curve, std::vector<double> s, std::size_t iterations)
      : curve_(std::move(curve)), s_(std::move(s)), iterations_(iterations) {
    const std::size_t n = s_.size();
    std::vector<double> periodic(n);
    std::vector<cplx> f(n);
    for (std::size_t j = 0; j < n; ++j) {
      periodic[j] = s_[j] - theta(j);
      f[j] = curve_->eta(s_[j]);
    }
    s_periodic_ = TrigInterpolant(periodic);
    const auto c = fourier::coefficients(std::span<const cplx>(f));
    double tail2 = 0.0;
    for (std::size_t k = 2; k < n / 2; ++k) tail2 += std::norm(c[k]);
    residual_ = std::sqrt(tail2);
    std::vector<cplx> tail(n / 2);
    tail[0] = c[0];
    for (std::size_t k = 1; k < n / 2; ++k) tail[k] = c[n - k];
    psi_tilde_ = LaurentSeries(c[1], std::move(tail));
    cap_tilde_ = c[1].real();
    double last = 0.0;
    for (std::size_t k = 3 * n / 8; k < n / 2; ++k) last = std::max(last, std::abs(c[n - k]));
    tail_ratio_ = last / std::abs(c[1]);
  }

  const LiftedCurve& curve() const { return *curve_; }
  const NormalizedArc& arc() const { return curve_->arc(); }
  std::size_t size() const { return s_.size(); }
  std::size_t iterations() const { return iterations_; }
  const std::vector<double>& correspondence() const { return s_; }
  const LaurentSeries& laurent() const { return psi_tilde_; }

  double cap_tilde() const { return cap_tilde_; }
  /// Capacity of the normalized arc (endpoints -1, +1).
  double cap_normalized() const { return 0.5 * cap_tilde_; }
  /// Capacity of the original arc.
  double capacity() const { return 0.5 * cap_tilde_ / arc().scale(); }
  /// l2 norm of the Fourier modes k >= 2 of eta(S(theta)).
  double residual() const { return residual_; }
  /// Largest modulus in the last quarter of the Laurent tail, relative to the lead.
  double tail_ratio() const { return tail_ratio_; }
  double lead_imaginary() const { return psi_tilde_.lead().imag(); }

  double theta(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(s_.size()); }

  /// Boundary correspondence S and its derivative at any angle.
  double S(double th) const { return th + s_periodic_(th); }
  double S_prime(double th) const { return 1.0 + s_periodic_.derivative(th); }

  /// Angle theta with S(theta) = s (mod 2 pi).
  double theta_of(double s) const {
    const std::size_t n = s_.size();
    const double s0 = s_[0];
    const double target = s0 + std::fmod(std::fmod(s - s0, kTwoPi) + kTwoPi, kTwoPi);
    auto it = std::upper_bound(s_.begin(), s_.end(), target);
    const auto j = static_cast<std::size_t>(std::distance(s_.begin(), it)) - 1;
    const double lo = s_[j];
    const double hi = j + 1 < n ? s_[j + 1] : s0 + kTwoPi;
    const double step = kTwoPi / static_cast<double>(n);
    double x = theta(j) + step * (target - lo) / (hi - lo);
    for (int k = 0; k < 50; ++k) {
      const double dx = (S(x) - target) / S_prime(x);
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    return std::fmod(std::fmod(x, kTwoPi) + kTwoPi, kTwoPi);
  }

  /// Arc parameter t and side for a boundary angle.
  double t_of(double th) const { return std::cos(S(th)); }
  Side side_of(double th) const { return curve_->side_of(S(th)); }

  bool near_endpoint(double th) const { return 1.0 - std::abs(t_of(th)) < kEndpointExclusion; }

  /// The other angle over the same arc point.
  double involution(double th) const {
    if (near_endpoint(th)) throw DomainError("boundary angle too close to an endpoint angle");
    return theta_of(kTwoPi - S(th));
  }

  /// S'(theta) / S'(theta^): the ratio of the other side's g' to this side's.
  double side_ratio(double th) const { return S_prime(th) / S_prime(involution(th)); }

  /// |Psi'(e^{i theta})| for the normalized arc.
  double psi_prime_abs_normalized(double th) const {
    const double s = S(th);
    return std::abs(arc().d1(std::cos(s))) * std::abs(std::sin(s)) * S_prime(th);
  }

  /// One-sided normal derivative of the Green function at the boundary
  /// angle, in original coordinates.
  double g_prime(double th) const { return arc().scale() / psi_prime_abs_normalized(th); }

  cplx psi_tilde(cplx w) const { return psi_tilde_(w); }
  cplx psi_tilde_prime(cplx w) const { return psi_tilde_.derivative(w); }

  cplx psi_normalized(cplx w) const { return inverse_lift(psi_tilde_(w)); }
  cplx psi_normalized_prime(cplx w) const {
    const cplx u = psi_tilde_(w);
    return 0.5 * psi_tilde_.derivative(w) * (1.0 - 1.0 / (u * u));
  }

  /// Inverse map for the original arc: Psi(w) ~ Cap w at infinity.
  cplx psi(cplx w) const { return arc().to_original(psi_normalized(arc().rotation() * w)); }
  cplx psi_prime(cplx w) const {
    return psi_normalized_prime(arc().rotation() * w) * arc().rotation() / arc().a();
  }

  /// Boundary point on the arc for a circle angle in the normalized w-plane.
  cplx boundary_point_normalized(double th) const { return arc().point(t_of(th)); }

  /// Solve Psi~(w) = u with |w| > 1.
  cplx invert_tilde(cplx u) const {
    const cplx c0 = psi_tilde_.tail().empty() ? cplx{} : psi_tilde_.tail()[0];
    cplx w;
    if (std::abs(u - c0) > 3.0 * cap_tilde_) {
      w = (u - c0) / cap_tilde_;
    } else {
      // nearest boundary sample, pushed slightly outward
      std::size_t best = 0;
      double dbest = INFINITY;
      for (std::size_t j = 0; j < s_.size(); ++j) {
        const double d = std::abs(curve_->eta(s_[j]) - u);
        if (d < dbest) {
          dbest = d;
          best = j;
        }
      }
      const double speed = std::abs(curve_->eta_prime(s_[best])) * S_prime(theta(best));
      w = std::polar(1.0 + std::max(dbest / speed, 1e-3), theta(best));
    }
    for (int it = 0; it < 200; ++it) {
      const cplx r = psi_tilde_(w) - u;
      cplx dw = r / psi_tilde_.derivative(w);
      cplx next = w - dw;
      while (std::abs(next) <= 1.0) {
        dw *= 0.5;
        next = w - dw;
      }
      w = next;
      if (std::abs(dw) < 1e-15 * std::abs(w)) break;
    }
    if (std::abs(psi_tilde_(w) - u) > 1e-9 * std::max(1.0, std::abs(u))) {
      throw ConvergenceError("inverse map evaluation did not converge");
    }
    return w;
  }

  /// phi for the normalized arc.
  cplx phi_normalized(cplx zeta) const { return invert_tilde(curve_->lift(zeta)); }

  /// phi for the original arc: phi(z) ~ z / Cap at infinity.
  cplx phi(cplx z) const { return std::conj(arc().rotation()) * phi_normalized(arc().to_normalized(z)); }

  BoundaryCorrespondence correspondence_at(double t) const {
    if (std::abs(std::abs(t) - 1.0) < kEndpointExclusion || std::abs(t) > 1.0) {
      throw DomainError("arc parameter too close to an endpoint");
    }
    BoundaryCorrespondence bc;
    bc.t = t;
    bc.theta_plus = theta_of(curve_->parameter_of(t, Side::Plus));
    bc.theta_minus = theta_of(curve_->parameter_of(t, Side::Minus));
    bc.gplus = g_prime(bc.theta_plus);
    bc.gminus = g_prime(bc.theta_minus);
    return bc;
  }

 private:
  std::shared_ptr<const LiftedCurve> curve_;
  std::vector<double> s_;
  std::size_t iterations_ = 0;
  TrigInterpolant s_periodic_;
  LaurentSeries psi_tilde_;
  double cap_tilde_ = 0.0;
  double residual_ = 0.0;
  double tail_ratio_ = 0.0;
};

namespace detail {

inline double high_mode_residual(const LiftedCurve& curve, const std::vector<double>& s) {
  const std::size_t n = s.size();
  std::vector<cplx> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = curve.eta(s[j]);
  const auto c = fourier::coefficients(std::span<const cplx>(f));
  double acc = 0.0;
  for (std::size_t k = 2; k < n / 2; ++k) acc += std::norm(c[k]);
  return std::sqrt(acc);
}

inline bool strictly_increasing(const std::vector<double>& s) {
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    if (!(s[j + 1] > s[j])) return false;
  }
  return s.back() < s.front() + kTwoPi;
}

}  // namespace detail

/// Newton iteration for the boundary correspondence S: the update solves the
/// linearized Riemann-Hilbert problem for the exterior map, with a step
/// length halved until S stays monotone and the high-mode residual drops.
inline ExteriorMap build_exterior_map(std::shared_ptr<const LiftedCurve> curve, double tol = kDefaultMapTol) {
  if (!(tol >= 1e-14 && tol <= 1e-6)) throw InputError("map tolerance must lie in [1e-14, 1e-6]");
  if (!curve->is_star_shaped()) {
    throw UnsupportedGeometry("lifted curve is not star-shaped about its centroid");
  }
  const std::size_t n = curve->size();
  std::vector<double> th(n);
  for (std::size_t j = 0; j < n; ++j) th[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
  std::vector<double> s = th;
  double res = detail::high_mode_residual(*curve, s);

  std::vector<double> beta(n);
  std::vector<double> q(n);
  std::vector<double> u(n);
  std::vector<cplx> f(n);
  std::vector<cplx> a(n);
  for (std::size_t it = 1; it <= kMapIterationCap; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      f[j] = curve->eta(s[j]);
      a[j] = curve->eta_prime(s[j]);
    }
    double prev = 0.0;
    double beta0 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double ang = std::arg(a[j]);
      if (j > 0) ang += kTwoPi * std::round((prev - ang) / kTwoPi);
      prev = ang;
      beta[j] = ang - th[j];
      beta0 += beta[j];
    }
    beta0 /= static_cast<double>(n);
    auto lam = fourier::schwarz_exterior(beta);
    for (auto& v : lam) v *= cplx(0.0, -1.0);
    double qmean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      q[j] = (std::conj(a[j]) * f[j]).imag() * std::exp(lam[j].real()) / std::abs(a[j]);
      qmean += q[j];
    }
    qmean /= static_cast<double>(n);
    const double c = -qmean / std::tan(beta0);
    const auto sq = fourier::schwarz_exterior(q);
    double umax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx g = std::exp(-lam[j]) * (cplx(0.0, 1.0) * sq[j] + c);
      u[j] = ((std::polar(1.0, th[j]) * g - f[j]) / a[j]).real();
      umax = std::max(umax, std::abs(u[j]));
    }
    if (!std::isfinite(umax)) throw ConvergenceError("map iteration produced a non-finite update");

    double step = 1.0;
    std::vector<double> trial(n);
    double trial_res = res;
    for (;;) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = s[j] + step * u[j];
      if (detail::strictly_increasing(trial)) {
        trial_res = detail::high_mode_residual(*curve, trial);
        if (trial_res < res || step < 1e-3) break;
      }
      step *= 0.5;
      if (step < 1e-8) throw ConvergenceError("map iteration line search failed");
    }
    s.swap(trial);
    res = trial_res;
    if (step * umax < tol) return ExteriorMap(std::move(curve), std::move(s), it);
  }
  throw ConvergenceError("map iteration did not converge within the iteration cap");
}

inline ExteriorMap build_exterior_map(const LiftedCurve& curve, double tol = kDefaultMapTol) {
  return build_exterior_map(std::make_shared<const LiftedCurve>(curve), tol);
}

/// Convenience: spec -> normalized arc -> lifted curve -> map.
inline ExteriorMap build_map_for(const ArcSpec& spec, std::size_t n, double tol = kDefaultMapTol) {
  auto arc = std::make_shared<const NormalizedArc>(normalize_endpoints(spec));
  auto curve = std::make_shared<const LiftedCurve>(arc, n);
  return build_exterior_map(curve, tol);
}

inline double capacity(const ExteriorMap& map) { return map.capacity(); }

/// Capacity of the original arc given the normalization scale |a|.
inline double capacity(const ExteriorMap& map, double scale) { return 0.5 * map.cap_tilde() / scale; }

inline cplx phi_eval(const ExteriorMap& map, cplx z) { return map.phi(z); }

inline std::pair<double, double> phi_prime_boundary(const ExteriorMap& map, double t) {
  const auto bc = map.correspondence_at(t);
  return {bc.gplus, bc.gminus};
}

inline double boundary_involution(const ExteriorMap& map, double theta) { return map.involution(theta); }

}  // namespace arcwidom
