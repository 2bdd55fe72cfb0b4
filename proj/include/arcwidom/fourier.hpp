#pragma once

// Periodic-sample utilities shared by the map construction and the
// potential-theory routines: FFT wrappers, trigonometric interpolation on
// uniform (optionally offset) grids, the exterior Schwarz operator and
// truncated Laurent series in 1/w.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace arcwidom {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace fourier {

/// Signed frequency of FFT slot k for length n.
inline long frequency(std::size_t k, std::size_t n) {
  const auto kk = static_cast<long>(k);
  const auto nn = static_cast<long>(n);
  return kk < nn / 2 ? kk : kk - nn;
}

/// c_k = (1/N) sum_j v_j exp(-i k theta_j), theta_j = 2 pi (j + offset) / N,
/// returned in FFT order.
inline std::vector<cplx> coefficients(std::span<const cplx> v, double offset = 0.0) {
  const std::size_t n = v.size();
  std::vector<cplx> in(v.begin(), v.end());
  std::vector<cplx> out(n);
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] /= static_cast<double>(n);
    if (offset != 0.0) {
      const double phase = -kTwoPi * static_cast<double>(frequency(k, n)) * offset / static_cast<double>(n);
      out[k] *= std::polar(1.0, phase);
    }
  }
  return out;
}

inline std::vector<cplx> coefficients(std::span<const double> v, double offset = 0.0) {
  std::vector<cplx> c(v.begin(), v.end());
  return coefficients(std::span<const cplx>(c), offset);
}

/// Inverse of coefficients() on the unshifted grid.
inline std::vector<cplx> synthesize(std::span<const cplx> c) {
  const std::size_t n = c.size();
  std::vector<cplx> in(c.begin(), c.end());
  std::vector<cplx> out(n);
  Eigen::FFT<double> fft;
  fft.inv(out, in);
  for (auto& x : out) x *= static_cast<double>(n);
  return out;
}

/// Boundary values on the unshifted grid of the function analytic in |w| > 1
/// whose real part is v and whose value at infinity is real.
inline std::vector<cplx> schwarz_exterior(std::span<const double> v) {
  const std::size_t n = v.size();
  auto c = coefficients(v);
  std::vector<cplx> h(n, cplx{});
  h[0] = c[0];
  for (std::size_t k = 1; k < n; ++k) {
    const long f = frequency(k, n);
    if (f < 0) {
      h[k] = 2.0 * c[k];
    } else if (static_cast<std::size_t>(f) == n / 2) {
      h[k] = c[k];
    }
  }
  return synthesize(h);
}

/// Spectral derivative of real periodic samples on the unshifted grid.
inline std::vector<double> derivative(std::span<const double> v) {
  const std::size_t n = v.size();
  auto c = coefficients(v);
  for (std::size_t k = 0; k < n; ++k) {
    const long f = frequency(k, n);
    c[k] *= (static_cast<std::size_t>(std::abs(f)) == n / 2) ? cplx{} : cplx(0.0, static_cast<double>(f));
  }
  auto d = synthesize(c);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = d[k].real();
  return out;
}

}  // namespace fourier

/// Trigonometric interpolant of real periodic samples, evaluable anywhere.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;

  explicit TrigInterpolant(std::span<const double> samples, double offset = 0.0)
      : n_(samples.size()), c_(fourier::coefficients(samples, offset)) {}

  std::size_t size() const { return n_; }

  double operator()(double x) const {
    double acc = c_[0].real();
    const std::size_t half = n_ / 2;
    const cplx step = std::polar(1.0, x);
    cplx p = step;
    for (std::size_t k = 1; k < half; ++k, p *= step) acc += 2.0 * (c_[k] * p).real();
    if (n_ % 2 == 0 && n_ > 1) acc += (c_[half] * std::polar(1.0, static_cast<double>(half) * x)).real();
    return acc;
  }

  double derivative(double x) const {
    double acc = 0.0;
    const std::size_t half = n_ / 2;
    const cplx step = std::polar(1.0, x);
    cplx p = step;
    for (std::size_t k = 1; k < half; ++k, p *= step) {
      acc -= 2.0 * static_cast<double>(k) * (c_[k] * p).imag();
    }
    if (n_ % 2 == 0 && n_ > 1) {
      const double hh = static_cast<double>(half);
      acc -= hh * (c_[half] * std::polar(1.0, hh * x)).imag();
    }
    return acc;
  }

  /// Fourier coefficient of frequency k (|k| < n/2).
  cplx coefficient(long k) const {
    const auto nn = static_cast<long>(n_);
    return c_[static_cast<std::size_t>((k % nn + nn) % nn)];
  }

 private:
  std::size_t n_ = 0;
  std::vector<cplx> c_;
};

/// f(w) = lead * w + sum_{k>=0} tail[k] * w^{-k}, analytic for |w| > 1.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  LaurentSeries(cplx lead, std::vector<cplx> tail) : lead_(lead), tail_(std::move(tail)) {}

  cplx lead() const { return lead_; }
  const std::vector<cplx>& tail() const { return tail_; }

  cplx operator()(cplx w) const {
    const cplx inv = 1.0 / w;
    cplx acc{};
    for (std::size_t k = tail_.size(); k-- > 0;) acc = acc * inv + tail_[k];
    return lead_ * w + acc;
  }

  cplx derivative(cplx w) const {
    // d/dw sum tail[k] w^{-k} = -sum k tail[k] w^{-k-1}
    const cplx inv = 1.0 / w;
    cplx acc{};
    for (std::size_t k = tail_.size(); k-- > 1;) acc = acc * inv - static_cast<double>(k) * tail_[k];
    return lead_ + acc * inv * inv;
  }

 private:
  cplx lead_{};
  std::vector<cplx> tail_;
};

/// Exterior analytic function from the Fourier coefficients of its real
/// boundary part: f(w) = c_0 + 2 sum_{k>=1} c_{-k} w^{-k}.
inline LaurentSeries exterior_from_real_part(const TrigInterpolant& re, std::size_t terms) {
  std::vector<cplx> tail(terms + 1);
  tail[0] = cplx(re.coefficient(0).real(), 0.0);
  for (std::size_t k = 1; k <= terms; ++k) tail[k] = 2.0 * re.coefficient(-static_cast<long>(k));
  return {cplx{}, std::move(tail)};
}

}  // namespace arcwidom
