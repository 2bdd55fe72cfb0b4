#pragma once

// Monic orthogonal polynomials, weighted Chebyshev polynomials by Lawson
// iteration, Widom's contour-integral polynomials Q_n and the sup-norm
// bounds they are compared with.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conformal.hpp"
#include "error.hpp"
#include "fourier.hpp"
#include "geometry.hpp"
#include "potential.hpp"

namespace arcwidom {

/// Monic polynomial in z. Stored either by monomial coefficients or, for
/// stable evaluation at high degree, as a combination of Arnoldi basis
/// polynomials in the shifted variable zeta = alpha z + beta.
class MonicPolynomial {
 public:
  MonicPolynomial() = default;

  static MonicPolynomial from_monomial(std::vector<cplx> coeffs) {
    if (coeffs.empty()) throw InputError("polynomial needs at least one coefficient");
    const cplx lead = coeffs.back();
    if (lead == cplx{}) throw InputError("leading coefficient vanishes");
    for (auto& c : coeffs) c /= lead;
    coeffs.back() = 1.0;
    MonicPolynomial p;
    p.degree_ = coeffs.size() - 1;
    p.monomial_ = std::move(coeffs);
    return p;
  }

  /// q_0 = kappa0, q_{k+1} = (zeta q_k - sum_{i<=k} H(i,k) q_i) / H(k+1,k);
  /// the polynomial is proportional to sum_k d_k q_k, rescaled to be monic in z.
  static MonicPolynomial from_arnoldi(cplx alpha, cplx beta, Eigen::MatrixXcd h, std::vector<cplx> d, double kappa0) {
    MonicPolynomial p;
    p.degree_ = d.size() - 1;
    p.alpha_ = alpha;
    p.beta_ = beta;
    p.h_ = std::move(h);
    p.kappa0_ = kappa0;
    // leading coefficient in z of q_n is kappa0 alpha^n / prod H(k+1,k)
    cplx lead = d.back() * kappa0;
    for (std::size_t k = 0; k < p.degree_; ++k) lead *= alpha / p.h_(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k));
    if (lead == cplx{}) throw InputError("leading coefficient vanishes");
    for (auto& c : d) c /= lead;
    p.d_ = std::move(d);
    return p;
  }

  std::size_t degree() const { return degree_; }

  /// The same polynomial in zeta re-read in the variable z with
  /// zeta = alpha z + beta, rescaled to be monic in z.
  MonicPolynomial with_variable(cplx alpha, cplx beta) const {
    if (!is_arnoldi()) throw InputError("variable change needs the Arnoldi form");
    return from_arnoldi(alpha, beta, h_, d_, kappa0_);
  }

  bool is_arnoldi() const { return monomial_.empty(); }

  cplx operator()(cplx z) const {
    if (!is_arnoldi()) {
      cplx acc{};
      for (std::size_t k = monomial_.size(); k-- > 0;) acc = acc * z + monomial_[k];
      return acc;
    }
    const cplx zeta = alpha_ * z + beta_;
    std::vector<cplx> q(degree_ + 1);
    q[0] = kappa0_;
    cplx acc = d_[0] * q[0];
    for (std::size_t k = 0; k < degree_; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      cplx v = zeta * q[k];
      for (std::size_t i = 0; i <= k; ++i) v -= h_(static_cast<Eigen::Index>(i), kk) * q[i];
      q[k + 1] = v / h_(kk + 1, kk);
      acc += d_[k + 1] * q[k + 1];
    }
    return acc;
  }

  /// Ascending monomial coefficients in z. Ill-conditioned at high degree.
  std::vector<cplx> monomial_coefficients() const {
    if (!is_arnoldi()) return monomial_;
    using Poly = std::vector<cplx>;
    std::vector<Poly> q(degree_ + 1);
    q[0] = {cplx(kappa0_, 0.0)};
    Poly out(degree_ + 1, cplx{});
    out[0] += d_[0] * kappa0_;
    for (std::size_t k = 0; k < degree_; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      Poly v(k + 2, cplx{});
      for (std::size_t i = 0; i <= k; ++i) {
        v[i] += beta_ * q[k][i];
        v[i + 1] += alpha_ * q[k][i];
      }
      for (std::size_t i = 0; i <= k; ++i) {
        for (std::size_t j = 0; j < q[i].size(); ++j) v[j] -= h_(static_cast<Eigen::Index>(i), kk) * q[i][j];
      }
      for (auto& c : v) c /= h_(kk + 1, kk);
      q[k + 1] = v;
      for (std::size_t j = 0; j < v.size(); ++j) out[j] += d_[k + 1] * v[j];
    }
    return out;
  }

 private:
  std::size_t degree_ = 0;
  std::vector<cplx> monomial_;
  cplx alpha_{1.0, 0.0};
  cplx beta_{};
  Eigen::MatrixXcd h_;
  std::vector<cplx> d_;
  double kappa0_ = 1.0;
};

namespace detail {

/// Weighted Arnoldi (Stieltjes) on points x with positive weights w, with
/// one reorthogonalization pass. Stops early on rank loss.
struct Arnoldi {
  Eigen::MatrixXcd q;  // columns: orthonormal basis values
  Eigen::MatrixXcd h;  // (n+1) x n
  double kappa0 = 0.0;
  std::size_t degree = 0;

  Arnoldi(const Eigen::VectorXcd& x, const Eigen::VectorXd& w, std::size_t n, double rank_tol = 1e-14) {
    const auto m = x.size();
    q.resize(m, static_cast<Eigen::Index>(n + 1));
    h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(std::max<std::size_t>(n, 1)));
    const double mass = w.sum();
    kappa0 = 1.0 / std::sqrt(mass);
    q.col(0).setConstant(cplx(kappa0, 0.0));
    const double scale = x.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      Eigen::VectorXcd v = x.cwiseProduct(q.col(kk));
      auto basis = q.leftCols(kk + 1);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd c = basis.adjoint() * w.cwiseProduct(v).eval();
        v -= basis * c;
        h.col(kk).head(kk + 1) += c;
      }
      const double nrm = std::sqrt((w.array() * v.array().abs2()).sum());
      if (!(nrm > rank_tol * std::max(scale, 1.0))) break;
      h(kk + 1, kk) = nrm;
      q.col(kk + 1) = v / nrm;
      degree = k + 1;
    }
  }

  /// Weighted L2 norm of the monic (in x) polynomial of degree k.
  double monic_norm(std::size_t k) const {
    double v = 1.0 / kappa0;
    for (std::size_t i = 0; i < k; ++i) v *= h(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)).real();
    return v;
  }

  MonicPolynomial monic(std::size_t k, cplx alpha, cplx beta) const {
    std::vector<cplx> d(k + 1, cplx{});
    d[k] = 1.0;
    return MonicPolynomial::from_arnoldi(alpha, beta,
                                         h.topLeftCorner(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(std::max<std::size_t>(k, 1))),
                                         std::move(d), kappa0);
  }
};

}  // namespace detail

// ---------------------------------------------------------------- orthogonal polynomials

struct OrthoResult {
  /// ||P_n|| in L2(mu), original coordinates, n = 0..degree.
  std::vector<double> norms;
  /// W_{2,n} = ||P_n|| / Cap^n.
  std::vector<double> w2;
  std::vector<MonicPolynomial> polys;
  std::size_t degree = 0;
  std::string warning;
};

/// Monic orthogonal polynomials for mu = f mu_Gamma discretized on the
/// equilibrium nodes (weights f(z_j)/N).
inline OrthoResult orthonormal_polys(const EquilibriumData& eq, const WeightSpec& f, std::size_t nmax) {
  if (nmax > eq.n / 8) throw InputError("degree exceeds the resolution guard N/8");
  check_admissible(eq.map->arc(), f, WeightRole::Density);
  const auto& arc = eq.map->arc();
  const auto m = static_cast<Eigen::Index>(eq.n);
  Eigen::VectorXcd x(m);
  Eigen::VectorXd w(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    x(j) = arc.to_normalized(eq.nodes[jj]);
    w(j) = eq.weights[jj] * f(eq.nodes[jj]);
  }
  const detail::Arnoldi ar(x, w, nmax);
  OrthoResult out;
  out.degree = ar.degree;
  if (ar.degree < nmax) {
    out.warning = "numerical rank loss: degree truncated to " + std::to_string(ar.degree);
  }
  const double capn = eq.map->cap_normalized();
  for (std::size_t k = 0; k <= ar.degree; ++k) {
    const double norm_n = ar.monic_norm(k);
    out.norms.push_back(norm_n / std::pow(arc.scale(), static_cast<double>(k)));
    out.w2.push_back(norm_n / std::pow(capn, static_cast<double>(k)));
    out.polys.push_back(ar.monic(k, arc.a(), arc.b()));
  }
  return out;
}

// ---------------------------------------------------------------- sup-norm grid

struct ArcGrid {
  std::shared_ptr<const NormalizedArc> arc;
  std::vector<double> t;
  std::vector<cplx> z;     // original coordinates
  std::vector<cplx> zeta;  // normalized coordinates
};

/// Chebyshev points in t plus geometric refinement toward both endpoints.
inline ArcGrid make_arc_grid(const NormalizedArc& arc, std::size_t m = 4096, std::size_t per_decade = 64,
                             double min_gap = 1e-8) {
  ArcGrid g;
  g.arc = std::make_shared<const NormalizedArc>(arc);
  std::vector<double> t;
  for (std::size_t i = 0; i < m; ++i) t.push_back(std::cos(kPi * static_cast<double>(i) / static_cast<double>(m - 1)));
  const double decades = -std::log10(min_gap);
  const auto extra = static_cast<std::size_t>(std::lround(decades * static_cast<double>(per_decade)));
  for (std::size_t i = 0; i < extra; ++i) {
    const double d = min_gap * std::pow(10.0, static_cast<double>(i) / static_cast<double>(per_decade));
    t.push_back(1.0 - d);
    t.push_back(-1.0 + d);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  g.t = t;
  for (const double tt : t) {
    g.zeta.push_back(arc.point(tt));
    g.z.push_back(arc.original_point(tt));
  }
  return g;
}

/// max_j rho |P| over the grid, refined by a parabola through the largest
/// sample and its neighbours.
inline double sup_norm(const MonicPolynomial& p, const WeightSpec& rho, const ArcGrid& grid) {
  const std::size_t m = grid.t.size();
  std::vector<double> v(m);
  std::size_t jmax = 0;
  for (std::size_t j = 0; j < m; ++j) {
    v[j] = rho(grid.z[j]) * std::abs(p(grid.z[j]));
    if (v[j] > v[jmax]) jmax = j;
  }
  double best = v[jmax];
  if (jmax == 0 || jmax + 1 >= m) return best;
  const double x0 = grid.t[jmax - 1];
  const double x1 = grid.t[jmax];
  const double x2 = grid.t[jmax + 1];
  const double f0 = v[jmax - 1];
  const double f1 = v[jmax];
  const double f2 = v[jmax + 1];
  const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
  const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
  if (den != 0.0) {
    const double xs = std::clamp(x1 - 0.5 * num / den, x0, x2);
    const cplx z = grid.arc->original_point(xs);
    best = std::max(best, rho(z) * std::abs(p(z)));
  }
  return best;
}

// ---------------------------------------------------------------- Chebyshev minimax

struct MinimaxResult {
  MonicPolynomial poly;
  /// Upper estimate of t_n: the weighted sup norm of poly (original coordinates).
  double tn = 0.0;
  /// Lawson lower bound for t_n.
  double lower = 0.0;
  double winf = 0.0;
  double spread = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

struct LawsonState {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
};

// Lawson on a point set: w <- w |e|, where e = rho P and P is the weighted
// least-squares monic polynomial for w rho^2.
inline LawsonState lawson(const Eigen::VectorXcd& x, const Eigen::VectorXd& rho, std::size_t n, Eigen::VectorXd& w,
                          std::size_t maxit, double spread) {
  LawsonState st;
  for (std::size_t it = 0; it < maxit; ++it) {
    const Eigen::VectorXd wr = w.cwiseProduct(rho.cwiseAbs2());
    const Arnoldi ar(x, wr, n, 0.0);
    // monic values: q_n * prod H / kappa0
    const Eigen::VectorXd e = (ar.q.col(static_cast<Eigen::Index>(n)) * ar.monic_norm(n)).cwiseAbs().cwiseProduct(rho);
    st.lower = std::sqrt((w.array() * e.array().square()).sum() / w.sum());
    st.upper = e.maxCoeff();
    st.iterations = it + 1;
    if ((st.upper - st.lower) / st.upper < spread) break;
    w = w.cwiseProduct(e);
    w /= w.sum();
  }
  return st;
}

inline std::vector<std::size_t> local_peaks(const std::vector<double>& e) {
  std::vector<std::size_t> out;
  const std::size_t m = e.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double l = j > 0 ? e[j - 1] : -1.0;
    const double r = j + 1 < m ? e[j + 1] : -1.0;
    if (e[j] >= l && e[j] >= r) out.push_back(j);
  }
  return out;
}

}  // namespace detail

/// Lawson iteration accelerated by restricting it to an exchange set of the
/// current error peaks. The Lawson value on any subset bounds t_n from
/// below; the sup of the current polynomial on the full grid bounds it from
/// above; iteration stops when the two agree to the relative spread tol.
inline MinimaxResult chebyshev_minimax(const ArcGrid& grid, const WeightSpec& rho, std::size_t n, double tol = 1e-4,
                                       double cap = 0.0, std::size_t outer_cap = 30) {
  if (n == 0) throw InputError("degree must be positive");
  if (grid.t.size() < 30 * n) throw InputError("grid too coarse for the requested degree");
  if (!(tol > 0.0)) throw InputError("spread tolerance must be positive");
  check_admissible(*grid.arc, rho, WeightRole::SupWeight);
  const auto m = static_cast<Eigen::Index>(grid.t.size());
  Eigen::VectorXcd x(m);
  Eigen::VectorXd r(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    x(j) = grid.zeta[static_cast<std::size_t>(j)];
    r(j) = rho(grid.z[static_cast<std::size_t>(j)]);
  }
  const auto& arc = *grid.arc;
  const double scale_n = std::pow(arc.scale(), static_cast<double>(n));

  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  auto st = detail::lawson(x, r, n, w, 40, tol);
  std::size_t total = st.iterations;
  double best_lower = st.lower;

  auto full_poly = [&](const Eigen::VectorXcd& xs, const Eigen::VectorXd& ws) {
    const detail::Arnoldi ar(xs, ws, n, 0.0);
    return ar.monic(n, cplx(1.0, 0.0), cplx{});
  };
  MonicPolynomial pz = full_poly(x, w.cwiseProduct(r.cwiseAbs2()));
  std::vector<double> e(static_cast<std::size_t>(m));
  auto errors = [&](const MonicPolynomial& p) {
    double mx = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      e[static_cast<std::size_t>(j)] = r(j) * std::abs(p(x(j)));
      mx = std::max(mx, e[static_cast<std::size_t>(j)]);
    }
    return mx;
  };
  double upper = errors(pz);
  MonicPolynomial best_poly = pz;
  double best_upper = upper;

  // exchange set with Lawson weights carried over between rounds
  std::vector<std::size_t> active;
  std::vector<double> carried;
  bool converged = (best_upper - best_lower) / best_upper < tol;
  for (std::size_t round = 0; round < outer_cap && !converged; ++round) {
    std::vector<std::size_t> next = active;
    for (const auto j : detail::local_peaks(e)) {
      if (e[j] >= 0.3 * upper) next.push_back(j);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    // the subset must carry more than n points, otherwise a degree-n
    // polynomial can vanish on it
    if (next.size() < n + 2) {
      std::vector<std::size_t> order(static_cast<std::size_t>(m));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return e[a] > e[b]; });
      for (std::size_t k = 0; k < order.size() && next.size() < 2 * n + 2; ++k) next.push_back(order[k]);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
    }
    const auto k = static_cast<Eigen::Index>(next.size());
    Eigen::VectorXcd xs(k);
    Eigen::VectorXd rs(k);
    Eigen::VectorXd ws(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto g = next[static_cast<std::size_t>(i)];
      xs(i) = x(static_cast<Eigen::Index>(g));
      rs(i) = r(static_cast<Eigen::Index>(g));
      const auto it = std::lower_bound(active.begin(), active.end(), g);
      const bool old = it != active.end() && *it == g;
      ws(i) = old ? carried[static_cast<std::size_t>(it - active.begin())] : 1.0 / static_cast<double>(k);
    }
    ws /= ws.sum();
    const auto sub = detail::lawson(xs, rs, n, ws, 5000, tol / 4.0);
    total += sub.iterations;
    best_lower = std::max(best_lower, sub.lower);
    active = std::move(next);
    carried.assign(ws.data(), ws.data() + ws.size());
    pz = full_poly(xs, ws.cwiseProduct(rs.cwiseAbs2()));
    upper = errors(pz);
    if (upper < best_upper) {
      best_upper = upper;
      best_poly = pz;
    }
    converged = (best_upper - best_lower) / best_upper < tol;
  }

  MinimaxResult res;
  res.poly = best_poly.with_variable(arc.a(), arc.b());
  res.iterations = total;
  res.converged = converged;
  res.tn = std::max(sup_norm(res.poly, rho, grid), best_upper / scale_n);
  res.lower = best_lower / scale_n;
  res.spread = (res.tn - res.lower) / res.tn;
  if (cap > 0.0) res.winf = res.tn / std::pow(cap, static_cast<double>(n));
  return res;
}

// ---------------------------------------------------------------- Widom's Q_n

struct QnResult {
  MonicPolynomial poly;
  double r = 0.0;
  std::size_t quadrature_points = 0;
  /// |measured leading coefficient * Cap^n - 1| before normalization.
  double lead_error = 0.0;
  /// Relative misfit of the degree-n projection of the contour values.
  double fit_residual = 0.0;
};

inline double default_contour_level(std::size_t n) {
  return std::clamp(1.0 + kTwoPi / static_cast<double>(n), 1.05, 1.5);
}

/// Q_n(z) = (1/2 pi i) contour integral of F_mu(w) w^n / (w - z), taken over
/// the image of |w| = r and written in the w variable:
/// (1/2 pi) int F(w) w^n Psi'(w) w / (Psi(w) - z) dtheta.
/// F_mu is the extremal function of sz (for a sup weight rho use f = rho^2).
/// Values at Chebyshev points of the arc are projected onto a degree-n
/// Arnoldi basis; the trapezoid count doubles until values settle to tol.
inline QnResult widom_qn(const SzegoData& sz, std::size_t n, double r = 0.0, double tol = 1e-8) {
  if (n == 0) throw InputError("degree must be positive");
  if (r == 0.0) r = default_contour_level(n);
  if (r - 1.0 < 0.01) throw DomainError("contour level too close to the arc (r - 1 < 0.01)");
  const auto& map = sz.map();
  const auto& arc = map.arc();
  const cplx rot = arc.rotation();
  const std::size_t k = std::max<std::size_t>(4 * n, 64);
  Eigen::VectorXcd zeta(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    zeta(static_cast<Eigen::Index>(i)) = arc.point(std::cos((static_cast<double>(i) + 0.5) * kPi / static_cast<double>(k)));
  }
  // integrand in the normalized plane; F is defined on the original w-plane
  auto add_points = [&](std::size_t mq, std::size_t first, std::size_t step, Eigen::VectorXcd& acc) {
    for (std::size_t j = first; j < mq; j += step) {
      const cplx w = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(mq));
      const cplx f = sz.f_mu_at(std::conj(rot) * w);
      const cplx num = f * std::pow(w, static_cast<double>(n)) * map.psi_normalized_prime(w) * w;
      const cplx p = map.psi_normalized(w);
      for (Eigen::Index i = 0; i < zeta.size(); ++i) acc(i) += num / (p - zeta(i));
    }
  };
  std::size_t mq = 256;
  while (mq < 8 * n) mq *= 2;
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(zeta.size());
  add_points(mq, 0, 1, acc);
  Eigen::VectorXcd values = acc / static_cast<double>(mq);
  for (;;) {
    if (mq > (1u << 16)) throw ConvergenceError("contour quadrature did not settle");
    add_points(2 * mq, 1, 2, acc);
    mq *= 2;
    const Eigen::VectorXcd next = acc / static_cast<double>(mq);
    const double change = (next - values).cwiseAbs().maxCoeff() / next.cwiseAbs().maxCoeff();
    values = next;
    if (change < tol) break;
  }

  const Eigen::VectorXd w = Eigen::VectorXd::Constant(zeta.size(), 1.0 / static_cast<double>(k));
  const detail::Arnoldi ar(zeta, w, n);
  if (ar.degree < n) throw ConvergenceError("fit basis lost rank");
  const Eigen::VectorXcd d = ar.q.adjoint() * w.cwiseProduct(values).eval();
  const Eigen::VectorXcd fit = ar.q * d;
  QnResult out;
  out.r = r;
  out.quadrature_points = mq;
  out.fit_residual = (fit - values).norm() / values.norm();
  // leading coefficient in zeta of sum d_k q_k
  const cplx lead = d(static_cast<Eigen::Index>(n)) / ar.monic_norm(n);
  out.lead_error = std::abs(lead * std::pow(map.cap_normalized(), static_cast<double>(n)) - 1.0);
  std::vector<cplx> dv(d.data(), d.data() + d.size());
  out.poly = MonicPolynomial::from_arnoldi(arc.a(), arc.b(), ar.h, std::move(dv), ar.kappa0);
  return out;
}

// ---------------------------------------------------------------- bounds

struct SupBounds {
  double upp = 0.0;
  double sahi = 0.0;
  double two_S = 0.0;
  /// nu(mu_Gamma) S(rho^2): the limit of W_{2,n}^2 for mu = rho^2 mu_Gamma.
  double nu_limit = 0.0;
  double S = 0.0;
  double nu_gamma = 0.0;
};

/// upp = 2 sqrt(pi R Cap) S(rho), sahi = sqrt(2 pi R Cap) S(rho) sup (sqrt g+ + sqrt g-)/sqrt(g+ + g-),
/// with R = R_{mu_Gamma}(infinity), so that 2 pi R Cap = nu(mu_Gamma).
inline SupBounds sup_bounds(const EquilibriumData& eq, const WeightSpec& rho) {
  check_admissible(eq.map->arc(), rho, WeightRole::SupWeight);
  SupBounds b;
  b.nu_gamma = nu_gamma(eq);
  b.S = szego_integral(eq, rho);
  double best = 0.0;
  for (std::size_t j = 0; j < eq.n; ++j) {
    const double gp = eq.gplus[j];
    const double gm = eq.gminus[j];
    best = std::max(best, (std::sqrt(gp) + std::sqrt(gm)) / std::sqrt(gp + gm));
  }
  b.upp = std::sqrt(2.0 * b.nu_gamma) * b.S;
  b.sahi = std::sqrt(b.nu_gamma) * b.S * best;
  b.two_S = 2.0 * b.S;
  b.nu_limit = b.nu_gamma * b.S * b.S;
  return b;
}

// ---------------------------------------------------------------- report

struct WidomRow {
  std::size_t n = 0;
  double w2sq = 0.0;
  double winf = 0.0;
  double tn = 0.0;
  double qn_ratio = 0.0;
  double spread = 0.0;
  bool converged = false;
};

struct WidomReport {
  double cap = 0.0;
  SupBounds bounds;
  std::vector<WidomRow> rows;
  std::vector<std::string> warnings;
};

/// W_{2,n} for mu = rho^2 mu_Gamma, W_{inf,n} for rho and ||rho Q_n|| / Cap^n
/// at each requested degree.
inline WidomReport widom_report(std::shared_ptr<const EquilibriumData> eq, const WeightSpec& rho,
                                const std::vector<std::size_t>& degrees, double tol = 1e-4) {
  WidomReport rep;
  rep.cap = eq->cap;
  rep.bounds = sup_bounds(*eq, rho);
  const WeightSpec f = rho.pow(2.0);
  const std::size_t nmax = degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  const auto ortho = orthonormal_polys(*eq, f, nmax);
  if (!ortho.warning.empty()) rep.warnings.push_back(ortho.warning);
  const SzegoData sz(eq, f);
  const auto grid = make_arc_grid(eq->map->arc());
  for (const auto n : degrees) {
    WidomRow row;
    row.n = n;
    row.w2sq = n <= ortho.degree ? ortho.w2[n] * ortho.w2[n] : NAN;
    const auto mm = chebyshev_minimax(grid, rho, n, tol, rep.cap);
    row.tn = mm.tn;
    row.winf = mm.winf;
    row.spread = mm.spread;
    row.converged = mm.converged;
    if (!mm.converged) {
      rep.warnings.push_back("degree " + std::to_string(n) + ": Lawson stagnated at spread " + std::to_string(mm.spread));
    }
    const auto qn = widom_qn(sz, n);
    row.qn_ratio = sup_norm(qn.poly, rho, grid) / std::pow(rep.cap, static_cast<double>(n));
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace arcwidom
