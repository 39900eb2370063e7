#ifndef QCOMBPASS_WIGNER_HPP
#define QCOMBPASS_WIGNER_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fock.hpp"
#include "phases.hpp"

namespace qcombpass {

inline constexpr double kUnitWignerPrefactor = 4.0 / (std::numbers::pi * std::numbers::pi);
inline constexpr double kAlternateWignerPrefactor =
    4.0 / (std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi);

struct PhaseSpacePoint {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};

  static PhaseSpacePoint from_quadratures(double x_S, double y_S, double x_I, double y_I) {
    return {cplx(x_S, y_S) / std::numbers::sqrt2, cplx(x_I, y_I) / std::numbers::sqrt2};
  }

  static PhaseSpacePoint from_rotated(double x_plus, double x_minus, double y_plus = 0.0, double y_minus = 0.0) {
    const double s = 1.0 / std::numbers::sqrt2;
    return from_quadratures(s * (x_plus + x_minus), s * (y_plus + y_minus), s * (x_plus - x_minus),
                            s * (y_plus - y_minus));
  }

  double x_S() const { return std::numbers::sqrt2 * alpha.real(); }
  double y_S() const { return std::numbers::sqrt2 * alpha.imag(); }
  double x_I() const { return std::numbers::sqrt2 * beta.real(); }
  double y_I() const { return std::numbers::sqrt2 * beta.imag(); }
  double x_plus() const { return (x_S() + x_I()) / std::numbers::sqrt2; }
  double x_minus() const { return (x_S() - x_I()) / std::numbers::sqrt2; }
  double y_plus() const { return (y_S() + y_I()) / std::numbers::sqrt2; }
  double y_minus() const { return (y_S() - y_I()) / std::numbers::sqrt2; }
};

inline double wigner_tmsv(const PhaseSpacePoint& pt, const SqueezeParams& params,
                          double normalization = kUnitWignerPrefactor) {
  const double c = std::cosh(params.g);
  const double s = std::sinh(params.g);
  const cplx e = std::polar(1.0, params.phi_g);
  const cplx u = pt.alpha * c - std::conj(pt.beta) * s * e;
  const cplx v = pt.beta * c - std::conj(pt.alpha) * s * e;
  return normalization * std::exp(-2.0 * std::norm(u)) * std::exp(-2.0 * std::norm(v));
}

// Table of the single-mode kernel attached to |a><a'| by the coherent-state
// integral: K(a,a') = e^{2|al|^2} (-1)^a J(al; a, a') / sqrt(a! a'!), where
// J(al; a, a') = (-1)^{a'} 2^{-(a+a')} d^a/dal^a d^{a'}/dal*^{a'} e^{-4|al|^2}.
// The derivatives are two-variable Hermite polynomials, obtained here from
// their recurrence in a scaled form that never overflows.
class HermiteKernel {
 public:
  HermiteKernel(cplx alpha, int max_index) : n_(max_index + 1), table_(static_cast<std::size_t>(n_ * n_)) {
    const cplx m2a = -2.0 * alpha;
    const cplx m2ac = -2.0 * std::conj(alpha);
    // Q(a,a') = P(a,a') / (2^{a+a'} sqrt(a! a'!)), P the Hermite polynomial.
    std::vector<cplx> q(static_cast<std::size_t>(n_ * n_));
    auto Q = [&](int a, int b) -> cplx& { return q[static_cast<std::size_t>(a * n_ + b)]; };
    Q(0, 0) = 1.0;
    for (int b = 1; b < n_; ++b) Q(0, b) = m2a * Q(0, b - 1) / std::sqrt(static_cast<double>(b));
    for (int a = 0; a + 1 < n_; ++a) {
      const double inv = 1.0 / std::sqrt(static_cast<double>(a + 1));
      for (int b = 0; b < n_; ++b) {
        cplx next = m2ac * Q(a, b);
        if (b > 0) next -= std::sqrt(static_cast<double>(b)) * Q(a, b - 1);
        Q(a + 1, b) = next * inv;
      }
    }
    const double gauss = std::exp(-2.0 * std::norm(alpha));
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        table_[static_cast<std::size_t>(a * n_ + b)] = ((a + b) % 2 ? -gauss : gauss) * Q(a, b);
  }

  cplx operator()(int a, int b) const { return table_[static_cast<std::size_t>(a * n_ + b)]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<cplx> table_;
};

// J(alpha; a, a') for a single mode, from the Hermite recurrence.
inline cplx j_integral(cplx alpha, int a, int b) {
  HermiteKernel k(alpha, std::max(a, b));
  double log_fact = 0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0));
  double sign = (a % 2) ? -1.0 : 1.0;
  return sign * std::exp(-2.0 * std::norm(alpha) + log_fact) * k(a, b);
}

// Same quantity by central finite differences of e^{-4|alpha|^2}
// (Wirtinger derivatives, one Richardson step). Only meaningful at low order;
// h <= 0 picks 1e-3 up to second order and 1e-2 above (round-off grows as h^-order).
inline cplx j_integral_finite_difference(cplx alpha, int a, int b, double h = 0.0) {
  if (h <= 0.0) h = (a + b) <= 2 ? 1e-3 : 1e-2;
  auto gauss_derivative = [](double x0, int order, double step) {
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= order; ++i) {
      const double x = x0 + (0.5 * order - i) * step;
      sum += ((i % 2) ? -binom : binom) * std::exp(-4.0 * x * x);
      binom = binom * (order - i) / (i + 1);
    }
    return sum / std::pow(step, order);
  };
  // (d_x - i d_y)^a (d_x + i d_y)^b / 2^{a+b} expanded as sum_j c_j d_x^{a+b-j} d_y^j.
  const int order = a + b;
  std::vector<cplx> coeff(static_cast<std::size_t>(order + 1), 0.0);
  coeff[0] = 1.0;
  int deg = 0;
  auto multiply = [&](cplx dy_coeff) {
    for (int j = deg + 1; j >= 1; --j) coeff[static_cast<std::size_t>(j)] += dy_coeff * coeff[static_cast<std::size_t>(j - 1)];
    ++deg;
  };
  for (int k = 0; k < a; ++k) multiply(cplx(0.0, -1.0));
  for (int k = 0; k < b; ++k) multiply(cplx(0.0, 1.0));
  auto evaluate = [&](double step) {
    cplx sum = 0.0;
    for (int j = 0; j <= order; ++j) {
      sum += coeff[static_cast<std::size_t>(j)] * gauss_derivative(alpha.real(), order - j, step) *
             gauss_derivative(alpha.imag(), j, step);
    }
    return sum / std::pow(2.0, order);
  };
  const cplx d = (4.0 * evaluate(0.5 * h) - evaluate(h)) / 3.0;
  const double sign = (b % 2) ? -1.0 : 1.0;
  return sign * d / std::pow(2.0, order);
}

namespace detail {

// Sum over the transceiver index set with both photon indices capped at K,
// contracted with per-mode kernels. ks/ki are the signal and idler kernels
// (any functions of (ket, bra) index). Returns the complex series value
// without the overall constant.
template <typename KernelS, typename KernelI>
cplx transceiver_contraction(double x, double y, const PhaseSet& phases, int K, const KernelS& ks,
                             const KernelI& ki) {
  const double t1 = phases.reverse_pair_phase();
  const double t2 = phases.forward_idler_phase();
  const double t3 = phases.reflected_signal_phase();
  std::vector<cplx> yq(static_cast<std::size_t>(K + 1));
  std::vector<cplx> xp(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    yq[static_cast<std::size_t>(k)] = std::polar(std::pow(y, k), k * t3);
    xp[static_cast<std::size_t>(k)] = std::polar(std::pow(x, k), k * t2);
  }
  cplx total = 0.0;
  for (int n = 0; n <= K; ++n) {
    for (int n2 = 0; n2 <= K; ++n2) {
      const cplx outer = std::polar(std::pow(x, n + n2), (n - n2) * t1);
      if (outer == 0.0) continue;
      cplx A = 0.0;
      for (int q = 0; n + q <= K; ++q)
        for (int q2 = 0; n2 + q2 <= K; ++q2)
          A += yq[static_cast<std::size_t>(q)] * std::conj(yq[static_cast<std::size_t>(q2)]) * ks(n + q, n2 + q2);
      cplx B = 0.0;
      for (int p = 0; n + p <= K; ++p)
        for (int p2 = 0; n2 + p2 <= K; ++p2)
          B += xp[static_cast<std::size_t>(p)] * std::conj(xp[static_cast<std::size_t>(p2)]) * ki(n + p, n2 + p2);
      total += outer * A * B;
    }
  }
  return total;
}

}  // namespace detail

// Wigner function of the transceiver state from the coherent-state series,
// with the as-written prefactor (1-x^2)^2 (1-y^2). Indices are capped like the
// truncated state (n+q <= K, n+p <= K). Divide by the state's raw trace (or by
// wigner_series_integral) for a unit-normalized distribution.
inline double wigner_qcombpass_series(const PhaseSpacePoint& pt, double x, double y, const PhaseSet& phases,
                                      int term_cutoff, double normalization = kUnitWignerPrefactor,
                                      double tail_tolerance = 1e-8) {
  check_series_arguments(x, y);
  if (term_cutoff < 1) throw std::invalid_argument("term cutoff too small");
  const double tail = truncation_tail(x, y, term_cutoff);
  if (tail > tail_tolerance)
    throw convergence_error("Wigner series not converged at term cutoff " + std::to_string(term_cutoff) +
                                ": tail estimate " + std::to_string(tail),
                            tail);
  const HermiteKernel ks(pt.alpha, term_cutoff);
  const HermiteKernel ki(pt.beta, term_cutoff);
  const cplx sum = detail::transceiver_contraction(x, y, phases, term_cutoff, ks, ki);
  const double pref = (1.0 - x * x) * (1.0 - x * x) * (1.0 - y * y);
  const cplx w = normalization * pref * sum;
  if (std::abs(w.imag()) > 1e-10 * std::max(1.0, std::abs(w.real())))
    throw std::domain_error("Wigner series has a non-negligible imaginary part");
  return w.real();
}

// Square window [-half_width, half_width]^2 in (Re alpha, Im alpha) with
// `points` trapezoid nodes per axis.
struct QuadratureWindow {
  double half_width = 6.0;
  int points = 121;
};

// Trapezoid integral over one mode of each kernel entry: I(a,a') ~ pi/2 delta.
inline std::vector<cplx> integrate_kernel(int max_index, const QuadratureWindow& win) {
  const int n = max_index + 1;
  std::vector<cplx> out(static_cast<std::size_t>(n * n), 0.0);
  const double h = 2.0 * win.half_width / (win.points - 1);
  for (int i = 0; i < win.points; ++i) {
    const double wx = (i == 0 || i == win.points - 1) ? 0.5 : 1.0;
    for (int j = 0; j < win.points; ++j) {
      const double wy = (j == 0 || j == win.points - 1) ? 0.5 : 1.0;
      const cplx al(-win.half_width + i * h, -win.half_width + j * h);
      HermiteKernel k(al, max_index);
      const double w = wx * wy * h * h;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out[static_cast<std::size_t>(a * n + b)] += w * k(a, b);
    }
  }
  return out;
}

// Quadrature of the series Wigner function over the four-dimensional window
// (the series is a finite sum of products, so it factorizes per mode).
inline double wigner_series_integral(double x, double y, const PhaseSet& phases, int term_cutoff,
                                     const QuadratureWindow& win, double normalization = kUnitWignerPrefactor) {
  check_series_arguments(x, y);
  const int n = term_cutoff + 1;
  const std::vector<cplx> I = integrate_kernel(term_cutoff, win);
  auto k = [&](int a, int b) { return I[static_cast<std::size_t>(a * n + b)]; };
  const cplx sum = detail::transceiver_contraction(x, y, phases, term_cutoff, k, k);
  const double pref = (1.0 - x * x) * (1.0 - x * x) * (1.0 - y * y);
  return (normalization * pref * sum).real();
}

// Displaced-parity oracle. For each mode, <m| D(al) Pi D(al)^dag |n> is built
// from Laguerre matrix elements of the displacement operator, with the
// intermediate Fock sum extended until it is unitary to 1e-13.
class DisplacedParity {
 public:
  DisplacedParity(cplx alpha, int cutoff, int max_extra = 400) : n_(cutoff + 1), table_(static_cast<std::size_t>(n_ * n_)) {
    const double r2 = std::norm(alpha);
    const int limit = cutoff + max_extra;
    int kmax = std::min(limit, cutoff + 20 + static_cast<int>(std::ceil(r2 + 8.0 * std::sqrt(r2 * (cutoff + 1.0)))));
    std::vector<cplx> d;
    for (;;) {
      d.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(kmax + 1), cplx{});
      double tail = 0.0;
      for (int m = 0; m < n_; ++m) {
        double norm = 0.0;
        for (int k = 0; k <= kmax; ++k) {
          const cplx v = displacement_element(alpha, m, k);
          d[static_cast<std::size_t>(m) * static_cast<std::size_t>(kmax + 1) + static_cast<std::size_t>(k)] = v;
          norm += std::norm(v);
        }
        tail = std::max(tail, 1.0 - norm);
      }
      if (tail <= 1e-13) break;
      if (kmax >= limit)
        throw convergence_error("displacement too large for the truncated basis (parity-sum tail " +
                                    std::to_string(tail) + ")",
                                tail);
      kmax = std::min(limit, kmax + 16);
    }
    for (int m = 0; m < n_; ++m) {
      for (int n = 0; n < n_; ++n) {
        cplx s = 0.0;
        for (int k = 0; k <= kmax; ++k) {
          const cplx term = d[static_cast<std::size_t>(m) * static_cast<std::size_t>(kmax + 1) + static_cast<std::size_t>(k)] *
                            std::conj(d[static_cast<std::size_t>(n) * static_cast<std::size_t>(kmax + 1) + static_cast<std::size_t>(k)]);
          s += (k % 2) ? -term : term;
        }
        table_[static_cast<std::size_t>(m * n_ + n)] = s;
      }
    }
  }

  // <m| D(alpha) |k>
  static cplx displacement_element(cplx alpha, int m, int k) {
    const double r2 = std::norm(alpha);
    if (r2 == 0.0) return m == k ? 1.0 : 0.0;
    const int lo = std::min(m, k);
    const int hi = std::max(m, k);
    const int diff = hi - lo;
    const double log_mag =
        0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) + diff * 0.5 * std::log(r2) - 0.5 * r2;
    const double lag = std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(diff), r2);
    const cplx dir = m >= k ? alpha / std::sqrt(r2) : -std::conj(alpha) / std::sqrt(r2);
    return std::exp(log_mag) * lag * std::pow(dir, diff);
  }

  cplx operator()(int m, int n) const { return table_[static_cast<std::size_t>(m * n_ + n)]; }

 private:
  int n_;
  std::vector<cplx> table_;
};

inline double wigner_from_density(const TruncatedTwoModeState& state, const PhaseSpacePoint& pt) {
  const int K = state.cutoff();
  const DisplacedParity ps(pt.alpha, K);
  const DisplacedParity pi(pt.beta, K);
  const auto& rho = state.matrix();
  cplx sum = 0.0;
  for (int a = 0; a <= K; ++a)
    for (int b = 0; b <= K; ++b) {
      const Eigen::Index i = state.index(a, b);
      for (int a2 = 0; a2 <= K; ++a2) {
        const cplx psa = ps(a2, a);
        if (psa == 0.0) continue;
        for (int b2 = 0; b2 <= K; ++b2) sum += rho(i, state.index(a2, b2)) * psa * pi(b2, b);
      }
    }
  const cplx w = kUnitWignerPrefactor * sum;
  if (std::abs(w.imag()) > 1e-10) throw std::domain_error("displaced-parity Wigner value is not real");
  return w.real();
}

struct WignerAxis {
  double min = -1.0;
  double max = 1.0;
  int count = 2;

  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
  double at(int i) const { return count > 1 ? min + i * step() : min; }

  void validate() const {
    if (count < 1) throw std::invalid_argument("grid axis needs at least one point");
    if (count > 1 && !(max > min)) throw std::invalid_argument("grid axis needs max > min");
  }
};

struct WignerGrid {
  WignerAxis x_plus;
  WignerAxis x_minus;
  double y_plus = 0.0;
  double y_minus = 0.0;
  std::vector<double> values;  // row-major, x_plus outer

  double value(int i, int j) const { return values[static_cast<std::size_t>(i * x_minus.count + j)]; }
};

using WignerSelector = std::function<double(const PhaseSpacePoint&)>;

inline WignerGrid wigner_grid(const WignerAxis& x_plus, const WignerAxis& x_minus, const WignerSelector& select,
                              double y_plus = 0.0, double y_minus = 0.0) {
  x_plus.validate();
  x_minus.validate();
  WignerGrid g{x_plus, x_minus, y_plus, y_minus, {}};
  g.values.reserve(static_cast<std::size_t>(x_plus.count * x_minus.count));
  for (int i = 0; i < x_plus.count; ++i)
    for (int j = 0; j < x_minus.count; ++j) {
      const double w = select(PhaseSpacePoint::from_rotated(x_plus.at(i), x_minus.at(j), y_plus, y_minus));
      if (!std::isfinite(w)) throw std::domain_error("non-finite Wigner value");
      g.values.push_back(w);
    }
  return g;
}

// Trapezoid quadrature of the closed-form TMSV Wigner function over a box in
// the rotated coordinates (x+, x-, y+, y-); d^2alpha d^2beta = dx dy dx dy / 4.
inline double tmsv_integral(const SqueezeParams& params, double normalization, const double half_width[4], int points) {
  std::vector<double> h(4);
  for (int k = 0; k < 4; ++k) h[static_cast<std::size_t>(k)] = 2.0 * half_width[k] / (points - 1);
  auto weight = [&](int i) { return (i == 0 || i == points - 1) ? 0.5 : 1.0; };
  double sum = 0.0;
  for (int a = 0; a < points; ++a) {
    const double xp = -half_width[0] + a * h[0];
    for (int b = 0; b < points; ++b) {
      const double xm = -half_width[1] + b * h[1];
      for (int c = 0; c < points; ++c) {
        const double yp = -half_width[2] + c * h[2];
        for (int e = 0; e < points; ++e) {
          const double ym = -half_width[3] + e * h[3];
          sum += weight(a) * weight(b) * weight(c) * weight(e) *
                 wigner_tmsv(PhaseSpacePoint::from_rotated(xp, xm, yp, ym), params, normalization);
        }
      }
    }
  }
  return sum * h[0] * h[1] * h[2] * h[3] / 4.0;
}

}  // namespace qcombpass

#endif  // QCOMBPASS_WIGNER_HPP
