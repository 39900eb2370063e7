#ifndef QCOMBPASS_FOCK_HPP
#define QCOMBPASS_FOCK_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "phases.hpp"

namespace qcombpass {

using cplx = std::complex<double>;

enum class Mode { Signal, Idler };

// Density matrix of the (signal, idler) mode pair in the Fock product basis
// |a>_S |b>_I with 0 <= a, b <= cutoff. Row/column index is a*(cutoff+1)+b.
class TruncatedTwoModeState {
 public:
  TruncatedTwoModeState() : TruncatedTwoModeState(0) {}

  explicit TruncatedTwoModeState(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
    rho_ = Eigen::MatrixXcd::Zero(dim(), dim());
  }

  static TruncatedTwoModeState fock(int cutoff, int n_signal, int n_idler) {
    TruncatedTwoModeState s(cutoff);
    s.check_index(n_signal, n_idler);
    s.rho_(s.index(n_signal, n_idler), s.index(n_signal, n_idler)) = 1.0;
    return s;
  }

  // Projector onto an (unnormalized) pure state given in the product basis.
  static TruncatedTwoModeState from_pure(int cutoff, const Eigen::VectorXcd& psi) {
    TruncatedTwoModeState s(cutoff);
    if (psi.size() != s.dim()) throw std::invalid_argument("amplitude vector has wrong dimension");
    s.rho_ = psi * psi.adjoint();
    return s;
  }

  static TruncatedTwoModeState from_matrix(int cutoff, Eigen::MatrixXcd rho) {
    TruncatedTwoModeState s(cutoff);
    if (rho.rows() != s.dim() || rho.cols() != s.dim())
      throw std::invalid_argument("density matrix has wrong dimension");
    s.rho_ = std::move(rho);
    return s;
  }

  int cutoff() const { return cutoff_; }
  int per_mode() const { return cutoff_ + 1; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(per_mode()) * per_mode(); }
  Eigen::Index index(int a, int b) const { return static_cast<Eigen::Index>(a) * per_mode() + b; }

  cplx element(int a, int b, int a2, int b2) const {
    check_index(a, b);
    check_index(a2, b2);
    return rho_(index(a, b), index(a2, b2));
  }

  const Eigen::MatrixXcd& matrix() const { return rho_; }

  double trace() const { return rho_.trace().real(); }

  double purity() const { return (rho_ * rho_).trace().real(); }

  // Trace of the operator as it was assembled, before any renormalization.
  double raw_trace() const { return raw_trace_; }

  void normalize() {
    double t = trace();
    if (!(t > 0.0)) throw std::domain_error("cannot normalize a state with non-positive trace");
    rho_ /= t;
    raw_trace_ *= t;
  }

  // Hermiticity and non-negative populations, per the type invariants.
  bool is_valid(double tol = 1e-12) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    for (Eigen::Index k = 0; k < dim(); ++k) {
      if (std::abs(rho_(k, k).imag()) > tol || rho_(k, k).real() < -tol) return false;
    }
    return true;
  }

  void validate(double tol = 1e-12) const {
    if (!is_valid(tol)) throw std::domain_error("state is not Hermitian with non-negative populations");
  }

 private:
  void check_index(int a, int b) const {
    if (a < 0 || b < 0 || a > cutoff_ || b > cutoff_)
      throw std::out_of_range("Fock index outside the truncated basis");
  }

  int cutoff_;
  Eigen::MatrixXcd rho_;
  double raw_trace_ = 1.0;
};

inline void check_series_arguments(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw std::invalid_argument("x and y must be non-negative");
  if (x >= 1.0 || y >= 1.0) throw std::invalid_argument("series divergent: x and y must be < 1");
}

// Probability that index n + m exceeds cutoff when n ~ Geom(u), m ~ Geom(v)
// (geometric laws with ratios u, v). Written as a finite sum so that u == v
// needs no special case.
inline double geometric_pair_tail(double u, double v, int cutoff) {
  double sum = 0.0;
  double un = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    sum += un * std::pow(v, cutoff + 1 - n);
    un *= u;
  }
  return std::pow(u, cutoff + 1) + (1.0 - u) * sum;
}

// Upper bound (union bound) on the weight of the transceiver generating
// series lost when both photon indices are capped at cutoff: the idler index
// n+p and the signal index n+q.
inline double truncation_tail(double x, double y, int cutoff) {
  check_series_arguments(x, y);
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
  const double u = x * x;
  const double v = y * y;
  return geometric_pair_tail(u, u, cutoff) + geometric_pair_tail(u, v, cutoff);
}

inline int select_cutoff(double x, double y, double tolerance = 1e-10, int cap = 60) {
  for (int k = 1; k <= cap; ++k) {
    if (truncation_tail(x, y, k) < tolerance) return k;
  }
  double tail = truncation_tail(x, y, cap);
  throw convergence_error("cutoff cap " + std::to_string(cap) + " insufficient, tail " + std::to_string(tail),
                          tail);
}

inline TruncatedTwoModeState tmsv_pure_state(const SqueezeParams& params, int cutoff) {
  if (cutoff == 0) throw std::invalid_argument("cutoff too small");
  if (cutoff < 0) throw std::invalid_argument("cutoff must be positive");
  if (!std::isfinite(params.g) || !std::isfinite(params.phi_g))
    throw std::invalid_argument("squeezing parameters must be finite");
  if (params.g < 0.0) throw std::invalid_argument("squeezing amplitude must be non-negative");

  TruncatedTwoModeState probe(cutoff);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(probe.dim());
  const double t = std::tanh(params.g);
  const double c = 1.0 / std::cosh(params.g);
  double tn = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    psi[probe.index(n, n)] = std::polar(tn * c, n * params.phi_g);
    tn *= t;
  }
  psi /= psi.norm();
  return TruncatedTwoModeState::from_pure(cutoff, psi);
}

enum class TraceNormalization { Unit, AsWritten };

// Transceiver state after path identity: the triple sum over
// (n,n',p,p',q,q') of x^{n+p+n'+p'} y^{q+q'} |n+q,n+p><n'+q',n'+p'| with the
// index phases of PhaseSet. The sum factorizes as |Psi><Psi| with
// Psi = sum_{n,p,q} x^{n+p} y^q e^{i(n t1 + p t2 + q t3)} |n+q, n+p>,
// which is what is built here (terms with n+q or n+p above cutoff dropped).
inline TruncatedTwoModeState build_transceiver_density(double x, double y, const PhaseSet& phases, int cutoff,
                                                       TraceNormalization norm = TraceNormalization::Unit) {
  check_series_arguments(x, y);
  if (cutoff < 1) throw std::invalid_argument("cutoff too small");

  const double t1 = phases.reverse_pair_phase();
  const double t2 = phases.forward_idler_phase();
  const double t3 = phases.reflected_signal_phase();
  const double prefactor = std::sqrt((1.0 - x * x) * (1.0 - x * x) * (1.0 - y * y));

  TruncatedTwoModeState probe(cutoff);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(probe.dim());
  for (int n = 0; n <= cutoff; ++n) {
    for (int p = 0; n + p <= cutoff; ++p) {
      for (int q = 0; n + q <= cutoff; ++q) {
        const double w = std::pow(x, n + p) * std::pow(y, q);
        if (w == 0.0 && (n + p + q) > 0) continue;
        psi[probe.index(n + q, n + p)] += std::polar(prefactor * w, n * t1 + p * t2 + q * t3);
      }
    }
  }
  TruncatedTwoModeState s = TruncatedTwoModeState::from_pure(cutoff, psi);
  if (norm == TraceNormalization::Unit) s.normalize();
  return s;
}

inline double number_expectation(const TruncatedTwoModeState& state, Mode mode) {
  double sum = 0.0;
  for (int a = 0; a <= state.cutoff(); ++a) {
    for (int b = 0; b <= state.cutoff(); ++b) {
      const double pop = state.matrix()(state.index(a, b), state.index(a, b)).real();
      sum += (mode == Mode::Signal ? a : b) * pop;
    }
  }
  return sum;
}

inline double second_moment(const TruncatedTwoModeState& state, Mode mode) {
  double sum = 0.0;
  for (int a = 0; a <= state.cutoff(); ++a) {
    for (int b = 0; b <= state.cutoff(); ++b) {
      const double pop = state.matrix()(state.index(a, b), state.index(a, b)).real();
      const double n = (mode == Mode::Signal ? a : b);
      sum += n * n * pop;
    }
  }
  return sum;
}

// Populations P(a, b) of the product basis.
inline std::vector<double> populations(const TruncatedTwoModeState& state) {
  std::vector<double> out(static_cast<std::size_t>(state.dim()));
  for (Eigen::Index k = 0; k < state.dim(); ++k) out[static_cast<std::size_t>(k)] = state.matrix()(k, k).real();
  return out;
}

// Idler number from the contraction that keeps only n = n', p = p' and sums
// the signal indices q, q' freely (phase e^{i(q-q')Phi}). This reproduces the
// closed-form count exactly but is not Tr[n_I rho]: the q != q' terms pair
// kets and bras with different signal photon numbers. Kept as an oracle of the
// geometric-series algebra, summed by brute force up to cutoff.
inline double diagonal_contraction_idler_number(double x, double y, double Phi, int cutoff) {
  check_series_arguments(x, y);
  double idler = 0.0;
  for (int n = 0; n <= cutoff; ++n)
    for (int p = 0; p <= cutoff; ++p) idler += (n + p) * std::pow(x, 2 * (n + p));
  cplx signal = 0.0;
  for (int q = 0; q <= cutoff; ++q)
    for (int q2 = 0; q2 <= cutoff; ++q2) signal += std::pow(y, q + q2) * std::polar(1.0, (q - q2) * Phi);
  return (1.0 - x * x) * (1.0 - x * x) * (1.0 - y * y) * idler * signal.real();
}

}  // namespace qcombpass

#endif  // QCOMBPASS_FOCK_HPP
