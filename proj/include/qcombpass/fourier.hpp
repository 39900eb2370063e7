#ifndef QCOMBPASS_FOURIER_HPP
#define QCOMBPASS_FOURIER_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcombpass {

// Fringe visibility from the DFT of a uniformly sampled count scan:
// V = sqrt(2 sum |F(q_n)|^2) / F(0), where q_n runs over the nonzero
// momenta of both signs with |n| <= n_cut (default: the whole half-spectrum).
inline double fourier_visibility(const std::vector<std::pair<double, double>>& scan,
                                 std::optional<int> n_cut = std::nullopt) {
  const int K = static_cast<int>(scan.size());
  if (K < 8) throw std::invalid_argument("fourier_visibility: need at least 8 samples");
  const double dx = scan[1].first - scan[0].first;
  if (!(dx != 0.0)) throw std::invalid_argument("fourier_visibility: non-uniform sampling");
  for (int k = 1; k < K; ++k) {
    const double step = scan[static_cast<std::size_t>(k)].first - scan[static_cast<std::size_t>(k - 1)].first;
    if (std::abs(step - dx) > 1e-9 * std::abs(dx)) throw std::invalid_argument("fourier_visibility: non-uniform sampling");
  }
  const int cut = n_cut ? *n_cut : K / 2;
  if (cut < 1) throw std::invalid_argument("fourier_visibility: cutoff must be at least 1");

  double f0 = 0.0;
  for (const auto& s : scan) f0 += s.second;
  if (f0 == 0.0) throw std::invalid_argument("fourier_visibility: zero mean count");

  double power = 0.0;
  for (int n = 1; n < K; ++n) {
    if (std::min(n, K - n) > cut) continue;
    std::complex<double> F = 0.0;
    for (int k = 0; k < K; ++k)
      F += scan[static_cast<std::size_t>(k)].second * std::polar(1.0, -2.0 * std::numbers::pi * n * k / K);
    power += std::norm(F);
  }
  return std::sqrt(2.0 * power) / std::abs(f0);
}

}  // namespace qcombpass

#endif  // QCOMBPASS_FOURIER_HPP
