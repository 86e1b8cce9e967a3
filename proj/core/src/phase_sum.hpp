#pragma once

#include <complex>
#include <span>

namespace pplnhom::detail {

/// sum_k w_k exp(2i d_k tau) on the symmetric grid d_k = (k + 1/2 - n/2) step.
inline std::complex<double> phase_sum(std::span<const std::complex<double>> w, double step,
                                      double tau) {
  const std::size_t n = w.size();
  if (n == 0) return {};
  const double theta = 2.0 * step * tau;
  // Horner from the top coefficient: sum w_k z^k.
  const std::complex<double> z = std::polar(1.0, theta);
  std::complex<double> acc = w[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) acc = acc * z + w[k];
  return acc * std::polar(1.0, -theta * (0.5 * static_cast<double>(n) - 0.5));
}

/// Real part only, for real weights.
inline double phase_sum_real(std::span<const double> w, double step, double tau) {
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  const double theta = 2.0 * step * tau;
  const std::complex<double> z = std::polar(1.0, theta);
  std::complex<double> acc = w[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) acc = acc * z + w[k];
  return (acc * std::polar(1.0, -theta * (0.5 * static_cast<double>(n) - 0.5))).real();
}

}  // namespace pplnhom::detail
