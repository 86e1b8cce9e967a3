#include "pplnhom/hom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pplnhom/constants.hpp"
#include "pplnhom/errors.hpp"
#include "phase_sum.hpp"

namespace pplnhom {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized(const TwoPhotonState& state, const char* who) {
  if (std::abs(state.amplitude.norm() - 1.0) > kNormTolerance)
    throw DomainError(std::string(who) + ": spectral amplitude is not normalized");
}

double net_tau(const TwoPhotonState& state, double delta_x_m) {
  return state.arrival_offset_s - delta_x_m / kSpeedOfLight;
}

struct Signatures {
  std::vector<double> antisymmetric;              // |phi_a|^2
  std::vector<std::complex<double>> exchange;     // phi(d) phi*(-d)
};

Signatures signature_weights(const SpectralAmplitude& a) {
  Signatures s;
  s.antisymmetric.resize(a.size());
  s.exchange.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& p = a[k];
    const auto& q = a[a.mirror(k)];
    s.antisymmetric[k] = std::norm(0.5 * (p - q));
    s.exchange[k] = p * std::conj(q);
  }
  return s;
}

}  // namespace

void IndistinguishabilitySettings::validate() const {
  if (!(mode_overlap >= 0.0 && mode_overlap <= 1.0))
    throw ConfigError("mode overlap must lie in [0, 1]");
  if (!(interferometer_loss_db >= 0.0)) throw ConfigError("interferometer loss must be >= 0 dB");
}

double IndistinguishabilitySettings::transmission() const {
  return std::pow(10.0, -interferometer_loss_db / 10.0);
}

double coincidence_probability(const TwoPhotonState& state, double delta_x_m,
                               const IndistinguishabilitySettings& settings) {
  settings.validate();
  require_normalized(state, "coincidence_probability");
  const auto& a = state.amplitude;
  std::vector<std::complex<double>> w(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) w[k] = a[k] * std::conj(a[a.mirror(k)]);
  const double x = (detail::phase_sum(w, a.step(), net_tau(state, delta_x_m)) * a.step()).real();
  return std::clamp(0.5 - 0.5 * settings.mode_overlap * x, 0.0, 1.0);
}

std::vector<double> DelayRange::points() const {
  if (!(step_m > 0.0)) throw DomainError("delay step must be positive");
  if (!(stop_m >= start_m)) throw DomainError("delay range is empty");
  const auto n = static_cast<std::size_t>(std::floor((stop_m - start_m) / step_m + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start_m + static_cast<double>(i) * step_m;
  return out;
}

DelayRange DelayRange::centered(double center_m, double half_width_m, double step_m) {
  if (!(step_m > 0.0)) throw DomainError("delay step must be positive");
  const double half = std::floor(half_width_m / step_m + 1e-9) * step_m;
  return {center_m - half, center_m + half, step_m};
}

BumpDipDecomposition bump_dip_decomposition(const TwoPhotonState& state,
                                            std::span<const double> delta_x_m,
                                            const IndistinguishabilitySettings& settings) {
  settings.validate();
  require_normalized(state, "bump_dip_decomposition");
  const auto& a = state.amplitude;
  const auto w = signature_weights(a);
  const double g = 0.5 * settings.mode_overlap * a.step();

  BumpDipDecomposition out;
  out.delta_x_m.assign(delta_x_m.begin(), delta_x_m.end());
  out.bump.resize(delta_x_m.size());
  out.dip.resize(delta_x_m.size());
  for (std::size_t i = 0; i < delta_x_m.size(); ++i) {
    const double tau = net_tau(state, delta_x_m[i]);
    const double total = -g * detail::phase_sum(w.exchange, a.step(), tau).real();
    const double singlet = g * detail::phase_sum_real(w.antisymmetric, a.step(), tau);
    const double rest = total - singlet;
    out.bump[i] = std::max(singlet, 0.0) + std::max(rest, 0.0);
    out.dip[i] = std::min(singlet, 0.0) + std::min(rest, 0.0);
  }
  return out;
}

HomScan scan(const TwoPhotonState& state, const DelayRange& range,
             const IndistinguishabilitySettings& settings) {
  const auto delays = range.points();
  auto parts = bump_dip_decomposition(state, delays, settings);
  HomScan out;
  out.settings = settings;
  out.delta_x_m = std::move(parts.delta_x_m);
  out.bump = std::move(parts.bump);
  out.dip = std::move(parts.dip);
  out.coincidence_probability.resize(out.delta_x_m.size());
  for (std::size_t i = 0; i < out.delta_x_m.size(); ++i) {
    out.coincidence_probability[i] =
        std::clamp(out.baseline + out.bump[i] + out.dip[i], 0.0, 1.0);
  }
  return out;
}

HomScan scan_around_compensation(const TwoPhotonState& state, double half_width_m,
                                 double step_m, const IndistinguishabilitySettings& settings) {
  const double center = state.arrival_offset_s * kSpeedOfLight;
  return scan(state, DelayRange::centered(center, half_width_m, step_m), settings);
}

double net_visibility(double r_max, double r_min, double r_acc) {
  if (!(r_max > r_acc)) throw DomainError("net_visibility: R_max must exceed R_acc");
  return (r_max - r_min) / (r_max - r_acc);
}

DipMetrics dip_metrics(const HomScan& s) {
  const std::size_t n = s.delta_x_m.size();
  if (n < 10 || s.dip.size() != n || s.coincidence_probability.size() != n)
    throw DomainError("dip_metrics: scan needs at least 10 consistent samples");

  DipMetrics m;
  // Baseline from the outer 20% of samples, split between both ends.
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double acc = 0.0;
  for (std::size_t i = 0; i < tail; ++i)
    acc += s.coincidence_probability[i] + s.coincidence_probability[n - 1 - i];
  m.baseline = acc / static_cast<double>(2 * tail);
  m.minimum = *std::min_element(s.coincidence_probability.begin(),
                                s.coincidence_probability.end());
  m.visibility = m.baseline > 0.0 ? (m.baseline - m.minimum) / m.baseline : 0.0;

  // Centre: minimum of the 5-point smoothed dip component, ties averaged.
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i < 2 ? 0 : i - 2;
    const std::size_t hi = std::min(n - 1, i + 2);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += s.dip[j];
    smooth[i] = sum / static_cast<double>(hi - lo + 1);
  }
  const double deepest = *std::min_element(smooth.begin(), smooth.end());
  if (!(deepest < 0.0)) throw DomainError("dip_metrics: scan has no dip component");
  const double tie = 1e-6 * std::abs(deepest);
  double center_sum = 0.0;
  int ties = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (smooth[i] <= deepest + tie) {
      center_sum += s.delta_x_m[i];
      ++ties;
    }
  }
  m.center_m = center_sum / ties;

  // FWHM from the outermost half-depth crossings of the raw dip component.
  const double depth = *std::min_element(s.dip.begin(), s.dip.end());
  const double half = 0.5 * depth;
  std::size_t lo = 0;
  while (lo < n && s.dip[lo] > half) ++lo;
  std::size_t hi = n - 1;
  while (hi > 0 && s.dip[hi] > half) --hi;
  if (lo == 0 || hi == n - 1) throw DomainError("dip_metrics: dip half-depth not inside scan");
  const auto cross = [&](std::size_t outer, std::size_t inner) {
    const double f = (s.dip[outer] - half) / (s.dip[outer] - s.dip[inner]);
    return s.delta_x_m[outer] + f * (s.delta_x_m[inner] - s.delta_x_m[outer]);
  };
  m.fwhm_m = cross(hi + 1, hi) - cross(lo - 1, lo);

  const double need = 3.0 * m.fwhm_m;
  if (m.center_m - s.delta_x_m.front() < need || s.delta_x_m.back() - m.center_m < need) {
    std::ostringstream msg;
    msg << "dip_metrics: scan too narrow; need delta_x from " << (m.center_m - need) / kMillimetre
        << " mm to " << (m.center_m + need) / kMillimetre << " mm";
    throw DomainError(msg.str());
  }
  return m;
}

std::optional<double> oscillation_period(const HomScan& s) {
  const std::size_t n = s.delta_x_m.size();
  if (n < 5) return std::nullopt;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = s.coincidence_probability[i] - s.baseline;
  const double peak = std::abs(*std::max_element(y.begin(), y.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  }));
  if (peak == 0.0) return std::nullopt;
  const double threshold = 0.05 * peak;

  // Lobes: runs of one sign. Runs whose extremum stays below the threshold are
  // quadrature ringing and are skipped.
  struct Lobe {
    std::size_t first, last, extremum;
  };
  std::vector<Lobe> lobes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    const bool positive = y[i] > 0.0;
    std::size_t ext = i;
    while (j < n && (y[j] > 0.0) == positive) {
      if (std::abs(y[j]) > std::abs(y[ext])) ext = j;
      ++j;
    }
    if (std::abs(y[ext]) >= threshold) {
      if (!lobes.empty() && (y[lobes.back().extremum] > 0.0) == positive) {
        lobes.back().last = j - 1;
        if (std::abs(y[ext]) > std::abs(y[lobes.back().extremum])) lobes.back().extremum = ext;
      } else {
        lobes.push_back({i, j - 1, ext});
      }
    }
    i = j;
  }
  if (lobes.size() < 2) return std::nullopt;

  // Interpolated zero crossing between consecutive significant lobes.
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < lobes.size(); ++k) {
    std::size_t i = lobes[k].last;
    // Walk to the last sample before the sign flips towards the next lobe.
    const bool positive = y[lobes[k].extremum] > 0.0;
    while (i + 1 < lobes[k + 1].first && (y[i + 1] > 0.0) == positive) ++i;
    const double f = y[i] / (y[i] - y[i + 1]);
    crossings.push_back(s.delta_x_m[i] + f * (s.delta_x_m[i + 1] - s.delta_x_m[i]));
  }

  // Use the half of the scan beyond the deepest point of the curve.
  const double mid = s.delta_x_m[lobes[(lobes.size() - 1) / 2].extremum];
  std::vector<double> side;
  for (double c : crossings)
    if (c > mid) side.push_back(c);
  if (side.size() >= 2) return 2.0 * (side.back() - side.front()) / (side.size() - 1);

  // A single crossing: the outer lobe extremum sits a quarter period away.
  const double c = crossings.back();
  const auto& outer = lobes.back();
  std::size_t e = outer.extremum;
  double x_ext = s.delta_x_m[e];
  if (e > 0 && e + 1 < n) {
    const double y0 = y[e - 1], y1 = y[e], y2 = y[e + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom != 0.0) x_ext += 0.5 * (y0 - y2) / denom * (s.delta_x_m[e + 1] - s.delta_x_m[e]);
  }
  return 4.0 * std::abs(x_ext - c);
}

void convert_to_counts(HomScan& s, double far_coincidence_rate, double accidental_rate,
                       double integration_s) {
  if (!(integration_s > 0.0)) throw DomainError("integration window must be positive");
  if (far_coincidence_rate < 0.0 || accidental_rate < 0.0)
    throw DomainError("rates must be non-negative");
  s.integration_s = integration_s;
  s.counts.resize(s.coincidence_probability.size());
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    s.counts[i] = (far_coincidence_rate * s.coincidence_probability[i] / s.baseline +
                   accidental_rate) *
                  integration_s;
  }
}

}  // namespace pplnhom
