#include "pplnhom/biphoton.hpp"

#include <algorithm>
#include <cmath>

#include "pplnhom/constants.hpp"
#include "pplnhom/errors.hpp"
#include "phase_sum.hpp"

namespace pplnhom {

namespace {

constexpr double kSincHalfPoint = 1.3915573782515103;
constexpr double kNormTolerance = 1e-9;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void require_normalized(const SpectralAmplitude& a, const char* who) {
  if (std::abs(a.norm() - 1.0) > kNormTolerance)
    throw DomainError(std::string(who) + ": spectral amplitude is not normalized");
}

}  // namespace

SpectralAmplitude::SpectralAmplitude(double step_rad_per_s,
                                     std::vector<std::complex<double>> values,
                                     double center_detuning_rad_per_s)
    : step_(step_rad_per_s), values_(std::move(values)), center_(center_detuning_rad_per_s) {
  if (!(step_ > 0.0)) throw DomainError("spectral grid step must be positive");
  if (values_.empty() || values_.size() % 2 != 0)
    throw DomainError("spectral grid needs a positive even number of points");
}

double SpectralAmplitude::norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * step_;
}

SpectralAmplitude SpectralAmplitude::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero spectral amplitude");
  SpectralAmplitude out = *this;
  const double scale = 1.0 / std::sqrt(n);
  for (auto& v : out.values_) v *= scale;
  return out;
}

double SpectralAmplitude::intensity_fwhm() const {
  std::vector<double> p(values_.size());
  std::transform(values_.begin(), values_.end(), p.begin(),
                 [](const auto& v) { return std::norm(v); });
  const auto peak_it = std::max_element(p.begin(), p.end());
  const double half = 0.5 * *peak_it;
  std::size_t lo = 0;
  while (lo < p.size() && p[lo] < half) ++lo;
  std::size_t hi = p.size() - 1;
  while (hi > 0 && p[hi] < half) --hi;
  if (lo == 0 || hi == p.size() - 1)
    throw DomainError("intensity_fwhm: half maximum not inside the grid");
  const double left = detuning(lo - 1) + step_ * (half - p[lo - 1]) / (p[lo] - p[lo - 1]);
  const double right = detuning(hi) + step_ * (p[hi] - half) / (p[hi] - p[hi + 1]);
  return right - left;
}

SpectralAmplitude SpectralAmplitude::conjugate_reflected() const {
  SpectralAmplitude out = *this;
  for (std::size_t k = 0; k < size(); ++k) out.values_[k] = std::conj(values_[mirror(k)]);
  out.center_ = -center_;
  return out;
}

SpectralAmplitude SpectralAmplitude::with_global_phase(double radians) const {
  SpectralAmplitude out = *this;
  const auto p = std::polar(1.0, radians);
  for (auto& v : out.values_) v *= p;
  return out;
}

TwoPhotonState build_state(const WaveguideSpec& spec, const GridOptions& options) {
  spec.validate();
  if (!spec.calibrated)
    throw DomainError("build_state: waveguide spec is not calibrated (run calibrate first)");
  if (options.points < 16 || options.points % 2 != 0)
    throw DomainError("build_state: grid needs an even number of points >= 16");
  if (!(options.half_width_fwhm >= 6.0))
    throw DomainError("build_state: grid must cover at least +-6 FWHM");

  const auto center = solve_pair(spec);
  if (!center) throw DomainError("build_state: no phase-matched pair for this spec");
  const double delta = center->detuning_rad_per_s();
  const double ng_h = spec.effective_group_index(Polarization::kH, center->lambda_h_m);
  const double ng_v = spec.effective_group_index(Polarization::kV, center->lambda_v_m);
  const double kappa = (ng_h - ng_v) / kSpeedOfLight;  // -d(dk)/dd
  if (kappa == 0.0) throw DomainError("build_state: zero group-velocity mismatch");

  const double fwhm = 4.0 * kSincHalfPoint / (spec.length_m * std::abs(kappa));
  const double half_width = options.half_width_fwhm * fwhm;
  const double step = 2.0 * half_width / static_cast<double>(options.points);
  const auto half_count =
      static_cast<std::size_t>(std::ceil((std::abs(delta) + half_width) / step - 1e-9));
  const std::size_t n = 2 * half_count;

  std::vector<std::complex<double>> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = (static_cast<double>(k) + 0.5 - static_cast<double>(half_count)) * step;
    if (options.mismatch == MismatchModel::kLinearized) {
      values[k] = sinc(-0.5 * kappa * (d - delta) * spec.length_m);
    } else {
      values[k] = pm_amplitude(spec, d);
    }
  }

  TwoPhotonState state;
  state.amplitude = SpectralAmplitude(step, std::move(values), delta).normalized();
  state.pump_angular_frequency = angular_frequency(spec.pump_wavelength_m);
  state.arrival_offset_s = 0.5 * spec.length_m * (ng_h - ng_v) / kSpeedOfLight;
  return state;
}

double coherence_time(double wavelength_m, double bandwidth_m) {
  if (!(bandwidth_m > 0.0)) throw DomainError("coherence_time: bandwidth must be positive");
  if (!(wavelength_m > 0.0)) throw DomainError("coherence_time: wavelength must be positive");
  return 0.44 * wavelength_m * wavelength_m / (kSpeedOfLight * bandwidth_m);
}

double bandwidth_to_frequency(double bandwidth_m, double wavelength_m) {
  if (!(wavelength_m > 0.0))
    throw DomainError("bandwidth_to_frequency: wavelength must be positive");
  if (bandwidth_m < 0.0) throw DomainError("bandwidth_to_frequency: negative bandwidth");
  return kSpeedOfLight * bandwidth_m / (wavelength_m * wavelength_m);
}

TwoPhotonState apply_delay(TwoPhotonState state, double delta_x_m) {
  state.arrival_offset_s -= delta_x_m / kSpeedOfLight;
  return state;
}

std::complex<double> relative_phase(const TwoPhotonState& state, double detuning_rad_per_s) {
  return std::polar(1.0, 2.0 * detuning_rad_per_s * state.arrival_offset_s);
}

std::complex<double> exchange_overlap(const TwoPhotonState& state) {
  const auto& a = state.amplitude;
  std::vector<std::complex<double>> w(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) w[k] = a[k] * std::conj(a[a.mirror(k)]);
  return detail::phase_sum(w, a.step(), state.arrival_offset_s) * a.step();
}

double psi_minus_overlap(const TwoPhotonState& state) {
  require_normalized(state.amplitude, "psi_minus_overlap");
  const double x = exchange_overlap(state).real();
  return std::clamp(0.5 * (1.0 - x), 0.0, 1.0);
}

ExchangeFractions exchange_fractions(const TwoPhotonState& state) {
  require_normalized(state.amplitude, "exchange_fractions");
  const double x = std::clamp(exchange_overlap(state).real(), -1.0, 1.0);
  // Re X is the expectation of the exchange operator. Its excess over zero is
  // carried by a pure (anti)symmetric part; the rest splits evenly.
  ExchangeFractions f;
  f.singlet = std::max(0.0, -x);
  f.symmetric = std::max(0.0, x);
  f.product = 1.0 - std::abs(x);
  return f;
}

}  // namespace pplnhom
