#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "pplnhom/detection.hpp"
#include "pplnhom/errors.hpp"

namespace pplnhom {

namespace {

using Channel = DetectionEvent::Channel;
using Origin = DetectionEvent::Origin;

constexpr double kNever = std::numeric_limits<double>::infinity();

// Per-photon fate at the separation stage: detected in a, detected in b, lost.
enum Fate : int { kInA = 0, kInB = 1, kLost = 2 };

struct CoincidenceCounter {
  double window;
  double delay;
  std::deque<double> recent_a;
  std::deque<double> recent_b;
  std::uint64_t raw = 0;
  std::uint64_t delayed = 0;

  void on_a(double t) {
    while (!recent_b.empty() && recent_b.front() < t - window) recent_b.pop_front();
    raw += recent_b.size();
    while (!recent_a.empty() && recent_a.front() < t - delay - window) recent_a.pop_front();
    recent_a.push_back(t);
  }

  void on_b(double t) {
    while (!recent_a.empty() && recent_a.front() < t - delay - window) recent_a.pop_front();
    for (auto it = recent_a.rbegin(); it != recent_a.rend() && *it >= t - window; ++it) ++raw;
    // Background window: a-events near t - delay.
    for (auto it = recent_a.begin(); it != recent_a.end() && *it <= t - delay + window; ++it)
      ++delayed;
    while (!recent_b.empty() && recent_b.front() < t - window) recent_b.pop_front();
    recent_b.push_back(t);
  }
};

}  // namespace

MonteCarloResult monte_carlo(double pair_rate, const ChannelLosses& losses,
                             const DetectorSpec& det_a, const DetectorSpec& det_b,
                             const MonteCarloOptions& options) {
  if (!(options.duration_s > 0.0)) throw DomainError("monte_carlo: duration must be positive");
  if (!(pair_rate >= 0.0)) throw DomainError("monte_carlo: pair rate must be >= 0");
  losses.validate();
  det_a.validate();
  det_b.validate();
  const double window = std::max(det_a.coincidence_window_s, det_b.coincidence_window_s);
  if (!(options.accidental_delay_s > 2.0 * window))
    throw DomainError("monte_carlo: accidental delay must exceed twice the window");

  const double pa = 0.5 * losses.transmission_a() * det_a.efficiency;
  const double pb = 0.5 * losses.transmission_b() * det_b.efficiency;
  const std::array<double, 3> fate_p{pa, pb, 1.0 - pa - pb};

  // Only pairs with at least one detection are generated (Poisson thinning):
  // the joint fate table excludes (lost, lost).
  std::array<double, 8> joint{};
  std::array<std::pair<int, int>, 8> joint_fates{};
  int idx = 0;
  for (int f1 = 0; f1 < 3; ++f1) {
    for (int f2 = 0; f2 < 3; ++f2) {
      if (f1 == kLost && f2 == kLost) continue;
      joint[idx] = fate_p[f1] * fate_p[f2];
      joint_fates[idx] = {f1, f2};
      ++idx;
    }
  }
  const double p_any = 1.0 - fate_p[kLost] * fate_p[kLost];
  const double visible_pair_rate = pair_rate * p_any;

  std::mt19937_64 rng(options.seed);
  std::discrete_distribution<int> pick_fates(joint.begin(), joint.end());
  auto next_after = [&](double t, double rate) {
    if (!(rate > 0.0)) return kNever;
    return t + std::exponential_distribution<double>(rate)(rng);
  };

  MonteCarloResult out;
  CoincidenceCounter counter{window, options.accidental_delay_s, {}, {}, 0, 0};
  auto emit = [&](double t, Channel ch, Origin origin) {
    if (ch == Channel::kA) {
      ++out.counts_a;
      counter.on_a(t);
    } else {
      ++out.counts_b;
      counter.on_b(t);
    }
    if (options.record_events && out.events.size() < options.max_recorded_events)
      out.events.push_back({t, ch, origin});
  };

  const double end = options.duration_s;
  double t_pair = next_after(0.0, visible_pair_rate);
  double t_dark_a = next_after(0.0, det_a.dark_rate_hz);
  double t_dark_b = next_after(0.0, det_b.dark_rate_hz);
  while (true) {
    const double t = std::min({t_pair, t_dark_a, t_dark_b});
    if (!(t < end)) break;
    if (t == t_pair) {
      const auto [f1, f2] = joint_fates[pick_fates(rng)];
      // Channel a first so a same-time a/b pair is matched once.
      for (int f : {f1, f2})
        if (f == kInA) emit(t, Channel::kA, Origin::kPair);
      for (int f : {f1, f2})
        if (f == kInB) emit(t, Channel::kB, Origin::kPair);
      t_pair = next_after(t, visible_pair_rate);
    } else if (t == t_dark_a) {
      emit(t, Channel::kA, Origin::kDark);
      t_dark_a = next_after(t, det_a.dark_rate_hz);
    } else {
      emit(t, Channel::kB, Origin::kDark);
      t_dark_b = next_after(t, det_b.dark_rate_hz);
    }
  }

  out.raw_coincidence_counts = counter.raw;
  out.delayed_coincidence_counts = counter.delayed;

  RateReport& r = out.report;
  const double T = options.duration_s;
  r.duration_s = T;
  r.seed = options.seed;
  r.singles_a = static_cast<double>(out.counts_a) / T;
  r.singles_b = static_cast<double>(out.counts_b) / T;
  r.raw_coincidences = static_cast<double>(counter.raw) / T;
  r.accidentals = static_cast<double>(counter.delayed) / T;
  r.coincidences = std::max(0.0, r.raw_coincidences - r.accidentals);
  r.multi_pair_occupancy = pair_rate * window;
  apply_estimator(r, det_a.dark_rate_hz, det_b.dark_rate_hz);

  RateUncertainty u;
  u.singles_a = std::sqrt(static_cast<double>(out.counts_a)) / T;
  u.singles_b = std::sqrt(static_cast<double>(out.counts_b)) / T;
  u.accidentals = std::sqrt(static_cast<double>(counter.delayed)) / T;
  u.coincidences = std::sqrt(static_cast<double>(counter.raw + counter.delayed)) / T;
  if (r.pair_rate) {
    const double sa = r.singles_a - det_a.dark_rate_hz;
    const double sb = r.singles_b - det_b.dark_rate_hz;
    const double rel2 = std::pow(u.singles_a / sa, 2) + std::pow(u.singles_b / sb, 2) +
                        std::pow(u.coincidences / r.coincidences, 2);
    u.pair_rate = *r.pair_rate * std::sqrt(rel2);
  }
  r.uncertainty = u;
  return out;
}

}  // namespace pplnhom
