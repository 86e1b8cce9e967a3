#include <gtest/gtest.h>

#include <cmath>

#include "pplnhom/biphoton.hpp"
#include "pplnhom/config.hpp"
#include "pplnhom/detection.hpp"
#include "pplnhom/errors.hpp"

using namespace pplnhom;

namespace {

DetectorSpec detector(double eta, double dark) {
  DetectorSpec d;
  d.efficiency = eta;
  d.dark_rate_hz = dark;
  return d;
}

ChannelLosses fitted_losses() { return default_run_config().losses; }

void expect_within_sigma(double value, double expected, double sigma, double k = 3.0) {
  EXPECT_LE(std::abs(value - expected), k * sigma)
      << value << " vs " << expected << " (sigma " << sigma << ")";
}

}  // namespace

TEST(AnalyticRates, FittedCouplingReproducesMeasuredRates) {
  const auto cfg = default_run_config();
  const auto r = analytic_rates(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b);
  EXPECT_NEAR(r.singles_a / 1e5, 1.0, 0.2);
  EXPECT_NEAR(r.singles_b / 1e5, 1.0, 0.2);
  EXPECT_NEAR(r.coincidences / 330.0, 1.0, 0.2);
  EXPECT_FALSE(r.uncertainty.has_value());
  EXPECT_DOUBLE_EQ(r.accidentals, 2.0 * r.singles_a * r.singles_b * cfg.detector_a.coincidence_window_s);
  EXPECT_NEAR(r.multi_pair_occupancy, 1.5e7 * cfg.detector_a.coincidence_window_s, 1e-12);
}

TEST(AnalyticRates, ZeroEfficiencyGivesDarksOnly) {
  const auto r = analytic_rates(1.5e7, fitted_losses(), detector(0.0, 30e3), detector(0.0, 30e3));
  EXPECT_DOUBLE_EQ(r.singles_a, 30e3);
  EXPECT_DOUBLE_EQ(r.singles_b, 30e3);
  EXPECT_EQ(r.coincidences, 0.0);
  EXPECT_FALSE(r.pair_rate.has_value());
  EXPECT_FALSE(r.estimator_error.empty());
}

TEST(AnalyticRates, LinearInPairRate) {
  const auto d = detector(0.04, 30e3);
  const auto a = analytic_rates(1e7, fitted_losses(), d, d);
  const auto b = analytic_rates(2e7, fitted_losses(), d, d);
  EXPECT_NEAR(b.singles_a - 30e3, 2.0 * (a.singles_a - 30e3), 1e-6);
  EXPECT_NEAR(b.coincidences, 2.0 * a.coincidences, 1e-9);
}

TEST(AnalyticRates, LossIndependentWithoutDarks) {
  for (double eta : {0.01, 0.04, 0.3, 1.0}) {
    for (double arm : {0.05, 0.5, 1.0}) {
      ChannelLosses l;
      l.arm_a = arm;
      l.arm_b = 0.7 * arm;
      const auto r = analytic_rates(1.5e7, l, detector(eta, 0.0), detector(0.5 * eta, 0.0));
      EXPECT_NEAR(estimate_pair_rate(r.singles_a, r.singles_b, r.coincidences) / 1.5e7, 1.0, 1e-12);
    }
  }
}

TEST(AnalyticRates, DarkBiasIsPositiveAndShrinks) {
  double previous = -1.0;
  for (double dark : {0.0, 1e2, 1e3, 1e4, 3e4, 1e5}) {
    const auto r = analytic_rates(1.5e7, fitted_losses(), detector(0.04, dark), detector(0.04, dark));
    const double bias = estimate_pair_rate(r.singles_a, r.singles_b, r.coincidences) - 1.5e7;
    if (dark == 0.0) EXPECT_NEAR(bias, 0.0, 1e-6 * 1.5e7);
    else EXPECT_GT(bias, previous);
    previous = bias;
  }
}

TEST(EstimatePairRate, ReferenceArithmetic) {
  EXPECT_NEAR(estimate_pair_rate(1e5, 1e5, 330) / 1.515e7, 1.0, 0.005);
  EXPECT_DOUBLE_EQ(estimate_pair_rate(2, 2, 2), 1.0);
  const double base = estimate_pair_rate(1e5, 1e5, 330);
  EXPECT_NEAR(estimate_pair_rate(0.1e5, 0.1e5, 3.30), base, 1e-6 * base);
  EXPECT_THROW(estimate_pair_rate(1e5, 1e5, 0.0), DomainError);
}

TEST(Brightness, ReferenceArithmetic) {
  const double dnu_ghz = bandwidth_to_frequency(0.7e-9, 1310e-9) / 1e9;
  EXPECT_NEAR(normalized_brightness(1.5e7, 0.4, dnu_ghz), 3.07e5, 0.01e5);
  EXPECT_NEAR(normalized_brightness(1.5e7, 0.4, 122.0), 3.07e5, 0.01e5);
  EXPECT_DOUBLE_EQ(normalized_brightness(1.5e7, 0.8, 122.0), 0.5 * normalized_brightness(1.5e7, 0.4, 122.0));
  EXPECT_EQ(normalized_brightness(0.0, 0.4, 122.0), 0.0);
  EXPECT_THROW(normalized_brightness(1.5e7, 0.0, 122.0), DomainError);
}

TEST(Accidentals, TwoSidedWindowConvention) {
  const double tau = calibrate_coincidence_window(20.0, 30e3, 30e3);
  EXPECT_NEAR(tau, 1.0 / 90e6, 1e-20);
  EXPECT_NEAR(tau, 11e-9, 0.2e-9);
  EXPECT_NEAR(accidental_rate(30e3, 30e3, tau), 20.0, 1e-9);
  EXPECT_NEAR(accidental_rate(30e3, 30e3, tau) * 5.0, 100.0, 1e-6);
  EXPECT_LT(accidental_rate(30e3, 30e3, 1e-30), 1e-20);
  EXPECT_DOUBLE_EQ(accidental_rate(1e4, 3e4, tau), accidental_rate(3e4, 1e4, tau));
  EXPECT_THROW(accidental_rate(1.0, 1.0, 0.0), DomainError);
}

TEST(FitCoupling, BalancesRelativeErrors) {
  const DetectorSpec d;
  const double t = fit_arm_coupling(1.5e7, 1e5, 330, d, 0.63);
  ChannelLosses l;
  l.arm_a = l.arm_b = t;
  const auto r = analytic_rates(1.5e7, l, d, d);
  EXPECT_NEAR((r.singles_a / 1e5 - 1.0) + (r.coincidences / 330.0 - 1.0), 0.0, 1e-9);
}

TEST(MonteCarlo, AgreesWithAnalyticForThreeParameterSets) {
  struct Case { double n, eta, dark, arm; };
  for (auto c : {Case{1.5e7, 0.04, 30e3, 0.236}, Case{5e6, 0.08, 1e3, 0.5}, Case{2e7, 0.02, 10e3, 1.0}}) {
    ChannelLosses l;
    l.arm_a = l.arm_b = c.arm;
    const auto d = detector(c.eta, c.dark);
    const auto a = analytic_rates(c.n, l, d, d);
    MonteCarloOptions opt;
    opt.duration_s = 20.0;
    opt.seed = 17;
    const auto mc = monte_carlo(c.n, l, d, d, opt);
    ASSERT_TRUE(mc.report.uncertainty.has_value());
    const auto& u = *mc.report.uncertainty;
    expect_within_sigma(mc.report.singles_a, a.singles_a, u.singles_a);
    expect_within_sigma(mc.report.singles_b, a.singles_b, u.singles_b);
    expect_within_sigma(mc.report.coincidences, a.coincidences, u.coincidences);
    expect_within_sigma(mc.report.accidentals, a.accidentals, u.accidentals);
  }
}

TEST(MonteCarlo, BitReproducibleForFixedSeed) {
  const auto cfg = default_run_config();
  MonteCarloOptions opt;
  opt.duration_s = 2.0;
  opt.seed = 99;
  opt.record_events = true;
  opt.max_recorded_events = 1000;
  const auto a = monte_carlo(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b, opt);
  const auto b = monte_carlo(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b, opt);
  EXPECT_EQ(a.counts_a, b.counts_a);
  EXPECT_EQ(a.counts_b, b.counts_b);
  EXPECT_EQ(a.raw_coincidence_counts, b.raw_coincidence_counts);
  EXPECT_EQ(a.delayed_coincidence_counts, b.delayed_coincidence_counts);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) EXPECT_EQ(a.events[i].time_s, b.events[i].time_s);
  opt.seed = 100;
  EXPECT_NE(monte_carlo(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b, opt).counts_a, a.counts_a);
}

TEST(MonteCarlo, EventStreamIsOrderedAndCapped) {
  const auto cfg = default_run_config();
  MonteCarloOptions opt;
  opt.duration_s = 1.0;
  opt.record_events = true;
  opt.max_recorded_events = 500;
  const auto r = monte_carlo(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b, opt);
  ASSERT_EQ(r.events.size(), 500u);
  bool saw_pair = false, saw_dark = false;
  for (std::size_t i = 1; i < r.events.size(); ++i) EXPECT_LE(r.events[i - 1].time_s, r.events[i].time_s);
  for (const auto& e : r.events) {
    saw_pair |= e.origin == DetectionEvent::Origin::kPair;
    saw_dark |= e.origin == DetectionEvent::Origin::kDark;
  }
  EXPECT_TRUE(saw_pair);
  EXPECT_TRUE(saw_dark);
}

TEST(MonteCarlo, CountsAreIntegersAndScaleWithDuration) {
  const auto cfg = default_run_config();
  MonteCarloOptions opt;
  opt.duration_s = 4.0;
  const auto r = monte_carlo(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b, opt);
  EXPECT_DOUBLE_EQ(r.report.singles_a * 4.0, static_cast<double>(r.counts_a));
  EXPECT_DOUBLE_EQ(r.report.raw_coincidences * 4.0, static_cast<double>(r.raw_coincidence_counts));
  opt.duration_s = 8.0;
  const auto twice = monte_carlo(1.5e7, cfg.losses, cfg.detector_a, cfg.detector_b, opt);
  const double ratio = static_cast<double>(twice.counts_a) / static_cast<double>(r.counts_a);
  EXPECT_NEAR(ratio, 2.0, 0.01);
}

TEST(MonteCarlo, RecoversPairRateAcrossEfficiencies) {
  const auto cfg = default_run_config();
  for (double eta : {0.02, 0.04, 0.08}) {
    const auto d = detector(eta, 30e3);
    MonteCarloOptions opt;
    opt.duration_s = 20.0;
    opt.seed = 7 + static_cast<std::uint64_t>(eta * 100);
    const auto mc = monte_carlo(1.5e7, cfg.losses, d, d, opt);
    ASSERT_TRUE(mc.report.pair_rate.has_value()) << mc.report.estimator_error;
    expect_within_sigma(*mc.report.pair_rate, 1.5e7, mc.report.uncertainty->pair_rate);
  }
}

TEST(MonteCarlo, DarkOnlyAccidentals) {
  const auto d = detector(0.04, 30e3);
  MonteCarloOptions opt;
  opt.duration_s = 50.0;
  const auto mc = monte_carlo(0.0, ChannelLosses{}, d, d, opt);
  const double expected = accidental_rate(30e3, 30e3, d.coincidence_window_s);
  expect_within_sigma(mc.report.raw_coincidences, expected, std::sqrt(expected / opt.duration_s));
  expect_within_sigma(mc.report.accidentals, expected, mc.report.uncertainty->accidentals);
  EXPECT_NEAR(mc.report.raw_coincidences, 20.0, 3.0);
}

TEST(MonteCarlo, Preconditions) {
  const DetectorSpec d;
  MonteCarloOptions opt;
  opt.duration_s = 0.0;
  EXPECT_THROW(monte_carlo(1e6, ChannelLosses{}, d, d, opt), DomainError);
  opt.duration_s = 1.0;
  EXPECT_THROW(monte_carlo(-1.0, ChannelLosses{}, d, d, opt), DomainError);
}

TEST(DetectorSpec, Validation) {
  EXPECT_THROW(detector(1.5, 0.0).validate(), ConfigError);
  EXPECT_THROW(detector(0.5, -1.0).validate(), ConfigError);
  ChannelLosses l;
  l.arm_a = 0.0;
  EXPECT_THROW(l.validate(), ConfigError);
  EXPECT_NEAR(db_to_transmission(5.5), std::pow(10.0, -0.55), 1e-15);
}
