#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pplnhom/constants.hpp"
#include "pplnhom/dispersion.hpp"
#include "pplnhom/errors.hpp"

using namespace pplnhom;

namespace {

const SellmeierModel& ln() {
  static const SellmeierModel model = SellmeierModel::congruent_lithium_niobate();
  return model;
}

SellmeierModel constant_model(double n) {
  SellmeierCoefficients c;
  c.a1 = n * n;
  return SellmeierModel("constant", c, c, ValidityWindow{});
}

}  // namespace

TEST(RefractiveIndex, MatchesPinnedHighPrecisionValues) {
  EXPECT_NEAR(refractive_index(ln(), CrystalAxis::kExtraordinary, 1310e-9, 72.0),
              oracle::kNe1310At72, 1e-14);
  EXPECT_NEAR(refractive_index(ln(), CrystalAxis::kOrdinary, 1310e-9, 72.0), oracle::kNo1310At72,
              1e-14);
  EXPECT_NEAR(refractive_index(ln(), CrystalAxis::kOrdinary, 655e-9, 72.0), oracle::kNo655At72,
              1e-14);
  EXPECT_NEAR(refractive_index(ln(), CrystalAxis::kExtraordinary, 655e-9, 72.0),
              oracle::kNe655At72, 1e-14);
}

TEST(RefractiveIndex, MatchesDirectFormulaAcrossWindow) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.42, 3.9), temp(5.0, 240.0);
  for (int i = 0; i < 50; ++i) {
    const double l = lam(rng), t = temp(rng);
    for (auto axis : {CrystalAxis::kOrdinary, CrystalAxis::kExtraordinary}) {
      const double n = refractive_index(ln(), axis, l * 1e-6, t);
      EXPECT_NEAR(n, oracle::sellmeier_index(ln().coefficients(axis), l, t), 1e-13);
      EXPECT_GE(n, 1.5);
      EXPECT_LE(n, 3.0);
    }
    EXPECT_NE(refractive_index(ln(), CrystalAxis::kOrdinary, l * 1e-6, t),
              refractive_index(ln(), CrystalAxis::kExtraordinary, l * 1e-6, t));
  }
}

TEST(RefractiveIndex, DeterministicAndBirefringent) {
  const double a = refractive_index(ln(), CrystalAxis::kOrdinary, 1.1e-6, 40.0);
  const double b = refractive_index(ln(), CrystalAxis::kOrdinary, 1.1e-6, 40.0);
  EXPECT_EQ(a, b);
  EXPECT_NE(refractive_index(ln(), CrystalAxis::kOrdinary, 655e-9, 72.0),
            refractive_index(ln(), CrystalAxis::kExtraordinary, 655e-9, 72.0));
}

TEST(RefractiveIndex, OutOfRangeNamesTheBound) {
  try {
    refractive_index(ln(), CrystalAxis::kOrdinary, 5e-6, 72.0);
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(refractive_index(ln(), CrystalAxis::kOrdinary, 0.3e-6, 72.0), RangeError);
  EXPECT_THROW(refractive_index(ln(), CrystalAxis::kOrdinary, 1.3e-6, 300.0), RangeError);
  EXPECT_THROW(refractive_index(ln(), CrystalAxis::kOrdinary, 1.3e-6, -10.0), RangeError);
}

TEST(GroupIndex, MatchesRichardsonDifferencesAtRandomPoints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(0.5e-6, 3.5e-6), temp(10.0, 200.0);
  for (int i = 0; i < 25; ++i) {
    const double l = lam(rng), t = temp(rng);
    for (auto axis : {CrystalAxis::kOrdinary, CrystalAxis::kExtraordinary}) {
      const auto n = [&](double x) { return oracle::sellmeier_index(ln().coefficients(axis), x * 1e6, t); };
      const double slope = oracle::richardson_derivative(n, l, 1e-4 * l);
      EXPECT_NEAR(index_slope(ln(), axis, l, t) / slope, 1.0, 1e-6);
      const double ng = n(l) - l * slope;
      EXPECT_NEAR(group_index(ln(), axis, l, t) / ng, 1.0, 1e-6);
    }
  }
}

TEST(GroupIndex, NormalDispersionAt1310) {
  for (auto axis : {CrystalAxis::kOrdinary, CrystalAxis::kExtraordinary}) {
    const double n = refractive_index(ln(), axis, 1310e-9, 72.0);
    const auto f = [&](double x) { return refractive_index(ln(), axis, x, 72.0); };
    const double fd = f(1310e-9) - 1310e-9 * oracle::richardson_derivative(f, 1310e-9, 1.31e-10);
    EXPECT_GE(fd, n);
    EXPECT_GE(group_index(ln(), axis, 1310e-9, 72.0), n);
  }
}

TEST(GroupIndex, ConstantModelHasNoDispersion) {
  const auto m = constant_model(2.1);
  EXPECT_DOUBLE_EQ(group_index(m, CrystalAxis::kOrdinary, 1.3e-6, 50.0), 2.1);
  EXPECT_DOUBLE_EQ(refractive_index(m, CrystalAxis::kExtraordinary, 1.3e-6, 50.0), 2.1);
}

TEST(GroupIndex, FiniteDifferenceStepHalvingConverges) {
  const auto f = [](double x) { return refractive_index(ln(), CrystalAxis::kExtraordinary, x, 72.0); };
  const double l = 1310e-9;
  const double a = oracle::richardson_derivative(f, l, 1e-4 * l);
  const double b = oracle::richardson_derivative(f, l, 0.5e-4 * l);
  EXPECT_LT(std::abs(a - b) / std::abs(b), 1e-8);
}

TEST(GroupIndex, WindowEdgeIsRejected) {
  EXPECT_THROW(group_index(ln(), CrystalAxis::kOrdinary, 0.4e-6, 72.0), RangeError);
  EXPECT_THROW(group_index(ln(), CrystalAxis::kOrdinary, 4.0e-6, 72.0), RangeError);
  EXPECT_NO_THROW(group_index(ln(), CrystalAxis::kOrdinary, 0.401e-6, 72.0));
}

TEST(GroupBirefringence, NearWalkoffValueAt1310) {
  const double dng = group_birefringence(ln(), AxisPolarizationMap{}, 1310e-9, 72.0);
  // 2 c <T> / L with <T> = 5 ps and L = 3.6 cm.
  const double expected = 2.0 * oracle::kC * 5e-12 / 0.036;
  EXPECT_NEAR(expected, 0.0833, 1e-4);
  EXPECT_NEAR(dng / expected, 1.0, 0.2);
  EXPECT_GE(dng, 0.0);
}

TEST(GroupBirefringence, IdenticalAxesGiveZero) {
  const auto& o = ln().coefficients(CrystalAxis::kOrdinary);
  const SellmeierModel same("same", o, o, ValidityWindow{});
  EXPECT_EQ(group_birefringence(same, AxisPolarizationMap{}, 1310e-9, 72.0), 0.0);
}

TEST(GroupBirefringence, ContinuousAcrossScan) {
  double prev = group_birefringence(ln(), AxisPolarizationMap{}, 1300e-9, 72.0);
  for (int i = 1; i <= 200; ++i) {
    const double cur = group_birefringence(ln(), AxisPolarizationMap{}, (1300.0 + 0.1 * i) * 1e-9, 72.0);
    EXPECT_LT(std::abs(cur - prev), 1e-3);
    prev = cur;
  }
}

TEST(GroupBirefringence, SymmetricInAxisAssignment) {
  const AxisPolarizationMap swapped(CrystalAxis::kExtraordinary, CrystalAxis::kOrdinary,
                                    Polarization::kV);
  EXPECT_DOUBLE_EQ(group_birefringence(ln(), swapped, 1310e-9, 72.0),
                   group_birefringence(ln(), AxisPolarizationMap{}, 1310e-9, 72.0));
}

TEST(AxisMap, RejectsSharedAxis) {
  EXPECT_THROW(AxisPolarizationMap(CrystalAxis::kOrdinary, CrystalAxis::kOrdinary, Polarization::kH),
               ConfigError);
}

TEST(Walkoff, FivePicosecondsForNominalGeometry) {
  EXPECT_NEAR(walkoff_delay(0.036, 0.0833), 5e-12, 0.01e-12);
}

TEST(Walkoff, ExactIdentityAndLinearity) {
  EXPECT_EQ(walkoff_delay(0.036, 0.0), 0.0);
  const double base = walkoff_delay(0.036, 0.08);
  EXPECT_DOUBLE_EQ(walkoff_delay(0.072, 0.08), 2.0 * base);
  EXPECT_DOUBLE_EQ(walkoff_delay(0.036, 0.16), 2.0 * base);
  EXPECT_DOUBLE_EQ(base, 0.036 * 0.08 / (2.0 * 299792458.0));
  EXPECT_THROW(walkoff_delay(0.0, 0.08), DomainError);
  EXPECT_THROW(walkoff_delay(-1.0, 0.08), DomainError);
}

TEST(SellmeierFile, RoundTripsThroughYaml) {
  const auto text = ln().to_yaml();
  const auto back = SellmeierModel::from_yaml(text);
  for (auto axis : {CrystalAxis::kOrdinary, CrystalAxis::kExtraordinary})
    EXPECT_EQ(refractive_index(back, axis, 1.31e-6, 72.0), refractive_index(ln(), axis, 1.31e-6, 72.0));
}

TEST(SellmeierFile, ShippedDataFileMatchesBuiltIn) {
  const auto file = SellmeierModel::load(PPLNHOM_DATA_DIR "/lithium_niobate_congruent.yaml");
  for (auto axis : {CrystalAxis::kOrdinary, CrystalAxis::kExtraordinary})
    EXPECT_EQ(refractive_index(file, axis, 1.31e-6, 72.0), refractive_index(ln(), axis, 1.31e-6, 72.0));
}

TEST(SellmeierFile, UnknownKeyReportsLocation) {
  auto text = ln().to_yaml() + "bogus: 1\n";
  try {
    SellmeierModel::from_yaml(text, "coeffs.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("coeffs.yaml:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;
  }
}

TEST(SellmeierFile, MissingCoefficientIsError) {
  const std::string text = R"(name: x
ordinary: {a1: 4.9, a2: 0.1, a3: 0.2}
extraordinary: {a1: 4.5, a2: 0.1, a3: 0.2, a4: 0.02, b1: 0, b2: 0, b3: 0}
)";
  EXPECT_THROW(SellmeierModel::from_yaml(text), ConfigError);
}
