#include <gtest/gtest.h>

#include <sstream>

#include "pplnhom/config.hpp"
#include "pplnhom/errors.hpp"
#include "pplnhom/io.hpp"

using namespace pplnhom;

namespace {

std::string error_of(std::string_view yaml) {
  try {
    parse_run_config(yaml, "run.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(RunConfig, DefaultIsCalibratedAndValid) {
  const auto c = default_run_config();
  EXPECT_NO_THROW(c.validate());
  EXPECT_TRUE(c.waveguide.calibrated);
  EXPECT_NEAR(c.detector_a.coincidence_window_s, 1.0 / 90e6, 1e-20);
  EXPECT_GT(c.losses.arm_a, 0.0);
  EXPECT_LE(c.losses.arm_a, 1.0);
}

TEST(RunConfig, EmptyFileStartsUncalibrated) {
  const auto c = parse_run_config("");
  EXPECT_FALSE(c.waveguide.calibrated);
  EXPECT_EQ(c.waveguide.index_offset_h, 0.0);
}

TEST(RunConfig, RoundTripPreservesHash) {
  const auto c = default_run_config();
  const auto back = parse_run_config(to_yaml(c));
  EXPECT_TRUE(back.waveguide.calibrated);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(to_yaml(back), to_yaml(c));
}

TEST(RunConfig, ValuesUseUnitSuffixedKeys) {
  const auto c = parse_run_config(R"(
waveguide: {length_mm: 20, poling_period_um: 6.55, temperature_c: 70.5}
hom: {half_range_mm: 4, step_um: 2, temperatures_c: [72, 72.5]}
detectors: {a: {coincidence_window_ns: 5}}
seed: 42
)");
  EXPECT_DOUBLE_EQ(c.waveguide.length_m, 0.020);
  EXPECT_NEAR(c.waveguide.poling_period_m, 6.55e-6, 1e-18);
  EXPECT_EQ(c.waveguide.temperature_c, 70.5);
  EXPECT_NEAR(c.hom.step_m, 2e-6, 1e-18);
  EXPECT_EQ(c.hom.temperatures_c.size(), 2u);
  EXPECT_NEAR(c.detector_a.coincidence_window_s, 5e-9, 1e-20);
  EXPECT_EQ(c.seed, 42u);
}

TEST(RunConfig, UnknownKeyReportsLineAndSection) {
  const auto msg = error_of("waveguide:\n  length_mm: 36\n  lenght_mm: 36\n");
  EXPECT_NE(msg.find("run.yaml:3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("lenght_mm"), std::string::npos) << msg;
  EXPECT_NE(msg.find("waveguide"), std::string::npos) << msg;
  EXPECT_FALSE(error_of("bogus: 1\n").empty());
  EXPECT_FALSE(error_of("detectors: {c: {efficiency: 0.1}}\n").empty());
}

TEST(RunConfig, InvalidValuesAreRejected) {
  EXPECT_FALSE(error_of("detectors: {a: {efficiency: 1.5}}\n").empty());
  EXPECT_FALSE(error_of("hom: {mode_overlap: -0.1}\n").empty());
  EXPECT_FALSE(error_of("waveguide: {h_axis: ordinary, v_axis: ordinary}\n").empty());
  EXPECT_FALSE(error_of("waveguide: {length_mm: banana}\n").empty());
  EXPECT_FALSE(error_of("grid: {mismatch: cubic}\n").empty());
  EXPECT_FALSE(error_of("waveguide: [1, 2]\n").empty());
  EXPECT_FALSE(error_of("waveguide: {length_mm: 36\n").empty());
}

TEST(RunConfig, MaterialFileIsResolvedAgainstConfigDirectory) {
  const auto c = parse_run_config("material: lithium_niobate_congruent.yaml\n", "cfg", PPLNHOM_DATA_DIR);
  ASSERT_TRUE(c.material_file.has_value());
  EXPECT_EQ(c.waveguide.material.name(), "congruent LiNbO3");
  EXPECT_THROW(parse_run_config("material: missing.yaml\n", "cfg", PPLNHOM_DATA_DIR), ConfigError);
}

TEST(RunConfig, HashIgnoresOutputDirButNotPhysics) {
  auto a = default_run_config();
  auto b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.waveguide.temperature_c = 72.5;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Io, NumberFormattingIsShortestStable) {
  EXPECT_EQ(format_number(6.6000000000000005), "6.6");
  EXPECT_EQ(format_number(654.99999999999989), "655");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Io, HeaderCarriesVersionAndHash) {
  std::ostringstream out;
  write_header(out, OutputHeader{"abc123", {{"k", "v"}}});
  const auto text = out.str();
  EXPECT_NE(text.find("# tool_version: " + std::string(kToolVersion)), std::string::npos);
  EXPECT_NE(text.find("# config_hash: abc123"), std::string::npos);
  EXPECT_NE(text.find("# k: v"), std::string::npos);
}
