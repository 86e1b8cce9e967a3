#include "pplnhom/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "pplnhom/constants.hpp"
#include "pplnhom/errors.hpp"
#include "pplnhom/io.hpp"
#include "yaml_support.hpp"

namespace pplnhom {

namespace {

using detail::StrictMap;

std::string_view mismatch_name(MismatchModel m) {
  return m == MismatchModel::kLinearized ? "linearized" : "exact";
}

MismatchModel parse_mismatch(StrictMap& map, const std::string& key, MismatchModel fallback) {
  if (!map.has(key)) return fallback;
  const auto text = map.required<std::string>(key);
  if (text == "linearized") return MismatchModel::kLinearized;
  if (text == "exact") return MismatchModel::kExact;
  map.fail(map.raw(key), "mismatch must be 'linearized' or 'exact'");
}

template <typename Fn>
auto with_location(StrictMap& map, const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    map.fail(map.raw(key), e.what());
  }
}

void read_waveguide(StrictMap m, WaveguideSpec& w) {
  w.length_m = m.get("length_mm", w.length_m / kMillimetre) * kMillimetre;
  w.poling_period_m = m.get("poling_period_um", w.poling_period_m / kMicrometre) * kMicrometre;
  w.temperature_c = m.get("temperature_c", w.temperature_c);
  w.pump_wavelength_m =
      m.get("pump_wavelength_nm", w.pump_wavelength_m / kNanometre) * kNanometre;
  auto h = w.axes.h_axis();
  auto v = w.axes.v_axis();
  auto pump = w.axes.pump();
  if (m.has("h_axis"))
    h = with_location(m, "h_axis", [&] { return parse_axis(m.required<std::string>("h_axis")); });
  if (m.has("v_axis"))
    v = with_location(m, "v_axis", [&] { return parse_axis(m.required<std::string>("v_axis")); });
  if (m.has("pump_polarization"))
    pump = with_location(m, "pump_polarization", [&] {
      return parse_polarization(m.required<std::string>("pump_polarization"));
    });
  w.axes = with_location(m, m.has("v_axis") ? "v_axis" : "h_axis",
                         [&] { return AxisPolarizationMap(h, v, pump); });
  w.index_offset_h = m.get("index_offset_h", w.index_offset_h);
  w.index_offset_v = m.get("index_offset_v", w.index_offset_v);
  w.calibrated = m.get("calibrated", w.calibrated);
  m.finish();
}

void read_detector(StrictMap m, DetectorSpec& d) {
  d.efficiency = m.get("efficiency", d.efficiency);
  d.dark_rate_hz = m.get("dark_rate_hz", d.dark_rate_hz);
  d.coincidence_window_s =
      m.get("coincidence_window_ns", d.coincidence_window_s / kNanometre) * kNanometre;
  m.finish();
}

std::vector<double> read_list(StrictMap& m, const std::string& key, std::vector<double> fallback,
                              double scale) {
  if (!m.has(key)) return fallback;
  auto node = m.raw(key);
  if (!node.IsSequence()) m.fail(node, key + " must be a list");
  std::vector<double> out;
  for (const auto& item : node) {
    try {
      out.push_back(item.as<double>() * scale);
    } catch (const YAML::Exception&) {
      m.fail(item, key + " entries must be numbers");
    }
  }
  return out;
}

void emit_scaled_list(YAML::Emitter& out, const std::vector<double>& values, double scale) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) out << v / scale;
  out << YAML::EndSeq;
}

}  // namespace

void RunConfig::validate() const {
  waveguide.validate();
  detector_a.validate();
  detector_b.validate();
  losses.validate();
  hom.indistinguishability.validate();
  if (!(offset_bound > 0.0)) throw ConfigError("offset_bound must be positive");
  if (!(hom.half_range_m > 0.0 && hom.step_m > 0.0))
    throw ConfigError("hom scan range and step must be positive");
  if (!(hom.integration_s > 0.0)) throw ConfigError("hom integration time must be positive");
  if (!(source.pair_rate_hz >= 0.0)) throw ConfigError("pair rate must be >= 0");
  if (!(source.pump_power_mw > 0.0 && source.bandwidth_nm > 0.0))
    throw ConfigError("pump power and bandwidth must be positive");
  if (!(monte_carlo.duration_s > 0.0)) throw ConfigError("Monte Carlo duration must be positive");
  if (grid.points < 16 || grid.points % 2 != 0)
    throw ConfigError("grid points must be even and >= 16");
}

RunConfig default_run_config() {
  RunConfig c;
  const auto cal = calibrate(c.waveguide, c.calibration, c.offset_bound);
  if (!cal.success) throw DomainError("built-in calibration failed: " + cal.message);
  c.waveguide = cal.spec;
  const double filters = c.losses.highpass_filter * c.losses.bandpass_filter;
  const double coupling =
      fit_arm_coupling(c.source.pair_rate_hz, c.source.target_singles_hz,
                       c.source.target_coincidences_hz, c.detector_a, filters);
  c.losses.arm_a = coupling;
  c.losses.arm_b = coupling;
  c.detector_a.coincidence_window_s =
      calibrate_coincidence_window(100.0 / 5.0, c.detector_a.dark_rate_hz,
                                   c.detector_b.dark_rate_hz);
  c.detector_b.coincidence_window_s = c.detector_a.coincidence_window_s;
  return c;
}

RunConfig parse_run_config(std::string_view yaml, std::string_view origin,
                           const std::filesystem::path& base_dir) {
  RunConfig c = default_run_config();
  // File-based configs start uncalibrated unless they carry their own offsets.
  c.waveguide.index_offset_h = 0.0;
  c.waveguide.index_offset_v = 0.0;
  c.waveguide.calibrated = false;

  auto doc = detail::parse_document(yaml, origin);
  if (!doc || doc.IsNull()) return c;
  StrictMap root(doc, "", origin);

  if (root.has("material")) {
    const auto m = root.required<std::string>("material");
    if (m != "builtin") {
      std::filesystem::path p(m);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      c.material_file = p;
      c.waveguide.material = SellmeierModel::load(p);
    }
  }
  if (auto s = root.section("waveguide")) read_waveguide(std::move(*s), c.waveguide);
  if (auto s = root.section("calibration")) {
    auto& t = c.calibration;
    t.pump_wavelength_m =
        s->get("pump_wavelength_nm", t.pump_wavelength_m / kNanometre) * kNanometre;
    t.poling_period_m = s->get("poling_period_um", t.poling_period_m / kMicrometre) * kMicrometre;
    t.temperature_c = s->get("temperature_c", t.temperature_c);
    c.offset_bound = s->get("offset_bound", c.offset_bound);
    s->finish();
  }
  if (auto s = root.section("grid")) {
    c.grid.points = s->get<std::size_t>("points", c.grid.points);
    c.grid.half_width_fwhm = s->get("half_width_fwhm", c.grid.half_width_fwhm);
    c.grid.mismatch = parse_mismatch(*s, "mismatch", c.grid.mismatch);
    s->finish();
  }
  if (auto s = root.section("detectors")) {
    if (auto a = s->section("a")) read_detector(std::move(*a), c.detector_a);
    if (auto b = s->section("b")) read_detector(std::move(*b), c.detector_b);
    s->finish();
  }
  if (auto s = root.section("losses")) {
    auto& l = c.losses;
    l.highpass_filter = s->get("highpass_filter", l.highpass_filter);
    l.bandpass_filter = s->get("bandpass_filter", l.bandpass_filter);
    l.arm_a = s->get("arm_a", l.arm_a);
    l.arm_b = s->get("arm_b", l.arm_b);
    s->finish();
  }
  if (auto s = root.section("source")) {
    auto& src = c.source;
    src.pair_rate_hz = s->get("pair_rate_hz", src.pair_rate_hz);
    src.pump_power_mw = s->get("pump_power_mw", src.pump_power_mw);
    src.bandwidth_nm = s->get("bandwidth_nm", src.bandwidth_nm);
    src.target_singles_hz = s->get("target_singles_hz", src.target_singles_hz);
    src.target_coincidences_hz = s->get("target_coincidences_hz", src.target_coincidences_hz);
    s->finish();
  }
  if (auto s = root.section("hom")) {
    auto& h = c.hom;
    h.indistinguishability.mode_overlap =
        s->get("mode_overlap", h.indistinguishability.mode_overlap);
    h.indistinguishability.interferometer_loss_db =
        s->get("interferometer_loss_db", h.indistinguishability.interferometer_loss_db);
    h.half_range_m = s->get("half_range_mm", h.half_range_m / kMillimetre) * kMillimetre;
    h.step_m = s->get("step_um", h.step_m / kMicrometre) * kMicrometre;
    h.integration_s = s->get("integration_s", h.integration_s);
    h.temperatures_c = read_list(*s, "temperatures_c", h.temperatures_c, 1.0);
    s->finish();
  }
  if (auto s = root.section("tuning")) {
    auto& t = c.tuning;
    t.temperature_from_c = s->get("temperature_from_c", t.temperature_from_c);
    t.temperature_to_c = s->get("temperature_to_c", t.temperature_to_c);
    t.temperature_step_c = s->get("temperature_step_c", t.temperature_step_c);
    t.poling_periods_m = read_list(*s, "poling_periods_um", t.poling_periods_m, kMicrometre);
    t.poling_temperature_c = s->get("poling_temperature_c", t.poling_temperature_c);
    s->finish();
  }
  if (auto s = root.section("monte_carlo")) {
    c.monte_carlo.duration_s = s->get("duration_s", c.monte_carlo.duration_s);
    c.monte_carlo.accidental_delay_s =
        s->get("accidental_delay_us", c.monte_carlo.accidental_delay_s / kMicrometre) *
        kMicrometre;
    s->finish();
  }
  if (root.has("output_dir")) c.output_dir = root.required<std::string>("output_dir");
  c.seed = root.get<std::uint64_t>("seed", c.seed);
  root.finish();

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.string(), path.parent_path());
}

std::string to_yaml(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(15);
  out << YAML::BeginMap;
  out << YAML::Key << "material" << YAML::Value
      << (c.material_file ? c.material_file->string() : std::string("builtin"));

  const auto& w = c.waveguide;
  out << YAML::Key << "waveguide" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "length_mm" << YAML::Value << w.length_m / kMillimetre;
  out << YAML::Key << "poling_period_um" << YAML::Value << w.poling_period_m / kMicrometre;
  out << YAML::Key << "temperature_c" << YAML::Value << w.temperature_c;
  out << YAML::Key << "pump_wavelength_nm" << YAML::Value << w.pump_wavelength_m / kNanometre;
  out << YAML::Key << "h_axis" << YAML::Value << std::string(to_string(w.axes.h_axis()));
  out << YAML::Key << "v_axis" << YAML::Value << std::string(to_string(w.axes.v_axis()));
  out << YAML::Key << "pump_polarization" << YAML::Value
      << std::string(to_string(w.axes.pump()));
  out << YAML::Key << "index_offset_h" << YAML::Value << w.index_offset_h;
  out << YAML::Key << "index_offset_v" << YAML::Value << w.index_offset_v;
  out << YAML::Key << "calibrated" << YAML::Value << w.calibrated;
  out << YAML::EndMap;

  const auto& t = c.calibration;
  out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pump_wavelength_nm" << YAML::Value << t.pump_wavelength_m / kNanometre;
  out << YAML::Key << "poling_period_um" << YAML::Value << t.poling_period_m / kMicrometre;
  out << YAML::Key << "temperature_c" << YAML::Value << t.temperature_c;
  out << YAML::Key << "offset_bound" << YAML::Value << c.offset_bound;
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "points" << YAML::Value << c.grid.points;
  out << YAML::Key << "half_width_fwhm" << YAML::Value << c.grid.half_width_fwhm;
  out << YAML::Key << "mismatch" << YAML::Value << std::string(mismatch_name(c.grid.mismatch));
  out << YAML::EndMap;

  auto detector = [&](const char* key, const DetectorSpec& d) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "efficiency" << YAML::Value << d.efficiency;
    out << YAML::Key << "dark_rate_hz" << YAML::Value << d.dark_rate_hz;
    out << YAML::Key << "coincidence_window_ns" << YAML::Value
        << d.coincidence_window_s / kNanometre;
    out << YAML::EndMap;
  };
  out << YAML::Key << "detectors" << YAML::Value << YAML::BeginMap;
  detector("a", c.detector_a);
  detector("b", c.detector_b);
  out << YAML::EndMap;

  const auto& l = c.losses;
  out << YAML::Key << "losses" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "highpass_filter" << YAML::Value << l.highpass_filter;
  out << YAML::Key << "bandpass_filter" << YAML::Value << l.bandpass_filter;
  out << YAML::Key << "arm_a" << YAML::Value << l.arm_a;
  out << YAML::Key << "arm_b" << YAML::Value << l.arm_b;
  out << YAML::EndMap;

  const auto& s = c.source;
  out << YAML::Key << "source" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pair_rate_hz" << YAML::Value << s.pair_rate_hz;
  out << YAML::Key << "pump_power_mw" << YAML::Value << s.pump_power_mw;
  out << YAML::Key << "bandwidth_nm" << YAML::Value << s.bandwidth_nm;
  out << YAML::Key << "target_singles_hz" << YAML::Value << s.target_singles_hz;
  out << YAML::Key << "target_coincidences_hz" << YAML::Value << s.target_coincidences_hz;
  out << YAML::EndMap;

  const auto& h = c.hom;
  out << YAML::Key << "hom" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode_overlap" << YAML::Value << h.indistinguishability.mode_overlap;
  out << YAML::Key << "interferometer_loss_db" << YAML::Value
      << h.indistinguishability.interferometer_loss_db;
  out << YAML::Key << "half_range_mm" << YAML::Value << h.half_range_m / kMillimetre;
  out << YAML::Key << "step_um" << YAML::Value << h.step_m / kMicrometre;
  out << YAML::Key << "integration_s" << YAML::Value << h.integration_s;
  out << YAML::Key << "temperatures_c" << YAML::Value;
  emit_scaled_list(out, h.temperatures_c, 1.0);
  out << YAML::EndMap;

  const auto& tu = c.tuning;
  out << YAML::Key << "tuning" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "temperature_from_c" << YAML::Value << tu.temperature_from_c;
  out << YAML::Key << "temperature_to_c" << YAML::Value << tu.temperature_to_c;
  out << YAML::Key << "temperature_step_c" << YAML::Value << tu.temperature_step_c;
  out << YAML::Key << "poling_periods_um" << YAML::Value;
  emit_scaled_list(out, tu.poling_periods_m, kMicrometre);
  out << YAML::Key << "poling_temperature_c" << YAML::Value << tu.poling_temperature_c;
  out << YAML::EndMap;

  out << YAML::Key << "monte_carlo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "duration_s" << YAML::Value << c.monte_carlo.duration_s;
  out << YAML::Key << "accidental_delay_us" << YAML::Value
      << c.monte_carlo.accidental_delay_s / kMicrometre;
  out << YAML::EndMap;

  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir.string();
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const RunConfig& config) {
  RunConfig hashed = config;
  hashed.output_dir.clear();  // where results go does not change them
  return hex64(fnv1a64(to_yaml(hashed) + config.waveguide.material.to_yaml()));
}

}  // namespace pplnhom
