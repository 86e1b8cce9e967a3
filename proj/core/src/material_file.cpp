#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>
#include <vector>

#include "pplnhom/dispersion.hpp"
#include "yaml_support.hpp"

namespace pplnhom {

namespace {

SellmeierCoefficients read_axis(detail::StrictMap map) {
  SellmeierCoefficients c;
  c.a1 = map.required<double>("a1");
  c.a2 = map.required<double>("a2");
  c.a3 = map.required<double>("a3");
  c.a4 = map.required<double>("a4");
  c.b1 = map.get<double>("b1", 0.0);
  c.b2 = map.get<double>("b2", 0.0);
  c.b3 = map.get<double>("b3", 0.0);
  map.finish();
  return c;
}

void write_axis(YAML::Emitter& out, const SellmeierCoefficients& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "a1" << YAML::Value << c.a1;
  out << YAML::Key << "a2" << YAML::Value << c.a2;
  out << YAML::Key << "a3" << YAML::Value << c.a3;
  out << YAML::Key << "a4" << YAML::Value << c.a4;
  out << YAML::Key << "b1" << YAML::Value << c.b1;
  out << YAML::Key << "b2" << YAML::Value << c.b2;
  out << YAML::Key << "b3" << YAML::Value << c.b3;
  out << YAML::EndMap;
}

std::pair<double, double> read_bounds(detail::StrictMap& map, const std::string& key,
                                      std::pair<double, double> fallback) {
  if (!map.has(key)) return fallback;
  auto node = map.raw(key);
  if (!node.IsSequence() || node.size() != 2) map.fail(node, key + " must be [min, max]");
  return {node[0].as<double>(), node[1].as<double>()};
}

}  // namespace

SellmeierModel SellmeierModel::from_yaml(std::string_view text, std::string_view origin) {
  auto doc = detail::parse_document(text, origin);
  detail::StrictMap root(doc, "", origin);
  auto name = root.get<std::string>("name", "unnamed");
  const double t_ref = root.get<double>("reference_temperature_c", 24.5);
  const double t_shift = root.get<double>("temperature_shift_c", 570.82);

  ValidityWindow window;
  if (auto v = root.section("validity")) {
    const auto wl = read_bounds(*v, "wavelength_um", {window.wavelength_min_um,
                                                      window.wavelength_max_um});
    const auto tc = read_bounds(*v, "temperature_c", {window.temperature_min_c,
                                                      window.temperature_max_c});
    v->finish();
    window = {wl.first, wl.second, tc.first, tc.second};
  }
  auto o = root.section("ordinary");
  auto e = root.section("extraordinary");
  if (!o || !e) root.fail(doc, "both 'ordinary' and 'extraordinary' sections are required");
  const auto co = read_axis(*o);
  const auto ce = read_axis(*e);
  root.finish();
  return SellmeierModel(std::move(name), co, ce, window, t_ref, t_shift);
}

SellmeierModel SellmeierModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open material file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_yaml(buf.str(), path.string());
}

std::string SellmeierModel::to_yaml() const {
  YAML::Emitter out;
  out.SetDoublePrecision(15);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << name_;
  out << YAML::Key << "reference_temperature_c" << YAML::Value << t_ref_;
  out << YAML::Key << "temperature_shift_c" << YAML::Value << t_shift_;
  out << YAML::Key << "validity" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "wavelength_um" << YAML::Value << YAML::Flow
      << std::vector<double>{window_.wavelength_min_um, window_.wavelength_max_um};
  out << YAML::Key << "temperature_c" << YAML::Value << YAML::Flow
      << std::vector<double>{window_.temperature_min_c, window_.temperature_max_c};
  out << YAML::EndMap;
  out << YAML::Key << "ordinary" << YAML::Value;
  write_axis(out, ordinary_);
  out << YAML::Key << "extraordinary" << YAML::Value;
  write_axis(out, extraordinary_);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace pplnhom
