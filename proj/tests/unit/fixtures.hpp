#pragma once

#include "pplnhom/biphoton.hpp"
#include "pplnhom/qpm.hpp"

namespace fixture {

/// Default waveguide with offsets fitted to degeneracy at 1310 nm, 72 C.
inline const pplnhom::WaveguideSpec& calibrated() {
  static const pplnhom::WaveguideSpec spec = pplnhom::calibrate(pplnhom::WaveguideSpec{}).spec;
  return spec;
}

inline pplnhom::WaveguideSpec at_temperature(double t_c) {
  auto spec = calibrated();
  spec.temperature_c = t_c;
  return spec;
}

inline pplnhom::TwoPhotonState state_at(double t_c, const pplnhom::GridOptions& grid = {}) {
  return pplnhom::build_state(at_temperature(t_c), grid);
}

}  // namespace fixture
