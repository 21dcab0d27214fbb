#ifndef NLWAVE_PRESETS_HPP
#define NLWAVE_PRESETS_HPP

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "nlwave/grid.hpp"

namespace nlwave {

struct Preset {
  std::string name;
  std::string description;
  nlohmann::json config;
};

// The six built-in scenarios: linear-dispersion, energy-conservation,
// blowup-negative-energy, blowup-positive-energy, global-smooth-kernel,
// global-singular-kernel.
const std::vector<Preset>& preset_catalog();
const Preset* find_preset(std::string_view name);

// Initial-data builders shared by the config layer and the tests.
// gaussian_bump subtracts the sample mean, so the result is exactly
// zero-mean on the grid.
RealField gaussian_bump(const GridPtr& grid, double amplitude, double width);
RealField cosine_mode(const GridPtr& grid, double amplitude, int mode);

}  // namespace nlwave

#endif
