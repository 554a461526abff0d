// Copyright 2026 The geoqkd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

namespace geoqkd {

/// Ground-station environment class.
enum class Site { rural, urban, coastal };

/// Sky condition along the line of sight.
enum class CloudRegime { clear, thin, thick };

/// Background illumination scenario.
enum class Illumination { night, day_low, day_moderate, day_high };

/// Receiver architecture.
enum class Architecture { active_asym, passive_asym, passive_sym };

/// Coupling of the collected light into the detection path.
enum class Coupling { smf, fs };

std::string_view to_string(Site s);
std::string_view to_string(CloudRegime r);
std::string_view to_string(Illumination i);
std::string_view to_string(Architecture a);
std::string_view to_string(Coupling c);

Site parse_site(std::string_view s);
CloudRegime parse_cloud_regime(std::string_view s);
Illumination parse_illumination(std::string_view s);
Architecture parse_architecture(std::string_view s);
Coupling parse_coupling(std::string_view s);

/// Physical constants shared across modules.
namespace constants {
inline constexpr double c = 2.998e8;        // m/s
inline constexpr double hbar = 1.055e-34;   // J s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double seconds_per_year = 3.15576e7;
}  // namespace constants

/// The three signal wavelengths studied, in nanometres.
namespace wavelengths {
inline constexpr double h_alpha = 656.448;
inline constexpr double ca_ii = 854.445;
inline constexpr double c_band = 1550.027;
}  // namespace wavelengths

/// True when two wavelengths in nm refer to the same tabulated line.
inline bool same_wavelength(double a_nm, double b_nm) {
  return (a_nm > b_nm ? a_nm - b_nm : b_nm - a_nm) < 0.5;
}

}  // namespace geoqkd
