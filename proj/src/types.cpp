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

#include "geoqkd/types.hpp"

#include <array>
#include <utility>

#include "geoqkd/errors.hpp"

namespace geoqkd {
namespace {

template <class E, std::size_t N>
E lookup(const std::array<std::pair<std::string_view, E>, N>& names, std::string_view s,
         const char* what) {
  for (const auto& [name, value] : names) {
    if (name == s) return value;
  }
  std::string msg = std::string("unknown ") + what + " '" + std::string(s) + "'; expected one of:";
  for (const auto& [name, value] : names) msg += " " + std::string(name);
  throw InputError(msg);
}

template <class E, std::size_t N>
std::string_view name_of(const std::array<std::pair<std::string_view, E>, N>& names, E v) {
  for (const auto& [name, value] : names) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, Site>, 3> kSites{
    {{"rural", Site::rural}, {"urban", Site::urban}, {"coastal", Site::coastal}}};
constexpr std::array<std::pair<std::string_view, CloudRegime>, 3> kRegimes{
    {{"clear", CloudRegime::clear}, {"thin", CloudRegime::thin}, {"thick", CloudRegime::thick}}};
constexpr std::array<std::pair<std::string_view, Illumination>, 4> kIllum{
    {{"night", Illumination::night},
     {"day_low", Illumination::day_low},
     {"day_moderate", Illumination::day_moderate},
     {"day_high", Illumination::day_high}}};
constexpr std::array<std::pair<std::string_view, Architecture>, 3> kArch{
    {{"active_asym", Architecture::active_asym},
     {"passive_asym", Architecture::passive_asym},
     {"passive_sym", Architecture::passive_sym}}};
constexpr std::array<std::pair<std::string_view, Coupling>, 2> kCoupling{
    {{"smf", Coupling::smf}, {"fs", Coupling::fs}}};

}  // namespace

std::string_view to_string(Site s) { return name_of(kSites, s); }
std::string_view to_string(CloudRegime r) { return name_of(kRegimes, r); }
std::string_view to_string(Illumination i) { return name_of(kIllum, i); }
std::string_view to_string(Architecture a) { return name_of(kArch, a); }
std::string_view to_string(Coupling c) { return name_of(kCoupling, c); }

Site parse_site(std::string_view s) { return lookup(kSites, s, "site"); }
CloudRegime parse_cloud_regime(std::string_view s) { return lookup(kRegimes, s, "cloud regime"); }
Illumination parse_illumination(std::string_view s) {
  return lookup(kIllum, s, "illumination");
}
Architecture parse_architecture(std::string_view s) {
  return lookup(kArch, s, "architecture");
}
Coupling parse_coupling(std::string_view s) { return lookup(kCoupling, s, "coupling"); }

}  // namespace geoqkd
