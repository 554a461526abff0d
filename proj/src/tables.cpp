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

#include "geoqkd/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "geoqkd/errors.hpp"

namespace geoqkd::tables {
namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

// Comment lines start with '#'; the first other line is the header.
Csv read_csv(const std::string& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file " + path);
  Csv csv;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto cells = split(line);
    if (csv.header.empty()) {
      csv.header = cells;
      if (csv.header != expected) {
        std::string want;
        for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
        throw DataError(path + ": header must be '" + want + "'");
      }
      continue;
    }
    if (cells.size() != expected.size()) {
      throw DataError(path + ":" + std::to_string(n) + ": expected " +
                      std::to_string(expected.size()) + " fields");
    }
    csv.rows.push_back(std::move(cells));
    csv.line_numbers.push_back(n);
  }
  if (csv.header.empty()) throw DataError(path + ": missing header");
  return csv;
}

double number(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw DataError(where + ": not a number: '" + s + "'");
  }
  return v;
}

template <class F>
auto at_line(const std::string& path, int line, F f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw DataError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

long wavelength_key(double nm) { return std::lround(nm); }

std::string describe(Site s, double nm, CloudRegime r) {
  std::ostringstream os;
  os << "site=" << to_string(s) << " wavelength_nm=" << nm << " cloud_regime=" << to_string(r);
  return os.str();
}

}  // namespace

AtmosphereTable AtmosphereTable::from_rows(std::vector<AtmosphereRow> rows) {
  AtmosphereTable t;
  for (const auto& r : rows) {
    if (!(r.transmission > 0.0 && r.transmission <= 1.0)) {
      throw DataError("transmission must lie in (0, 1] for " +
                      describe(r.site, r.wavelength_nm, r.regime));
    }
    if (!(r.zenith_deg >= 0.0 && r.zenith_deg < 90.0)) {
      throw DataError("zenith angle must lie in [0, 90) for " +
                      describe(r.site, r.wavelength_nm, r.regime));
    }
    auto& c = t.curves_[{r.site, wavelength_key(r.wavelength_nm), r.regime}];
    for (const auto& [z, eta] : c) {
      if (z == r.zenith_deg) {
        throw DataError("duplicate row for " + describe(r.site, r.wavelength_nm, r.regime) +
                        " zenith_deg=" + std::to_string(z));
      }
    }
    c.emplace_back(r.zenith_deg, r.transmission);
  }
  for (auto& [k, c] : t.curves_) std::sort(c.begin(), c.end());
  t.rows_ = std::move(rows);
  return t;
}

AtmosphereTable AtmosphereTable::load(const std::string& path) {
  const auto csv =
      read_csv(path, {"site", "wavelength_nm", "cloud_regime", "zenith_deg", "transmission"});
  std::vector<AtmosphereRow> rows;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& c = csv.rows[i];
    const std::string where = path + ":" + std::to_string(csv.line_numbers[i]);
    rows.push_back(at_line(path, csv.line_numbers[i], [&] {
      return AtmosphereRow{parse_site(c[0]), number(c[1], where), parse_cloud_regime(c[2]),
                           number(c[3], where), number(c[4], where)};
    }));
  }
  return from_rows(std::move(rows));
}

const std::vector<std::pair<double, double>>& AtmosphereTable::curve(Site site, double nm,
                                                                     CloudRegime regime) const {
  const auto it = curves_.find({site, wavelength_key(nm), regime});
  if (it == curves_.end()) throw DataError("no atmosphere data for " + describe(site, nm, regime));
  return it->second;
}

double AtmosphereTable::transmission(Site site, double nm, CloudRegime regime,
                                     double theta_rad) const {
  const auto& c = curve(site, nm, regime);
  const double deg = std::clamp(theta_rad * 180.0 / constants::pi, c.front().first, c.back().first);
  if (c.size() == 1) return c.front().second;
  auto hi = std::lower_bound(c.begin(), c.end(), std::make_pair(deg, -1.0));
  if (hi == c.begin()) return hi->second;
  if (hi->first == deg) return hi->second;
  const auto lo = hi - 1;
  auto airmass = [](double d) { return 1.0 / std::cos(d * constants::pi / 180.0); };
  const double x0 = airmass(lo->first), x1 = airmass(hi->first), x = airmass(deg);
  const double y0 = -std::log(lo->second), y1 = -std::log(hi->second);
  return std::exp(-(y0 + (y1 - y0) * (x - x0) / (x1 - x0)));
}

void AtmosphereTable::validate() const {
  for (const auto& [key, c] : curves_) {
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (c[i].second > c[i - 1].second) {
        throw DataError("transmission increases with zenith angle for " +
                        describe(std::get<0>(key), static_cast<double>(std::get<1>(key)),
                                 std::get<2>(key)));
      }
    }
  }
  const CloudRegime order[] = {CloudRegime::clear, CloudRegime::thin, CloudRegime::thick};
  for (const auto& [key, c] : curves_) {
    if (std::get<2>(key) != CloudRegime::clear) continue;
    for (int j = 1; j < 3; ++j) {
      const auto other = curves_.find({std::get<0>(key), std::get<1>(key), order[j]});
      const auto prev = curves_.find({std::get<0>(key), std::get<1>(key), order[j - 1]});
      if (other == curves_.end() || prev == curves_.end()) continue;
      for (std::size_t i = 0; i < std::min(other->second.size(), prev->second.size()); ++i) {
        if (other->second[i].second > prev->second[i].second) {
          throw DataError("cloud ordering violated for " +
                          describe(std::get<0>(key), static_cast<double>(std::get<1>(key)),
                                   order[j]));
        }
      }
    }
  }
}

RadianceTable RadianceTable::from_rows(std::vector<RadianceRow> rows) {
  std::set<std::tuple<Site, long, Illumination>> seen;
  for (const auto& r : rows) {
    if (!(r.radiance >= 0.0)) throw DataError("radiance must be non-negative");
    if (!seen.insert({r.site, wavelength_key(r.wavelength_nm), r.illumination}).second) {
      throw DataError("duplicate radiance row for site=" + std::string(to_string(r.site)) +
                      " illumination=" + std::string(to_string(r.illumination)));
    }
  }
  RadianceTable t;
  t.rows_ = std::move(rows);
  return t;
}

RadianceTable RadianceTable::load(const std::string& path) {
  const auto csv =
      read_csv(path, {"site", "wavelength_nm", "illumination", "radiance_mW_m2_nm_sr"});
  std::vector<RadianceRow> rows;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& c = csv.rows[i];
    const std::string where = path + ":" + std::to_string(csv.line_numbers[i]);
    rows.push_back(at_line(path, csv.line_numbers[i], [&] {
      return RadianceRow{parse_site(c[0]), number(c[1], where), parse_illumination(c[2]),
                         number(c[3], where)};
    }));
  }
  return from_rows(std::move(rows));
}

double RadianceTable::radiance(Site site, double nm, Illumination illumination) const {
  for (const auto& r : rows_) {
    if (r.site == site && r.illumination == illumination && same_wavelength(r.wavelength_nm, nm)) {
      return r.radiance;
    }
  }
  std::ostringstream os;
  os << "no radiance data for site=" << to_string(site) << " wavelength_nm=" << nm
     << " illumination=" << to_string(illumination);
  throw DataError(os.str());
}

void RadianceTable::validate() const {
  for (const auto& r : rows_) {
    if (r.illumination != Illumination::night) continue;
    for (const auto& d : rows_) {
      if (d.site == r.site && d.illumination == Illumination::day_low &&
          same_wavelength(d.wavelength_nm, r.wavelength_nm) && r.radiance > d.radiance) {
        throw DataError("lunar radiance exceeds low daylight radiance for site=" +
                        std::string(to_string(r.site)));
      }
    }
  }
}

std::vector<CloudCell> load_cloud_grid(const std::string& path) {
  const auto csv = read_csv(path, {"lat", "lon", "f_clear", "f_thin", "f_thick"});
  std::vector<CloudCell> cells;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& c = csv.rows[i];
    const std::string where = path + ":" + std::to_string(csv.line_numbers[i]);
    CloudCell cell{number(c[0], where), number(c[1], where), number(c[2], where),
                   number(c[3], where), number(c[4], where)};
    const bool ok = cell.f_clear >= 0.0 && cell.f_thin >= 0.0 && cell.f_thick >= 0.0 &&
                    cell.f_clear + cell.f_thin + cell.f_thick <= 1.0 + 1e-12 &&
                    std::abs(cell.latitude_deg) <= 90.0;
    if (!ok) throw DataError(where + ": cloud fractions must be non-negative with sum <= 1");
    cells.push_back(cell);
  }
  return cells;
}

DataSet DataSet::load(const std::string& dir) {
  DataSet d{AtmosphereTable::load(dir + "/atmosphere.csv"),
            RadianceTable::load(dir + "/radiance.csv"),
            load_cloud_grid(dir + "/cloud_grid_europe.csv")};
  return d;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("GEOQKD_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
#ifdef GEOQKD_DEFAULT_DATA_DIR
  return GEOQKD_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace geoqkd::tables
