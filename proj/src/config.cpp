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

#include "geoqkd/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geoqkd/errors.hpp"

namespace geoqkd::config {
namespace {

using nlohmann::json;
using pipeline::Scenario;

// Reads one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InputError("config: " + where() + " must be an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <class T>
  bool get(const std::string& key, T& out) {
    const json* v = find(key);
    if (v == nullptr) return false;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw json::type_error::create(302, "expected a boolean", v);
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v->is_number()) throw json::type_error::create(302, "expected a number", v);
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v->is_string()) throw json::type_error::create(302, "expected a string", v);
      }
      out = v->get<T>();
    } catch (const json::exception&) {
      throw InputError("config: wrong type for key '" + key_path(key) + "'");
    }
    return true;
  }

  template <class T>
  void get_optional(const std::string& key, std::optional<T>& out) {
    T v{};
    if (get(key, v)) out = v;
  }

  template <class T, class Parse>
  void get_enum(const std::string& key, T& out, Parse parse) {
    std::string v;
    if (!get(key, v)) return;
    try {
      out = parse(v);
    } catch (const InputError&) {
      throw InputError("config: invalid value '" + v + "' for key '" + key_path(key) + "'");
    }
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return Section(*v, key_path(key));
  }

  // Rejects keys that no reader asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw InputError("config: unknown key '" + key_path(it.key()) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "the document" : "'" + path_ + "'"; }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

background::FovMode parse_fov(std::string_view s) {
  if (s == "airy") return background::FovMode::airy;
  if (s == "smf") return background::FovMode::smf;
  if (s == "explicit") return background::FovMode::explicit_angle;
  throw InputError("unknown field-of-view mode");
}

std::string fov_name(background::FovMode m) {
  switch (m) {
    case background::FovMode::airy: return "airy";
    case background::FovMode::smf: return "smf";
    case background::FovMode::explicit_angle: return "explicit";
  }
  return "smf";
}

std::string detector_name(background::DetectorType t) {
  return t == background::DetectorType::snspd ? "snspd" : "apd";
}

std::string tier_name(background::DetectorTier t) {
  return t == background::DetectorTier::a ? "a" : "b";
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw InputError("config: '" + path + "' is not valid JSON: " + e.what());
  }
}

pipeline::Scenario scenario_from_json(const json& j) {
  Scenario s;
  Section root(j, "");
  int schema = 1;
  if (root.get("schema", schema) && schema != 1) {
    throw InputError("config: unsupported schema " + std::to_string(schema));
  }
  root.get("wavelength_nm", s.lambda_nm);

  if (auto sec = root.child("link")) {
    auto& g = s.geometry;
    sec->get("ogs_latitude_deg", g.ogs_latitude_deg);
    sec->get("ogs_longitude_deg", g.ogs_longitude_deg);
    sec->get("ogs_altitude_km", g.ogs_altitude_km);
    sec->get("sat_longitude_deg", g.sat_longitude_deg);
    sec->get("sat_altitude_km", g.sat_altitude_km);
    sec->get("earth_radius_km", g.earth_radius_km);
    sec->get_optional("zenith_deg", s.zenith_deg);
    sec->finish();
  }
  if (auto sec = root.child("optics")) {
    auto& o = s.optics;
    sec->get("a_T_m", o.a_T_m);
    sec->get("omega0_m", o.omega0_m);
    sec->get("M2", o.M2);
    sec->get("a_R_m", o.a_R_m);
    double jitter_urad = o.sigma_p_rad * 1e6;
    if (sec->get("pointing_jitter_urad", jitter_urad)) o.sigma_p_rad = jitter_urad * 1e-6;
    sec->get_enum("coupling", o.coupling, parse_coupling);
    sec->get("eta0_smf", o.eta0_smf);
    double fov_urad = o.fov_rad * 1e6;
    if (sec->get("fs_fov_urad", fov_urad)) o.fov_rad = fov_urad * 1e-6;
    sec->get("receiver_loss_db", o.receiver_loss_db);
    sec->get("ao_bandwidth_hz", o.f_c_hz);
    sec->get("tip_tilt_bandwidth_hz", o.f_tc_hz);
    sec->finish();
  }
  if (auto sec = root.child("atmosphere")) {
    sec->get_enum("site", s.site, parse_site);
    sec->get_enum("cloud", s.cloud, parse_cloud_regime);
    sec->get_enum("illumination", s.illumination, parse_illumination);
    sec->finish();
  }
  if (auto sec = root.child("noise")) {
    sec->get("filter_bandwidth_ghz", s.filter_bandwidth_ghz);
    double gate_ns = s.gate_s * 1e9;
    if (sec->get("gate_ns", gate_ns)) s.gate_s = gate_ns * 1e-9;
    background::FovMode mode{};
    const bool has_mode = [&] {
      std::string v;
      if (!sec->get("fov_mode", v)) return false;
      try {
        mode = parse_fov(v);
      } catch (const InputError&) {
        throw InputError("config: invalid value '" + v + "' for key 'noise.fov_mode'");
      }
      return true;
    }();
    if (has_mode) s.fov_mode = mode;
    double fov_urad = s.fov_rad * 1e6;
    if (sec->get("fov_urad", fov_urad)) s.fov_rad = fov_urad * 1e-6;
    sec->get_optional("radiance_mW_m2_nm_sr", s.radiance);
    sec->finish();
  }
  if (auto sec = root.child("detector")) {
    sec->get_enum("type", s.detector_type, background::parse_detector_type);
    sec->get_enum("tier", s.detector_tier, background::parse_detector_tier);
    sec->get_optional("eta_D", s.eta_D);
    sec->get_optional("dark_count_rate_hz", s.dark_count_rate_hz);
    sec->get_optional("p_ap", s.p_ap);
    sec->finish();
  }
  if (auto sec = root.child("protocol")) {
    auto& p = s.protocol;
    sec->get("N", p.N);
    sec->get("mu", p.mu);
    sec->get("p_mu", p.p_mu);
    sec->get("p_X", p.p_X);
    sec->get("truncation", p.truncation);
    sec->get("auto_truncation", s.auto_truncation);
    sec->get("eps_tot", p.eps_tot);
    sec->get("f_EC", p.f_EC);
    sec->get_enum("architecture", p.architecture, parse_architecture);
    sec->get("s", p.s);
    sec->get("r", p.r);
    sec->get("strict_lp", p.strict_lp);
    sec->get("e_mis", s.e_mis);
    sec->get("source_rate_hz", s.source_rate_hz);
    sec->finish();
  }
  if (auto sec = root.child("abstract")) {
    pipeline::AbstractChannel a;
    sec->get("loss_db", a.loss_db);
    sec->get("p_noise", a.p_noise);
    sec->get("p_ap", a.p_ap);
    sec->finish();
    s.abstract_channel = a;
  }
  root.finish();
  s.validate();
  return s;
}

pipeline::Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_json(path));
}

json scenario_to_json(const pipeline::Scenario& s) {
  json j;
  j["schema"] = 1;
  j["wavelength_nm"] = s.lambda_nm;
  const auto& g = s.geometry;
  j["link"] = {{"ogs_latitude_deg", g.ogs_latitude_deg},
               {"ogs_longitude_deg", g.ogs_longitude_deg},
               {"ogs_altitude_km", g.ogs_altitude_km},
               {"sat_longitude_deg", g.sat_longitude_deg},
               {"sat_altitude_km", g.sat_altitude_km},
               {"earth_radius_km", g.earth_radius_km}};
  if (s.zenith_deg) j["link"]["zenith_deg"] = *s.zenith_deg;
  const auto& o = s.optics;
  j["optics"] = {{"a_T_m", o.a_T_m},
                 {"omega0_m", o.omega0_m},
                 {"M2", o.M2},
                 {"a_R_m", o.a_R_m},
                 {"pointing_jitter_urad", o.sigma_p_rad * 1e6},
                 {"coupling", std::string(to_string(o.coupling))},
                 {"eta0_smf", o.eta0_smf},
                 {"fs_fov_urad", o.fov_rad * 1e6},
                 {"receiver_loss_db", o.receiver_loss_db},
                 {"ao_bandwidth_hz", o.f_c_hz},
                 {"tip_tilt_bandwidth_hz", o.f_tc_hz}};
  j["atmosphere"] = {{"site", std::string(to_string(s.site))},
                     {"cloud", std::string(to_string(s.cloud))},
                     {"illumination", std::string(to_string(s.illumination))}};
  j["noise"] = {{"filter_bandwidth_ghz", s.filter_bandwidth_ghz},
                {"gate_ns", s.gate_s * 1e9},
                {"fov_urad", s.fov_rad * 1e6}};
  if (s.fov_mode) j["noise"]["fov_mode"] = fov_name(*s.fov_mode);
  if (s.radiance) j["noise"]["radiance_mW_m2_nm_sr"] = *s.radiance;
  j["detector"] = {{"type", detector_name(s.detector_type)},
                   {"tier", tier_name(s.detector_tier)}};
  if (s.eta_D) j["detector"]["eta_D"] = *s.eta_D;
  if (s.dark_count_rate_hz) j["detector"]["dark_count_rate_hz"] = *s.dark_count_rate_hz;
  if (s.p_ap) j["detector"]["p_ap"] = *s.p_ap;
  const auto& p = s.protocol;
  j["protocol"] = {{"N", p.N},
                   {"mu", p.mu},
                   {"p_mu", p.p_mu},
                   {"p_X", p.p_X},
                   {"truncation", p.truncation},
                   {"auto_truncation", s.auto_truncation},
                   {"eps_tot", p.eps_tot},
                   {"f_EC", p.f_EC},
                   {"architecture", std::string(to_string(p.architecture))},
                   {"s", p.s},
                   {"r", p.r},
                   {"strict_lp", p.strict_lp},
                   {"e_mis", s.e_mis},
                   {"source_rate_hz", s.source_rate_hz}};
  if (s.abstract_channel) {
    j["abstract"] = {{"loss_db", s.abstract_channel->loss_db},
                     {"p_noise", s.abstract_channel->p_noise},
                     {"p_ap", s.abstract_channel->p_ap}};
  }
  return j;
}

json rounded(double v) {
  if (!std::isfinite(v)) return v > 0 ? json("inf") : v < 0 ? json("-inf") : json("nan");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

double to_db(double eta) {
  return eta > 0.0 ? -10.0 * std::log10(eta) : std::numeric_limits<double>::infinity();
}

json bounds_to_json(const security::SinglePhotonBounds& b) {
  return {{"n1Z_L", rounded(b.n1Z_L)}, {"n1Z_U", rounded(b.n1Z_U)},
          {"n1X_L", rounded(b.n1X_L)}, {"n1X_U", rounded(b.n1X_U)},
          {"m1X_L", rounded(b.m1X_L)}, {"m1X_U", rounded(b.m1X_U)}};
}

}  // namespace

json result_to_json(const pipeline::PointResult& r, const pipeline::Scenario& s) {
  const auto& k = r.key;
  const auto& l = r.link;
  json j;
  j["schema"] = "geoqkd.result.v1";
  j["scenario"] = scenario_to_json(s);
  j["key"] = {{"ell", rounded(k.ell)},
              {"ell_per_N", rounded(k.rate)},
              {"ell_continuous", rounded(k.ell_continuous)},
              {"status", k.status},
              {"phi1_U", rounded(k.phi1_U)},
              {"lambda_EC", rounded(k.lambda_EC)},
              {"lp_fallback", k.lp_fallback},
              {"truncation", r.protocol.truncation},
              {"bounds", bounds_to_json(k.bounds)}};
  if (r.protocol.architecture == Architecture::passive_sym) {
    j["key"]["ell_Z"] = rounded(k.ell_Z);
    j["key"]["ell_X"] = rounded(k.ell_X);
  }
  if (r.protocol.architecture == Architecture::passive_asym) {
    j["key"]["B0_Z"] = rounded(k.B0_Z);
    j["key"]["B0_X"] = rounded(k.B0_X);
    j["key"]["V_mc"] = rounded(k.V_mc);
  }
  if (l.abstract_mode) {
    j["loss_budget_db"] = {{"total", rounded(l.loss_db)}};
  } else {
    j["loss_budget_db"] = {{"geometric", rounded(to_db(l.eta_geo))},
                           {"pointing", rounded(to_db(l.eta_p))},
                           {"coupling", rounded(to_db(l.eta_cpl))},
                           {"atmosphere", rounded(to_db(l.eta_atm))},
                           {"receiver", rounded(to_db(l.eta_R))},
                           {"detector", rounded(to_db(l.eta_D))},
                           {"total", rounded(l.loss_db)}};
  }
  j["link"] = {{"abstract", l.abstract_mode},
               {"zenith_deg", rounded(l.zenith_deg)},
               {"slant_range_km", rounded(l.rho_km)},
               {"strehl", rounded(l.strehl)},
               {"radiance_mW_m2_nm_sr", rounded(l.radiance)},
               {"nbar", rounded(l.nbar)},
               {"p_dark", rounded(l.p_dark)},
               {"p_noise", rounded(l.p_noise)},
               {"p_noise_Z", rounded(l.p_noise_Z)},
               {"p_noise_X", rounded(l.p_noise_X)},
               {"p_ap", rounded(l.p_ap)}};
  return j;
}

void set_path(json& j, const std::string& dotted, const json& value) {
  if (dotted.empty()) throw InputError("config: empty key path");
  std::vector<std::string> parts;
  std::stringstream ss(dotted);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw InputError("config: malformed key path '" + dotted + "'");
    parts.push_back(p);
  }
  json* node = &j;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw InputError("config: '" + dotted + "' crosses a non-object");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw InputError("config: '" + dotted + "' crosses a non-object");
  (*node)[parts.back()] = value;
}

}  // namespace geoqkd::config
