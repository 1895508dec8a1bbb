// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rcurves/config.hpp"

#include <fstream>
#include <set>

#include "rcurves/errors.hpp"

namespace rcurves {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void expect_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown field");
}

const json& need(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path + "/" + key, "missing field");
  return j.at(key);
}

long long to_int(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_string()) {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(j.get<std::string>(), &pos);
      if (pos != j.get<std::string>().size()) fail(path, "malformed integer");
      return v;
    } catch (const std::exception&) {
      fail(path, "malformed integer");
    }
  }
  fail(path, "expected an integer (number or decimal string)");
}

Rational to_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    try {
      return rational_from_string(j.get<std::string>());
    } catch (const ConfigError& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected an exact number (integer or decimal string)");
}

std::vector<Rational> to_rational_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(to_rational(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<std::vector<Rational>> to_rational_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(to_rational_vector(j[i], path + "/" + std::to_string(i)));
  return out;
}

CenterSpec parse_center(const json& j, const std::string& path) {
  CenterSpec c;
  const json& kj = need(j, path, "kind");
  if (!kj.is_string()) fail(path + "/kind", "expected a string");
  const std::string kind = kj.get<std::string>();
  if (kind == "linear") {
    expect_keys(j, path, {"kind", "equations"});
    c.kind = CenterKind::linear;
    const json& eq = need(j, path, "equations");
    if (!eq.is_array()) fail(path + "/equations", "expected an array (one entry per factor)");
    for (std::size_t k = 0; k < eq.size(); ++k)
      c.equations.push_back(to_rational_matrix(eq[k], path + "/equations/" + std::to_string(k)));
  } else if (kind == "infinitesimal") {
    expect_keys(j, path, {"kind", "parent", "chart", "direction"});
    c.kind = CenterKind::infinitesimal;
    c.parent = static_cast<int>(to_int(need(j, path, "parent"), path + "/parent"));
    c.chart = static_cast<int>(to_int(need(j, path, "chart"), path + "/chart"));
    c.direction = to_rational_vector(need(j, path, "direction"), path + "/direction");
  } else {
    fail(path + "/kind", "unknown center kind \"" + kind + "\"");
  }
  return c;
}

FieldConfig parse_field(const json& j, const std::string& path) {
  FieldConfig f;
  expect_keys(j, path, {"kind", "prime", "seed"});
  const std::string kind = need(j, path, "kind").get<std::string>();
  if (kind == "rationals")
    f.kind = FieldKind::rationals;
  else if (kind == "prime-field")
    f.kind = FieldKind::prime_field;
  else
    fail(path + "/kind", "unknown field kind \"" + kind + "\"");
  if (j.contains("prime"))
    f.prime = static_cast<std::uint64_t>(to_int(j.at("prime"), path + "/prime"));
  else if (f.kind == FieldKind::prime_field)
    fail(path + "/prime", "missing field");
  if (j.contains("seed")) f.seed = static_cast<std::uint64_t>(to_int(j.at("seed"), path + "/seed"));
  try {
    validate_field_config(f);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return f;
}

ExperimentSpec parse_experiment(const json& j, const std::string& path) {
  ExperimentSpec e;
  expect_keys(j, path, {"kind", "trials", "retries"});
  e.kind = need(j, path, "kind").get<std::string>();
  const std::set<std::string> kinds = {"fiber-dimension", "freeness", "splitting-census",
                                       "jet-roundtrip", "pencil-closure"};
  if (!kinds.count(e.kind)) fail(path + "/kind", "unknown experiment kind \"" + e.kind + "\"");
  if (j.contains("trials")) e.trials = static_cast<int>(to_int(j.at("trials"), path + "/trials"));
  if (e.trials < 1) fail(path + "/trials", "trials must be >= 1");
  if (j.contains("retries"))
    e.retries = static_cast<int>(to_int(j.at("retries"), path + "/retries"));
  if (e.retries < 1) fail(path + "/retries", "retries must be >= 1");
  return e;
}

}  // namespace

Config parse_config(const nlohmann::json& j) {
  Config cfg;
  expect_keys(j, "", {"ambient", "centers", "beta", "data", "jets", "field", "experiment"});

  const json& ambient = need(j, "", "ambient");
  if (!ambient.is_array() || ambient.empty()) fail("/ambient", "expected a nonempty array");
  for (std::size_t k = 0; k < ambient.size(); ++k) {
    const long long n = to_int(ambient[k], "/ambient/" + std::to_string(k));
    if (n < 1) fail("/ambient/" + std::to_string(k), "factor dimension must be positive");
    cfg.tower.ambient.factor_dims.push_back(static_cast<int>(n));
  }

  if (j.contains("centers")) {
    const json& centers = j.at("centers");
    if (!centers.is_array()) fail("/centers", "expected an array");
    for (std::size_t i = 0; i < centers.size(); ++i)
      cfg.tower.centers.push_back(parse_center(centers[i], "/centers/" + std::to_string(i)));
  }

  const json& beta = need(j, "", "beta");
  expect_keys(beta, "/beta", {"degrees", "e_total"});
  const json& degs = need(beta, "/beta", "degrees");
  if (!degs.is_array()) fail("/beta/degrees", "expected an array");
  for (std::size_t k = 0; k < degs.size(); ++k)
    cfg.beta.degrees.push_back(to_int(degs[k], "/beta/degrees/" + std::to_string(k)));
  if (beta.contains("e_total")) {
    if (!beta.at("e_total").is_array()) fail("/beta/e_total", "expected an array");
    for (std::size_t i = 0; i < beta.at("e_total").size(); ++i)
      cfg.beta.total_mult.push_back(
          to_int(beta.at("e_total")[i], "/beta/e_total/" + std::to_string(i)));
  }

  if (j.contains("data")) {
    const json& data = j.at("data");
    if (!data.is_array()) fail("/data", "expected an array");
    for (std::size_t a = 0; a < data.size(); ++a) {
      const std::string path = "/data/" + std::to_string(a);
      expect_keys(data[a], path, {"p", "center", "q", "mult"});
      DatumSpec d;
      d.p = to_rational_vector(need(data[a], path, "p"), path + "/p");
      if (d.p.size() != 2) fail(path + "/p", "a point of the line has two coordinates");
      d.center = static_cast<int>(to_int(need(data[a], path, "center"), path + "/center"));
      if (data[a].contains("q")) d.target = to_rational_matrix(data[a].at("q"), path + "/q");
      if (data[a].contains("mult")) d.mult = to_int(data[a].at("mult"), path + "/mult");
      cfg.data.push_back(std::move(d));
    }
  }

  if (j.contains("jets")) {
    const json& jets = j.at("jets");
    if (!jets.is_array()) fail("/jets", "expected an array");
    for (std::size_t a = 0; a < jets.size(); ++a) {
      const std::string path = "/jets/" + std::to_string(a);
      expect_keys(jets[a], path, {"p", "q", "order", "series"});
      JetSpec s;
      s.p = to_rational_vector(need(jets[a], path, "p"), path + "/p");
      if (s.p.size() != 2) fail(path + "/p", "a point of the line has two coordinates");
      s.base = to_rational_matrix(need(jets[a], path, "q"), path + "/q");
      s.order = static_cast<int>(to_int(need(jets[a], path, "order"), path + "/order"));
      if (s.order < 1) fail(path + "/order", "jet order must be >= 1");
      s.series = to_rational_matrix(need(jets[a], path, "series"), path + "/series");
      for (std::size_t g = 0; g < s.series.size(); ++g)
        if (static_cast<int>(s.series[g].size()) != s.order)
          fail(path + "/series/" + std::to_string(g),
               "expected " + std::to_string(s.order) + " coefficients (orders 1.." +
                   std::to_string(s.order) + "; the constant term is the base point)");
      cfg.jets.push_back(std::move(s));
    }
  }

  cfg.field = parse_field(need(j, "", "field"), "/field");

  if (j.contains("experiment"))
    cfg.experiment = parse_experiment(j.at("experiment"), "/experiment");

  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace rcurves
