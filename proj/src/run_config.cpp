#include "qpe/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qpe {

namespace {

using nlohmann::json;

AxisSpec parse_axis(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError("grid." + name + " must be [lo, hi, count]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<int>()};
}

}  // namespace

SystemConfig RunConfig::system() const {
  SystemConfig config;
  config.alpha = alpha();
  config.gamma = gamma;
  config.u1 = u1;
  config.u2 = u2;
  config.dim = dim;
  config.validate();
  return config;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("configuration document must be a JSON object");
  }

  static const std::set<std::string> known = {
      "scenario", "alpha_re", "alpha_im", "gamma",      "u1",
      "u2",       "dim",      "tau_grid", "grid",       "epsilons",
      "seed",     "efficiency", "duration", "dt",       "candidates",
      "out_dir",  "format"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown configuration key: \"" + key + "\"");
    }
  }

  RunConfig rc;
  try {
    if (doc.contains("scenario")) rc.scenario = doc["scenario"].get<std::string>();
    if (doc.contains("alpha_re")) rc.alpha_re = doc["alpha_re"].get<double>();
    if (doc.contains("alpha_im")) rc.alpha_im = doc["alpha_im"].get<double>();
    if (doc.contains("gamma")) rc.gamma = doc["gamma"].get<double>();
    if (doc.contains("u1")) rc.u1 = doc["u1"].get<double>();
    if (doc.contains("u2")) rc.u2 = doc["u2"].get<double>();
    if (doc.contains("dim")) rc.dim = doc["dim"].get<int>();
    if (doc.contains("tau_grid")) {
      const json& t = doc["tau_grid"];
      if (!t.is_array() || t.size() != 3) {
        throw ConfigError("tau_grid must be [start, stop, count]");
      }
      rc.tau_grid = {t[0].get<double>(), t[1].get<double>(), t[2].get<int>()};
    }
    if (doc.contains("grid")) {
      const json& g = doc["grid"];
      if (!g.is_object()) throw ConfigError("grid must be an object");
      for (const auto& [key, value] : g.items()) {
        if (key == "u1") rc.grid.u1_range = parse_axis(value, "u1");
        else if (key == "u2") rc.grid.u2_range = parse_axis(value, "u2");
        else if (key == "alpha2") rc.grid.alpha2_range = parse_axis(value, "alpha2");
        else throw ConfigError("unknown configuration key: \"grid." + key + "\"");
      }
    }
    if (doc.contains("epsilons")) {
      rc.epsilons = doc["epsilons"].get<std::vector<double>>();
    }
    if (doc.contains("seed")) rc.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("efficiency")) rc.efficiency = doc["efficiency"].get<double>();
    if (doc.contains("duration")) rc.duration = doc["duration"].get<double>();
    if (doc.contains("dt")) rc.dt = doc["dt"].get<double>();
    if (doc.contains("candidates")) {
      const json& c = doc["candidates"];
      if (!c.is_object()) throw ConfigError("candidates must be an object");
      for (const auto& [key, value] : c.items()) {
        if (key == "center") rc.candidates.center = value.get<double>();
        else if (key == "spread") rc.candidates.spread = value.get<double>();
        else if (key == "n") rc.candidates.n = value.get<int>();
        else throw ConfigError("unknown configuration key: \"candidates." + key + "\"");
      }
    }
    if (doc.contains("out_dir")) rc.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("format")) rc.format = doc["format"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }

  if (rc.format != "csv" && rc.format != "json") {
    throw ConfigError("format must be \"csv\" or \"json\", got \"" +
                      rc.format + "\"");
  }
  if (rc.tau_grid.count < 1 || rc.tau_grid.start < 0.0 ||
      rc.tau_grid.stop < rc.tau_grid.start) {
    throw ConfigError("tau_grid must satisfy 0 <= start <= stop, count >= 1");
  }
  return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read configuration file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

}  // namespace qpe
