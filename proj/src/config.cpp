#include "planeq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

namespace {

std::string strip(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int parse_int(const std::string& text, const std::string& key) {
  try {
    size_t pos = 0;
    const int v = std::stoi(strip(text), &pos);
    if (pos != strip(text).size())
      throw ValidationError(key + ": trailing characters in '" + text + "'");
    return v;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError(key + ": expected integer, got '" + text + "'");
  }
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& kind,
                      const std::string& key) {
  const std::string t = strip(text);
  size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ValidationError(key + ": expected a number, got '" + text + "'");
  }
  std::string unit = strip(t.substr(pos));

  if (kind == "number") {
    if (!unit.empty())
      throw ValidationError(key + ": unexpected unit '" + unit + "'");
    return value;
  }
  if (kind == "length") {
    if (unit == "m") return value;
    if (unit == "cm") return value * 1e-2;
    if (unit == "mm") return value * 1e-3;
    if (unit == "um" || unit == "µm" || unit == "μm") return value * 1e-6;
    if (unit == "nm") return value * 1e-9;
    if (unit == "A" || unit == "Å" || unit == "angstrom" || unit == "Angstrom")
      return value * constants::angstrom_m;
    throw ValidationError(key + ": unknown length unit '" + unit + "'");
  }
  if (kind == "frequency") {
    if (unit == "Hz") return value;
    if (unit == "kHz") return value * 1e3;
    if (unit == "MHz") return value * 1e6;
    throw ValidationError(key + ": unknown frequency unit '" + unit + "'");
  }
  if (kind == "gradient") {
    if (unit == "T/m") return value;
    if (unit == "G/cm") return value * constants::gauss_per_cm_T_per_m;
    throw ValidationError(key + ": unknown gradient unit '" + unit + "'");
  }
  if (kind == "time") {
    if (unit == "s") return value;
    if (unit == "ms") return value * 1e-3;
    if (unit == "us" || unit == "µs" || unit == "μs") return value * 1e-6;
    throw ValidationError(key + ": unknown time unit '" + unit + "'");
  }
  throw ValidationError(key + ": unknown quantity kind '" + kind + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    cfg.present[key] = true;

    if (key == "lattice.pattern") {
      if (value == "single") cfg.lattice.pattern = ChainPattern::Single;
      else if (value == "hex") cfg.lattice.pattern = ChainPattern::CentralPlusSixHex;
      else if (value == "explicit") cfg.lattice.pattern = ChainPattern::Explicit;
      else throw ValidationError("lattice.pattern: unknown value '" + value + "'");
    } else if (key == "lattice.n_planes") {
      cfg.lattice.n_planes = parse_int(value, key);
    } else if (key == "lattice.chain_spacing") {
      cfg.lattice.chain_spacing_m = parse_quantity(value, "length", key);
    } else if (key == "lattice.chain_separation") {
      cfg.lattice.chain_separation_m = parse_quantity(value, "length", key);
    } else if (key == "lattice.chain_offsets_A") {
      // semicolon-separated x,y pairs in Angstrom: "0,0; 9.42,0"
      cfg.lattice.chain_offsets.clear();
      std::stringstream ss(value);
      std::string pair;
      while (std::getline(ss, pair, ';')) {
        pair = strip(pair);
        if (pair.empty()) continue;
        const auto comma = pair.find(',');
        if (comma == std::string::npos)
          throw ValidationError(key + ": expected 'x,y' pair, got '" + pair + "'");
        const double x = parse_quantity(pair.substr(0, comma), "number", key);
        const double y = parse_quantity(pair.substr(comma + 1), "number", key);
        cfg.lattice.chain_offsets.emplace_back(x * constants::angstrom_m,
                                               y * constants::angstrom_m);
      }
      if (cfg.lattice.chain_offsets.empty())
        throw ValidationError(key + ": no offsets given");
    } else if (key == "device.gradient") {
      cfg.gradient_T_per_m = parse_quantity(value, "gradient", key);
    } else if (key == "device.bandwidth") {
      cfg.bandwidth_hz = parse_quantity(value, "frequency", key);
    } else if (key == "device.sample_thickness") {
      cfg.sample_thickness_m = parse_quantity(value, "length", key);
    } else if (key == "device.sample_width") {
      cfg.sample_width_m = parse_quantity(value, "length", key);
    } else if (key == "device.sample_depth") {
      cfg.sample_depth_m = parse_quantity(value, "length", key);
    } else if (key == "device.strategy") {
      if (value == "nn") cfg.strategy = OverlapStrategy::Nn;
      else if (value == "nnn") cfg.strategy = OverlapStrategy::Nnn;
      else throw ValidationError("device.strategy: unknown value '" + value + "'");
    } else if (key == "device.broadening") {
      cfg.broadening_hz = parse_quantity(value, "frequency", key);
    } else if (key == "simulation.carrier_plane") {
      cfg.carrier_plane = parse_int(value, key);
    } else if (key == "simulation.lg_amplitude") {
      cfg.lg_amplitude_hz = parse_quantity(value, "frequency", key);
    } else if (key == "simulation.recouple_amplitude") {
      cfg.recouple_amplitude_hz = parse_quantity(value, "frequency", key);
    } else if (key == "simulation.recouple_tilt_sign") {
      cfg.recouple_tilt_sign = parse_int(value, key);
    } else if (key == "simulation.mrev_tau") {
      cfg.mrev_tau_s = parse_quantity(value, "time", key);
    } else if (key == "simulation.mrev_offset") {
      cfg.mrev_offset_hz = parse_quantity(value, "frequency", key);
    } else if (key == "simulation.aht_tolerance") {
      cfg.aht_rel_tolerance = parse_quantity(value, "number", key);
      if (!(cfg.aht_rel_tolerance > 0.0))
        throw ValidationError("simulation.aht_tolerance: must be > 0");
    } else if (key == "simulation.plane_a") {
      cfg.plane_a = parse_int(value, key);
    } else if (key == "simulation.plane_b") {
      cfg.plane_b = parse_int(value, key);
    } else if (key == "simulation.coupling_cutoff") {
      cfg.coupling_cutoff_hz = parse_quantity(value, "frequency", key);
    } else {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

PlannerConfig RunConfig::planner_config() const {
  PlannerConfig pc;
  pc.gradient_T_per_m = gradient_T_per_m;
  pc.bandwidth_hz = bandwidth_hz;
  pc.sample_thickness_m = sample_thickness_m;
  pc.sample_width_m = sample_width_m;
  pc.sample_depth_m = sample_depth_m;
  pc.chain_spacing_m = lattice.chain_spacing_m;
  pc.chain_separation_m = lattice.chain_separation_m;
  pc.strategy = strategy;
  pc.broadening_hz = broadening_hz.value_or(-1.0);
  return pc;
}

}  // namespace planeq
