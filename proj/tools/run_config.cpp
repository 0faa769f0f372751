#include "run_config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#ifndef QAMP_PRESET_DIR
#define QAMP_PRESET_DIR "presets"
#endif

namespace qamp::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw config_error(where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw config_error(where + "." + it.key(), "unknown field");
    }
  }
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw config_error(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw config_error(where, "must be finite");
  return x;
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw config_error(where, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw config_error(where, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw config_error(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& v, const std::string& where) {
  if (v.is_number()) return {get_number(v, where)};
  if (!v.is_array() || v.empty()) {
    throw config_error(where, "expected a number or a non-empty array");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

complex get_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {get_number(v, where), 0.0};
  if (!v.is_array() || v.size() != 2) {
    throw config_error(where, "expected [re, im]");
  }
  return {get_number(v[0], where + "[0]"), get_number(v[1], where + "[1]")};
}

InputField parse_input_object(const json& obj, const std::string& where,
                              std::optional<double>& temperature) {
  if (!obj.is_object() || !obj.contains("kind")) {
    throw config_error(where, "expected an object with a \"kind\"");
  }
  const std::string kind = get_string(obj["kind"], where + ".kind");
  temperature.reset();
  if (kind == "coherent") {
    check_keys(obj, where, {"kind", "alpha"});
    return Coherent{obj.contains("alpha")
                        ? get_complex(obj["alpha"], where + ".alpha")
                        : complex{}};
  }
  if (kind == "fock") {
    check_keys(obj, where, {"kind", "n"});
    if (!obj.contains("n")) throw config_error(where + ".n", "required");
    return Fock{get_int(obj["n"], where + ".n")};
  }
  if (kind == "squeezed") {
    check_keys(obj, where, {"kind", "r", "phi", "alpha"});
    if (!obj.contains("r")) throw config_error(where + ".r", "required");
    Squeezed s;
    s.r = get_number(obj["r"], where + ".r");
    if (obj.contains("phi")) s.phi = get_number(obj["phi"], where + ".phi");
    if (obj.contains("alpha")) s.alpha = get_complex(obj["alpha"], where + ".alpha");
    return s;
  }
  if (kind == "thermal") {
    check_keys(obj, where, {"kind", "nbar", "temperature"});
    if (obj.contains("nbar") == obj.contains("temperature")) {
      throw config_error(where, "give exactly one of nbar, temperature");
    }
    if (obj.contains("temperature")) {
      temperature = get_number(obj["temperature"], where + ".temperature");
      return Thermal{0.0};
    }
    return Thermal{get_number(obj["nbar"], where + ".nbar")};
  }
  throw config_error(where + ".kind",
                     "unknown input kind \"" + kind +
                         "\" (coherent, fock, squeezed, thermal)");
}

json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

json input_json(const RunConfig& cfg) {
  json j;
  j["kind"] = kind_name(cfg.input);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          j["alpha"] = complex_json(v.alpha);
        } else if constexpr (std::is_same_v<T, Fock>) {
          j["n"] = v.n;
        } else if constexpr (std::is_same_v<T, Squeezed>) {
          j["r"] = v.r;
          j["phi"] = v.phi;
          j["alpha"] = complex_json(v.alpha);
        } else {
          if (cfg.input_temperature) {
            j["temperature"] = *cfg.input_temperature;
          } else {
            j["nbar"] = v.nbar;
          }
        }
      },
      cfg.input);
  return j;
}

std::vector<double> split_numbers(const std::string& s,
                                  const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw config_error(where, "cannot read number \"" + item + "\"");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

void apply_json(RunConfig& cfg, const json& doc, const std::string& source) {
  const std::string& w = source;
  check_keys(doc, w,
             {"command", "params", "input", "tau", "output", "options",
              "description"});
  if (doc.contains("command")) cfg.command = get_string(doc["command"], w + ".command");

  if (doc.contains("params")) {
    const json& p = doc["params"];
    const std::string pw = w + ".params";
    check_keys(p, pw, {"aprime", "bprime", "nb", "tau0", "phase_rate", "omega0"});
    if (p.contains("bprime") && p.contains("nb")) {
      throw config_error(pw, "give only one of bprime, nb");
    }
    if (p.contains("aprime")) cfg.aprime = get_number_list(p["aprime"], pw + ".aprime");
    if (p.contains("bprime")) {
      cfg.bprime = get_number(p["bprime"], pw + ".bprime");
      cfg.nb.reset();
    }
    if (p.contains("nb")) {
      cfg.nb = get_number(p["nb"], pw + ".nb");
      cfg.bprime.reset();
    }
    if (p.contains("tau0")) cfg.tau0 = get_number(p["tau0"], pw + ".tau0");
    if (p.contains("phase_rate")) cfg.phase_rate = get_number(p["phase_rate"], pw + ".phase_rate");
    if (p.contains("omega0")) {
      if (p["omega0"].is_null()) {
        cfg.omega0.reset();
      } else {
        cfg.omega0 = get_number(p["omega0"], pw + ".omega0");
      }
    }
  }

  if (doc.contains("input")) {
    cfg.input = parse_input_object(doc["input"], w + ".input", cfg.input_temperature);
  }

  if (doc.contains("tau")) {
    const json& t = doc["tau"];
    const std::string tw = w + ".tau";
    check_keys(t, tw, {"start", "end", "samples"});
    if (t.contains("start")) cfg.tau_start = get_number(t["start"], tw + ".start");
    if (t.contains("end")) cfg.tau_end = get_number(t["end"], tw + ".end");
    if (t.contains("samples")) cfg.samples = get_int(t["samples"], tw + ".samples");
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    const std::string ow = w + ".output";
    check_keys(o, ow, {"path", "format"});
    if (o.contains("path")) cfg.out_path = get_string(o["path"], ow + ".path");
    if (o.contains("format")) cfg.format = get_string(o["format"], ow + ".format");
  }

  if (doc.contains("options")) {
    const json& o = doc["options"];
    const std::string ow = w + ".options";
    check_keys(o, ow,
               {"scan_points", "times", "p_order", "rotating_frame", "grid",
                "rate_window", "truncation", "step", "record_every"});
    if (o.contains("scan_points")) cfg.scan_points = get_int(o["scan_points"], ow + ".scan_points");
    if (o.contains("times")) cfg.times = get_number_list(o["times"], ow + ".times");
    if (o.contains("p_order")) cfg.p_order = get_int(o["p_order"], ow + ".p_order");
    if (o.contains("rotating_frame")) cfg.rotating_frame = get_bool(o["rotating_frame"], ow + ".rotating_frame");
    if (o.contains("grid")) {
      const json& g = o["grid"];
      const std::string gw = ow + ".grid";
      check_keys(g, gw, {"re_min", "re_max", "im_min", "im_max", "points", "coverage_sigmas"});
      auto opt_num = [&](const char* key, std::optional<double>& dst) {
        if (!g.contains(key)) return;
        dst = g[key].is_null() ? std::nullopt
                               : std::optional<double>(get_number(g[key], gw + "." + key));
      };
      opt_num("re_min", cfg.grid.re_min);
      opt_num("re_max", cfg.grid.re_max);
      opt_num("im_min", cfg.grid.im_min);
      opt_num("im_max", cfg.grid.im_max);
      if (g.contains("points")) cfg.grid.points = get_int(g["points"], gw + ".points");
      if (g.contains("coverage_sigmas")) cfg.grid.coverage_sigmas = get_number(g["coverage_sigmas"], gw + ".coverage_sigmas");
    }
    if (o.contains("rate_window")) {
      const auto win = get_number_list(o["rate_window"], ow + ".rate_window");
      if (win.size() != 2) throw config_error(ow + ".rate_window", "expected [from, to]");
      cfg.rate_from = win[0];
      cfg.rate_to = win[1];
    }
    if (o.contains("truncation")) {
      if (o["truncation"].is_null()) {
        cfg.truncation.reset();
      } else {
        cfg.truncation = get_int(o["truncation"], ow + ".truncation");
      }
    }
    if (o.contains("step")) cfg.step = get_number(o["step"], ow + ".step");
    if (o.contains("record_every")) cfg.record_every = get_number(o["record_every"], ow + ".record_every");
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open file");
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line:column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw config_error(path + ":" + std::to_string(line) + ":" + std::to_string(col),
                       "JSON syntax error");
  }
}

std::string preset_path(const std::string& name) {
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
      throw config_error("--preset", "invalid preset name \"" + name + "\"");
    }
  }
  const std::string path = std::string(QAMP_PRESET_DIR) + "/" + name + ".json";
  if (!std::ifstream(path)) {
    throw config_error("--preset", "no preset named \"" + name + "\" in " QAMP_PRESET_DIR);
  }
  return path;
}

InputField parse_input_spec(const std::string& spec) {
  const std::string w = "--input";
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw config_error(w, "expected KIND:VALUES, e.g. coherent:2,0");
  }
  const std::string kind = spec.substr(0, colon);
  const auto v = split_numbers(spec.substr(colon + 1), w);
  if (kind == "coherent" && v.size() == 2) return Coherent{{v[0], v[1]}};
  if (kind == "fock" && v.size() == 1) {
    if (v[0] != std::floor(v[0])) throw config_error(w, "fock level must be an integer");
    return Fock{static_cast<int>(v[0])};
  }
  if (kind == "squeezed" && v.size() == 2) return Squeezed{v[0], v[1], {}};
  if (kind == "thermal" && v.size() == 1) return Thermal{v[0]};
  throw config_error(w, "expected coherent:RE,IM | fock:N | squeezed:R,PHI | thermal:NBAR");
}

void validate(const RunConfig& cfg) {
  static const std::set<std::string> commands{
      "gain", "noise", "mandel", "squeezing", "wigner", "thermal", "oracle"};
  if (!commands.count(cfg.command)) {
    throw config_error("command", "unknown command \"" + cfg.command + "\"");
  }
  for (double a : cfg.aprime) {
    if (!(a > 0.0)) throw config_error("params.aprime", "must be > 0");
  }
  if (cfg.bprime && !(*cfg.bprime >= 0.0)) throw config_error("params.bprime", "must be >= 0");
  if (cfg.nb && !(*cfg.nb >= 0.0)) throw config_error("params.nb", "must be >= 0");
  if (!(cfg.tau0 >= 0.0)) throw config_error("params.tau0", "must be >= 0");
  if (cfg.omega0 && !(*cfg.omega0 > 0.0)) throw config_error("params.omega0", "must be > 0");
  if (!(cfg.tau_start >= 0.0)) throw config_error("tau.start", "must be >= 0");
  if (!(cfg.tau_end >= cfg.tau_start)) throw config_error("tau.end", "must be >= tau.start");
  if (cfg.samples < 2) throw config_error("tau.samples", "must be >= 2");
  if (cfg.format != "csv" && cfg.format != "json") {
    throw config_error("output.format", "must be csv or json");
  }
  if (cfg.input_temperature && !(*cfg.input_temperature > 0.0)) {
    throw config_error("input.temperature", "must be > 0");
  }
  try {
    qamp::validate(cfg.input);
  } catch (const std::exception& e) {
    throw config_error("input", e.what());
  }
  if (cfg.scan_points < 2) throw config_error("options.scan_points", "must be >= 2");
  for (double t : cfg.times) {
    if (!(t >= 0.0)) throw config_error("options.times", "must be >= 0");
  }
  if (cfg.p_order < -1 || cfg.p_order > 1) {
    throw config_error("options.p_order", "must be -1 (Q), 0 (Wigner) or 1 (P)");
  }
  if (cfg.grid.points < 2) throw config_error("options.grid.points", "must be >= 2");
  const bool any_bound = cfg.grid.re_min || cfg.grid.re_max || cfg.grid.im_min || cfg.grid.im_max;
  const bool all_bounds = cfg.grid.re_min && cfg.grid.re_max && cfg.grid.im_min && cfg.grid.im_max;
  if (any_bound && !all_bounds) {
    throw config_error("options.grid", "give all four bounds or none");
  }
  if (!(cfg.grid.coverage_sigmas > 0.0)) {
    throw config_error("options.grid.coverage_sigmas", "must be > 0");
  }
  if (!(cfg.rate_to > cfg.rate_from) || !(cfg.rate_from >= 0.0)) {
    throw config_error("options.rate_window", "need 0 <= from < to");
  }
  if (cfg.truncation && *cfg.truncation < 2) {
    throw config_error("options.truncation", "must be >= 2");
  }
  if (!(cfg.step > 0.0)) throw config_error("options.step", "must be > 0");
  if (!(cfg.record_every > 0.0)) throw config_error("options.record_every", "must be > 0");
  if (cfg.command == "squeezing" && !std::holds_alternative<Squeezed>(cfg.input)) {
    throw config_error("input", "squeezing needs a squeezed input");
  }
  if (cfg.command == "thermal" && !std::holds_alternative<Thermal>(cfg.input)) {
    throw config_error("input", "thermal needs a thermal input");
  }
  if (cfg.command == "wigner" && !is_gaussian(cfg.input)) {
    throw config_error("input", "wigner grids need a Gaussian input (coherent, squeezed, thermal)");
  }
}

json to_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  json p;
  p["aprime"] = cfg.aprime;
  if (cfg.bprime) {
    p["bprime"] = *cfg.bprime;
  } else {
    p["nb"] = cfg.nb.value_or(0.0);
  }
  p["tau0"] = cfg.tau0;
  p["phase_rate"] = cfg.phase_rate;
  p["omega0"] = cfg.omega0 ? json(*cfg.omega0) : json(nullptr);
  j["params"] = p;
  j["input"] = input_json(cfg);
  j["tau"] = {{"start", cfg.tau_start}, {"end", cfg.tau_end}, {"samples", cfg.samples}};
  j["output"] = {{"path", cfg.out_path}, {"format", cfg.format}};
  json o;
  o["scan_points"] = cfg.scan_points;
  o["times"] = cfg.times;
  o["p_order"] = cfg.p_order;
  o["rotating_frame"] = cfg.rotating_frame;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  o["grid"] = {{"re_min", opt(cfg.grid.re_min)},
               {"re_max", opt(cfg.grid.re_max)},
               {"im_min", opt(cfg.grid.im_min)},
               {"im_max", opt(cfg.grid.im_max)},
               {"points", cfg.grid.points},
               {"coverage_sigmas", cfg.grid.coverage_sigmas}};
  o["rate_window"] = {cfg.rate_from, cfg.rate_to};
  o["truncation"] = cfg.truncation ? json(*cfg.truncation) : json(nullptr);
  o["step"] = cfg.step;
  o["record_every"] = cfg.record_every;
  j["options"] = o;
  return j;
}

}  // namespace qamp::cli
