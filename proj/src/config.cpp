#include "focklab/config.hpp"

#include <cctype>
#include <random>

#include "json.hpp"

#include "focklab/serialize.hpp"

namespace focklab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg, const std::string& pointer) {
  throw ConfigError(msg, pointer);
}

double want_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail("expected a number", ptr);
  return j.get<double>();
}

unsigned want_uint(const json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<int64_t>() < 0)
    fail("expected a nonnegative integer", ptr);
  return j.get<unsigned>();
}

std::vector<double> want_doubles(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail("expected an array of numbers", ptr);
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(want_number(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

Ensemble parse_ensemble(const json& j, unsigned modes,
                        const std::string& ptr) {
  if (!j.is_object()) fail("expected an ensemble table", ptr);
  for (const char* key : {"phi", "pi", "weights"})
    if (!j.contains(key)) fail(std::string("missing ") + key, ptr + "/" + key);
  Ensemble ens;
  const json& phi = j["phi"];
  const json& pi = j["pi"];
  if (!phi.is_array() || !pi.is_array() || phi.size() != pi.size())
    fail("phi and pi must be equal-length arrays of points", ptr + "/phi");
  for (size_t k = 0; k < phi.size(); ++k) {
    auto p = want_doubles(phi[k], ptr + "/phi/" + std::to_string(k));
    auto q = want_doubles(pi[k], ptr + "/pi/" + std::to_string(k));
    if (p.size() != modes || q.size() != modes)
      fail("point has wrong mode count", ptr + "/phi/" + std::to_string(k));
    PhasePoint point;
    point.phi = Eigen::Map<Eigen::VectorXd>(p.data(), p.size());
    point.pi = Eigen::Map<Eigen::VectorXd>(q.data(), q.size());
    ens.points.push_back(point);
  }
  ens.weights = want_doubles(j["weights"], ptr + "/weights");
  try {
    ens.validate(modes);
  } catch (const std::invalid_argument& e) {
    fail(e.what(), ptr + "/weights");
  }
  return ens;
}

ExperimentConfig from_json_value(const json& j) {
  if (!j.is_object()) fail("config must be an object", "/");
  ExperimentConfig cfg;
  if (j.contains("system")) {
    const json& sys = j["system"];
    if (!sys.is_object()) fail("expected a system table", "/system");
    if (sys.contains("modes")) cfg.modes = want_uint(sys["modes"], "/system/modes");
    if (sys.contains("cutoff"))
      cfg.cutoff = want_uint(sys["cutoff"], "/system/cutoff");
  }
  if (j.contains("lattice")) {
    const json& lat = j["lattice"];
    if (!lat.is_object()) fail("expected a lattice table", "/lattice");
    LatticeSpec spec;
    spec.d = want_uint(lat.value("d", json(1)), "/lattice/d");
    spec.M = want_uint(lat.value("M", json(3)), "/lattice/M");
    spec.dx = want_number(lat.value("dx", json(1.0)), "/lattice/dx");
    spec.fields = want_uint(lat.value("fields", json(1)), "/lattice/fields");
    auto masses = want_doubles(lat.value("masses", json::array({1.0})),
                               "/lattice/masses");
    spec.masses = Eigen::Map<Eigen::VectorXd>(masses.data(), masses.size());
    try {
      validate_spec(spec);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), "/lattice");
    }
    cfg.lattice = spec;
  }
  if (j.contains("hamiltonian")) {
    if (!j["hamiltonian"].is_string())
      fail("expected a string", "/hamiltonian");
    cfg.hamiltonian = j["hamiltonian"].get<std::string>();
  }
  if (j.contains("ensemble"))
    cfg.ensemble = parse_ensemble(j["ensemble"], cfg.modes, "/ensemble");
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    if (!s.is_object()) fail("expected a sampler table", "/sampler");
    SamplerSpec spec;
    spec.points = want_uint(s.value("points", json(1)), "/sampler/points");
    spec.amplitude =
        want_number(s.value("amplitude", json(0.5)), "/sampler/amplitude");
    if (spec.points == 0) fail("sampler needs points >= 1", "/sampler/points");
    if (!(spec.amplitude > 0))
      fail("sampler amplitude must be > 0", "/sampler/amplitude");
    cfg.sampler = spec;
  }
  if (j.contains("evolve")) {
    const json& e = j["evolve"];
    if (!e.is_object()) fail("expected an evolve table", "/evolve");
    if (e.contains("t_max")) cfg.t_max = want_number(e["t_max"], "/evolve/t_max");
    if (e.contains("dt")) cfg.dt = want_number(e["dt"], "/evolve/dt");
    if (e.contains("sample_stride"))
      cfg.sample_stride = want_uint(e["sample_stride"], "/evolve/sample_stride");
    if (e.contains("derivative_orders"))
      cfg.derivative_orders =
          want_uint(e["derivative_orders"], "/evolve/derivative_orders");
    if (cfg.dt <= 0) fail("dt must be > 0", "/evolve/dt");
    if (cfg.t_max < 0) fail("t_max must be >= 0", "/evolve/t_max");
    if (cfg.sample_stride == 0)
      fail("sample_stride must be >= 1", "/evolve/sample_stride");
  }
  if (j.contains("tolerance"))
    cfg.tolerance = want_number(j["tolerance"], "/tolerance");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<int64_t>() < 0)
      fail("expected a nonnegative integer", "/seed");
    cfg.seed = j["seed"].get<uint64_t>();
  }
  return cfg;
}

// ---- TOML subset ----------------------------------------------------------

struct TomlCursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
};

void skip_ws(TomlCursor& c, bool newlines) {
  while (c.pos < c.text.size()) {
    char ch = c.text[c.pos];
    if (ch == '#') {
      while (c.pos < c.text.size() && c.text[c.pos] != '\n') ++c.pos;
    } else if (ch == '\n') {
      if (!newlines) return;
      ++c.line;
      ++c.pos;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++c.pos;
    } else {
      return;
    }
  }
}

json parse_toml_value(TomlCursor& c) {
  skip_ws(c, false);
  if (c.pos >= c.text.size()) fail("unexpected end of value", "/");
  char ch = c.text[c.pos];
  if (ch == '[') {
    ++c.pos;
    json arr = json::array();
    skip_ws(c, true);
    if (c.pos < c.text.size() && c.text[c.pos] == ']') {
      ++c.pos;
      return arr;
    }
    while (true) {
      arr.push_back(parse_toml_value(c));
      skip_ws(c, true);
      if (c.pos < c.text.size() && c.text[c.pos] == ',') {
        ++c.pos;
        skip_ws(c, true);
        continue;
      }
      if (c.pos < c.text.size() && c.text[c.pos] == ']') {
        ++c.pos;
        return arr;
      }
      fail("expected , or ] in array (line " + std::to_string(c.line) + ")",
           "/");
    }
  }
  if (ch == '"') {
    ++c.pos;
    std::string s;
    while (c.pos < c.text.size() && c.text[c.pos] != '"') {
      if (c.text[c.pos] == '\\' && c.pos + 1 < c.text.size()) ++c.pos;
      s += c.text[c.pos++];
    }
    if (c.pos >= c.text.size())
      fail("unterminated string (line " + std::to_string(c.line) + ")", "/");
    ++c.pos;
    return json(s);
  }
  size_t start = c.pos;
  while (c.pos < c.text.size() && c.text[c.pos] != '\n' &&
         c.text[c.pos] != ',' && c.text[c.pos] != ']' && c.text[c.pos] != '#')
    ++c.pos;
  std::string tok = c.text.substr(start, c.pos - start);
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
    tok.pop_back();
  if (tok == "true") return json(true);
  if (tok == "false") return json(false);
  try {
    size_t used = 0;
    if (tok.find_first_of(".eE") == std::string::npos) {
      long long v = std::stoll(tok, &used);
      if (used == tok.size()) return json(v);
    }
    double d = std::stod(tok, &used);
    if (used == tok.size()) return json(d);
  } catch (const std::exception&) {
  }
  fail("cannot parse value '" + tok + "' (line " + std::to_string(c.line) + ")",
       "/");
}

json toml_to_json(const std::string& text) {
  json root = json::object();
  json* table = &root;
  TomlCursor c{text};
  while (true) {
    skip_ws(c, true);
    if (c.pos >= c.text.size()) break;
    if (c.text[c.pos] == '[') {
      size_t close = c.text.find(']', c.pos);
      if (close == std::string::npos)
        fail("unterminated table header (line " + std::to_string(c.line) + ")",
             "/");
      std::string name = c.text.substr(c.pos + 1, close - c.pos - 1);
      c.pos = close + 1;
      root[name] = root.value(name, json::object());
      table = &root[name];
      continue;
    }
    size_t eq = c.text.find('=', c.pos);
    size_t eol = c.text.find('\n', c.pos);
    if (eq == std::string::npos || (eol != std::string::npos && eq > eol))
      fail("expected key = value (line " + std::to_string(c.line) + ")", "/");
    std::string key = c.text.substr(c.pos, eq - c.pos);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
      key.pop_back();
    c.pos = eq + 1;
    (*table)[key] = parse_toml_value(c);
  }
  return root;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what(), "/");
  }
  return from_json_value(j);
}

ExperimentConfig config_from_toml(const std::string& text) {
  return from_json_value(toml_to_json(text));
}

ExperimentConfig load_config(const std::string& path) {
  std::string text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return config_from_json(text);
  return config_from_toml(text);
}

Ensemble realize_ensemble(const ExperimentConfig& config) {
  if (config.ensemble) return *config.ensemble;
  if (!config.sampler)
    fail("config provides neither ensemble nor sampler", "/ensemble");
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u(-config.sampler->amplitude,
                                           config.sampler->amplitude);
  Ensemble ens;
  for (unsigned k = 0; k < config.sampler->points; ++k) {
    PhasePoint p{Eigen::VectorXd(config.modes), Eigen::VectorXd(config.modes)};
    for (unsigned j = 0; j < config.modes; ++j) {
      p.phi(j) = u(rng);
      p.pi(j) = u(rng);
    }
    ens.points.push_back(p);
    ens.weights.push_back(1.0 / config.sampler->points);
  }
  return ens;
}

EquivalenceConfig to_equivalence_config(const ExperimentConfig& config) {
  EquivalenceConfig out;
  out.modes = config.modes;
  out.cutoff = config.cutoff;
  out.hamiltonian = config.hamiltonian;
  out.ensemble = realize_ensemble(config);
  out.t_max = config.t_max;
  out.dt = config.dt;
  out.sample_stride = config.sample_stride;
  out.derivative_orders = config.derivative_orders;
  out.seed = config.seed;
  return out;
}

}  // namespace focklab
