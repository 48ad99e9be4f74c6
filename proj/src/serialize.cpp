#include "focklab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace focklab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

void append_array(std::string& out, const std::vector<double>& xs) {
  out += '[';
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  out += ']';
}

void append_nested(std::string& out,
                   const std::vector<std::vector<double>>& rows) {
  out += '[';
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ',';
    append_array(out, rows[i]);
  }
  out += ']';
}

std::vector<double> column(const Eigen::VectorXcd& v, bool imag) {
  std::vector<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = imag ? v(i).imag() : v(i).real();
  return out;
}

}  // namespace

std::string state_to_json(const FockSpace& space, const Eigen::VectorXcd& v) {
  if (static_cast<size_t>(v.size()) != space.dimension())
    throw std::invalid_argument("state dimension does not match space");
  std::string out = "{\"modes\":" + std::to_string(space.a_modes()) +
                    ",\"b_modes\":" + std::to_string(space.b_modes()) +
                    ",\"cutoff\":" + std::to_string(space.cutoff()) +
                    ",\"layout\":\"mixed-radix-lsb\",\"re\":";
  append_array(out, column(v, false));
  out += ",\"im\":";
  append_array(out, column(v, true));
  out += "}\n";
  return out;
}

StoredState state_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  StoredState s;
  s.a_modes = j.at("modes").get<unsigned>();
  s.b_modes = j.value("b_modes", 0u);
  s.cutoff = j.at("cutoff").get<unsigned>();
  if (j.value("layout", "mixed-radix-lsb") != std::string("mixed-radix-lsb"))
    throw std::invalid_argument("unknown state layout");
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size())
    throw std::invalid_argument("re/im length mismatch");
  s.amplitudes.resize(re.size());
  for (size_t i = 0; i < re.size(); ++i)
    s.amplitudes(i) = Complex(re[i], im[i]);
  return s;
}

std::string density_to_json(const FockSpace& space,
                            const Eigen::MatrixXcd& rho) {
  if (static_cast<size_t>(rho.rows()) != space.dimension() ||
      static_cast<size_t>(rho.cols()) != space.dimension())
    throw std::invalid_argument("density shape does not match space");
  std::string out = "{\"modes\":" + std::to_string(space.a_modes()) +
                    ",\"b_modes\":" + std::to_string(space.b_modes()) +
                    ",\"cutoff\":" + std::to_string(space.cutoff()) +
                    ",\"layout\":\"mixed-radix-lsb\",\"re\":[";
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    if (r) out += ',';
    append_array(out, column(rho.row(r).transpose(), false));
  }
  out += "],\"im\":[";
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    if (r) out += ',';
    append_array(out, column(rho.row(r).transpose(), true));
  }
  out += "]}\n";
  return out;
}

namespace {

std::vector<std::vector<double>> matrix_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows[r].resize(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
  }
  return rows;
}

}  // namespace

std::string lattice_state_to_json(const LatticeSpec& spec,
                                  const LatticeState& state) {
  validate_spec(spec);
  std::string out = "{\"d\":" + std::to_string(spec.d) +
                    ",\"M\":" + std::to_string(spec.M) +
                    ",\"dx\":" + format_double(spec.dx) +
                    ",\"fields\":" + std::to_string(spec.fields) +
                    ",\"masses\":";
  std::vector<double> masses(spec.masses.data(),
                             spec.masses.data() + spec.masses.size());
  append_array(out, masses);
  out += ",\"phi\":";
  append_nested(out, matrix_rows(state.phi));
  out += ",\"pi\":";
  append_nested(out, matrix_rows(state.pi));
  out += "}\n";
  return out;
}

std::pair<LatticeSpec, LatticeState> lattice_state_from_json(
    const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LatticeSpec spec;
  spec.d = j.at("d").get<unsigned>();
  spec.M = j.at("M").get<unsigned>();
  spec.dx = j.at("dx").get<double>();
  spec.fields = j.at("fields").get<unsigned>();
  auto masses = j.at("masses").get<std::vector<double>>();
  spec.masses = Eigen::Map<Eigen::VectorXd>(masses.data(), masses.size());
  validate_spec(spec);
  size_t S = site_count(spec);
  auto phi = j.at("phi").get<std::vector<std::vector<double>>>();
  auto pi = j.at("pi").get<std::vector<std::vector<double>>>();
  if (phi.size() != spec.fields || pi.size() != spec.fields)
    throw std::invalid_argument("lattice state field count mismatch");
  LatticeState state = zero_state(spec);
  for (unsigned f = 0; f < spec.fields; ++f) {
    if (phi[f].size() != S || pi[f].size() != S)
      throw std::invalid_argument("lattice state site count mismatch");
    for (size_t x = 0; x < S; ++x) {
      state.phi(f, x) = phi[f][x];
      state.pi(f, x) = pi[f][x];
    }
  }
  return {spec, state};
}

std::string ensemble_to_json(const Ensemble& ens) {
  std::string out = "{\"points\":[";
  for (size_t k = 0; k < ens.points.size(); ++k) {
    if (k) out += ',';
    out += "{\"phi\":";
    std::vector<double> phi(ens.points[k].phi.data(),
                            ens.points[k].phi.data() + ens.points[k].phi.size());
    append_array(out, phi);
    out += ",\"pi\":";
    std::vector<double> pi(ens.points[k].pi.data(),
                           ens.points[k].pi.data() + ens.points[k].pi.size());
    append_array(out, pi);
    out += '}';
  }
  out += "],\"weights\":";
  append_array(out, ens.weights);
  out += '}';
  return out;
}

Ensemble ensemble_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Ensemble ens;
  for (const auto& p : j.at("points")) {
    auto phi = p.at("phi").get<std::vector<double>>();
    auto pi = p.at("pi").get<std::vector<double>>();
    PhasePoint point;
    point.phi = Eigen::Map<Eigen::VectorXd>(phi.data(), phi.size());
    point.pi = Eigen::Map<Eigen::VectorXd>(pi.data(), pi.size());
    ens.points.push_back(point);
  }
  ens.weights = j.at("weights").get<std::vector<double>>();
  return ens;
}

std::string report_to_json(const EquivalenceReport& report) {
  const EquivalenceConfig& cfg = report.config;
  std::string out = "{\"version\":\"";
  out += kFocklabVersion;
  out += "\",\"config\":{\"modes\":" + std::to_string(cfg.modes) +
         ",\"cutoff\":" + std::to_string(cfg.cutoff) +
         ",\"hamiltonian\":\"" + json_escape(cfg.hamiltonian) +
         "\",\"ensemble\":" + ensemble_to_json(cfg.ensemble) +
         ",\"t_max\":" + format_double(cfg.t_max) +
         ",\"dt\":" + format_double(cfg.dt) +
         ",\"sample_stride\":" + std::to_string(cfg.sample_stride) +
         ",\"derivative_orders\":" + std::to_string(cfg.derivative_orders) +
         ",\"seed\":" + std::to_string(cfg.seed) + "},\"times\":";
  append_array(out, report.times);
  out += ",\"classical\":{\"phi\":";
  append_nested(out, report.classical_phi);
  out += ",\"pi\":";
  append_nested(out, report.classical_pi);
  out += "},\"quantum\":{\"phi\":";
  append_nested(out, report.quantum_phi);
  out += ",\"pi\":";
  append_nested(out, report.quantum_pi);
  out += "},\"gaps\":{\"phi\":";
  append_nested(out, report.gap_phi);
  out += ",\"pi\":";
  append_nested(out, report.gap_pi);
  out += ",\"max\":" + format_double(report.max_gap());
  out += "},\"derivative_residuals\":";
  append_nested(out, report.derivative_residuals);
  out += ",\"tail_bound\":" + format_double(report.tail_bound);
  out += ",\"truncated_early\":";
  out += report.truncated_early ? "true" : "false";
  out += ",\"diagnostic\":\"" + json_escape(report.diagnostic) + "\"}\n";
  return out;
}

std::string report_to_csv(const EquivalenceReport& report) {
  std::string out =
      "t,mode,classical_phi,classical_pi,quantum_phi,quantum_pi,gap_phi,gap_"
      "pi\n";
  for (size_t t = 0; t < report.times.size(); ++t)
    for (size_t j = 0; j < report.classical_phi.size(); ++j) {
      out += format_double(report.times[t]);
      out += ',' + std::to_string(j + 1);
      out += ',' + format_double(report.classical_phi[j][t]);
      out += ',' + format_double(report.classical_pi[j][t]);
      out += ',' + format_double(report.quantum_phi[j][t]);
      out += ',' + format_double(report.quantum_pi[j][t]);
      out += ',' + format_double(report.gap_phi[j][t]);
      out += ',' + format_double(report.gap_pi[j][t]);
      out += '\n';
    }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace focklab
