#include "porofem/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "porofem/bench.hpp"
#include "porofem/manufactured.hpp"

namespace porofem {

namespace {

const std::set<std::string> kRunKeys = {"experiment", "case",       "formulation",    "theta",
                                        "dt",         "T",          "h",              "dt_list",
                                        "out",        "solver_tol", "snapshot_every", "vtk"};
const std::set<std::string> kParamKeys = {"lambda_star", "E", "nu", "b0", "a0", "K", "theta_f"};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_key(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  }
  return true;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

double number_at(const RawConfig& raw, const std::string& key, const std::string& value) {
  try {
    return parse_number(value);
  } catch (const std::invalid_argument& e) {
    auto it = raw.lines.find(key);
    throw ConfigError(it == raw.lines.end() ? 0 : it->second, key + ": " + e.what());
  }
}

int line_of(const RawConfig& raw, const std::string& key) {
  auto it = raw.lines.find(key);
  return it == raw.lines.end() ? 0 : it->second;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::ConvergeSpace: return "converge-space";
    case Experiment::ConvergeTime: return "converge-time";
    case Experiment::EnergyCheck: return "energy-check";
    case Experiment::MassCheck: return "mass-check";
    case Experiment::InfSup: return "infsup";
    case Experiment::BenchLocking: return "bench-locking";
    case Experiment::BenchFooting: return "bench-footing";
    case Experiment::SingleRun: return "single-run";
  }
  return "?";
}

std::string to_string(CaseId c) {
  switch (c) {
    case CaseId::Test1: return "test1";
    case CaseId::Test2: return "test2";
    case CaseId::Locking: return "locking";
    case CaseId::Footing: return "footing";
    case CaseId::Custom: return "custom";
  }
  return "?";
}

Experiment parse_experiment(const std::string& s) {
  for (Experiment e : {Experiment::ConvergeSpace, Experiment::ConvergeTime, Experiment::EnergyCheck,
                       Experiment::MassCheck, Experiment::InfSup, Experiment::BenchLocking,
                       Experiment::BenchFooting, Experiment::SingleRun}) {
    if (to_string(e) == s) return e;
  }
  throw std::invalid_argument("unknown experiment '" + s + "'");
}

CaseId parse_case(const std::string& s) {
  for (CaseId c : {CaseId::Test1, CaseId::Test2, CaseId::Locking, CaseId::Footing, CaseId::Custom}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown case '" + s + "'");
}

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const double num = parse_number(s.substr(0, slash));
    const double den = parse_number(s.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return num / den;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unterminated list '" + s + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

RawConfig parse_raw_config(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool in_params = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "params") in_params = true;
      else if (name == "run") in_params = false;
      else throw ConfigError(lineno, "unknown section [" + name + "]");
      continue;
    }

    // split into key=value pairs; a value extends to the next key= token
    std::istringstream tokens(line);
    std::string tok, key, value;
    auto flush = [&] {
      if (key.empty()) return;
      const std::string v = trim(value);
      if (v.empty()) throw ConfigError(lineno, "missing value for '" + key + "'");
      const auto& allowed = in_params ? kParamKeys : kRunKeys;
      if (!allowed.count(key)) throw ConfigError(lineno, "unknown key '" + key + "'");
      auto& target = in_params ? raw.params : raw.run;
      if (target.count(key)) throw ConfigError(lineno, "duplicate key '" + key + "'");
      target[key] = v;
      raw.lines[(in_params ? "params." : "") + key] = lineno;
    };
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos && is_key(tok.substr(0, eq))) {
        flush();
        key = tok.substr(0, eq);
        value = tok.substr(eq + 1);
      } else {
        if (key.empty()) throw ConfigError(lineno, "expected key=value, got '" + tok + "'");
        value += " " + tok;
      }
    }
    flush();
  }
  return raw;
}

RunConfig resolve_config(const RawConfig& raw) {
  RunConfig c;
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = raw.run.find(k);
    return it == raw.run.end() ? nullptr : &it->second;
  };
  auto fail = [&](const std::string& k, const std::string& msg) { throw ConfigError(line_of(raw, k), msg); };

  try {
    if (auto v = get("experiment")) c.experiment = parse_experiment(*v);
  } catch (const std::invalid_argument& e) {
    fail("experiment", e.what());
  }

  switch (c.experiment) {
    case Experiment::BenchLocking: c.case_id = CaseId::Locking; break;
    case Experiment::BenchFooting: c.case_id = CaseId::Footing; break;
    case Experiment::EnergyCheck:
    case Experiment::MassCheck: c.case_id = CaseId::Custom; break;
    default: c.case_id = CaseId::Test1; break;
  }
  try {
    if (auto v = get("case")) c.case_id = parse_case(*v);
  } catch (const std::invalid_argument& e) {
    fail("case", e.what());
  }

  if (auto v = get("formulation")) {
    if (*v == "reformulated") c.formulation = Formulation::Reformulated;
    else if (*v == "original") c.formulation = Formulation::Original;
    else fail("formulation", "formulation must be 'reformulated' or 'original'");
  }

  if (auto v = get("theta")) {
    const double th = number_at(raw, "theta", *v);
    if (th != 0.0 && th != 1.0) fail("theta", "theta must be 0 or 1");
    c.theta = static_cast<int>(th);
  }

  const bool footing = c.case_id == CaseId::Footing;
  c.dt = footing ? 5e-4 : 0.01;
  c.T = footing ? 0.01 : (c.case_id == CaseId::Custom ? 0.1 : 1.0);
  if (auto v = get("dt")) c.dt = number_at(raw, "dt", *v);
  if (auto v = get("T")) c.T = number_at(raw, "T", *v);
  if (!(c.dt > 0.0)) fail("dt", "dt must be positive");
  if (!(c.T > 0.0)) fail("T", "T must be positive");

  switch (c.experiment) {
    case Experiment::ConvergeSpace: c.h_list = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32}; break;
    case Experiment::ConvergeTime: c.h_list = {c.case_id == CaseId::Test2 ? 1.0 / 10 : 1.0 / 8}; break;
    case Experiment::InfSup: c.h_list = {1.0 / 4, 1.0 / 8, 1.0 / 16}; break;
    default:
      if (c.case_id == CaseId::Locking) c.h_list = {1.0 / 40};
      else if (footing) c.h_list = {2.5};
      else c.h_list = {1.0 / 8};
      break;
  }
  if (auto v = get("h")) {
    try {
      c.h_list = parse_number_list(*v);
    } catch (const std::invalid_argument& e) {
      fail("h", std::string("h: ") + e.what());
    }
  }
  for (double h : c.h_list) {
    if (!(h > 0.0)) fail("h", "mesh sizes must be positive");
  }

  if (c.experiment == Experiment::ConvergeTime) c.dt_list = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};
  if (auto v = get("dt_list")) {
    try {
      c.dt_list = parse_number_list(*v);
    } catch (const std::invalid_argument& e) {
      fail("dt_list", std::string("dt_list: ") + e.what());
    }
    if (c.dt_list.size() < 2) fail("dt_list", "dt_list needs at least two entries");
  }

  if (auto v = get("out")) c.out_dir = *v;
  if (auto v = get("solver_tol")) {
    c.solver_tol = number_at(raw, "solver_tol", *v);
    if (!(c.solver_tol > 0.0)) fail("solver_tol", "solver_tol must be positive");
  }
  if (auto v = get("snapshot_every")) {
    const double n = number_at(raw, "snapshot_every", *v);
    if (n < 0.0 || n != std::floor(n)) fail("snapshot_every", "snapshot_every must be a non-negative integer");
    c.snapshot_every = static_cast<int>(n);
  }
  if (auto v = get("vtk")) {
    if (*v == "true" || *v == "1") c.write_vtk = true;
    else if (*v == "false" || *v == "0") c.write_vtk = false;
    else fail("vtk", "vtk must be true or false");
  }

  for (const auto& [k, v] : raw.params) c.params[k] = number_at(raw, "params." + k, v);
  try {
    make_case(c);
  } catch (const ParameterError& e) {
    int line = 0;
    for (const auto& [k, v] : raw.params) line = std::max(line, line_of(raw, "params." + k));
    throw ConfigError(line, e.what());
  }
  return c;
}

RunConfig parse_config(const std::string& text) { return resolve_config(parse_raw_config(text)); }

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "experiment=" << to_string(c.experiment) << " case=" << to_string(c.case_id) << "\n";
  out << "formulation=" << (c.formulation == Formulation::Original ? "original" : "reformulated")
      << " theta=" << c.theta << "\n";
  out << "dt=" << fmt(c.dt) << " T=" << fmt(c.T) << "\n";
  out << "h=" << fmt_list(c.h_list) << "\n";
  if (!c.dt_list.empty()) out << "dt_list=" << fmt_list(c.dt_list) << "\n";
  out << "out=" << c.out_dir << " solver_tol=" << fmt(c.solver_tol) << " snapshot_every=" << c.snapshot_every
      << " vtk=" << (c.write_vtk ? "true" : "false") << "\n";
  if (!c.params.empty()) {
    out << "[params]\n";
    for (const auto& [k, v] : c.params) out << k << "=" << fmt(v) << "\n";
  }
  return out.str();
}

SchemeConfig RunConfig::scheme() const {
  SchemeConfig s;
  s.formulation = formulation;
  s.theta = theta;
  s.dt = dt;
  s.T = T;
  s.solver_tol = solver_tol;
  return s;
}

PhysicalParams apply_overrides(PhysicalParams p, const std::map<std::string, double>& overrides) {
  for (const auto& [k, v] : overrides) {
    if (k == "lambda_star") p.lambda_star = v;
    else if (k == "E") p.E = v;
    else if (k == "nu") p.nu = v;
    else if (k == "b0") p.b0 = v;
    else if (k == "a0") p.a0 = v;
    else if (k == "K") p.set_isotropic_permeability(v);
    else if (k == "theta_f") p.theta_f = v;
    else throw ParameterError("unknown parameter '" + k + "'");
  }
  Material::validate(p);
  return p;
}

ProblemCase make_case(const RunConfig& c) {
  ProblemCase pc;
  switch (c.case_id) {
    case CaseId::Test1: pc = test1_case(); break;
    case CaseId::Test2: pc = test2_case(); break;
    case CaseId::Locking: pc = build_locking_case().problem; break;
    case CaseId::Footing: pc = build_footing_case().problem; break;
    case CaseId::Custom: pc = neumann_case(); break;
  }
  pc.params = apply_overrides(pc.params, c.params);
  pc.T = c.T;
  return pc;
}

}  // namespace porofem
