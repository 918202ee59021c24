#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ergolab {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source_name) {
  Config cfg;
  cfg.source_ = source_name;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string current;  // top-level keys (schema=...) live in the "" section
  cfg.sections_.push_back({std::string(), {}});

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error(ERGOLAB_ERR_CONFIG, source_name + ":" + std::to_string(line_no) +
                                            ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw Error(ERGOLAB_ERR_CONFIG, source_name + ":" + std::to_string(line_no) +
                                            ": empty section name");
      if (!cfg.has_section(current)) cfg.sections_.push_back({current, {}});
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ERGOLAB_ERR_CONFIG, source_name + ":" + std::to_string(line_no) +
                                          ": expected key=value, got '" + line + "'");
    Entry entry{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (entry.key.empty())
      throw Error(ERGOLAB_ERR_CONFIG,
                  source_name + ":" + std::to_string(line_no) + ": empty key");
    for (auto& sec : cfg.sections_)
      if (sec.name == current) {
        sec.entries.push_back(std::move(entry));
        break;
      }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ERGOLAB_ERR_IO, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

bool Config::has_section(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return true;
  return false;
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& e : s.entries)
      if (e.key == key) return &e;
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
  const Entry* e = find(section, key);
  const std::string at =
      e ? source_ + ":" + std::to_string(e->line) : source_ + ": [" + section + "]";
  throw Error(ERGOLAB_ERR_CONFIG, at + ": field '" + key + "': " + message);
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw Error(ERGOLAB_ERR_CONFIG,
                source_ + ": missing required field '" + key + "' in [" + section + "]");
  return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(section, key, "expected a number, got '" + v + "'");
  }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  if (!has(section, key)) return fallback;
  const double v = get_double(section, key);
  const int i = static_cast<int>(v);
  if (i != v) fail(section, key, "expected an integer");
  return i;
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
  const std::string v = get_string(section, key);
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(section, key, "expected a comma-separated number list, got '" + v + "'");
    }
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  for (auto& s : sections_) {
    if (s.name != section) continue;
    for (auto& e : s.entries)
      if (e.key == key) {
        e.value = value;
        return;
      }
    s.entries.push_back({key, value, 0});
    return;
  }
  sections_.push_back({section, {{key, value, 0}}});
}

std::string Config::to_text() const {
  std::ostringstream out;
  for (const auto& s : sections_) {
    if (s.entries.empty()) continue;
    if (!s.name.empty()) out << "[" << s.name << "]\n";
    for (const auto& e : s.entries) out << e.key << "=" << e.value << "\n";
  }
  return out.str();
}

namespace {

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"", {"schema"}},
      {"equation", {"alpha", "beta", "a", "A", "lambda", "operator"}},
      {"domain", {"kind", "lo", "hi", "radius", "dim"}},
      {"forcing", {"kind", "c0", "coeffs", "amplitude", "frequency", "kappa", "q", "gamma0"}},
      {"grid", {"n"}},
      {"solver", {"tol", "max_sweeps"}},
      {"boundary", {"g_lo", "g_hi", "g_outer"}},
      {"ladder", {"r0", "max_rungs", "tol", "d_cut_factor"}},
      {"ergodic", {"k_max", "path", "probe_fraction"}},
      {"rate", {"window_lo", "window_hi", "profile"}},
      {"verify", {"checks", "deltas"}},
  };
  return keys;
}

void reject_unknown(const Config& cfg) {
  const auto& known = known_keys();
  for (const auto& sec : cfg.sections()) {
    const auto it = known.find(sec.name);
    if (it == known.end())
      throw Error(ERGOLAB_ERR_CONFIG, cfg.source() + ": unknown section [" + sec.name + "]");
    for (const auto& e : sec.entries) {
      if (std::find(it->second.begin(), it->second.end(), e.key) == it->second.end())
        throw Error(ERGOLAB_ERR_CONFIG, cfg.source() + ":" + std::to_string(e.line) +
                                            ": unknown key '" + e.key + "' in [" +
                                            sec.name + "]");
    }
  }
}

}  // namespace

ExperimentSetup load_setup(const Config& cfg, int grid_n_override) {
  reject_unknown(cfg);
  const std::string schema = cfg.get_string("", "schema", "1");
  if (schema != "1")
    throw Error(ERGOLAB_ERR_CONFIG, cfg.source() + ": unsupported schema '" + schema + "'");

  EquationParams eq;
  eq.alpha = cfg.get_double("equation", "alpha");
  eq.beta = cfg.get_double("equation", "beta");
  eq.a = cfg.get_double("equation", "a", 1.0);
  eq.A = cfg.get_double("equation", "A", eq.a);
  eq.lambda = cfg.get_double("equation", "lambda", 0.0);
  try {
    eq.op = operator_kind_from_string(cfg.get_string("equation", "operator", "trace"));
  } catch (const Error& err) {
    cfg.fail("equation", "operator", err.what());
  }

  Domain1D dom = Domain1D::interval(0.0, 1.0);
  const std::string dkind = cfg.get_string("domain", "kind", "interval");
  try {
    if (dkind == "interval") {
      dom = Domain1D::interval(cfg.get_double("domain", "lo", 0.0),
                               cfg.get_double("domain", "hi", 1.0));
    } else if (dkind == "ball") {
      dom = Domain1D::ball(cfg.get_double("domain", "radius", 1.0),
                           cfg.get_int("domain", "dim", 2));
    } else {
      cfg.fail("domain", "kind", "expected 'interval' or 'ball'");
    }
  } catch (const Error& err) {
    if (err.code == ERGOLAB_ERR_BAD_DOMAIN) cfg.fail("domain", "kind", err.what());
    throw;
  }

  Forcing f;
  const std::string fkind = cfg.get_string("forcing", "kind", "constant");
  if (fkind == "constant")
    f.kind = Forcing::Kind::constant;
  else if (fkind == "polynomial")
    f.kind = Forcing::Kind::polynomial;
  else if (fkind == "cosine")
    f.kind = Forcing::Kind::cosine;
  else
    cfg.fail("forcing", "kind", "expected constant|polynomial|cosine");
  f.c0 = cfg.get_double("forcing", "c0", 0.0);
  if (cfg.has("forcing", "coeffs")) f.coeffs = cfg.get_list("forcing", "coeffs");
  f.amplitude = cfg.get_double("forcing", "amplitude", 0.0);
  f.frequency = cfg.get_double("forcing", "frequency", 0.0);
  f.kappa = cfg.get_double("forcing", "kappa", 0.0);
  f.q = cfg.get_double("forcing", "q", 0.0);
  f.gamma0 = cfg.get_double("forcing", "gamma0", 0.0);

  ExperimentSetup s{Problem::make(eq, dom, f)};

  s.grid_n = grid_n_override > 0 ? grid_n_override : cfg.get_int("grid", "n", 201);

  s.solve.tol = cfg.get_double("solver", "tol", 1e-8);
  s.solve.max_sweeps = cfg.get_int("solver", "max_sweeps", 50000);

  s.ladder.r0 = cfg.get_double("ladder", "r0", 0.0);
  s.ladder.max_rungs = cfg.get_int("ladder", "max_rungs", 20);
  s.ladder.tol_ladder = cfg.get_double("ladder", "tol", 1e-6);
  s.ladder.d_cut_factor = cfg.get_double("ladder", "d_cut_factor", 10.0);

  s.ergodic.k_max = cfg.get_int("ergodic", "k_max", 12);
  s.ergodic.probe_fraction = cfg.get_double("ergodic", "probe_fraction", 0.25);
  s.ergodic.solve = s.solve;
  s.ergodic.ladder = s.ladder;
  s.ergodic_path = cfg.get_string("ergodic", "path", "explosive");
  if (s.ergodic_path != "explosive" && s.ergodic_path != "dirichlet")
    cfg.fail("ergodic", "path", "expected 'explosive' or 'dirichlet'");

  if (dom.kind == Domain1D::Kind::ball) {
    s.boundary = BoundaryData::radial(cfg.get_double("boundary", "g_outer", 0.0));
  } else {
    s.boundary = BoundaryData::interval(cfg.get_double("boundary", "g_lo", 0.0),
                                        cfg.get_double("boundary", "g_hi", 0.0));
  }

  if (cfg.has("rate", "window_lo")) s.rate_window_lo = cfg.get_double("rate", "window_lo");
  if (cfg.has("rate", "window_hi")) s.rate_window_hi = cfg.get_double("rate", "window_hi");
  s.rate_profile = cfg.get_string("rate", "profile", "");

  if (cfg.has("verify", "deltas")) s.verify_deltas = cfg.get_list("verify", "deltas");
  const std::string checks =
      cfg.get_string("verify", "checks", "barriers,comparison,gradient,mu_star");
  std::istringstream in(checks);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) s.verify_checks.push_back(item);
  }
  return s;
}

Config resolved_config(const ExperimentSetup& s) {
  Config cfg;
  cfg.set("", "schema", "1");
  const EquationParams& eq = s.problem.params.raw();
  cfg.set("equation", "alpha", format_full(eq.alpha));
  cfg.set("equation", "beta", format_full(eq.beta));
  cfg.set("equation", "a", format_full(eq.a));
  cfg.set("equation", "A", format_full(eq.A));
  cfg.set("equation", "lambda", format_full(eq.lambda));
  cfg.set("equation", "operator", to_string(eq.op));

  const Domain1D& dom = s.problem.domain;
  if (dom.kind == Domain1D::Kind::interval) {
    cfg.set("domain", "kind", "interval");
    cfg.set("domain", "lo", format_full(dom.lo));
    cfg.set("domain", "hi", format_full(dom.hi));
  } else {
    cfg.set("domain", "kind", "ball");
    cfg.set("domain", "radius", format_full(dom.radius));
    cfg.set("domain", "dim", std::to_string(dom.dim));
  }

  const Forcing& f = s.problem.forcing;
  cfg.set("forcing", "kind",
          f.kind == Forcing::Kind::constant
              ? "constant"
              : (f.kind == Forcing::Kind::polynomial ? "polynomial" : "cosine"));
  cfg.set("forcing", "c0", format_full(f.c0));
  if (!f.coeffs.empty()) {
    std::string list;
    for (size_t i = 0; i < f.coeffs.size(); ++i) {
      if (i) list += ",";
      list += format_full(f.coeffs[i]);
    }
    cfg.set("forcing", "coeffs", list);
  }
  if (f.kind == Forcing::Kind::cosine) {
    cfg.set("forcing", "amplitude", format_full(f.amplitude));
    cfg.set("forcing", "frequency", format_full(f.frequency));
  }
  cfg.set("forcing", "kappa", format_full(f.kappa));
  cfg.set("forcing", "q", format_full(f.q));
  cfg.set("forcing", "gamma0", format_full(f.gamma0));

  cfg.set("grid", "n", std::to_string(s.grid_n));
  cfg.set("solver", "tol", format_full(s.solve.tol));
  cfg.set("solver", "max_sweeps", std::to_string(s.solve.max_sweeps));
  if (dom.kind == Domain1D::Kind::ball) {
    cfg.set("boundary", "g_outer", format_full(s.boundary.hi));
  } else {
    cfg.set("boundary", "g_lo", format_full(s.boundary.lo));
    cfg.set("boundary", "g_hi", format_full(s.boundary.hi));
  }
  cfg.set("ladder", "r0", format_full(s.ladder.r0));
  cfg.set("ladder", "max_rungs", std::to_string(s.ladder.max_rungs));
  cfg.set("ladder", "tol", format_full(s.ladder.tol_ladder));
  cfg.set("ladder", "d_cut_factor", format_full(s.ladder.d_cut_factor));
  cfg.set("ergodic", "k_max", std::to_string(s.ergodic.k_max));
  cfg.set("ergodic", "path", s.ergodic_path);
  cfg.set("ergodic", "probe_fraction", format_full(s.ergodic.probe_fraction));
  if (s.rate_window_lo) cfg.set("rate", "window_lo", format_full(*s.rate_window_lo));
  if (s.rate_window_hi) cfg.set("rate", "window_hi", format_full(*s.rate_window_hi));
  if (!s.rate_profile.empty()) cfg.set("rate", "profile", s.rate_profile);
  if (!s.verify_deltas.empty()) {
    std::string list;
    for (size_t i = 0; i < s.verify_deltas.size(); ++i) {
      if (i) list += ",";
      list += format_full(s.verify_deltas[i]);
    }
    cfg.set("verify", "deltas", list);
  }
  if (!s.verify_checks.empty()) {
    std::string list;
    for (size_t i = 0; i < s.verify_checks.size(); ++i) {
      if (i) list += ",";
      list += s.verify_checks[i];
    }
    cfg.set("verify", "checks", list);
  }
  return cfg;
}

}  // namespace ergolab
