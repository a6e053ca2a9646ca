// Copyright 2026 The coolopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "coolopt/control.hpp"

namespace coolopt::app {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                  : source + ": " + message),
      line_(line) {}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::optimize: return "optimize";
    case Mode::scan1d: return "scan1d";
    case Mode::scan2d: return "scan2d";
    case Mode::evolve: return "evolve";
    case Mode::steady: return "steady";
    case Mode::gradcheck: return "gradcheck";
    case Mode::table1: return "table1";
  }
  return "unknown";
}

namespace {

using schemes::SchemeId;

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"problem", {"scheme", "fock_dim", "nbar0", "initial_level"}},
      {"constants",
       {"units", "nu_mhz", "eta", "gamma", "eta_g", "eta_r", "recoil_eta_g", "recoil_eta_r",
        "pattern_g", "pattern_r", "gamma_g", "gamma_r", "t_offset"}},
      {"run", {"mode", "horizon", "output", "threads"}},
      {"params", {}},  // scheme parameter names plus `free`, checked later
      {"scan1d", {"param", "grid", "inner"}},
      {"scan2d", {"param1", "grid1", "param2", "grid2"}},
      {"evolve", {"t_final", "samples", "fit_window"}},
      {"optimize",
       {"start", "gradient_tolerance", "max_iterations", "history", "rate_time", "fit_window",
        "samples"}},
      {"gradcheck", {"points", "seed", "spread", "tolerance"}},
      {"table1", {"horizons", "eval_time", "samples", "fit_window", "eit3_row"}},
  };
  return s;
}

// Mode-specific sections a mode accepts besides problem/constants/run/params.
const std::set<std::string>& mode_sections(Mode mode) {
  static const std::map<Mode, std::set<std::string>> m = {
      {Mode::optimize, {"optimize"}},   {Mode::scan1d, {"scan1d", "optimize"}},
      {Mode::scan2d, {"scan2d"}},       {Mode::evolve, {"evolve"}},
      {Mode::steady, {}},               {Mode::gradcheck, {"gradcheck"}},
      {Mode::table1, {"table1", "optimize"}},
  };
  return m.at(mode);
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ConfigError(source_, line, message);
  }

  double number(const Entry& e) const { return number(e.value, e.line, e.key); }

  double number(const std::string& text, int line, const std::string& key) const {
    std::string t = trim(text);
    if (!t.empty() && t.front() == '+') t.erase(0, 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
      fail(line, "'" + key + "' expects a finite number, got '" + text + "'");
    }
    return v;
  }

  int integer(const Entry& e, int min) const {
    const double v = number(e);
    if (v != std::floor(v) || v < min || v > 1e9) {
      fail(e.line, "'" + e.key + "' expects an integer >= " + std::to_string(min) + ", got '" +
                       e.value + "'");
    }
    return static_cast<int>(v);
  }

  double positive(const Entry& e) const {
    const double v = number(e);
    if (!(v > 0.0)) fail(e.line, "'" + e.key + "' must be positive, got '" + e.value + "'");
    return v;
  }

  double non_negative(const Entry& e) const {
    const double v = number(e);
    if (v < 0.0) fail(e.line, "'" + e.key + "' must be non-negative, got '" + e.value + "'");
    return v;
  }

  bool boolean(const Entry& e) const {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    fail(e.line, "'" + e.key + "' expects true or false, got '" + e.value + "'");
  }

  // "a, b, c" or "linspace(a, b, n)".
  std::vector<double> list(const Entry& e) const {
    const std::string& v = e.value;
    if (v.starts_with("linspace(")) {
      if (v.back() != ')') fail(e.line, "unterminated linspace(...) in '" + e.key + "'");
      const auto args = split(v.substr(9, v.size() - 10), ',');
      if (args.size() != 3) fail(e.line, "linspace expects (start, stop, count)");
      const double a = number(args[0], e.line, e.key);
      const double b = number(args[1], e.line, e.key);
      const double n = number(args[2], e.line, e.key);
      if (n != std::floor(n) || n < 1 || n > 1e6) fail(e.line, "linspace count must be >= 1");
      const int count = static_cast<int>(n);
      std::vector<double> out(static_cast<std::size_t>(count));
      for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
      }
      return out;
    }
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(number(item, e.line, e.key));
    if (out.empty()) fail(e.line, "'" + e.key + "' expects at least one value");
    return out;
  }

  std::vector<std::string> names(const Entry& e, SchemeId scheme) const {
    std::vector<std::string> out;
    const auto& valid = schemes::parameter_names(scheme);
    for (const auto& item : split(e.value, ',')) {
      if (std::find(valid.begin(), valid.end(), item) == valid.end()) {
        fail(e.line, "'" + item + "' is not a parameter of scheme " +
                         schemes::to_string(scheme));
      }
      if (std::find(out.begin(), out.end(), item) != out.end()) {
        fail(e.line, "parameter '" + item + "' listed twice");
      }
      out.push_back(item);
    }
    if (out.empty()) fail(e.line, "'" + e.key + "' expects at least one parameter name");
    return out;
  }

  std::string name(const Entry& e, SchemeId scheme) const {
    const auto n = names(e, scheme);
    if (n.size() != 1) fail(e.line, "'" + e.key + "' expects a single parameter name");
    return n.front();
  }

 private:
  std::string source_;
};

std::map<std::string, Section> read_sections(const std::string& text, const Parser& p) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') p.fail(line, "malformed section header '" + s + "'");
      current = trim(s.substr(1, s.size() - 2));
      if (!schema().contains(current)) p.fail(line, "unknown section [" + current + "]");
      if (sections.contains(current)) p.fail(line, "duplicate section [" + current + "]");
      sections[current].line = line;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) p.fail(line, "expected 'key = value', got '" + s + "'");
    if (current.empty()) p.fail(line, "key outside of any section");
    Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) p.fail(line, "empty key");
    if (e.value.empty()) p.fail(line, "empty value for '" + e.key + "'");
    const auto& allowed = schema().at(current);
    if (current != "params" && !allowed.contains(e.key)) {
      p.fail(line, "unknown key '" + e.key + "' in section [" + current + "]");
    }
    auto& entries = sections[current].entries;
    const bool repeatable = current == "optimize" && e.key == "start";
    if (!repeatable && std::any_of(entries.begin(), entries.end(),
                                   [&](const Entry& o) { return o.key == e.key; })) {
      p.fail(line, "duplicate key '" + e.key + "' in section [" + current + "]");
    }
    entries.push_back(std::move(e));
  }
  return sections;
}

const Entry* find(const std::map<std::string, Section>& sections, const std::string& section,
                  const std::string& key) {
  const auto it = sections.find(section);
  if (it == sections.end()) return nullptr;
  for (const auto& e : it->second.entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

int level_index(const Entry& e, SchemeId scheme, const Parser& p) {
  static const std::map<std::string, int> names = {{"g", 0}, {"e", 1}, {"r", 2}, {"t", 3}};
  int level = 0;
  if (const auto it = names.find(e.value); it != names.end()) {
    level = it->second;
  } else {
    level = p.integer(e, 0);
  }
  if (level >= schemes::internal_dim(scheme)) {
    p.fail(e.line, "initial level '" + e.value + "' does not exist in scheme " +
                       schemes::to_string(scheme));
  }
  return level;
}

schemes::DipolePattern pattern(const Entry& e, const Parser& p) {
  if (e.value == "parallel") return schemes::DipolePattern::parallel;
  if (e.value == "perpendicular") return schemes::DipolePattern::perpendicular;
  p.fail(e.line, "'" + e.key + "' expects parallel or perpendicular, got '" + e.value + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  const Parser p(source);
  const auto sections = read_sections(text, p);
  ExperimentConfig c;
  c.source = source;
  c.text = text;

  const auto required = [&](const std::string& section, const std::string& key) {
    const Entry* e = find(sections, section, key);
    if (e == nullptr) p.fail(0, "missing required key '" + key + "' in [" + section + "]");
    return e;
  };

  // [problem]
  {
    const Entry* e = required("problem", "scheme");
    try {
      c.scheme = schemes::scheme_from_string(e->value);
    } catch (const std::exception&) {
      p.fail(e->line, "unknown scheme '" + e->value + "' (expected rwsc, swsc, eit3 or eit4)");
    }
    if (const Entry* d = find(sections, "problem", "fock_dim")) c.fock_dim = p.integer(*d, 2);
    if (const Entry* n = find(sections, "problem", "nbar0")) c.nbar0 = p.non_negative(*n);
    if (const Entry* l = find(sections, "problem", "initial_level")) {
      c.initial_level = level_index(*l, c.scheme, p);
    }
  }

  // [run]
  {
    const Entry* e = required("run", "mode");
    static const std::map<std::string, Mode> modes = {
        {"optimize", Mode::optimize}, {"scan1d", Mode::scan1d},
        {"scan2d", Mode::scan2d},     {"evolve", Mode::evolve},
        {"steady", Mode::steady},     {"gradcheck", Mode::gradcheck},
        {"table1", Mode::table1}};
    const auto it = modes.find(e->value);
    if (it == modes.end()) p.fail(e->line, "unknown mode '" + e->value + "'");
    c.mode = it->second;
    for (const auto& [name, section] : sections) {
      if (name == "problem" || name == "constants" || name == "run" || name == "params") continue;
      if (!mode_sections(c.mode).contains(name)) {
        p.fail(section.line, "section [" + name + "] is not used by mode " + e->value);
      }
    }
    const bool needs_horizon = c.mode == Mode::optimize || c.mode == Mode::scan1d ||
                               c.mode == Mode::scan2d || c.mode == Mode::gradcheck;
    if (const Entry* h = find(sections, "run", "horizon")) {
      if (!needs_horizon) p.fail(h->line, "'horizon' is not used by mode " + e->value);
      c.horizons = p.list(*h);
      for (double t : c.horizons) {
        if (!(t > 0.0)) p.fail(h->line, "horizons must be positive");
      }
      if (c.mode == Mode::gradcheck && c.horizons.size() != 1) {
        p.fail(h->line, "gradcheck takes a single horizon");
      }
    } else if (needs_horizon) {
      required("run", "horizon");
    }
    c.output = to_string(c.mode) + ".csv";
    if (const Entry* o = find(sections, "run", "output")) {
      if (o->value.find('/') != std::string::npos) {
        p.fail(o->line, "'output' is a file name; use --out to pick the directory");
      }
      c.output = o->value;
    }
    if (const Entry* t = find(sections, "run", "threads")) c.threads = p.integer(*t, 1);
  }

  // [constants]
  c.consts = schemes::PhysicalConstants::defaults(c.scheme);
  double scale = 1.0;  // frequency conversion factor to units of nu
  if (const Entry* u = find(sections, "constants", "units")) {
    if (u->value != "nu" && u->value != "mhz") {
      p.fail(u->line, "'units' expects nu or mhz, got '" + u->value + "'");
    }
    c.units = u->value;
  }
  if (const Entry* n = find(sections, "constants", "nu_mhz")) {
    if (c.units != "mhz") p.fail(n->line, "'nu_mhz' requires units = mhz");
    c.nu_mhz = p.positive(*n);
    scale = 1.0 / c.nu_mhz;
  } else if (c.units == "mhz") {
    p.fail(find(sections, "constants", "units")->line, "units = mhz requires nu_mhz");
  }
  {
    auto& k = c.consts;
    const std::vector<std::pair<std::string, double*>> lamb_dicke = {
        {"eta", &k.eta}, {"eta_g", &k.eta_g}, {"eta_r", &k.eta_r},
        {"recoil_eta_g", &k.recoil_eta_g}, {"recoil_eta_r", &k.recoil_eta_r}};
    for (const auto& [key, field] : lamb_dicke) {
      if (const Entry* e = find(sections, "constants", key)) *field = p.number(*e);
    }
    const std::vector<std::pair<std::string, double*>> rates = {
        {"gamma", &k.gamma}, {"gamma_g", &k.gamma_g}, {"gamma_r", &k.gamma_r}};
    for (const auto& [key, field] : rates) {
      if (const Entry* e = find(sections, "constants", key)) *field = p.non_negative(*e) * scale;
    }
    if (const Entry* e = find(sections, "constants", "t_offset")) {
      k.t_offset = p.number(*e) * scale;
    }
    if (const Entry* e = find(sections, "constants", "pattern_g")) k.pattern_g = pattern(*e, p);
    if (const Entry* e = find(sections, "constants", "pattern_r")) k.pattern_r = pattern(*e, p);
  }

  // [params]
  const auto& names = schemes::parameter_names(c.scheme);
  if (const auto it = sections.find("params"); it != sections.end()) {
    for (const auto& e : it->second.entries) {
      if (e.key == "free") {
        c.free = p.names(e, c.scheme);
      } else if (std::find(names.begin(), names.end(), e.key) != names.end()) {
        c.params[e.key] = p.number(e) * scale;
      } else {
        p.fail(e.line, "unknown key '" + e.key + "' in section [params] for scheme " +
                           schemes::to_string(c.scheme));
      }
    }
  }
  if (c.free.empty()) c.free = names;

  // [optimize]: inner solver settings, and starts for optimize mode.
  if (const auto it = sections.find("optimize"); it != sections.end()) {
    auto& o = c.optimize;
    for (const auto& e : it->second.entries) {
      if (e.key == "start") {
        if (c.mode != Mode::optimize) p.fail(e.line, "'start' is only used by mode optimize");
        auto v = p.list(e);
        if (v.size() != c.free.size()) {
          p.fail(e.line, "start has " + std::to_string(v.size()) + " values but " +
                             std::to_string(c.free.size()) + " parameters are free");
        }
        for (double& x : v) x *= scale;
        o.starts.push_back(std::move(v));
      } else if (e.key == "gradient_tolerance") {
        o.lbfgs.gradient_tolerance = p.positive(e);
      } else if (e.key == "max_iterations") {
        o.lbfgs.max_iterations = p.integer(e, 1);
      } else if (e.key == "history") {
        o.lbfgs.history = p.integer(e, 1);
      } else if (e.key == "rate_time") {
        if (c.mode != Mode::optimize) p.fail(e.line, "'rate_time' is only used by mode optimize");
        o.rate_time = p.positive(e);
      } else if (e.key == "fit_window") {
        o.fit_window = p.non_negative(e);
      } else if (e.key == "samples") {
        o.samples = p.integer(e, 3);
      }
    }
  }

  if (c.mode == Mode::scan1d) {
    const Entry* param = required("scan1d", "param");
    c.scan1d.grid.param = p.name(*param, c.scheme);
    c.scan1d.grid.values = p.list(*required("scan1d", "grid"));
    for (double& v : c.scan1d.grid.values) v *= scale;
    if (const Entry* inner = find(sections, "scan1d", "inner")) {
      c.scan1d.inner = p.names(*inner, c.scheme);
      if (std::find(c.scan1d.inner.begin(), c.scan1d.inner.end(), c.scan1d.grid.param) !=
          c.scan1d.inner.end()) {
        p.fail(inner->line, "the scanned parameter cannot also be an inner parameter");
      }
    } else {
      for (const auto& n : names) {
        if (n != c.scan1d.grid.param) c.scan1d.inner.push_back(n);
      }
    }
  }

  if (c.mode == Mode::scan2d) {
    c.scan2d.first.param = p.name(*required("scan2d", "param1"), c.scheme);
    c.scan2d.first.values = p.list(*required("scan2d", "grid1"));
    const Entry* p2 = required("scan2d", "param2");
    c.scan2d.second.param = p.name(*p2, c.scheme);
    c.scan2d.second.values = p.list(*required("scan2d", "grid2"));
    if (c.scan2d.first.param == c.scan2d.second.param) {
      p.fail(p2->line, "param1 and param2 must differ");
    }
    for (double& v : c.scan2d.first.values) v *= scale;
    for (double& v : c.scan2d.second.values) v *= scale;
  }

  if (c.mode == Mode::evolve) {
    c.evolve.t_final = p.positive(*required("evolve", "t_final"));
    if (const Entry* e = find(sections, "evolve", "samples")) c.evolve.samples = p.integer(*e, 3);
    if (const Entry* e = find(sections, "evolve", "fit_window")) {
      c.evolve.fit_window = p.non_negative(*e);
    }
  }

  if (c.mode == Mode::gradcheck) {
    auto& g = c.gradcheck;
    if (const Entry* e = find(sections, "gradcheck", "points")) g.points = p.integer(*e, 1);
    if (const Entry* e = find(sections, "gradcheck", "seed")) {
      g.seed = static_cast<unsigned>(p.integer(*e, 0));
    }
    if (const Entry* e = find(sections, "gradcheck", "spread")) g.spread = p.non_negative(*e);
    if (const Entry* e = find(sections, "gradcheck", "tolerance")) g.tolerance = p.positive(*e);
  }

  if (c.mode == Mode::table1) {
    if (c.scheme != SchemeId::eit4) {
      p.fail(find(sections, "problem", "scheme")->line, "mode table1 requires scheme eit4");
    }
    auto& t = c.table1;
    if (const Entry* e = find(sections, "table1", "horizons")) {
      t.horizons = p.list(*e);
      for (double h : t.horizons) {
        if (!(h > 0.0)) p.fail(e->line, "horizons must be positive");
      }
    }
    if (const Entry* e = find(sections, "table1", "eval_time")) t.eval_time = p.positive(*e);
    if (const Entry* e = find(sections, "table1", "samples")) t.samples = p.integer(*e, 3);
    if (const Entry* e = find(sections, "table1", "fit_window")) t.fit_window = p.non_negative(*e);
    if (const Entry* e = find(sections, "table1", "eit3_row")) t.eit3_row = p.boolean(*e);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

schemes::ControlParams resolved_params(const ExperimentConfig& config) {
  schemes::ControlParams params = control::default_start(config.scheme, config.consts);
  for (const auto& [name, value] : config.params) params.set(name, value);
  return params;
}

}  // namespace coolopt::app
