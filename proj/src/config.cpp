#include "turnpike/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "turnpike/errors.hpp"

namespace turnpike {

namespace {

struct Value {
  enum class Kind { Number, String, List } kind = Kind::Number;
  double num = 0.0;
  std::string str;
  std::vector<double> list;
  int line = 0;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  const char* c = s.c_str();
  char* end = nullptr;
  out = std::strtod(c, &end);
  return end != c && *end == '\0';
}

// The accepted value forms: "quoted string", [num, num, ...], number, or a
// bare word (stored as a string; used for names like "power").
Value parse_value(const std::string& raw, int line, std::vector<std::string>& errors) {
  Value v;
  v.line = line;
  std::string s = trim(raw);
  if (s.empty()) {
    errors.push_back("line " + std::to_string(line) + ": empty value");
    return v;
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') {
      errors.push_back("line " + std::to_string(line) + ": unterminated string");
      return v;
    }
    v.kind = Value::Kind::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') {
      errors.push_back("line " + std::to_string(line) + ": unterminated list");
      return v;
    }
    v.kind = Value::Kind::List;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      double d;
      if (!parse_number(item, d)) {
        errors.push_back("line " + std::to_string(line) + ": list item \"" + item +
                         "\" is not a number");
        return v;
      }
      v.list.push_back(d);
    }
    return v;
  }
  double d;
  if (parse_number(s, d)) {
    v.kind = Value::Kind::Number;
    v.num = d;
    return v;
  }
  v.kind = Value::Kind::String;
  v.str = s;  // bare word
  return v;
}

// Strips a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

class KeyMap {
public:
  KeyMap(std::map<std::string, Value> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return kv_.count(key) > 0;
  }
  double number(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second.kind != Value::Kind::Number)
      errors_.push_back(key + ": expected a number");
    return it->second.num;
  }
  int integer(const std::string& key, int fallback) {
    double d = number(key, fallback);
    if (d != std::floor(d)) errors_.push_back(key + ": expected an integer");
    return static_cast<int>(d);
  }
  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second.kind == Value::Kind::Number) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", it->second.num);
      return buf;
    }
    if (it->second.kind != Value::Kind::String)
      errors_.push_back(key + ": expected a string");
    return it->second.str;
  }
  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second.kind != Value::Kind::List) {
      errors_.push_back(key + ": expected a list like [1, 2, 4]");
      return fallback;
    }
    return it->second.list;
  }
  /// Two-element list -> Interval.
  Interval interval(const std::string& key, Interval fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second.kind != Value::Kind::List || it->second.list.size() != 2) {
      errors_.push_back(key + ": expected a two-element list [lo, hi]");
      return fallback;
    }
    return Interval{it->second.list[0], it->second.list[1]};
  }

  void flag_unknown_keys() {
    for (const auto& [key, value] : kv_)
      if (!used_.count(key))
        errors_.push_back("unknown key \"" + key + "\" (line " +
                          std::to_string(value.line) + ")");
  }

  std::vector<std::string>& errors() { return errors_; }

private:
  std::map<std::string, Value> kv_;
  std::set<std::string> used_;
  std::vector<std::string> errors_;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::vector<std::string> errors;
  std::map<std::string, Value> kv;
  {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      std::string s = trim(strip_comment(line));
      if (s.empty()) continue;
      size_t eq = s.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
        continue;
      }
      std::string key = trim(s.substr(0, eq));
      if (key.empty()) {
        errors.push_back("line " + std::to_string(lineno) + ": missing key");
        continue;
      }
      if (kv.count(key))
        errors.push_back("line " + std::to_string(lineno) + ": duplicate key \"" + key + "\"");
      kv[key] = parse_value(s.substr(eq + 1), lineno, errors);
    }
  }
  if (!errors.empty()) {
    std::string msg = "config: ";
    for (size_t i = 0; i < errors.size(); ++i) msg += (i ? "; " : "") + errors[i];
    throw ConfigError(msg);
  }

  KeyMap keys(std::move(kv));
  RunConfig cfg;

  // --- problem.* -----------------------------------------------------------
  cfg.problem.domain = keys.interval("problem.domain", {0.0, 1.0});
  cfg.problem.control_region = keys.interval("problem.control", {0.0, 0.5});
  cfg.problem.observation_region = keys.interval("problem.observation", {0.0, 1.0});
  cfg.problem.beta = keys.number("problem.beta", 1000.0);
  cfg.problem.horizon = keys.number("problem.horizon", 5.0);

  auto profile_of = [&](const std::string& key, const std::string& fallback) {
    std::string s = keys.text(key, fallback);
    try {
      return Profile::expression(s);
    } catch (const std::invalid_argument& e) {
      keys.errors().push_back(key + ": " + e.what());
      return Profile::constant(0.0);
    }
  };
  cfg.problem.target = profile_of("problem.target", "1");
  cfg.problem.initial = profile_of("problem.initial", "10");

  std::string fkind = keys.text("problem.nonlinearity", "power");
  if (fkind == "power") {
    double coeff = keys.number("problem.power_coeff", 1.0);
    double expo = keys.number("problem.power_exponent", 3.0);
    try {
      cfg.problem.f = Nonlinearity::power(coeff, expo);
    } catch (const std::invalid_argument& e) {
      keys.errors().push_back(std::string("problem.nonlinearity: ") + e.what());
    }
  } else if (fkind == "zero") {
    cfg.problem.f = Nonlinearity::zero();
  } else if (fkind == "tabulated") {
    std::vector<double> ys = keys.list("problem.table_y", {});
    std::vector<double> fs = keys.list("problem.table_f", {});
    if (ys.size() != fs.size() || ys.size() < 2) {
      keys.errors().push_back(
          "problem.table_y/table_f: need two equal-length lists with >= 2 entries");
    } else {
      std::vector<std::pair<double, double>> pts(ys.size());
      for (size_t i = 0; i < ys.size(); ++i) pts[i] = {ys[i], fs[i]};
      try {
        cfg.problem.f = Nonlinearity::tabulated(std::move(pts));
      } catch (const std::invalid_argument& e) {
        keys.errors().push_back(std::string("problem.nonlinearity: ") + e.what());
      }
    }
  } else {
    keys.errors().push_back("problem.nonlinearity: unknown kind \"" + fkind +
                            "\" (power, zero, tabulated)");
  }

  // --- disc.* ---------------------------------------------------------------
  cfg.disc.nx = keys.integer("disc.nx", 100);
  double dt = keys.number("disc.dt", 1e-4);
  if (keys.has("disc.nt")) {
    cfg.disc.nt = keys.integer("disc.nt", 0);
  } else {
    if (dt > 0.0 && cfg.problem.horizon > 0.0)
      cfg.disc.nt = std::max(1, static_cast<int>(std::lround(cfg.problem.horizon / dt)));
    else
      keys.errors().push_back("disc.dt: must be > 0");
  }
  if (cfg.disc.nx < 1) keys.errors().push_back("disc.nx: must be >= 1");
  if (cfg.disc.nt < 1) keys.errors().push_back("disc.nt: must be >= 1");

  // --- optimizer.* ----------------------------------------------------------
  cfg.optimizer.stepsize = keys.number("optimizer.stepsize", 0.0);
  cfg.optimizer.max_iters = keys.integer("optimizer.max_iters", 500);
  cfg.optimizer.grad_tol = keys.number("optimizer.grad_tol", 1e-6);
  cfg.optimizer.max_restarts = keys.integer("optimizer.max_restarts", 5);
  if (cfg.optimizer.max_iters < 0) keys.errors().push_back("optimizer.max_iters: must be >= 0");

  // --- steady.* ---------------------------------------------------------------
  cfg.steady.grad_tol = keys.number("steady.grad_tol", 1e-7);
  cfg.steady.max_iters = keys.integer("steady.max_iters", 50000);
  cfg.steady.initial_step = keys.number("steady.initial_step", 1.0);
  cfg.steady.armijo_c = keys.number("steady.armijo_c", 1e-4);

  // --- turnpike.* -------------------------------------------------------------
  cfg.turnpike.delta = keys.number("turnpike.delta", 0.0);
  cfg.turnpike.tau = keys.number("turnpike.tau", 1.0);
  cfg.turnpike.kappa = keys.number("turnpike.kappa", 10.0);

  // --- sweep.* ----------------------------------------------------------------
  cfg.sweep.horizons = keys.list("sweep.horizons", {2.0, 4.0, 8.0});
  cfg.sweep.dt = keys.number("sweep.dt", 1e-3);
  cfg.sweep.nx = keys.integer("sweep.nx", 100);
  if (!(cfg.sweep.dt > 0.0)) keys.errors().push_back("sweep.dt: must be > 0");
  if (cfg.sweep.nx < 1) keys.errors().push_back("sweep.nx: must be >= 1");
  for (double T : cfg.sweep.horizons)
    if (!(T > 0.0)) keys.errors().push_back("sweep.horizons: horizons must be > 0");

  double seed = keys.number("seed", 1.0);
  cfg.seed = static_cast<unsigned>(seed);

  keys.flag_unknown_keys();

  // The problem spec itself gets the full semantic validation.
  for (const std::string& v : validate_spec(cfg.problem)) keys.errors().push_back(v);

  if (!keys.errors().empty()) {
    std::string msg = "config: ";
    const auto& es = keys.errors();
    for (size_t i = 0; i < es.size(); ++i) msg += (i ? "; " : "") + es[i];
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["problem"]["domain"] = {problem.domain.lo, problem.domain.hi};
  j["problem"]["control"] = {problem.control_region.lo, problem.control_region.hi};
  j["problem"]["observation"] = {problem.observation_region.lo, problem.observation_region.hi};
  j["problem"]["beta"] = problem.beta;
  j["problem"]["horizon"] = problem.horizon;
  j["problem"]["target"] = problem.target.text();
  j["problem"]["initial"] = problem.initial.text();
  j["problem"]["nonlinearity"] = problem.f.name();
  j["disc"]["nx"] = disc.nx;
  j["disc"]["nt"] = disc.nt;
  j["disc"]["dt"] = problem.horizon / disc.nt;
  j["optimizer"]["stepsize"] = optimizer.stepsize;
  j["optimizer"]["stepsize_resolved"] =
      optimizer.stepsize > 0.0 ? optimizer.stepsize
                               : 1.0 / (1.0 + problem.beta * problem.horizon);
  j["optimizer"]["max_iters"] = optimizer.max_iters;
  j["optimizer"]["grad_tol"] = optimizer.grad_tol;
  j["optimizer"]["max_restarts"] = optimizer.max_restarts;
  j["steady"]["grad_tol"] = steady.grad_tol;
  j["steady"]["max_iters"] = steady.max_iters;
  j["steady"]["initial_step"] = steady.initial_step;
  j["steady"]["armijo_c"] = steady.armijo_c;
  j["turnpike"]["delta"] = turnpike.delta;
  j["turnpike"]["tau"] = turnpike.tau;
  j["turnpike"]["kappa"] = turnpike.kappa;
  j["sweep"]["horizons"] = sweep.horizons;
  j["sweep"]["dt"] = sweep.dt;
  j["sweep"]["nx"] = sweep.nx;
  j["seed"] = seed;
  return j;
}

}  // namespace turnpike
