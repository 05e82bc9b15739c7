#include "rmt/config.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <json.hpp>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(join(path, item.key()), "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

double get_real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

int positive_int(const json& v, const std::string& path, int minimum) {
  const std::int64_t x = get_int(v, path);
  if (x < minimum || x > 1'000'000'000) fail(path, "expected an integer >= " + std::to_string(minimum));
  return static_cast<int>(x);
}

double positive_real(const json& v, const std::string& path) {
  const double x = get_real(v, path);
  if (!(x > 0.0)) fail(path, "expected a positive number");
  return x;
}

// Wraps library argument errors raised while building objects from a config section.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ArgumentError& e) {
    fail(path, e.what());
  }
}

// Entry law {kind, variance | halfwidth | atoms}. Without an explicit scale the
// law takes `variance`; a table is rescaled only when "variance" is given.
EntryDistribution parse_law(const json& obj, const std::string& path, double variance) {
  check_keys(obj, path, {"kind", "variance", "halfwidth", "atoms"});
  const json* kind = find(obj, "kind");
  if (!kind) fail(join(path, "kind"), "missing required key");
  const std::string name = get_string(*kind, join(path, "kind"));
  const json* var = find(obj, "variance");
  const json* half = find(obj, "halfwidth");
  const json* atoms = find(obj, "atoms");
  if (half && name != "uniform") fail(join(path, "halfwidth"), "only valid for kind 'uniform'");
  if (atoms && name != "table") fail(join(path, "atoms"), "only valid for kind 'table'");
  if (var && half) fail(join(path, "variance"), "give either variance or halfwidth");
  const double v = var ? positive_real(*var, join(path, "variance")) : variance;
  return guarded(path, [&] {
    if (name == "gaussian") return EntryDistribution::gaussian(v);
    if (name == "rademacher") return EntryDistribution::rademacher(v);
    if (name == "uniform")
      return EntryDistribution::uniform(half ? positive_real(*half, join(path, "halfwidth")) : std::sqrt(3.0 * v));
    if (name == "table") {
      if (!atoms || !atoms->is_array()) fail(join(path, "atoms"), "expected an array of [value, probability]");
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t i = 0; i < atoms->size(); ++i) {
        const json& a = (*atoms)[i];
        const std::string ap = join(path, "atoms[" + std::to_string(i) + "]");
        if (!a.is_array() || a.size() != 2) fail(ap, "expected [value, probability]");
        pairs.emplace_back(get_real(a[0], ap), get_real(a[1], ap));
      }
      auto dist = EntryDistribution::table(std::move(pairs));
      return var ? dist.with_variance(v) : dist;
    }
    fail(join(path, "kind"), "expected one of gaussian, rademacher, uniform, table");
  });
}

// Reconciles an explicit ensemble variance key with the entry law's own variance.
double reconcile_variance(const json& obj, const char* key, const EntryDistribution& law) {
  const double v = law.variance();
  if (const json* given = find(obj, key)) {
    const double g = get_real(*given, std::string("ensemble.") + key);
    if (std::abs(g - v) > 1e-12 * std::max(1.0, g))
      fail(std::string("ensemble.") + key, "does not match the variance of ensemble.entry");
  }
  return v;
}

EnsembleSpec parse_ensemble(json& obj, Command cmd) {
  const std::string path = "ensemble";
  if (!obj.is_object()) fail(path, "expected an object");
  const json* fam = find(obj, "family");
  if (!fam) fail("ensemble.family", "missing required key");
  const std::string fname = get_string(*fam, "ensemble.family");
  Family family;
  try {
    family = family_from_string(fname);
  } catch (const ArgumentError&) {
    fail("ensemble.family", "expected one of GOE, Wigner, Wishart, SampleCovariance");
  }
  const json* nj = find(obj, "n");
  if (!nj) fail("ensemble.n", "missing required key");
  const int n = positive_int(*nj, "ensemble.n", 2);

  if (!is_covariance(family)) {
    if (family == Family::goe)
      check_keys(obj, path, {"family", "n", "w2"});
    else
      check_keys(obj, path, {"family", "n", "w2", "entry", "diag"});
    double w2 = find(obj, "w2") ? positive_real(obj["w2"], "ensemble.w2") : 1.0;
    if (family == Family::goe) {
      obj["w2"] = w2;
      return guarded(path, [&] { return EnsembleSpec::goe(n, w2); });
    }
    const json* entry = find(obj, "entry");
    if (!entry) fail("ensemble.entry", "missing required key for Wigner");
    const EntryDistribution off = parse_law(*entry, "ensemble.entry", w2);
    w2 = reconcile_variance(obj, "w2", off);
    obj["w2"] = w2;
    std::optional<EntryDistribution> diag;
    if (const json* d = find(obj, "diag")) diag = parse_law(*d, "ensemble.diag", 2.0 * w2);
    return guarded(path, [&] { return EnsembleSpec::wigner(n, off, diag); });
  }

  if (family == Family::wishart)
    check_keys(obj, path, {"family", "n", "a2", "m", "c"});
  else
    check_keys(obj, path, {"family", "n", "a2", "m", "c", "entry"});
  double a2 = find(obj, "a2") ? positive_real(obj["a2"], "ensemble.a2") : 1.0;
  std::optional<EntryDistribution> entry_law;
  if (family == Family::sample_covariance) {
    const json* entry = find(obj, "entry");
    if (!entry) fail("ensemble.entry", "missing required key for SampleCovariance");
    entry_law = parse_law(*entry, "ensemble.entry", a2);
    a2 = reconcile_variance(obj, "a2", *entry_law);
  }
  obj["a2"] = a2;
  const json* mj = find(obj, "m");
  const json* cj = find(obj, "c");
  if (mj && cj) fail("ensemble.m", "give either m or c, not both");
  if (!mj && !cj) fail("ensemble.m", "missing required key (or give c)");
  int m;
  if (mj) {
    m = positive_int(*mj, "ensemble.m", 1);
  } else {
    const double c = positive_real(*cj, "ensemble.c");
    if (cmd == Command::theory && c < 1.0)
      fail("ensemble.c", "the covariance variance formulas require c >= 1 (m/n -> c >= 1)");
    m = static_cast<int>(std::lround(c * n));
    if (m < 1) fail("ensemble.c", "c * n rounds to zero rows");
  }
  const double c = static_cast<double>(m) / n;
  if (cmd == Command::theory && c < 1.0)
    fail(mj ? "ensemble.m" : "ensemble.c",
         "the covariance variance formulas require c = m/n >= 1 (m/n -> c >= 1)");
  obj.erase("c");
  obj["m"] = m;
  if (family == Family::wishart) return guarded(path, [&] { return EnsembleSpec::wishart(n, m, a2); });
  return guarded(path, [&] { return EnsembleSpec::sample_covariance(n, m, *entry_law); });
}

TestFunctionSpec parse_test_function(const json& obj) {
  const std::string path = "test_function";
  if (!obj.is_object()) fail(path, "expected an object");
  TestFunctionSpec spec;
  const json* name = find(obj, "name");
  if (!name) fail("test_function.name", "missing required key");
  spec.name = get_string(*name, "test_function.name");
  for (const auto& item : obj.items()) {
    if (item.key() == "name") continue;
    spec.params[item.key()] = get_real(item.value(), join(path, item.key()));
  }
  guarded(path, [&] { return spec.make(); });
  return spec;
}

LawsRequest parse_laws(const json& obj, const std::optional<EnsembleSpec>& ensemble) {
  const std::string path = "laws";
  check_keys(obj, path, {"law", "w2", "a2", "c", "points"});
  LawsRequest req;
  if (const json* p = find(obj, "points")) req.points = positive_int(*p, "laws.points", 2);
  std::string name;
  if (const json* l = find(obj, "law")) {
    name = get_string(*l, "laws.law");
  } else if (ensemble) {
    name = is_covariance(ensemble->family) ? "marchenko_pastur" : "semicircle";
  } else {
    fail("laws.law", "missing required key (or give an ensemble)");
  }
  auto real_or = [&](const char* key, double fallback) {
    const json* v = find(obj, key);
    return v ? positive_real(*v, join(path, key)) : fallback;
  };
  if (name == "semicircle") {
    const double w2 = real_or("w2", ensemble && !is_covariance(ensemble->family) ? ensemble->w2 : 1.0);
    req.law = guarded(path, [&] { return LimitLaw::semicircle(w2); });
  } else if (name == "marchenko_pastur") {
    const bool cov = ensemble && is_covariance(ensemble->family);
    const double a2 = real_or("a2", cov ? ensemble->a2 : 1.0);
    const double c = real_or("c", cov ? ensemble->aspect_ratio() : 1.0);
    req.law = guarded(path, [&] { return LimitLaw::marchenko_pastur(a2, c); });
  } else {
    fail("laws.law", "expected semicircle or marchenko_pastur");
  }
  return req;
}

VolterraRequest parse_volterra(const json& obj, const std::optional<EnsembleSpec>& ensemble) {
  const std::string path = "volterra";
  check_keys(obj, path, {"h", "T", "x", "kappa4", "order"});
  VolterraRequest req;
  if (ensemble) {
    if (is_covariance(ensemble->family))
      fail("ensemble.family", "the volterra subcommand covers the GOE/Wigner equation only");
    req.w = std::sqrt(ensemble->w2);
    req.kappa4 = ensemble->kappa4();
  }
  if (const json* v = find(obj, "h")) req.step = positive_real(*v, "volterra.h");
  if (const json* v = find(obj, "T")) req.horizon = positive_real(*v, "volterra.T");
  if (const json* v = find(obj, "x")) req.x = get_real(*v, "volterra.x");
  if (const json* v = find(obj, "kappa4")) req.kappa4 = get_real(*v, "volterra.kappa4");
  if (const json* v = find(obj, "order")) req.order = positive_int(*v, "volterra.order", 16);
  const double steps = req.horizon / req.step;
  if (std::abs(std::round(steps) * req.step - req.horizon) > 1e-12 * std::max(1.0, req.horizon))
    fail("volterra.T", "must be an integer multiple of volterra.h");
  if (steps > 1e6) fail("volterra.h", "grid too fine (more than 10^6 steps)");
  return req;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set: expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set: empty key segment in '" + key + "'");
    if (!node->is_object()) throw ConfigError("--set " + key + ": parent is not an object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

}  // namespace

std::string to_string(Command cmd) {
  switch (cmd) {
    case Command::simulate: return "simulate";
    case Command::theory: return "theory";
    case Command::laws: return "laws";
    case Command::volterra: return "volterra";
    case Command::report: return "report";
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  for (Command c : {Command::simulate, Command::theory, Command::laws, Command::volterra, Command::report})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig LabConfig::experiment(int worker_count) const {
  if (!ensemble) throw ConfigError("ensemble: missing required section");
  if (!test_function) throw ConfigError("test_function: missing required section");
  ExperimentConfig cfg;
  cfg.ensemble = *ensemble;
  cfg.test_function = *test_function;
  cfg.replicas = replicas;
  cfg.n_grid = n_grid;
  cfg.base_seed = seed;
  cfg.workers = worker_count;
  cfg.order = order;
  return cfg;
}

LabConfig parse_config(std::string_view text, Command cmd, std::span<const std::string> overrides) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("<root>: not a valid JSON document");
  if (doc.is_null()) doc = json::object();
  for (const auto& o : overrides) apply_override(doc, o);
  check_keys(doc, "", {"ensemble", "test_function", "replicas", "seed", "n_grid", "workers", "order",
                       "laws", "volterra"});

  LabConfig cfg;
  cfg.command = cmd;
  if (json* e = doc.contains("ensemble") ? &doc["ensemble"] : nullptr) cfg.ensemble = parse_ensemble(*e, cmd);
  if (const json* t = find(doc, "test_function")) cfg.test_function = parse_test_function(*t);
  if (const json* r = find(doc, "replicas")) cfg.replicas = positive_int(*r, "replicas", 2);
  if (const json* s = find(doc, "seed")) {
    if (!s->is_number_integer() || (s->is_number_integer() && !s->is_number_unsigned() && s->get<std::int64_t>() < 0))
      fail("seed", "expected a non-negative 64-bit integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  if (const json* g = find(doc, "n_grid")) {
    if (!g->is_array() || g->empty()) fail("n_grid", "expected a non-empty array of integers");
    for (std::size_t i = 0; i < g->size(); ++i) {
      const int n = positive_int((*g)[i], "n_grid[" + std::to_string(i) + "]", 2);
      if (!cfg.n_grid.empty() && n <= cfg.n_grid.back()) fail("n_grid", "must be strictly ascending");
      cfg.n_grid.push_back(n);
    }
  }
  if (const json* w = find(doc, "workers")) cfg.workers = positive_int(*w, "workers", 1);
  if (const json* o = find(doc, "order")) cfg.order = positive_int(*o, "order", 16);

  const bool needs_experiment = cmd == Command::simulate || cmd == Command::report;
  if (needs_experiment || cmd == Command::theory) {
    if (!cfg.ensemble) fail("ensemble", "missing required section");
    if (!cfg.test_function) fail("test_function", "missing required section");
    if (cmd == Command::theory && !cfg.test_function->make().is_real())
      fail("test_function.name", "variance formulas need a real-valued test function");
  }
  if (needs_experiment) {
    if (!find(doc, "replicas")) fail("replicas", "missing required key");
    if (cfg.ensemble && !cfg.n_grid.empty() && is_covariance(cfg.ensemble->family)) {
      for (int n : cfg.n_grid)
        if (std::lround(cfg.ensemble->aspect_ratio() * n) < 1) fail("n_grid", "m = c n rounds to zero");
    }
  }
  if (cmd == Command::laws) {
    static const json empty = json::object();
    const json* l = find(doc, "laws");
    cfg.laws = parse_laws(l ? *l : empty, cfg.ensemble);
  }
  if (cmd == Command::volterra) {
    if (!cfg.test_function) fail("test_function", "missing required section");
    if (!cfg.test_function->make().is_real()) fail("test_function.name", "expected a real-valued test function");
    static const json empty = json::object();
    const json* v = find(doc, "volterra");
    cfg.volterra = parse_volterra(v ? *v : empty, cfg.ensemble);
  }

  // Resolved echo: defaults filled in. The worker count cannot change any output
  // and the subcommand is not part of the configuration, so neither is hashed:
  // report must recognise the replicas written by simulate.
  json resolved = doc;
  resolved.erase("workers");
  resolved["seed"] = cfg.seed;
  resolved["order"] = cfg.order;
  if (needs_experiment) {
    resolved["replicas"] = cfg.replicas;
    resolved["n_grid"] = cfg.n_grid.empty() ? std::vector<int>{cfg.ensemble->n} : cfg.n_grid;
  }
  if (cfg.laws) {
    json l = {{"points", cfg.laws->points}};
    if (cfg.laws->law.kind == LimitLaw::Kind::semicircle) {
      l["law"] = "semicircle";
      l["w2"] = cfg.laws->law.w2;
    } else {
      l["law"] = "marchenko_pastur";
      l["a2"] = cfg.laws->law.a2;
      l["c"] = cfg.laws->law.c;
    }
    resolved["laws"] = l;
  }
  if (cfg.volterra) {
    const auto& v = *cfg.volterra;
    resolved["volterra"] = {{"h", v.step}, {"T", v.horizon}, {"x", v.x}, {"kappa4", v.kappa4},
                            {"order", v.order}, {"w", v.w}};
  }
  cfg.resolved_json = resolved.dump();
  cfg.hash = fnv1a_hex(cfg.resolved_json);
  return cfg;
}

}  // namespace rmt
