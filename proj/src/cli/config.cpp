#include "infogeo/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "infogeo/errors.hpp"

namespace infogeo::cli {

using json = nlohmann::ordered_json;  // keeps file order, which the JSON line scan relies on

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "fisher_eguchi", "i_alpha_eguchi", "scale_relation", "duality",    "differential",
      "crlb",          "unbiasedness",   "biased_crlb",    "barankin",   "bayesian_crlb",
      "bayesian_divergence",        "variants",       "monte_carlo",
  };
  return names;
}

namespace {

// Checks that are only defined away from α = 1.
const std::set<std::string> alpha_only{"i_alpha_eguchi", "scale_relation"};
const std::set<std::string> needs_prior{"bayesian_crlb", "bayesian_divergence"};

const std::set<std::string> top_keys{"model",  "theta",       "thetas",     "theta_grid",
                                     "theta_prime", "alpha",  "prior",      "grid_points",
                                     "checks", "estimators",  "diff",       "output",
                                     "seed",   "mc_samples",  "divergence_samples"};

/// Parsed tree plus a path → line map. Paths look like `diff.h2` or `estimators[0].values`.
struct Document {
  json root;
  std::map<std::string, int> lines;
  std::string text;
  ConfigFormat format = ConfigFormat::toml;

  int line(const std::string& path) const {
    if (auto it = lines.find(path); it != lines.end()) return it->second;
    // Fall back to the enclosing key.
    const auto cut = path.find_last_of(".[");
    if (cut != std::string::npos) return line(path.substr(0, cut));
    return 0;
  }
};

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

json from_toml(const toml::node& node, const std::string& path, std::map<std::string, int>& lines) {
  lines.emplace(path, static_cast<int>(node.source().begin.line));
  if (auto* t = node.as_table()) {
    json out = json::object();
    for (auto&& [k, v] : *t) {
      const std::string key(k.str());
      out[key] = from_toml(v, join(path, key), lines);
      // The key's own line is more useful than the value's for multi-line tables.
      if (k.source().begin.line > 0) lines[join(path, key)] = static_cast<int>(k.source().begin.line);
    }
    return out;
  }
  if (auto* a = node.as_array()) {
    json out = json::array();
    for (std::size_t i = 0; i < a->size(); ++i)
      out.push_back(from_toml((*a)[i], path + "[" + std::to_string(i) + "]", lines));
    return out;
  }
  if (auto v = node.value_exact<std::int64_t>()) return *v;
  if (auto v = node.value_exact<double>()) return *v;
  if (auto v = node.value_exact<bool>()) return *v;
  if (auto v = node.value_exact<std::string>()) return *v;
  throw ConfigError("unsupported TOML value type (dates and times are not used)",
                    static_cast<int>(node.source().begin.line));
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// nlohmann keeps no positions, so JSON keys are located by scanning for `"key"` in order of
// appearance. Duplicate key names across objects resolve to the first unclaimed occurrence.
void index_json(const json& node, const std::string& path, const std::string& text,
                std::size_t& cursor, std::map<std::string, int>& lines) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      const auto needle = "\"" + it.key() + "\"";
      auto at = text.find(needle, cursor);
      if (at == std::string::npos) at = text.find(needle);
      const auto sub = join(path, it.key());
      if (at != std::string::npos) {
        lines[sub] = line_of_offset(text, at);
        cursor = at + needle.size();
      }
      index_json(it.value(), sub, text, cursor, lines);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      index_json(node[i], path + "[" + std::to_string(i) + "]", text, cursor, lines);
  }
}

Document parse_document(const std::string& text, ConfigFormat format, const std::string& source) {
  Document doc;
  doc.text = text;
  doc.format = format;
  if (format == ConfigFormat::toml) {
    try {
      const auto tbl = toml::parse(text, source);
      doc.root = from_toml(tbl, "", doc.lines);
    } catch (const toml::parse_error& e) {
      throw ConfigError("TOML parse error: " + std::string(e.description()),
                        static_cast<int>(e.source().begin.line));
    }
  } else {
    try {
      doc.root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("JSON parse error: ") + e.what(), line_of_offset(text, e.byte));
    }
    if (!doc.root.is_object()) throw ConfigError("top level must be an object", 1);
    std::size_t cursor = 0;
    index_json(doc.root, "", text, cursor, doc.lines);
  }
  return doc;
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ConfigError(path.empty() ? msg : path + ": " + msg, doc_.line(path));
  }
  std::string at(const std::string& path) const {
    const int l = doc_.line(path);
    return l > 0 ? "line " + std::to_string(l) + ": " : "";
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }
  long integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long>();
  }
  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }
  /// A number is a 1-vector; an array of numbers a vector.
  Vec vector(const json& v, const std::string& path) const {
    if (v.is_number()) return Vec::Constant(1, number(v, path));
    if (!v.is_array() || v.empty()) fail(path, "expected a number or a non-empty array of numbers");
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      out[static_cast<int>(i)] = number(v[i], path + "[" + std::to_string(i) + "]");
    return out;
  }
  /// Array of rows; a flat array of numbers is read as a single column.
  Mat matrix(const json& v, const std::string& path) const {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
    if (v[0].is_number()) {
      const Vec col = vector(v, path);
      return Mat(col);
    }
    const Vec first = vector(v[0], path + "[0]");
    Mat out(static_cast<int>(v.size()), first.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
      const auto sub = path + "[" + std::to_string(r) + "]";
      const Vec row = vector(v[r], sub);
      if (row.size() != first.size()) fail(sub, "ragged table: every row needs " +
                                                    std::to_string(first.size()) + " entries");
      out.row(static_cast<int>(r)) = row.transpose();
    }
    return out;
  }
  void only_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) const {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key())) fail(join(path, it.key()), "unknown key");
  }

 private:
  const Document& doc_;
};

ModelSpec read_model(const Reader& r, const json& v) {
  ModelSpec spec;
  if (v.is_string()) {
    spec.name = v.get<std::string>();
  } else if (v.is_object()) {
    r.only_keys(v, "model", {"name", "n", "d", "statistics", "lower", "upper"});
    if (!v.contains("name")) r.fail("model", "missing `name`");
    spec.name = r.string(v["name"], "model.name");
    if (v.contains("n")) spec.n = static_cast<int>(r.integer(v["n"], "model.n"));
    if (v.contains("d")) spec.d = static_cast<int>(r.integer(v["d"], "model.d"));
    if (v.contains("statistics")) spec.statistics = r.matrix(v["statistics"], "model.statistics");
    if (v.contains("lower") || v.contains("upper")) {
      if (!v.contains("lower") || !v.contains("upper")) r.fail("model", "`lower` and `upper` go together");
      spec.box = Box{r.vector(v["lower"], "model.lower"), r.vector(v["upper"], "model.upper")};
    }
  } else {
    r.fail("model", "expected a family name or a table");
  }
  return spec;
}

ParametricModel build_model(const Reader& r, const ModelSpec& spec) {
  try {
    if (spec.name == "bernoulli") return bernoulli();
    if (spec.name == "binomial") {
      if (spec.n < 1) r.fail("model", "binomial needs an integer `n` >= 1");
      return binomial(spec.n);
    }
    if (spec.name == "categorical") {
      if (spec.d < 2) r.fail("model", "categorical needs an integer `d` >= 2");
      return categorical(spec.d);
    }
    if (spec.name == "logit_linear") {
      if (spec.statistics.size() == 0) r.fail("model", "logit_linear needs a `statistics` table");
      if (spec.box) {
        if (spec.box->lower.size() != spec.statistics.cols() ||
            spec.box->upper.size() != spec.statistics.cols())
          r.fail("model.lower", "box dimension must match the statistic columns");
        return logit_linear(spec.statistics, *spec.box);
      }
      return logit_linear(spec.statistics);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.fail("model", e.what());
  }
  r.fail("model", "unknown model '" + spec.name +
                      "' (built-ins: bernoulli, binomial, categorical, logit_linear)");
}

PriorSpec read_prior(const Reader& r, const json& v) {
  PriorSpec spec;
  if (v.is_string()) {
    spec.name = v.get<std::string>();
  } else if (v.is_object()) {
    r.only_keys(v, "prior", {"name", "a", "b"});
    if (!v.contains("name")) r.fail("prior", "missing `name`");
    spec.name = r.string(v["name"], "prior.name");
    if (v.contains("a")) spec.a = r.number(v["a"], "prior.a");
    if (v.contains("b")) spec.b = r.number(v["b"], "prior.b");
  } else {
    r.fail("prior", "expected a prior name or a table");
  }
  return spec;
}

PriorDensity build_prior(const Reader& r, const PriorSpec& spec, const ParametricModel& m) {
  if (spec.name == "uniform") return uniform_prior(m.domain);
  if (m.param_dim() != 1 || m.domain.lower[0] != 0.0 || m.domain.upper[0] != 1.0)
    r.fail("prior", "prior '" + spec.name + "' lives on (0, 1) and needs a one-parameter model on (0, 1)");
  if (spec.name == "ramp") return ramp_prior();
  if (spec.name == "beta") {
    if (!(spec.a > 0.0) || !(spec.b > 0.0)) r.fail("prior", "beta needs a > 0 and b > 0");
    return beta_prior(spec.a, spec.b);
  }
  r.fail("prior", "unknown prior '" + spec.name + "' (built-ins: uniform, ramp, beta)");
}

/// Empty list → {1}, the documented default.
std::vector<double> read_alphas(const Reader& r, const json& v, const std::string& path) {
  if (v.is_array() && v.empty()) return {1.0};
  const Vec a = r.vector(v, path);
  for (int i = 0; i < a.size(); ++i)
    if (!(a[i] > 0.0)) r.fail(path, "alpha must be positive");
  return {a.data(), a.data() + a.size()};
}

void require_point(const Reader& r, const ParametricModel& m, const Vec& theta,
                   const std::string& path) {
  try {
    m.require_interior(theta);
  } catch (const DimensionError& e) {
    throw DimensionError(r.at(path) + e.what());
  } catch (const DomainError& e) {
    throw DomainError(r.at(path) + e.what());
  }
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SuiteConfig parse_config(const std::string& text, ConfigFormat format, const std::string& source) {
  const Document doc = parse_document(text, format, source);
  const Reader r(doc);
  const json& root = doc.root;
  r.only_keys(root, "", top_keys);

  SuiteConfig cfg;
  cfg.source = source;
  cfg.digest = fnv1a_hex(text);

  if (!root.contains("model")) throw ConfigError("missing required key `model`", 1);
  cfg.model_spec = read_model(r, root["model"]);
  cfg.model = build_model(r, cfg.model_spec);
  const int k = cfg.model.param_dim();

  // θ points: exactly one of theta, thetas, theta_grid.
  const int sources = root.contains("theta") + root.contains("thetas") + root.contains("theta_grid");
  if (sources == 0) throw ConfigError("one of `theta`, `thetas` or `theta_grid` is required", 1);
  if (sources > 1) r.fail(root.contains("thetas") ? "thetas" : "theta_grid",
                          "give only one of `theta`, `thetas`, `theta_grid`");
  if (root.contains("theta")) {
    cfg.thetas.push_back(r.vector(root["theta"], "theta"));
    require_point(r, cfg.model, cfg.thetas.back(), "theta");
  } else if (root.contains("thetas")) {
    const auto& arr = root["thetas"];
    if (!arr.is_array() || arr.empty()) r.fail("thetas", "expected a non-empty array of points");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto path = "thetas[" + std::to_string(i) + "]";
      cfg.thetas.push_back(r.vector(arr[i], path));
      require_point(r, cfg.model, cfg.thetas.back(), path);
    }
  } else {
    const auto& g = root["theta_grid"];
    if (!g.is_object()) r.fail("theta_grid", "expected a table {lower, upper, step}");
    r.only_keys(g, "theta_grid", {"lower", "upper", "step"});
    if (k != 1) r.fail("theta_grid", "grids are one-dimensional; use `thetas` for k > 1");
    for (const char* key : {"lower", "upper", "step"})
      if (!g.contains(key)) r.fail("theta_grid", std::string("missing `") + key + "`");
    const double lo = r.number(g["lower"], "theta_grid.lower");
    const double hi = r.number(g["upper"], "theta_grid.upper");
    const double step = r.number(g["step"], "theta_grid.step");
    if (!(step > 0.0) || hi < lo) r.fail("theta_grid", "need step > 0 and upper >= lower");
    const long n = std::lround((hi - lo) / step) + 1;
    if (n > 100000) r.fail("theta_grid", "more than 100000 points");
    for (long i = 0; i < n; ++i) {
      // Snap to a short decimal so 0.05 + 9·0.05 prints as 0.5.
      double t = lo + static_cast<double>(i) * step;
      t = std::round(t * 1e12) / 1e12;
      cfg.thetas.push_back(Vec::Constant(1, t));
      require_point(r, cfg.model, cfg.thetas.back(), "theta_grid");
    }
    cfg.theta_from_grid = true;
  }

  if (root.contains("theta_prime")) {
    cfg.theta_prime = r.vector(root["theta_prime"], "theta_prime");
    require_point(r, cfg.model, *cfg.theta_prime, "theta_prime");
  }

  if (root.contains("alpha")) cfg.alphas = read_alphas(r, root["alpha"], "alpha");

  if (root.contains("checks")) {
    const auto& c = root["checks"];
    if (!c.is_array()) r.fail("checks", "expected an array of check names or tables");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto path = "checks[" + std::to_string(i) + "]";
      CheckSpec spec{"", cfg.alphas};
      std::string alpha_path = "alpha";
      if (c[i].is_object()) {
        r.only_keys(c[i], path, {"name", "alpha"});
        if (!c[i].contains("name")) r.fail(path, "missing `name`");
        spec.name = r.string(c[i]["name"], path + ".name");
        if (c[i].contains("alpha")) {
          alpha_path = path + ".alpha";
          spec.alphas = read_alphas(r, c[i]["alpha"], alpha_path);
        }
      } else {
        spec.name = r.string(c[i], path);
      }
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), spec.name) == known.end())
        r.fail(path, "unknown check '" + spec.name + "'");
      if (alpha_only.count(spec.name) &&
          std::find(spec.alphas.begin(), spec.alphas.end(), 1.0) != spec.alphas.end()) {
        throw DispatchError(r.at(alpha_path) + "check '" + spec.name +
                            "' is undefined at alpha = 1 (the I_alpha formula divides by 1 - alpha); "
                            "use the kl-based check 'fisher_eguchi' there");
      }
      if (spec.name == "barankin" && k != 1) r.fail(path, "barankin needs a one-parameter model");
      cfg.checks.push_back(std::move(spec));
    }
  }

  if (root.contains("prior")) {
    cfg.prior_spec = read_prior(r, root["prior"]);
    cfg.prior = build_prior(r, *cfg.prior_spec, cfg.model);
  }
  for (const auto& c : cfg.checks)
    if (needs_prior.count(c.name) && !cfg.prior) r.fail("checks", "check '" + c.name + "' needs a `prior`");

  if (root.contains("grid_points")) {
    const long n = r.integer(root["grid_points"], "grid_points");
    if (n < 8 || n > 100000) r.fail("grid_points", "need 8 <= grid_points <= 100000");
    cfg.grid_points = static_cast<int>(n);
  }

  if (root.contains("estimators")) {
    const auto& arr = root["estimators"];
    if (!arr.is_array()) r.fail("estimators", "expected an array of tables");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto path = "estimators[" + std::to_string(i) + "]";
      const auto& e = arr[i];
      if (!e.is_object()) r.fail(path, "expected a table");
      r.only_keys(e, path, {"name", "values", "unbiased"});
      EstimatorFixture fx;
      fx.name = e.contains("name") ? r.string(e["name"], path + ".name") : "estimator" + std::to_string(i);
      if (!e.contains("values")) r.fail(path, "missing `values`");
      fx.values = r.matrix(e["values"], path + ".values");
      if (fx.values.rows() != cfg.model.alphabet_size() || fx.values.cols() != k)
        r.fail(path + ".values", "expected " + std::to_string(cfg.model.alphabet_size()) + " rows of " +
                                     std::to_string(k) + " values");
      if (e.contains("unbiased")) {
        if (!e["unbiased"].is_boolean()) r.fail(path + ".unbiased", "expected true or false");
        fx.unbiased = e["unbiased"].get<bool>();
      }
      cfg.estimators.push_back(std::move(fx));
    }
  }

  if (root.contains("diff")) {
    const auto& d = root["diff"];
    if (!d.is_object()) r.fail("diff", "expected a table");
    r.only_keys(d, "diff", {"h2", "h3", "margin", "scheme"});
    if (d.contains("h2")) cfg.diff.h2 = r.number(d["h2"], "diff.h2");
    if (d.contains("h3")) cfg.diff.h3 = r.number(d["h3"], "diff.h3");
    if (d.contains("margin")) cfg.diff.margin = r.number(d["margin"], "diff.margin");
    if (d.contains("scheme")) {
      const auto s = r.string(d["scheme"], "diff.scheme");
      if (s == "central") cfg.diff.scheme = DiffConfig::Scheme::central;
      else if (s == "richardson") cfg.diff.scheme = DiffConfig::Scheme::richardson;
      else r.fail("diff.scheme", "expected 'central' or 'richardson'");
    }
    try {
      cfg.diff.validate();
    } catch (const Error& e) {
      r.fail("diff", e.what());
    }
  }

  if (root.contains("output")) {
    const auto& o = root["output"];
    if (!o.is_object()) r.fail("output", "expected a table");
    r.only_keys(o, "output", {"report", "csv"});
    if (o.contains("report")) cfg.report_path = r.string(o["report"], "output.report");
    if (o.contains("csv")) cfg.csv_path = r.string(o["csv"], "output.csv");
  }

  if (root.contains("seed")) {
    const long s = r.integer(root["seed"], "seed");
    if (s < 0) r.fail("seed", "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (root.contains("mc_samples")) {
    cfg.mc_samples = r.integer(root["mc_samples"], "mc_samples");
    if (cfg.mc_samples < 1) r.fail("mc_samples", "must be positive");
  }
  if (root.contains("divergence_samples")) {
    cfg.divergence_samples = static_cast<int>(r.integer(root["divergence_samples"], "divergence_samples"));
    if (cfg.divergence_samples < 1) r.fail("divergence_samples", "must be positive");
  }
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  ConfigFormat fmt;
  if (ext == "toml") fmt = ConfigFormat::toml;
  else if (ext == "json") fmt = ConfigFormat::json;
  else throw ConfigError("config must end in .toml or .json: '" + path + "'");
  return parse_config(buf.str(), fmt, path);
}

}  // namespace infogeo::cli
