#include "ptkr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "ptkr/errors.hpp"

namespace ptkr {
namespace {

struct Entry {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ValidationError(key, "expected a finite number, got '" + s + "'");
  }
  return v;
}

long to_long(const std::string& key, const std::string& s) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ValidationError(key, "expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ValidationError(key, "expected a boolean, got '" + s + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    if (item.empty()) throw ValidationError(key, "empty list element");
    out.push_back(to_double(key, item));
  }
  return out;
}

// `lo, hi, count` evenly spaced (linearly or in log space).
std::vector<double> to_range(const std::string& key, const std::string& s, bool logarithmic) {
  const auto parts = split_list(s);
  if (parts.size() != 3) throw ValidationError(key, "expected 'lo, hi, count'");
  const double lo = to_double(key, parts[0]);
  const double hi = to_double(key, parts[1]);
  const long n = to_long(key, parts[2]);
  if (n < 1) throw ValidationError(key, "count must be >= 1");
  if (logarithmic && !(lo > 0.0 && hi > 0.0)) throw ValidationError(key, "log range needs positive bounds");
  std::vector<double> out;
  for (long i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(logarithmic ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return out;
}

const std::vector<std::string> kKeys = {
    "kick_strength", "lambda", "lambda_range", "lambda_logrange", "epsilon", "epsilon_range",
    "epsilon_logrange", "hbar_eff", "lattice_size", "n_kicks", "entropy_every", "marginal_kicks",
    "recenter", "sweep", "fit_window_fraction", "fit_window_start", "fit_window_end", "norm_margin",
    "diffusion_growth", "width_ratio", "leak_threshold", "output_dir", "format", "workers", "seed"};

void put(std::map<std::string, Entry>& entries, std::string key, std::string value, int line) {
  if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
    throw ValidationError(key, "unknown configuration key");
  }
  entries[std::move(key)] = {std::move(value), line};
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ValidationError(key, "must be positive");
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

std::vector<GridPoint> RunConfig::grid() const {
  std::vector<GridPoint> g;
  for (double l : lambdas)
    for (double e : epsilons) g.push_back({l, e});
  return g;
}

AnalysisOptions RunConfig::analysis_options() const {
  AnalysisOptions a;
  a.evolve.schedule = schedule;
  a.evolve.leak_threshold = fit.leak_threshold;
  a.evolve.recenter = recenter;
  a.window_fraction = fit.window_fraction;
  a.window_start = fit.window_start;
  a.window_end = fit.window_end;
  a.thresholds = fit.thresholds;
  return a;
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    put(entries, std::move(key), std::move(value), line_no);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ParseError(0, "override '" + o + "' is not key=value");
    std::string key = trim(o.substr(0, eq));
    std::string value = trim(o.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError(0, "override '" + o + "' is not key=value");
    // An override replaces any form of the same axis specification.
    for (const char* axis : {"lambda", "epsilon"}) {
      if (key.rfind(axis, 0) == 0) {
        for (const char* suffix : {"", "_range", "_logrange"}) entries.erase(std::string(axis) + suffix);
      }
    }
    put(entries, std::move(key), std::move(value), 0);
  }

  auto get = [&](const std::string& key) -> const std::string* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.value;
  };

  RunConfig c;
  c.params.n_kicks = 1000;
  c.params.lattice_size = 512;
  if (auto v = get("kick_strength")) c.params.kick_strength = to_double("kick_strength", *v);
  if (auto v = get("hbar_eff")) c.params.hbar_eff = to_double("hbar_eff", *v);
  if (auto v = get("lattice_size")) c.params.lattice_size = static_cast<int>(to_long("lattice_size", *v));
  if (auto v = get("n_kicks")) c.params.n_kicks = static_cast<int>(to_long("n_kicks", *v));

  auto axis = [&](const std::string& name, double fallback, std::vector<double>& values) {
    int forms = 0;
    if (auto v = get(name)) {
      values = to_doubles(name, *v);
      c.sweep = c.sweep || values.size() > 1;
      ++forms;
    }
    if (auto v = get(name + "_range")) {
      values = to_range(name + "_range", *v, false);
      c.sweep = true;
      ++forms;
    }
    if (auto v = get(name + "_logrange")) {
      values = to_range(name + "_logrange", *v, true);
      c.sweep = true;
      ++forms;
    }
    if (forms > 1) throw ValidationError(name, "give only one of " + name + ", " + name + "_range, " + name + "_logrange");
    if (forms == 0) values = {fallback};
    if (values.empty()) throw ValidationError(name, "grid axis is empty");
    for (double x : values)
      if (x < 0.0) throw ValidationError(name, "must be >= 0 (negative lambda is the parity image of +lambda)");
  };
  axis("lambda", 0.01, c.lambdas);
  axis("epsilon", 0.0, c.epsilons);
  if (auto v = get("sweep")) c.sweep = c.sweep || to_bool("sweep", *v);
  c.params.lambda = c.lambdas.front();
  c.params.epsilon = c.epsilons.front();

  if (auto v = get("entropy_every")) {
    const long e = to_long("entropy_every", *v);
    if (e < 0) throw ValidationError("entropy_every", "must be >= 0");
    c.schedule.entropy_every = static_cast<int>(e);
  }
  if (auto v = get("marginal_kicks")) {
    for (const auto& item : split_list(*v)) {
      const long t = to_long("marginal_kicks", item);
      if (t < 0) throw ValidationError("marginal_kicks", "kick indices must be >= 0");
      c.schedule.marginal_kicks.push_back(t);
    }
  }
  if (auto v = get("recenter")) c.recenter = to_bool("recenter", *v);

  if (auto v = get("fit_window_fraction")) c.fit.window_fraction = to_double("fit_window_fraction", *v);
  if (auto v = get("fit_window_start")) c.fit.window_start = to_long("fit_window_start", *v);
  if (auto v = get("fit_window_end")) c.fit.window_end = to_long("fit_window_end", *v);
  if (auto v = get("norm_margin")) c.fit.thresholds.norm_margin = to_double("norm_margin", *v);
  if (auto v = get("diffusion_growth")) c.fit.thresholds.diffusion_growth = to_double("diffusion_growth", *v);
  if (auto v = get("width_ratio")) c.fit.thresholds.width_ratio = to_double("width_ratio", *v);
  if (auto v = get("leak_threshold")) c.fit.leak_threshold = to_double("leak_threshold", *v);

  if (auto v = get("output_dir")) c.output_dir = *v;
  if (auto v = get("format")) {
    if (*v == "csv") c.format = OutputFormat::Csv;
    else if (*v == "json") c.format = OutputFormat::Json;
    else throw ValidationError("format", "expected csv or json");
  }
  if (auto v = get("workers")) c.workers = static_cast<int>(to_long("workers", *v));
  if (auto v = get("seed")) c.seed = to_long("seed", *v);

  validate(c.params);
  require_positive("fit_window_fraction", c.fit.window_fraction);
  if (c.fit.window_fraction > 1.0) throw ValidationError("fit_window_fraction", "must be <= 1");
  require_positive("norm_margin", c.fit.thresholds.norm_margin);
  require_positive("diffusion_growth", c.fit.thresholds.diffusion_growth);
  require_positive("width_ratio", c.fit.thresholds.width_ratio);
  require_positive("leak_threshold", c.fit.leak_threshold);
  if (c.workers < 1) throw ValidationError("workers", "must be >= 1");
  if (c.fit.window_start && *c.fit.window_start < 0) throw ValidationError("fit_window_start", "must be >= 0");
  if (c.fit.window_end && *c.fit.window_end > c.params.n_kicks) {
    throw ValidationError("fit_window_end", "beyond n_kicks");
  }
  if (c.fit.window_start && c.fit.window_end && *c.fit.window_start >= *c.fit.window_end) {
    throw ValidationError("fit_window_start", "must precede fit_window_end");
  }
  return c;
}

}  // namespace ptkr
