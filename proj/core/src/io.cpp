#include "ptkr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "ptkr/errors.hpp"

namespace ptkr::io {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string ext(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

// nlohmann writes non-finite doubles as null; keep them readable instead.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json params_json(const SimParams& p) {
  return {{"kick_strength", p.kick_strength}, {"lambda", p.lambda},     {"epsilon", p.epsilon},
          {"hbar_eff", p.hbar_eff},           {"lattice_size", p.lattice_size}, {"n_kicks", p.n_kicks}};
}

json window_json(const FitWindow& w) { return {{"t_start", w.t_start}, {"t_end", w.t_end}}; }

double parse_double(const std::string& s, const std::filesystem::path& path, int line) {
  if (s.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError(line, path.string() + ": bad number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string parameter_tag(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8f", value);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_filename(double lambda, double epsilon, OutputFormat format) {
  return "trajectory_" + parameter_tag(lambda) + "_" + parameter_tag(epsilon) + ext(format);
}

std::string marginal_filename(double lambda, double epsilon, long kick, OutputFormat format) {
  return "marginal_" + parameter_tag(lambda) + "_" + parameter_tag(epsilon) + "_t" + std::to_string(kick) +
         ext(format);
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& traj, OutputFormat format) {
  auto out = open_out(path);
  if (format == OutputFormat::Csv) {
    out << "t,p1_mean,p1_sq_mean,variance,norm_total,linear_entropy,leak_flag,log_norm,norm_factor,"
           "edge_probability\n";
    for (const auto& r : traj.records) {
      out << r.kick_index << ',' << format_double(r.p1_mean) << ',' << format_double(r.p1_sq_mean) << ','
          << format_double(r.variance) << ',' << format_double(r.norm_total) << ','
          << (r.linear_entropy ? format_double(*r.linear_entropy) : std::string()) << ','
          << (r.leak_flag ? 1 : 0) << ',' << format_double(r.log_norm) << ',' << format_double(r.norm_factor)
          << ',' << format_double(r.edge_probability) << '\n';
    }
    return;
  }
  json rows = json::array();
  for (const auto& r : traj.records) {
    rows.push_back({{"t", r.kick_index},
                    {"p1_mean", number(r.p1_mean)},
                    {"p1_sq_mean", number(r.p1_sq_mean)},
                    {"variance", number(r.variance)},
                    {"norm_total", number(r.norm_total)},
                    {"linear_entropy", r.linear_entropy ? number(*r.linear_entropy) : json(nullptr)},
                    {"leak_flag", r.leak_flag},
                    {"log_norm", number(r.log_norm)},
                    {"norm_factor", number(r.norm_factor)},
                    {"edge_probability", number(r.edge_probability)}});
  }
  json doc = {{"params", params_json(traj.params)},
              {"truncation_leak", traj.truncation_leak},
              {"first_leak_kick", traj.first_leak_kick},
              {"records", rows}};
  out << doc.dump(1) << '\n';
}

void write_marginal(const std::filesystem::path& path, const MarginalSnapshot& snap, OutputFormat format) {
  auto out = open_out(path);
  const auto& d = snap.distribution;
  if (format == OutputFormat::Csv) {
    out << "m,p,prob\n";
    for (std::size_t k = 0; k < d.prob.size(); ++k) {
      out << d.index(k) << ',' << format_double(d.momentum(k)) << ',' << format_double(d.prob[k]) << '\n';
    }
    return;
  }
  json doc = {{"t", snap.kick_index}, {"first_index", d.first_index}, {"hbar_eff", d.hbar_eff}, {"prob", d.prob}};
  out << doc.dump(1) << '\n';
}

void write_phase_diagram(const std::filesystem::path& path, const std::vector<PhasePoint>& points,
                         OutputFormat format) {
  auto out = open_out(path);
  if (format == OutputFormat::Csv) {
    out << "lambda,epsilon,phase,norm_time_avg,entropy_time_avg,pt_broken,plateau_level,diffusion_indicator,"
           "width_ratio,current_rate,width_exponent,norm_growth_rate,truncation_leak,error\n";
    for (const auto& p : points) {
      std::string err = p.error.value_or("");
      for (char& ch : err)
        if (ch == ',' || ch == '\n') ch = ';';
      out << format_double(p.lambda) << ',' << format_double(p.epsilon) << ',' << roman(p.phase) << ','
          << format_double(p.norm_time_avg) << ',' << format_double(p.entropy_time_avg) << ','
          << (p.pt_broken ? 1 : 0) << ',' << format_double(p.plateau_level) << ','
          << format_double(p.diffusion_indicator) << ',' << format_double(p.width_ratio) << ','
          << format_double(p.fit.current.rate) << ',' << format_double(p.fit.width.exponent) << ','
          << format_double(p.fit.norm_growth.rate) << ',' << (p.truncation_leak ? 1 : 0) << ',' << err << '\n';
    }
    return;
  }
  json rows = json::array();
  for (const auto& p : points) {
    rows.push_back({{"lambda", p.lambda},
                    {"epsilon", p.epsilon},
                    {"phase", std::string(roman(p.phase))},
                    {"norm_time_avg", number(p.norm_time_avg)},
                    {"entropy_time_avg", number(p.entropy_time_avg)},
                    {"pt_broken", p.pt_broken},
                    {"error", p.error ? json(*p.error) : json(nullptr)}});
  }
  out << rows.dump(1) << '\n';
}

std::string fits_json(const std::vector<PointResult>& results, const RunConfig& config) {
  json runs = json::array();
  for (const auto& r : results) {
    const auto& p = r.point;
    const auto& f = p.fit;
    json gaussians = json::array();
    for (const auto& [t, g] : f.gaussians) {
      gaussians.push_back({{"t", t}, {"center", number(g.center)}, {"width", number(g.width)},
                           {"goodness", number(g.goodness)}});
    }
    SimParams params = config.params;
    params.lambda = p.lambda;
    params.epsilon = p.epsilon;
    runs.push_back({
        {"params", params_json(params)},
        {"phase", std::string(roman(p.phase))},
        {"pt_broken", p.pt_broken},
        {"norm_time_avg", number(p.norm_time_avg)},
        {"entropy_time_avg", number(p.entropy_time_avg)},
        {"plateau_level", number(p.plateau_level)},
        {"diffusion_indicator", number(p.diffusion_indicator)},
        {"width_ratio", number(p.width_ratio)},
        {"truncation_leak", p.truncation_leak},
        {"error", p.error ? json(*p.error) : json(nullptr)},
        {"current_rate", {{"rate", number(f.current.rate)}, {"endpoint_rate", number(f.current.endpoint_rate)},
                          {"r_squared", number(f.current.r_squared)}, {"window", window_json(f.current.window)}}},
        {"width", {{"prefactor", number(f.width.prefactor)}, {"exponent", number(f.width.exponent)},
                   {"endpoint_prefactor", number(f.width.endpoint_prefactor)},
                   {"r_squared", number(f.width.r_squared)}, {"valid", f.width_fit_valid},
                   {"window", window_json(f.width.window)}}},
        {"norm_growth", {{"rate", number(f.norm_growth.rate)}, {"r_squared", number(f.norm_growth.r_squared)},
                         {"window", window_json(f.norm_growth.window)}}},
        {"diffusion", {{"rate", number(f.diffusion.rate)}, {"r_squared", number(f.diffusion.r_squared)},
                       {"window", window_json(f.diffusion.window)}}},
        {"gaussians", gaussians},
    });
  }
  const auto& th = config.fit.thresholds;
  json doc = {{"window_fraction", config.fit.window_fraction},
              {"window_start", config.fit.window_start ? json(*config.fit.window_start) : json(nullptr)},
              {"window_end", config.fit.window_end ? json(*config.fit.window_end) : json(nullptr)},
              {"thresholds", {{"norm_margin", th.norm_margin}, {"diffusion_growth", th.diffusion_growth},
                              {"width_ratio", th.width_ratio}, {"leak_threshold", config.fit.leak_threshold}}},
              {"runs", runs}};
  return doc.dump(1) + "\n";
}

std::optional<std::pair<double, double>> parameters_from_filename(const std::string& name) {
  static const std::regex re(R"((?:trajectory|marginal)_([0-9.eE+-]+)_([0-9.eE+-]+?)(?:_t\d+)?\.(?:csv|json))");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return std::make_pair(std::stod(m[1].str()), std::stod(m[2].str()));
}

TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, path.string() + ": empty file");
  std::map<std::string, std::size_t> col;
  const auto header = split_csv(line);
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"t", "p1_mean", "p1_sq_mean", "variance", "norm_total"}) {
    if (!col.count(need)) throw ParseError(1, path.string() + ": missing column " + std::string(need));
  }

  TrajectoryRecord traj;
  if (auto lp = parameters_from_filename(path.filename().string())) {
    traj.params.lambda = lp->first;
    traj.params.epsilon = lp->second;
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    auto cell = [&](const char* name) -> std::string {
      auto it = col.find(name);
      return it == col.end() || it->second >= cells.size() ? std::string() : cells[it->second];
    };
    ObservableRecord r;
    r.kick_index = static_cast<long>(parse_double(cell("t"), path, line_no));
    r.p1_mean = parse_double(cell("p1_mean"), path, line_no);
    r.p1_sq_mean = parse_double(cell("p1_sq_mean"), path, line_no);
    r.variance = parse_double(cell("variance"), path, line_no);
    r.norm_total = parse_double(cell("norm_total"), path, line_no);
    const std::string ln = cell("log_norm");
    r.log_norm = ln.empty() ? std::log(r.norm_total) : parse_double(ln, path, line_no);
    if (const std::string s = cell("linear_entropy"); !s.empty()) r.linear_entropy = parse_double(s, path, line_no);
    if (const std::string s = cell("norm_factor"); !s.empty()) r.norm_factor = parse_double(s, path, line_no);
    if (const std::string s = cell("edge_probability"); !s.empty()) r.edge_probability = parse_double(s, path, line_no);
    r.leak_flag = cell("leak_flag") == "1";
    if (r.leak_flag && !traj.truncation_leak) {
      traj.truncation_leak = true;
      traj.first_leak_kick = r.kick_index;
    }
    traj.records.push_back(r);
  }
  traj.params.n_kicks = static_cast<int>(traj.final_kick());
  return traj;
}

MomentumDistribution read_marginal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "m,p,prob") throw ParseError(1, path.string() + ": expected header m,p,prob");
  MomentumDistribution d;
  int line_no = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw ParseError(line_no, path.string() + ": expected 3 columns");
    const long m = static_cast<long>(parse_double(cells[0], path, line_no));
    const double p = parse_double(cells[1], path, line_no);
    if (first) {
      d.first_index = m;
      d.hbar_eff = m != 0 ? p / static_cast<double>(m) : 1.0;
      first = false;
    } else if (m != 0 && d.hbar_eff == 1.0 && d.first_index == 0) {
      d.hbar_eff = p / static_cast<double>(m);
    }
    d.prob.push_back(parse_double(cells[2], path, line_no));
  }
  return d;
}

}  // namespace ptkr::io
