#include "realitygame/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <utility>

#include <json.hpp>

#include "realitygame/analytics.hpp"
#include "realitygame/engine.hpp"
#include "realitygame/errors.hpp"
#include "realitygame/format.hpp"
#include "realitygame/rational.hpp"
#include "realitygame/svg.hpp"
#include "realitygame/version.hpp"

namespace fs = std::filesystem;

namespace rg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t parse_u64_value(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ValidationError(key, "expected an unsigned integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_double_value(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ValidationError(key, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool_value(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  throw ValidationError(key, "expected a boolean, got '" + std::string(v) + "'");
}

const std::pair<std::string_view, ExperimentKind> kKinds[] = {
    {"bias-dynamics", ExperimentKind::bias_dynamics},
    {"wealth-dynamics", ExperimentKind::wealth_dynamics},
    {"subjective-distribution", ExperimentKind::subjective_distribution},
    {"rational-curve", ExperimentKind::rational_curve},
    {"inefficiency", ExperimentKind::inefficiency},
    {"table1", ExperimentKind::table1},
};

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kKinds) {
    if (k == kind) {
      return std::string(name);
    }
  }
  return "?";
}

ExperimentSpec parse_spec(const std::string& text, const std::string& origin) {
  static const std::set<std::string_view> known = {
      "kind",        "map",   "alpha",           "n_players", "horizon",        "ensemble",
      "seed",        "snapshot_stride", "fit_lo", "fit_hi",   "epsilon_player",
  };
  std::vector<std::pair<std::string, std::string>> entries;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view raw(text.data() + pos,
                               (eol == std::string::npos ? text.size() : eol) - pos);
    ++lineno;
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;

    std::string_view line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (trim(line).empty()) {
      continue;
    }
    const std::size_t eq = line.find('=');
    const int content_col = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (eq == std::string_view::npos) {
      throw ParseError(origin, lineno, content_col, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ParseError(origin, lineno, content_col, "missing key before '='");
    }
    if (value.empty()) {
      throw ParseError(origin, lineno, static_cast<int>(eq) + 2, "missing value after '='");
    }
    if (known.find(key) == known.end()) {
      throw ValidationError(key, "unknown key");
    }
    for (const auto& [k, v] : entries) {
      if (k == key) {
        throw ValidationError(key, "duplicate key");
      }
    }
    entries.emplace_back(key, value);
  }

  const auto lookup = [&](std::string_view key) -> const std::string* {
    for (const auto& [k, v] : entries) {
      if (k == key) {
        return &v;
      }
    }
    return nullptr;
  };

  ExperimentSpec spec;
  const std::string* kind = lookup("kind");
  if (kind == nullptr) {
    throw ValidationError("kind", "required key is missing");
  }
  bool kind_ok = false;
  for (const auto& [name, k] : kKinds) {
    if (*kind == name) {
      spec.kind = k;
      kind_ok = true;
      break;
    }
  }
  if (!kind_ok) {
    throw ValidationError("kind", "unknown experiment kind '" + *kind + "'");
  }

  if (const std::string* v = lookup("n_players")) {
    spec.n_players = parse_u64_value("n_players", *v);
    if (spec.n_players == 0) {
      throw ValidationError("n_players", "must be at least 1");
    }
  }
  if (const std::string* v = lookup("horizon")) {
    spec.horizon = parse_u64_value("horizon", *v);
    if (spec.horizon == 0) {
      throw ValidationError("horizon", "must be at least 1");
    }
  }
  if (const std::string* v = lookup("ensemble")) {
    spec.ensemble = parse_u64_value("ensemble", *v);
    if (spec.ensemble == 0) {
      throw ValidationError("ensemble", "must be at least 1");
    }
  }
  if (const std::string* v = lookup("seed")) {
    spec.seed = parse_u64_value("seed", *v);
  }
  if (const std::string* v = lookup("snapshot_stride")) {
    spec.snapshot_stride = parse_u64_value("snapshot_stride", *v);
    if (spec.snapshot_stride == 0) {
      throw ValidationError("snapshot_stride", "must be at least 1");
    }
  }
  if (const std::string* v = lookup("epsilon_player")) {
    spec.epsilon_player = parse_bool_value("epsilon_player", *v);
  }
  if (const std::string* v = lookup("fit_lo")) {
    spec.fit_lo = parse_u64_value("fit_lo", *v);
    if (spec.fit_lo == 0) {
      throw ValidationError("fit_lo", "must be at least 1");
    }
  }
  if (const std::string* v = lookup("fit_hi")) {
    spec.fit_hi = parse_u64_value("fit_hi", *v);
    if (spec.fit_hi <= spec.fit_lo) {
      throw ValidationError("fit_hi", "must exceed fit_lo");
    }
  }

  std::optional<double> alpha;
  if (const std::string* v = lookup("alpha")) {
    alpha = parse_double_value("alpha", *v);
    if (!(*alpha > 0.0)) {
      throw ValidationError("alpha", "arctan steepness must be positive");
    }
  }

  if (const std::string* v = lookup("map")) {
    const std::string& m = *v;
    spec.map_text = m;
    spec.has_map = true;
    if (m == "self-defeating") {
      spec.map = RealityMap::self_defeating();
    } else if (m == "identity") {
      spec.map = RealityMap::identity();
    } else if (m == "multimodal") {
      spec.map = RealityMap::multimodal();
    } else if (m == "arctan") {
      spec.alpha = alpha.value_or(2.0);
      spec.map = RealityMap::arctan_family(spec.alpha);
    } else if (m == "constant") {
      spec.map = RealityMap::constant(0.5);
    } else if (m.rfind("constant(", 0) == 0 && m.back() == ')') {
      const double c = parse_double_value("map", std::string_view(m).substr(9, m.size() - 10));
      if (!(c >= 0.0 && c <= 1.0)) {
        throw ValidationError("map", "constant bias must lie in [0, 1]");
      }
      spec.map = RealityMap::constant(c);
    } else if (m.rfind("piecewise:", 0) == 0) {
      const std::string path = m.substr(10);
      if (path.empty()) {
        throw ValidationError("map", "piecewise needs a file: piecewise:FILE");
      }
      spec.map = RealityMap::load_piecewise(path);
    } else {
      throw ValidationError("map",
                            "unknown map '" + m +
                                "' (use constant, constant(c), self-defeating, arctan, identity, "
                                "multimodal, or piecewise:FILE)");
    }
    if (alpha && spec.map.kind() != MapKind::arctan_family) {
      throw ValidationError("alpha", "only meaningful with map = arctan");
    }
  } else if (alpha) {
    throw ValidationError("alpha", "only meaningful with map = arctan");
  }

  const bool needs_map = spec.kind == ExperimentKind::bias_dynamics ||
                         spec.kind == ExperimentKind::wealth_dynamics ||
                         spec.kind == ExperimentKind::inefficiency ||
                         spec.kind == ExperimentKind::rational_curve;
  if (needs_map && !spec.has_map) {
    throw ValidationError("map", "required for kind = " + to_string(spec.kind));
  }
  if ((spec.kind == ExperimentKind::inefficiency || spec.kind == ExperimentKind::table1) &&
      !spec.epsilon_player) {
    throw ValidationError("epsilon_player", "the inefficiency series is this experiment's output");
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot open spec file: " + path);
  }
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_spec(text, path);
}

namespace {

std::ofstream open_csv(const fs::path& path, const std::string& schema, const std::string& header) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error("cannot open for writing: " + path.string());
  }
  f << "# schema: " << schema << "\n" << header << "\n";
  return f;
}

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-') {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') {
    out.pop_back();
  }
  return out;
}

std::size_t resolved_fit_hi(const ExperimentSpec& spec) {
  return spec.fit_hi != 0 ? spec.fit_hi : spec.horizon / 10;
}

// The exponent the stability analysis predicts for a map, read off its
// preferred attractor: an interior stable fixed point if there is one, else a
// stable boundary. Maps with a continuum (or nothing stable and smooth) give
// no prediction.
std::optional<double> predicted_gamma(const RealityMap& map) {
  const FixedPointScan scan = map.fixed_points();
  if (scan.continuum) {
    return std::nullopt;
  }
  const FixedPointInfo* pick = nullptr;
  for (const FixedPointInfo& fp : scan.points) {
    if (!fp.stable || fp.discontinuity || !std::isfinite(fp.slope)) {
      continue;
    }
    if (!fp.boundary) {
      pick = &fp;
      break;
    }
    if (pick == nullptr) {
      pick = &fp;
    }
  }
  if (pick == nullptr) {
    return std::nullopt;
  }
  try {
    return predict_convergence(map, pick->location).inefficiency_exponent;
  } catch (const Error&) {
    return std::nullopt;
  }
}

RunConfig base_config(const ExperimentSpec& spec) {
  RunConfig cfg;
  cfg.population = PlayerPopulation::uniform_grid(spec.n_players);
  cfg.map = spec.map;
  cfg.horizon = spec.horizon;
  cfg.snapshot_stride = spec.snapshot_stride;
  cfg.record_wealth = false;
  cfg.record_log_return = false;
  return cfg;
}

std::vector<RunStatus> statuses_from(const EnsembleStats& stats, std::size_t horizon) {
  std::vector<RunStatus> out(stats.seeds.size());
  for (std::size_t i = 0; i < stats.seeds.size(); ++i) {
    out[i] = RunStatus{i, stats.seeds[i], horizon, false, ""};
  }
  for (const ExcludedRun& ex : stats.excluded) {
    out[ex.run_index] = RunStatus{ex.run_index, ex.seed, ex.steps, true, ex.reason};
  }
  return out;
}

void run_bias_dynamics(const ExperimentSpec& spec, const fs::path& dir, unsigned workers,
                       ExperimentOutputs& out, std::vector<std::uint64_t>& seeds) {
  struct Reduced {
    std::vector<double> p, q;
    RunStatus status;
  };
  seeds = derive_seeds(spec.seed, spec.ensemble);
  RunConfig cfg = base_config(spec);
  const auto runs = map_runs<Reduced>(
      cfg, seeds, workers, [](std::size_t i, const Trajectory& traj) {
        return Reduced{traj.p, traj.q,
                       RunStatus{i, 0, traj.steps, traj.aborted, traj.abort_reason}};
      });

  auto csv = open_csv(dir / "bias_dynamics.csv", "bias-dynamics v1", "t,seed,p,q");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t t = 0; t < runs[i].p.size(); ++t) {
      csv << (t + 1) << ',' << seeds[i] << ',' << format_double(runs[i].p[t]) << ','
          << format_double(runs[i].q[t]) << "\n";
    }
  }
  out.files.push_back("bias_dynamics.csv");

  std::vector<Series> series;
  for (std::size_t i = 0; i < runs.size() && i < 10; ++i) {
    Series s;
    s.label = "seed " + std::to_string(seeds[i]);
    s.x.resize(runs[i].q.size());
    for (std::size_t t = 0; t < s.x.size(); ++t) {
      s.x[t] = static_cast<double>(t + 1);
    }
    s.y = runs[i].q;
    series.push_back(std::move(s));
  }
  ChartSpec chart;
  chart.title = "Coin bias over time: " + spec.map.label();
  chart.x_label = "t";
  chart.y_label = "q";
  write_svg((dir / "bias_dynamics.svg").string(), series, chart);
  out.files.push_back("bias_dynamics.svg");

  for (std::size_t i = 0; i < runs.size(); ++i) {
    RunStatus st = runs[i].status;
    st.seed = seeds[i];
    out.runs.push_back(st);
  }
}

void run_wealth_dynamics(const ExperimentSpec& spec, const fs::path& dir, unsigned /*workers*/,
                         ExperimentOutputs& out, std::vector<std::uint64_t>& seeds) {
  seeds = {spec.seed};
  RunConfig cfg = base_config(spec);
  cfg.seed = spec.seed;
  cfg.record_wealth = true;
  const Trajectory traj = run(cfg);
  const std::vector<double>& strategies = cfg.population.strategies;

  auto csv = open_csv(dir / "wealth_dynamics.csv", "wealth-dynamics v1", "t,player,strategy,wealth");
  for (const WealthSnapshot& snap : traj.snapshots) {
    for (std::size_t j = 0; j < snap.wealths.size(); ++j) {
      csv << snap.t << ',' << j << ',' << format_double(strategies[j]) << ','
          << format_double(snap.wealths[j]) << "\n";
    }
  }
  out.files.push_back("wealth_dynamics.csv");

  // Up to six snapshots, endpoints always included, as wealth-vs-strategy curves.
  std::vector<std::size_t> picks;
  const std::size_t n_snaps = traj.snapshots.size();
  for (int k = 0; k < 6; ++k) {
    picks.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * static_cast<double>(n_snaps - 1) / 5.0)));
  }
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  std::vector<Series> series;
  for (std::size_t idx : picks) {
    const WealthSnapshot& snap = traj.snapshots[idx];
    series.push_back(Series{"t=" + std::to_string(snap.t), strategies, snap.wealths});
  }
  ChartSpec chart;
  chart.title = "Wealth across strategies: " + spec.map.label();
  chart.x_label = "strategy s";
  chart.y_label = "wealth share";
  write_svg((dir / "wealth_dynamics.svg").string(), series, chart);
  out.files.push_back("wealth_dynamics.svg");

  out.runs.push_back(RunStatus{0, spec.seed, traj.steps, traj.aborted, traj.abort_reason});
}

void run_subjective_distribution(const ExperimentSpec& spec, const fs::path& dir,
                                 ExperimentOutputs& out) {
  const PlayerPopulation pop = PlayerPopulation::uniform_grid(spec.n_players);
  const SubjectiveDistribution dist = subjective_heads_distribution(pop, spec.horizon);

  auto csv = open_csv(dir / "subjective_distribution.csv", "subjective-distribution v1", "m,p_m");
  for (std::size_t m = 0; m < dist.probability.size(); ++m) {
    csv << m << ',' << format_double(dist.probability[m]) << "\n";
  }
  out.files.push_back("subjective_distribution.csv");

  Series s;
  s.label = "P_m, t=" + std::to_string(spec.horizon);
  s.x.resize(dist.probability.size());
  for (std::size_t m = 0; m < s.x.size(); ++m) {
    s.x[m] = static_cast<double>(m);
  }
  s.y = dist.probability;
  ChartSpec chart;
  chart.title = "Heads-count distribution under the subjective mixture";
  chart.x_label = "heads count m";
  chart.y_label = "P_m";
  write_svg((dir / "subjective_distribution.svg").string(), {s}, chart);
  out.files.push_back("subjective_distribution.svg");
}

void run_rational_curve(const ExperimentSpec& spec, const fs::path& dir, ExperimentOutputs& out) {
  // Figure setup: one s = 1/2 opponent, a few wealth shares for the bettor.
  const double wealths[] = {0.2, 1.0 / 3.0, 0.45, 0.6};
  RationalContext ctx;
  ctx.opponents = PlayerPopulation::with_equal_wealth({0.5});
  ctx.map = spec.map;

  auto csv = open_csv(dir / "rational_curve.csv", "rational-curve v1", "w,s,r");
  std::vector<Series> series;
  for (double w : wealths) {
    ctx.wealth = w;
    const LogReturnCurve curve = sample_log_return_curve(ctx, 512);
    for (std::size_t i = 0; i < curve.s.size(); ++i) {
      csv << format_double(w) << ',' << format_double(curve.s[i]) << ','
          << format_double(curve.r[i]) << "\n";
    }
    series.push_back(Series{"w=" + format_fixed(w, 2), curve.s, curve.r});
  }
  out.files.push_back("rational_curve.csv");

  ChartSpec chart;
  chart.title = "Expected log return vs own bet: " + spec.map.label();
  chart.x_label = "bet s";
  chart.y_label = "r(s)";
  write_svg((dir / "rational_curve.svg").string(), series, chart);
  out.files.push_back("rational_curve.svg");
}

// Writes the standard inefficiency series CSV and returns the fit.
PowerLawFit write_inefficiency_series(const EnsembleStats& stats, std::size_t fit_lo,
                                      std::size_t fit_hi, const fs::path& csv_path) {
  auto csv = open_csv(csv_path, "inefficiency v1", "t,mean_r,var_r,n_runs");
  for (std::size_t t = 0; t < stats.mean_r.size(); ++t) {
    csv << (t + 1) << ',' << format_double(stats.mean_r[t]) << ','
        << format_double(stats.var_r[t]) << ',' << stats.completed_runs << "\n";
  }
  return fit_power_law(stats.mean_r, fit_lo, fit_hi);
}

void append_fit_row(std::ofstream& csv, const RealityMap& map, const PowerLawFit& fit) {
  csv << map.label() << ',';
  if (map.kind() == MapKind::arctan_family) {
    csv << format_double(map.alpha());
  }
  csv << ',' << format_double(fit.exponent) << ',' << format_double(fit.stderr_exponent) << ','
      << format_double(fit.r_squared) << ',';
  if (const std::optional<double> g = predicted_gamma(map)) {
    csv << format_double(*g);
  }
  csv << "\n";
}

Series positive_part(std::string label, const std::vector<double>& series) {
  Series s;
  s.label = std::move(label);
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (series[t] > 0.0) {
      s.x.push_back(static_cast<double>(t + 1));
      s.y.push_back(series[t]);
    }
  }
  return s;
}

void run_inefficiency(const ExperimentSpec& spec, const fs::path& dir, unsigned workers,
                      ExperimentOutputs& out, std::vector<std::uint64_t>& seeds) {
  seeds = derive_seeds(spec.seed, spec.ensemble);
  RunConfig cfg = base_config(spec);
  cfg.record_log_return = true;
  const EnsembleStats stats = ensemble(cfg, seeds, workers);

  const std::size_t hi = resolved_fit_hi(spec);
  const PowerLawFit fit =
      write_inefficiency_series(stats, spec.fit_lo, hi, dir / "inefficiency.csv");
  out.files.push_back("inefficiency.csv");

  auto fits = open_csv(dir / "fits.csv", "fits v1", "map,alpha,gamma_hat,stderr,r2,gamma_predicted");
  append_fit_row(fits, spec.map, fit);
  out.files.push_back("fits.csv");

  std::vector<Series> series;
  series.push_back(positive_part("mean r_t", stats.mean_r));
  Series fitted;
  fitted.label = "fit t^-" + format_fixed(fit.exponent, 3);
  for (double t : {static_cast<double>(fit.t_lo), static_cast<double>(fit.t_hi)}) {
    fitted.x.push_back(t);
    fitted.y.push_back(std::exp(fit.intercept - fit.exponent * std::log(t)));
  }
  series.push_back(std::move(fitted));
  ChartSpec chart;
  chart.title = "Inefficiency decay: " + spec.map.label();
  chart.x_label = "t";
  chart.y_label = "mean r_t";
  chart.log_x = true;
  chart.log_y = true;
  write_svg((dir / "inefficiency.svg").string(), series, chart);
  out.files.push_back("inefficiency.svg");

  out.runs = statuses_from(stats, spec.horizon);
}

void run_table1(const ExperimentSpec& spec, const fs::path& dir, unsigned workers,
                ExperimentOutputs& out, std::vector<std::uint64_t>& seeds) {
  const RealityMap maps[] = {
      RealityMap::arctan_family(2.0),  RealityMap::arctan_family(1.5),
      RealityMap::arctan_family(0.75), RealityMap::arctan_family(0.5),
      RealityMap::constant(0.5),       RealityMap::self_defeating(),
  };
  auto fits = open_csv(dir / "fits.csv", "fits v1", "map,alpha,gamma_hat,stderr,r2,gamma_predicted");
  std::vector<Series> series;
  std::cout << "map               predicted   fitted    stderr    r2\n";
  for (std::size_t row = 0; row < std::size(maps); ++row) {
    const RealityMap& map = maps[row];
    RunConfig cfg = base_config(spec);
    cfg.map = map;
    cfg.record_log_return = true;
    const std::vector<std::uint64_t> row_seeds =
        derive_seeds(spec.seed + row * spec.ensemble, spec.ensemble);
    const EnsembleStats stats = ensemble(cfg, row_seeds, workers);
    seeds.insert(seeds.end(), row_seeds.begin(), row_seeds.end());

    const std::string name = "inefficiency_" + slug(map.label()) + ".csv";
    const PowerLawFit fit =
        write_inefficiency_series(stats, spec.fit_lo, resolved_fit_hi(spec), dir / name);
    out.files.push_back(name);
    append_fit_row(fits, map, fit);
    series.push_back(positive_part(map.label(), stats.mean_r));

    const std::optional<double> g = predicted_gamma(map);
    std::cout << map.label() << std::string(map.label().size() < 18 ? 18 - map.label().size() : 1, ' ')
              << (g ? format_fixed(*g, 4) : "-     ") << "      " << format_fixed(fit.exponent, 4)
              << "    " << format_fixed(fit.stderr_exponent, 4) << "    "
              << format_fixed(fit.r_squared, 4) << "\n";

    std::vector<RunStatus> st = statuses_from(stats, spec.horizon);
    for (RunStatus& s : st) {
      s.run_index += row * spec.ensemble;
      out.runs.push_back(std::move(s));
    }
  }
  out.files.push_back("fits.csv");

  ChartSpec chart;
  chart.title = "Inefficiency decay across reality maps";
  chart.x_label = "t";
  chart.y_label = "mean r_t";
  chart.log_x = true;
  chart.log_y = true;
  write_svg((dir / "table1.svg").string(), series, chart);
  out.files.push_back("table1.svg");
}

std::int64_t unix_ms_now() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

ExperimentOutputs run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                 unsigned workers) {
  const std::int64_t started = unix_ms_now();
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  ExperimentOutputs out;
  std::vector<std::uint64_t> seeds;
  switch (spec.kind) {
    case ExperimentKind::bias_dynamics:
      run_bias_dynamics(spec, dir, workers, out, seeds);
      break;
    case ExperimentKind::wealth_dynamics:
      run_wealth_dynamics(spec, dir, workers, out, seeds);
      break;
    case ExperimentKind::subjective_distribution:
      run_subjective_distribution(spec, dir, out);
      break;
    case ExperimentKind::rational_curve:
      run_rational_curve(spec, dir, out);
      break;
    case ExperimentKind::inefficiency:
      run_inefficiency(spec, dir, workers, out, seeds);
      break;
    case ExperimentKind::table1:
      run_table1(spec, dir, workers, out, seeds);
      break;
  }

  nlohmann::ordered_json manifest;
  manifest["schema"] = "realitygame-manifest v1";
  manifest["tool_version"] = kVersion;
  manifest["kind"] = to_string(spec.kind);
  manifest["spec"] = {
      {"kind", to_string(spec.kind)},
      {"map", spec.has_map ? spec.map_text : ""},
      {"map_label", spec.has_map ? spec.map.label() : ""},
      {"n_players", spec.n_players},
      {"horizon", spec.horizon},
      {"ensemble", spec.ensemble},
      {"seed", spec.seed},
      {"snapshot_stride", spec.snapshot_stride},
      {"epsilon_player", spec.epsilon_player},
      {"fit_lo", spec.fit_lo},
      {"fit_hi", resolved_fit_hi(spec)},
  };
  manifest["seeds"] = seeds;
  manifest["wall_clock"] = {
      {"started_unix_ms", started},
      {"finished_unix_ms", unix_ms_now()},
  };
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const RunStatus& st : out.runs) {
    runs.push_back({{"run_index", st.run_index},
                    {"seed", st.seed},
                    {"steps", st.steps},
                    {"aborted", st.aborted},
                    {"reason", st.reason}});
  }
  manifest["runs"] = std::move(runs);
  manifest["outputs"] = out.files;

  std::ofstream mf(dir / "manifest.json", std::ios::binary);
  if (!mf) {
    throw Error("cannot open for writing: " + (dir / "manifest.json").string());
  }
  mf << manifest.dump(2) << "\n";
  out.files.push_back("manifest.json");
  return out;
}

}  // namespace rg
