#pragma once

// Parameter sweeps of thermal LQU, the figure presets, threshold
// temperatures, and CSV/JSON emission.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lqu.hpp"

namespace dmlqu {

enum class ModelSelection { z_dm, x_dm, both };
enum class Axis { temperature, dm, j };
enum class Spacing { linear, log10 };
enum class Format { csv, json };

inline std::string_view to_string(ModelSelection m) {
  switch (m) {
    case ModelSelection::z_dm: return "z-dm";
    case ModelSelection::x_dm: return "x-dm";
    case ModelSelection::both: break;
  }
  return "both";
}
inline std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::temperature: return "temperature";
    case Axis::dm: return "dm";
    case Axis::j: break;
  }
  return "j";
}
inline std::string_view to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log10"; }
inline std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

struct SweepConfig {
  ModelSelection model = ModelSelection::z_dm;
  double j = 1.0;
  double delta = 0.5;
  double dm = 1.0;
  double temp = 1.0;  // fixed temperature when the axis is not temperature
  Axis axis = Axis::temperature;
  double min = 0.1;
  double max = 1000.0;
  int steps = 200;
  Spacing spacing = Spacing::log10;
  Format format = Format::csv;
  std::string out = "-";
  DomainCheck domain = DomainCheck::strict;

  void validate() const {
    if (steps < 2) throw ValidationError("sweep needs at least 2 steps");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
      throw ValidationError("sweep range needs finite min < max");
    }
    if (spacing == Spacing::log10 && !(min > 0.0)) {
      throw ValidationError("log10 spacing requires min > 0");
    }
  }

  /// Axis values in order; the endpoints are exactly min and max.
  std::vector<double> grid() const {
    validate();
    std::vector<double> g(static_cast<std::size_t>(steps));
    const double n = steps - 1;
    for (int i = 0; i < steps; ++i) {
      const double f = i / n;
      if (spacing == Spacing::linear) {
        g[static_cast<std::size_t>(i)] = min + f * (max - min);
      } else {
        const double lo = std::log10(min), hi = std::log10(max);
        g[static_cast<std::size_t>(i)] = std::pow(10.0, lo + f * (hi - lo));
      }
    }
    g.front() = min;
    g.back() = max;
    return g;
  }
};

struct SweepRow {
  Model model = Model::z_dm;
  double j = 0.0, delta = 0.0, dm = 0.0, t = 0.0;
  double lqu = NAN, omega1 = NAN, omega3 = NAN, log_partition = NAN;
  Branch branch = Branch::none;
  Method method = Method::closed_form;
  std::optional<std::string> error;  // set when the point failed

  bool ok() const noexcept { return !error; }
};

inline SweepRow evaluate_point(Model model, double j, double delta, double dm, double t,
                               DomainCheck domain = DomainCheck::strict) {
  SweepRow row;
  row.model = model;
  row.j = j;
  row.delta = delta;
  row.dm = dm;
  row.t = t;
  try {
    const ThermalLqu r = thermal_lqu(model, j, delta, dm, Temperature(t), domain);
    row.lqu = r.lqu.value;
    row.omega1 = r.lqu.omega1;
    row.omega3 = r.lqu.omega3;
    row.log_partition = r.partition.log;
    row.branch = r.lqu.branch;
    row.method = r.lqu.method;
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

/// Rows in grid order; with ModelSelection::both each grid point yields a
/// z-dm row followed by an x-dm row. Points are evaluated on up to
/// `workers` threads (0 = hardware concurrency); the output order does not
/// depend on scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned workers = 0) {
  const std::vector<double> grid = cfg.grid();
  std::vector<Model> models;
  if (cfg.model != ModelSelection::x_dm) models.push_back(Model::z_dm);
  if (cfg.model != ModelSelection::z_dm) models.push_back(Model::x_dm);

  const std::size_t total = grid.size() * models.size();
  std::vector<SweepRow> rows(total);
  auto task = [&](std::size_t idx) {
    const double v = grid[idx / models.size()];
    const Model m = models[idx % models.size()];
    double j = cfg.j, dm = cfg.dm, t = cfg.temp;
    switch (cfg.axis) {
      case Axis::temperature: t = v; break;
      case Axis::dm: dm = v; break;
      case Axis::j: j = v; break;
    }
    rows[idx] = evaluate_point(m, j, cfg.delta, dm, t, cfg.domain);
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < total; i = next++) task(i);
  };
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Threshold temperature

/// Smallest T in [t_lo, t_hi] with LQU(T) < eps, located by bisection in
/// log T. Assumes LQU decays monotonically in T. nullopt if LQU(t_hi) >= eps.
inline std::optional<double> threshold_temperature(Model model, double j, double delta, double dm,
                                                   double eps = 0.01, double t_lo = 1e-3, double t_hi = 1e5) {
  auto lqu_at = [&](double t) { return thermal_lqu(model, j, delta, dm, Temperature(t)).lqu.value; };
  if (lqu_at(t_hi) >= eps) return std::nullopt;
  if (lqu_at(t_lo) < eps) return t_lo;
  double lo = std::log(t_lo), hi = std::log(t_hi);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lqu_at(std::exp(mid)) < eps ? hi : lo) = mid;
  }
  return std::exp(hi);
}

/// First axis value (rows in order) whose LQU is below eps.
inline std::optional<double> grid_threshold(const std::vector<SweepRow>& rows, double eps = 0.01) {
  for (const SweepRow& r : rows)
    if (r.ok() && r.lqu < eps) return r.t;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Figure presets

struct FigurePreset {
  std::string name;
  std::string description;
  std::string x_axis;  // what the plot's horizontal axis shows
  std::vector<SweepConfig> curves;
};

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig1a", "fig1b", "fig3", "fig4a", "fig4b", "fig6", "fig7"};
  return names;
}

inline constexpr double kFigureTMin = 0.1;
inline constexpr double kFigureTMax = 1000.0;
inline constexpr int kDefaultSteps = 200;

namespace detail {

inline SweepConfig temperature_curve(ModelSelection m, double j, double dm) {
  SweepConfig c;
  c.model = m;
  c.j = j;
  c.delta = 0.5;
  c.dm = dm;
  c.axis = Axis::temperature;
  c.min = kFigureTMin;
  c.max = kFigureTMax;
  c.steps = kDefaultSteps;
  c.spacing = Spacing::log10;
  return c;
}

inline SweepConfig linear_curve(ModelSelection m, Axis axis, double lo, double hi, int steps, double j,
                                double dm, double t) {
  SweepConfig c;
  c.model = m;
  c.j = j;
  c.delta = 0.5;
  c.dm = dm;
  c.temp = t;
  c.axis = axis;
  c.min = lo;
  c.max = hi;
  c.steps = steps;
  c.spacing = Spacing::linear;
  return c;
}

}  // namespace detail

inline FigurePreset figure_preset(std::string_view name) {
  using detail::linear_curve;
  using detail::temperature_curve;
  FigurePreset p;
  p.name = std::string(name);
  if (name == "fig1a" || name == "fig4a") {
    const auto m = name == "fig1a" ? ModelSelection::z_dm : ModelSelection::x_dm;
    p.description = "LQU vs log10(T), J=1, Delta=0.5, DM strength in {0.5, 1, 2, 3}";
    p.x_axis = "log10(t)";
    for (double d : {0.5, 1.0, 2.0, 3.0}) p.curves.push_back(temperature_curve(m, 1.0, d));
  } else if (name == "fig1b" || name == "fig4b") {
    const auto m = name == "fig1b" ? ModelSelection::z_dm : ModelSelection::x_dm;
    p.description = "LQU vs log10(T), DM=1, Delta=0.5, J in {0.5, 1, 2}";
    p.x_axis = "log10(t)";
    for (double j : {0.5, 1.0, 2.0}) p.curves.push_back(temperature_curve(m, j, 1.0));
  } else if (name == "fig3") {
    // 201 points so that Dz = 0 is sampled.
    p.description = "z-dm LQU vs Dz in [-6, 6], J=1, Delta=0.5, T in {1, 2, 3}";
    p.x_axis = "dm";
    for (double t : {1.0, 2.0, 3.0})
      p.curves.push_back(linear_curve(ModelSelection::z_dm, Axis::dm, -6.0, 6.0, 201, 1.0, 0.0, t));
  } else if (name == "fig6") {
    // An even point count keeps J = 0 off the grid.
    p.description = "x-dm LQU vs J in [-4, 4], Dx=1, Delta=0.5, T in {1, 2, 3}";
    p.x_axis = "j";
    for (double t : {1.0, 2.0, 3.0})
      p.curves.push_back(linear_curve(ModelSelection::x_dm, Axis::j, -4.0, 4.0, kDefaultSteps, 0.0, 1.0, t));
  } else if (name == "fig7") {
    p.description = "z-dm and x-dm LQU vs log10(T), DM=2, J=1, Delta=0.5";
    p.x_axis = "log10(t)";
    p.curves.push_back(temperature_curve(ModelSelection::both, 1.0, 2.0));
  } else {
    std::string msg = "unknown figure preset '" + std::string(name) + "'; available:";
    for (const auto& n : figure_names()) msg += " " + n;
    throw ValidationError(msg);
  }
  return p;
}

inline std::vector<SweepRow> run_figure(const FigurePreset& preset, unsigned workers = 0) {
  std::vector<SweepRow> rows;
  for (const SweepConfig& c : preset.curves) {
    auto part = run_sweep(c, workers);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

inline nlohmann::ordered_json figure_metadata(const FigurePreset& preset) {
  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (const SweepConfig& c : preset.curves) {
    curves.push_back({{"model", to_string(c.model)},
                      {"j", c.j},
                      {"delta", c.delta},
                      {"dm", c.dm},
                      {"temp", c.temp},
                      {"axis", to_string(c.axis)},
                      {"min", c.min},
                      {"max", c.max},
                      {"steps", c.steps},
                      {"spacing", to_string(c.spacing)}});
  }
  return {{"preset", preset.name},
          {"description", preset.description},
          {"x_axis", preset.x_axis},
          {"log_base", 10},
          {"columns", "model,j,delta,dm,t,lqu,omega1,omega3,log_partition,branch,method"},
          {"curves", curves}};
}

// ---------------------------------------------------------------------------
// Emission

inline constexpr std::string_view kCsvHeader = "model,j,delta,dm,t,lqu,omega1,omega3,log_partition,branch,method";

/// 12 significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline double round_12(double v) { return std::isfinite(v) ? std::strtod(format_number(v).c_str(), nullptr) : v; }

inline std::string method_field(const SweepRow& r) {
  return r.ok() ? std::string(to_string(r.method)) : std::string("failed");
}
inline std::string branch_field(const SweepRow& r) {
  return r.ok() ? std::string(to_string(r.branch)) : std::string("none");
}

inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    os << to_string(r.model) << ',' << format_number(r.j) << ',' << format_number(r.delta) << ','
       << format_number(r.dm) << ',' << format_number(r.t) << ',' << format_number(r.lqu) << ','
       << format_number(r.omega1) << ',' << format_number(r.omega3) << ',' << format_number(r.log_partition)
       << ',' << branch_field(r) << ',' << method_field(r) << '\n';
  }
}

inline nlohmann::ordered_json rows_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto num = [](double v) -> nlohmann::ordered_json {
    if (!std::isfinite(v)) return nullptr;
    return round_12(v);
  };
  for (const SweepRow& r : rows) {
    arr.push_back({{"model", to_string(r.model)},
                   {"j", num(r.j)},
                   {"delta", num(r.delta)},
                   {"dm", num(r.dm)},
                   {"t", num(r.t)},
                   {"lqu", num(r.lqu)},
                   {"omega1", num(r.omega1)},
                   {"omega3", num(r.omega3)},
                   {"log_partition", num(r.log_partition)},
                   {"branch", branch_field(r)},
                   {"method", method_field(r)}});
  }
  return arr;
}

inline void write_json(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << rows_to_json(rows).dump(2) << '\n';
}

/// Inverse of write_json. Failed rows come back with error = "failed".
inline std::vector<SweepRow> rows_from_json(const std::string& text) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw ValidationError("sweep JSON must be an array of rows");
  auto num = [](const nlohmann::json& v) { return v.is_null() ? NAN : v.get<double>(); };
  std::vector<SweepRow> rows;
  for (const auto& o : arr) {
    SweepRow r;
    const std::string model = o.at("model").get<std::string>();
    if (model == "z-dm") r.model = Model::z_dm;
    else if (model == "x-dm") r.model = Model::x_dm;
    else throw ValidationError("unknown model tag '" + model + "'");
    r.j = num(o.at("j"));
    r.delta = num(o.at("delta"));
    r.dm = num(o.at("dm"));
    r.t = num(o.at("t"));
    r.lqu = num(o.at("lqu"));
    r.omega1 = num(o.at("omega1"));
    r.omega3 = num(o.at("omega3"));
    r.log_partition = num(o.at("log_partition"));
    const std::string branch = o.at("branch").get<std::string>();
    r.branch = branch == "omega1" ? Branch::omega1 : branch == "omega3" ? Branch::omega3 : Branch::none;
    const std::string method = o.at("method").get<std::string>();
    if (method == "closed-form") r.method = Method::closed_form;
    else if (method == "w-matrix") r.method = Method::w_matrix;
    else if (method == "brute-force") r.method = Method::brute_force;
    else r.error = "failed";
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_rows(const std::vector<SweepRow>& rows, Format format, std::ostream& os) {
  if (format == Format::csv) write_csv(rows, os);
  else write_json(rows, os);
}

/// Writes rows to `path` ("-" for stdout). Throws IoError on failure.
inline void emit(const std::vector<SweepRow>& rows, Format format, const std::string& path) {
  if (path == "-") {
    write_rows(rows, format, std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_rows(rows, format, f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace dmlqu
