// dmlqu: spectra, thermal states, LQU points, sweeps and figure data for the
// two-qubit Heisenberg XY model with z- or x-axis DM interaction.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <dmlqu/dmlqu.hpp>

namespace {

using namespace dmlqu;
using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

const std::vector<std::string> kSubcommands{"spectrum", "state", "lqu", "sweep", "figure"};

struct Options {
  std::string model = "z-dm";
  double j = 1.0;
  double delta = 0.5;
  double dm = 1.0;
  double temp = 1.0;
  std::string axis = "temperature";
  double min = 0.1;
  double max = 1000.0;
  int steps = 200;
  std::string spacing = "log10";
  std::string format = "csv";
  std::string out = "-";
  std::string method = "closed-form";
  std::string name;
  std::string meta;
  unsigned workers = 0;
  bool allow_any_delta = false;
};

DomainCheck domain(const Options& o) {
  return o.allow_any_delta ? DomainCheck::allow_any_delta : DomainCheck::strict;
}

Format parse_format(const std::string& s) { return s == "json" ? Format::json : Format::csv; }

Model single_model(const std::string& s) {
  if (s == "z-dm") return Model::z_dm;
  if (s == "x-dm") return Model::x_dm;
  throw ValidationError("this command needs --model z-dm or x-dm, got '" + s + "'");
}

std::vector<Model> models_of(const std::string& s) {
  if (s == "both") return {Model::z_dm, Model::x_dm};
  return {single_model(s)};
}

// ---------------------------------------------------------------------------
// Output helpers

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

ojson json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_12(v);
}

ojson json_complex(Complex c) { return ojson::array({json_number(c.real()), json_number(c.imag())}); }

ojson params_json(Model m, double j, double delta, double dm) {
  return {{"model", to_string(m)}, {"j", json_number(j)}, {"delta", json_number(delta)}, {"dm", json_number(dm)}};
}

// ---------------------------------------------------------------------------
// Subcommands

void run_spectrum(const Options& o) {
  const Model m = single_model(o.model);
  const Spectrum s = m == Model::z_dm ? spectrum_z(ZModelParams(o.j, o.delta, o.dm, domain(o)))
                                      : spectrum_x(XModelParams(o.j, o.delta, o.dm, domain(o)));
  const GroundStateReport g = ground_state(s);
  std::ostringstream os;
  if (parse_format(o.format) == Format::json) {
    ojson doc = params_json(m, o.j, o.delta, o.dm);
    ojson levels = ojson::array();
    for (const Level& l : s.levels) {
      ojson vec = ojson::array();
      for (const Complex& c : l.vector) vec.push_back(json_complex(c));
      levels.push_back({{"label", l.label}, {"energy", json_number(l.energy)}, {"vector", vec}});
    }
    doc["levels"] = levels;
    doc["ground_state"] = {{"label", g.ground_label},
                           {"energy", json_number(g.ground_energy)},
                           {"degenerate", g.degenerate},
                           {"maximally_entangled", g.maximally_entangled}};
    os << doc.dump(2) << '\n';
  } else {
    os << "label,energy,v1_re,v1_im,v2_re,v2_im,v3_re,v3_im,v4_re,v4_im,ground\n";
    for (const Level& l : s.levels) {
      os << l.label << ',' << format_number(l.energy);
      for (const Complex& c : l.vector) os << ',' << format_number(c.real()) << ',' << format_number(c.imag());
      os << ',' << (l.label == g.ground_label ? 1 : 0) << '\n';
    }
  }
  write_text(os.str(), o.out);
}

void run_state(const Options& o) {
  const Model m = single_model(o.model);
  const Temperature t(o.temp);
  ComplexMatrix rho;
  XState x(0.25, 0.25, 0.25, 0.25, 0.0, 0.0);
  Partition z{};
  if (m == Model::z_dm) {
    const ZModelParams p(o.j, o.delta, o.dm, domain(o));
    rho = thermal_state_z_closed(p, t).matrix();
    x = thermal_x_state(p, t);
    z = partition_z(p, t);
  } else {
    const XModelParams p(o.j, o.delta, o.dm, domain(o));
    rho = thermal_state_x_closed(p, t).matrix();
    x = thermal_x_state(p, t);
    z = partition_x(p, t);
  }
  std::ostringstream os;
  if (parse_format(o.format) == Format::json) {
    ojson doc = params_json(m, o.j, o.delta, o.dm);
    doc["t"] = json_number(o.temp);
    doc["log_partition"] = json_number(z.log);
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < 4; ++i) {
      ojson row = ojson::array();
      for (std::size_t k = 0; k < 4; ++k) row.push_back(json_complex(rho(i, k)));
      rows.push_back(row);
    }
    doc["rho"] = rows;
    doc["x_state"] = {{"p11", json_number(x.p11())}, {"p22", json_number(x.p22())},
                      {"p33", json_number(x.p33())}, {"p44", json_number(x.p44())},
                      {"r14", json_number(x.r14().real())}, {"r23", json_number(x.r23().real())}};
    os << doc.dump(2) << '\n';
  } else {
    os << "row,col,re,im\n";
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k)
        os << i + 1 << ',' << k + 1 << ',' << format_number(rho(i, k).real()) << ','
           << format_number(rho(i, k).imag()) << '\n';
  }
  write_text(os.str(), o.out);
}

SweepRow lqu_row(Model m, const Options& o) {
  const Temperature t(o.temp);
  SweepRow row;
  row.model = m;
  row.j = o.j;
  row.delta = o.delta;
  row.dm = o.dm;
  row.t = o.temp;
  LquResult r{};
  if (o.method == "closed-form") {
    const ThermalLqu tl = thermal_lqu(m, o.j, o.delta, o.dm, t, domain(o));
    r = tl.lqu;
    row.log_partition = tl.partition.log;
  } else {
    DensityMatrix4 rho(XState(0.25, 0.25, 0.25, 0.25, 0.0, 0.0));
    if (m == Model::z_dm) {
      const ZModelParams p(o.j, o.delta, o.dm, domain(o));
      rho = DensityMatrix4(thermal_state_z_closed(p, t).matrix());
      row.log_partition = partition_z(p, t).log;
    } else {
      const XModelParams p(o.j, o.delta, o.dm, domain(o));
      rho = thermal_state_x_closed(p, t);
      row.log_partition = partition_x(p, t).log;
    }
    r = o.method == "w-matrix" ? lqu_w(rho) : lqu_bruteforce(rho);
  }
  row.lqu = r.value;
  row.omega1 = r.omega1;
  row.omega3 = r.omega3;
  row.branch = r.branch;
  row.method = r.method;
  return row;
}

void run_lqu(const Options& o) {
  std::vector<SweepRow> rows;
  for (Model m : models_of(o.model)) rows.push_back(lqu_row(m, o));
  emit(rows, parse_format(o.format), o.out);
}

SweepConfig sweep_config(const Options& o) {
  SweepConfig c;
  c.model = o.model == "both" ? ModelSelection::both : o.model == "x-dm" ? ModelSelection::x_dm : ModelSelection::z_dm;
  c.j = o.j;
  c.delta = o.delta;
  c.dm = o.dm;
  c.temp = o.temp;
  c.axis = o.axis == "dm" ? Axis::dm : o.axis == "j" ? Axis::j : Axis::temperature;
  c.min = o.min;
  c.max = o.max;
  c.steps = o.steps;
  c.spacing = o.spacing == "linear" ? Spacing::linear : Spacing::log10;
  c.format = parse_format(o.format);
  c.out = o.out;
  c.domain = domain(o);
  c.validate();
  // Fixed parameters are checked once; the swept one is checked per row.
  ZModelParams(c.axis == Axis::j ? 1.0 : c.j, c.delta, c.axis == Axis::dm ? 0.0 : c.dm, c.domain);
  if (c.axis != Axis::temperature) Temperature{c.temp};
  return c;
}

void report_failures(const std::vector<SweepRow>& rows) {
  std::size_t failed = 0;
  for (const SweepRow& r : rows) {
    if (r.ok()) continue;
    if (failed == 0) std::cerr << "warning: " << to_string(r.model) << " point failed: " << *r.error << '\n';
    ++failed;
  }
  if (failed > 0) std::cerr << "warning: " << failed << " of " << rows.size() << " rows marked failed\n";
}

void run_sweep_command(const Options& o) {
  const SweepConfig c = sweep_config(o);
  const auto rows = run_sweep(c, o.workers);
  report_failures(rows);
  emit(rows, c.format, c.out);
}

void run_figure_command(const Options& o) {
  const FigurePreset p = figure_preset(o.name);
  const auto rows = run_figure(p, o.workers);
  report_failures(rows);
  emit(rows, parse_format(o.format), o.out);
  std::string meta = o.meta;
  if (meta.empty() && o.out != "-") meta = o.out + ".meta.json";
  if (!meta.empty()) write_text(figure_metadata(p).dump(2) + "\n", meta);
}

// ---------------------------------------------------------------------------
// Config file: key = value lines, '#' comments, keys named like the long flags.

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  int lineno = 0;
  for (std::string line; std::getline(f, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    entries.emplace_back(key, value);
  }
  return entries;
}

bool truthy(std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("expected a boolean, got '" + v + "'");
}

/// Removes --config PATH from args and splices the file's settings in right
/// after the subcommand, so explicit flags later on the line take precedence.
void splice_config(std::vector<std::string>& args, const CLI::App& app, const std::set<std::string>& known) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ValidationError("--config needs a path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return;

  const auto sub_it = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
  });
  if (sub_it == args.end()) throw ValidationError("--config needs a subcommand");
  const CLI::App* sub = app.get_subcommand(*sub_it);

  std::vector<std::string> tokens;
  for (const auto& [key, value] : read_config(path)) {
    if (!known.count(key)) throw ValidationError("config file '" + path + "': unknown key '" + key + "'");
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) continue;
    if (opt->get_type_size() == 0) {
      if (truthy(value)) tokens.push_back("--" + key);
    } else {
      tokens.push_back("--" + key + "=" + value);
    }
  }
  args.insert(sub_it + 1, tokens.begin(), tokens.end());
}

// ---------------------------------------------------------------------------

struct Cli {
  CLI::App app{"Local quantum uncertainty of the two-qubit Heisenberg XY model with DM interaction", "dmlqu"};
  Options o;
  std::set<std::string> known{"config"};

  template <typename T>
  CLI::Option* opt(CLI::App* sub, const std::string& name, T& target, const std::string& help) {
    known.insert(name);
    return sub->add_option("--" + name, target, help)
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  void model_params(CLI::App* sub, bool allow_both) {
    std::vector<std::string> models{"z-dm", "x-dm"};
    if (allow_both) models.emplace_back("both");
    opt(sub, "model", o.model, "Hamiltonian: z-dm or x-dm" + std::string(allow_both ? " or both" : ""))
        ->check(CLI::IsMember(models));
    opt(sub, "j", o.j, "exchange coupling J (nonzero)");
    opt(sub, "delta", o.delta, "anisotropy Delta in [0, 1]");
    opt(sub, "dm", o.dm, "DM strength Dz or Dx");
    known.insert("allow-any-delta");
    sub->add_flag("--allow-any-delta", o.allow_any_delta, "accept Delta outside [0, 1]");
  }

  void output(CLI::App* sub) {
    opt(sub, "format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    opt(sub, "out", o.out, "output path, - for stdout");
  }

  Cli() {
    app.require_subcommand(1);
    app.add_option("--config", "key = value settings file; flags on the command line win");

    auto* spectrum = app.add_subcommand("spectrum", "energies, eigenvectors and ground state");
    model_params(spectrum, false);
    output(spectrum);
    spectrum->callback([this] { run_spectrum(o); });

    auto* state = app.add_subcommand("state", "thermal density matrix");
    model_params(state, false);
    opt(state, "temp", o.temp, "temperature T (k_B = 1)");
    output(state);
    state->callback([this] { run_state(o); });

    auto* lqu = app.add_subcommand("lqu", "LQU at a single point");
    model_params(lqu, true);
    opt(lqu, "temp", o.temp, "temperature T (k_B = 1)");
    opt(lqu, "method", o.method, "closed-form, w-matrix or brute-force")
        ->check(CLI::IsMember({"closed-form", "w-matrix", "brute-force"}));
    output(lqu);
    lqu->callback([this] { run_lqu(o); });

    auto* sweep = app.add_subcommand("sweep", "LQU along one parameter axis");
    model_params(sweep, true);
    opt(sweep, "temp", o.temp, "temperature when not sweeping T");
    opt(sweep, "axis", o.axis, "temperature, dm or j")->check(CLI::IsMember({"temperature", "dm", "j"}));
    opt(sweep, "min", o.min, "axis start");
    opt(sweep, "max", o.max, "axis end");
    opt(sweep, "steps", o.steps, "number of grid points (>= 2)");
    opt(sweep, "spacing", o.spacing, "linear or log10")->check(CLI::IsMember({"linear", "log10"}));
    opt(sweep, "workers", o.workers, "worker threads, 0 = all cores");
    output(sweep);
    sweep->callback([this] { run_sweep_command(o); });

    auto* figure = app.add_subcommand("figure", "data for a figure preset");
    known.insert("name");
    std::string names;
    for (const auto& n : figure_names()) names += (names.empty() ? "" : ", ") + n;
    figure->add_option("name,--name", o.name, "preset: " + names)
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    opt(figure, "meta", o.meta, "metadata sidecar path (default <out>.meta.json)");
    opt(figure, "workers", o.workers, "worker threads, 0 = all cores");
    output(figure);
    figure->callback([this] { run_figure_command(o); });
  }
};

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  std::vector<std::string> args(argv, argv + argc);
  try {
    splice_config(args, cli.app, cli.known);
    std::vector<char*> raw;
    for (auto& a : args) raw.push_back(a.data());
    cli.app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::Success& e) {
    return cli.app.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.app.exit(e);
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
