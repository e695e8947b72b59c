#include "invasion/sim_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace invasion {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool parse_number(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

bool parse_number(std::string_view s, int& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

enum class Kind { Real, Integer, Mode, OptionalReal, Text };

struct Key {
  Kind kind;
  double SimConfig::*real = nullptr;
  int SimConfig::*integer = nullptr;
};

const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> k = {
      {"T", {Kind::Real, &SimConfig::T}},
      {"R", {Kind::Real, &SimConfig::R}},
      {"eps", {Kind::Real, &SimConfig::eps}},
      {"D1", {Kind::Real, &SimConfig::D1}},
      {"eta", {Kind::Real, &SimConfig::eta}},
      {"mu1_star", {Kind::Real, &SimConfig::mu1_star}},
      {"mu2", {Kind::Real, &SimConfig::mu2}},
      {"alpha", {Kind::Real, &SimConfig::alpha}},
      {"D2", {Kind::Real, &SimConfig::D2}},
      {"dT", {Kind::Real, &SimConfig::dT}},
      {"k", {Kind::Real, &SimConfig::k}},
      {"refine_level", {Kind::Integer, nullptr, &SimConfig::refine_level}},
      {"delta", {Kind::Real, &SimConfig::delta}},
      {"rho", {Kind::Real, &SimConfig::rho}},
      {"c_vel", {Kind::Real, &SimConfig::c_vel}},
      {"mu1_mode", {Kind::Mode}},
      {"R_m", {Kind::OptionalReal}},
      {"n_micro_steps", {Kind::Integer, nullptr, &SimConfig::n_micro_steps}},
      {"n_micro_elems", {Kind::Integer, nullptr, &SimConfig::n_micro_elems}},
      {"domain_min", {Kind::Real, &SimConfig::domain_min}},
      {"domain_max", {Kind::Real, &SimConfig::domain_max}},
      {"snapshot_every", {Kind::Integer, nullptr, &SimConfig::snapshot_every}},
      {"out_dir", {Kind::Text}},
  };
  return k;
}

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream os(p, std::ios::out | mode);
  if (!os) throw IoError("cannot open " + p.string() + " for writing");
  return os;
}

void check_written(std::ofstream& os, const fs::path& p) {
  os.flush();
  if (!os) throw IoError("write failed: " + p.string());
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return std::string(trim(s));
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = std::find_if(keys().begin(), keys().end(),
                                 [&](const auto& kv) { return kv.first == key; });
    if (it == keys().end()) throw ConfigError("unknown key '" + key + "'", line_no);
    if (seen.count(key)) throw ConfigError("key '" + key + "' given twice", line_no);
    seen[key] = line_no;
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
    const Key& k = it->second;
    const std::string bad = "cannot parse value '" + std::string(value) + "' for '" + key + "'";
    switch (k.kind) {
      case Kind::Real: {
        double x;
        if (!parse_number(value, x) || std::isnan(x)) throw ConfigError(bad, line_no);
        cfg.*k.real = x;
        break;
      }
      case Kind::OptionalReal: {
        double x;
        if (!parse_number(value, x) || std::isnan(x)) throw ConfigError(bad, line_no);
        cfg.R_m = x;
        break;
      }
      case Kind::Integer: {
        int x;
        if (!parse_number(value, x)) throw ConfigError(bad, line_no);
        cfg.*k.integer = x;
        break;
      }
      case Kind::Mode:
        if (value == "constant") {
          cfg.mu1_mode = Mu1Mode::Constant;
        } else if (value == "ecm") {
          cfg.mu1_mode = Mu1Mode::EcmDependent;
        } else {
          throw ConfigError(bad + " (expected constant or ecm)", line_no);
        }
        break;
      case Kind::Text:
        cfg.out_dir = std::string(value);
        break;
    }
  }
  if (auto issue = find_config_issue(cfg)) {
    const auto it = seen.find(issue->key);
    throw ConfigError(issue->message, it == seen.end() ? 0 : it->second);
  }
  return cfg;
}

SimConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string print_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& [name, k] : keys()) {
    std::string value;
    switch (k.kind) {
      case Kind::Real: value = fmt(cfg.*k.real); break;
      case Kind::Integer: value = std::to_string(cfg.*k.integer); break;
      case Kind::Mode: value = cfg.mu1_mode == Mu1Mode::Constant ? "constant" : "ecm"; break;
      case Kind::OptionalReal:
        if (!cfg.R_m) continue;
        value = fmt(*cfg.R_m);
        break;
      case Kind::Text: value = cfg.out_dir; break;
    }
    out += name + " = " + value + "\n";
  }
  return out;
}

void write_fields(std::ostream& os, const MacroState& state, const LevelSetField& levelset) {
  const GridMesh& mesh = levelset.mesh();
  os << "x,y,c,v,phi\n";
  char buf[160];
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 x = mesh.vertex(v);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x.x(), x.y(), state.c[v],
                  state.v[v], levelset.phi[v]);
    os << buf;
  }
}

void write_diagnostics_row(std::ostream& os, const Diagnostics& d) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%zu,%zu\n", d.t, d.area,
                d.cancer_mass, d.ecm_mass, d.max_speed, d.newton_iters, d.cut_cells,
                d.suppressed_cells);
  os << buf;
}

fs::path fields_path(const fs::path& dir, int step) {
  return dir / ("fields_" + std::to_string(step) + ".csv");
}

fs::path interface_path(const fs::path& dir, int step) {
  return dir / ("interface_" + std::to_string(step) + ".txt");
}

fs::path diagnostics_path(const fs::path& dir) { return dir / "diagnostics.csv"; }

void write_snapshot(const MacroState& state, const LevelSetField& levelset,
                    const CutClassification& cuts, int step, const fs::path& out_dir) {
  const fs::path fp = fields_path(out_dir, step);
  auto fos = open_out(fp);
  write_fields(fos, state, levelset);
  check_written(fos, fp);
  const fs::path ip = interface_path(out_dir, step);
  auto ios = open_out(ip);
  write_polyline(ios, cuts.segments());
  check_written(ios, ip);
}

void start_diagnostics(const fs::path& out_dir) {
  const fs::path p = diagnostics_path(out_dir);
  auto os = open_out(p);
  os << kDiagnosticsHeader << '\n';
  check_written(os, p);
}

void append_diagnostics(const fs::path& out_dir, const Diagnostics& d) {
  const fs::path p = diagnostics_path(out_dir);
  auto os = open_out(p, std::ios::app);
  write_diagnostics_row(os, d);
  check_written(os, p);
}

Checkpoint read_checkpoint(const fs::path& fields_file, const SimConfig& config, int step) {
  std::ifstream is(fields_file);
  if (!is) throw IoError("cannot read " + fields_file.string());
  const GridMesh mesh = config.mesh();
  std::string line;
  if (!std::getline(is, line) || trim(line) != "x,y,c,v,phi") {
    throw IoError(fields_file.string() + ": missing header");
  }
  Checkpoint cp;
  cp.step = step;
  cp.t = step * config.dT;
  cp.c = NodalScalarField(mesh);
  cp.v = NodalScalarField(mesh);
  cp.phi = NodalScalarField(mesh);
  const double tol = 1e-9 * mesh.extent();
  std::size_t v = 0;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    if (v >= mesh.num_vertices()) throw IoError(fields_file.string() + ": too many rows");
    double vals[5];
    std::string_view rest = trim(line);
    for (int i = 0; i < 5; ++i) {
      const auto comma = i < 4 ? rest.find(',') : rest.size();
      if (comma == std::string_view::npos || !parse_number(rest.substr(0, comma), vals[i])) {
        throw IoError(fields_file.string() + ": bad row " + std::to_string(v + 2));
      }
      rest = i < 4 ? rest.substr(comma + 1) : std::string_view{};
    }
    if ((Vec2(vals[0], vals[1]) - mesh.vertex(v)).norm() > tol) {
      throw IoError(fields_file.string() + ": row " + std::to_string(v + 2) +
                    " does not match the mesh");
    }
    cp.c[v] = vals[2];
    cp.v[v] = vals[3];
    cp.phi[v] = vals[4];
    ++v;
  }
  if (v != mesh.num_vertices()) throw IoError(fields_file.string() + ": too few rows");
  return cp;
}

RunSummary run_to_directory(const SimConfig& config, const OutputOptions& options) {
  const fs::path dir = options.out_dir.empty() ? fs::path(config.out_dir) : options.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  start_diagnostics(dir);

  auto observer = [&](const Simulation& sim) {
    const int step = sim.step_index();
    append_diagnostics(dir, sim.diagnostics());
    if (step % config.snapshot_every == 0 || sim.finished()) {
      write_snapshot(sim.state(), sim.levelset(), sim.cuts(), step, dir);
    }
    if (options.debug && step > 0) {
      const std::string tag = std::to_string(step);
      const fs::path sp = dir / ("samples_" + tag + ".txt");
      auto sos = open_out(sp);
      write_samples(sos, sim.samples());
      check_written(sos, sp);
      const fs::path vp = dir / ("velocity_" + tag + ".txt");
      auto vos = open_out(vp);
      write_velocity(vos, sim.velocity());
      check_written(vos, vp);
      const fs::path mp = dir / ("micro_" + tag + ".txt");
      auto mos = open_out(mp);
      // First line is the z grid, then the final profile of every sample.
      char buf[32];
      if (!sim.micro().empty()) {
        const int n = sim.micro().front().n_elems;
        for (int i = 0; i <= n; ++i) {
          std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(i) / n);
          mos << (i ? " " : "") << buf;
        }
        mos << '\n';
      }
      for (const auto& m : sim.micro()) {
        const auto& last = m.levels.back();
        for (std::size_t i = 0; i < last.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g", last[i]);
          mos << (i ? " " : "") << buf;
        }
        mos << '\n';
      }
      check_written(mos, mp);
    }
  };
  return run(config, observer);
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-scale tumour invasion simulator (level set, cut-cell Q1)", "invasion_sim"};
  std::string config_path;
  std::string out_dir;
  int snapshot_every = 0;
  int refine = 0;
  std::string mode;
  bool seedless = false;
  bool debug = false;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  auto* o_out = app.add_option("--out", out_dir, "Output directory (overrides out_dir and SIM_OUT)");
  auto* o_snap = app.add_option("--snapshot-every", snapshot_every, "Snapshot cadence in steps");
  auto* o_refine = app.add_option("--refine", refine, "Refinement level of the 2^L x 2^L mesh");
  auto* o_mode = app.add_option("--mu1-mode", mode, "Proliferation law")
                     ->check(CLI::IsMember({"constant", "ecm"}));
  app.add_flag("--seedless", seedless, "Deterministic run (always the case; kept for scripts)");
  app.add_flag("--debug", debug, "Dump samples, cell velocities and micro profiles per step");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  SimConfig cfg;
  try {
    if (!config_path.empty()) {
      if (!fs::is_regular_file(config_path)) {
        err << "error: usage: config file not found: " << config_path << '\n';
        return 2;
      }
      cfg = load_config(config_path);
    }
    if (*o_refine) cfg.refine_level = refine;
    if (*o_snap) cfg.snapshot_every = snapshot_every;
    if (*o_mode) cfg.mu1_mode = mode == "ecm" ? Mu1Mode::EcmDependent : Mu1Mode::Constant;
    if (const char* env = std::getenv("SIM_OUT"); env && *env) cfg.out_dir = env;
    if (*o_out) cfg.out_dir = out_dir;
    validate(cfg);
  } catch (const ConfigError& e) {
    err << "error: config: " << (config_path.empty() ? "" : config_path + ": ")
        << one_line(e.what()) << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    OutputOptions opts;
    opts.out_dir = cfg.out_dir;
    opts.debug = debug;
    const RunSummary summary = run_to_directory(cfg, opts);
    const Diagnostics& last = summary.rows.back();
    out << "done: steps=" << summary.steps << " t=" << fmt(last.t) << " area=" << fmt(last.area)
        << " out=" << cfg.out_dir << '\n';
  } catch (const Error& e) {
    err << "error: runtime: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace invasion
