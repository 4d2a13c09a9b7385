#include "cosmos/cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosmos/config.hpp"
#include "cosmos/endurance.hpp"
#include "cosmos/error.hpp"
#include "cosmos/optics_analysis.hpp"
#include "cosmos/parse.hpp"
#include "cosmos/simulator.hpp"
#include "cosmos/trace.hpp"

namespace cosmos {

using ordered_json = nlohmann::ordered_json;

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw Error(ErrorCode::ConfigError, "write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

namespace {

// A published figure next to what we computed. Printed for every calculator
// that has a published counterpart.
struct Check {
  std::string label;
  std::string unit;
  Deviation dev;
  bool relative = true;  // compare |relative| with tol, else |absolute|
  double tolerance = 0.0;
  bool within() const {
    return relative ? std::abs(dev.relative) <= tolerance : std::abs(dev.absolute) <= tolerance;
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

void print_checks(std::ostream& os, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    os << "  " << std::left << std::setw(34) << c.label << std::right << " computed "
       << std::setw(12) << fmt(c.dev.computed) << "  published " << std::setw(10)
       << fmt(c.dev.published) << ' ' << c.unit << "  delta " << std::showpos
       << fmt(c.dev.absolute) << " (" << fmt(100.0 * c.dev.relative, 2) << "%)" << std::noshowpos
       << (c.within() ? "" : "  DEVIATION") << '\n';
  }
}

ordered_json checks_json(const std::vector<Check>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"label", c.label},
                   {"unit", c.unit},
                   {"computed", c.dev.computed},
                   {"published", c.dev.published},
                   {"absolute", c.dev.absolute},
                   {"relative", c.dev.relative},
                   {"tolerance", c.tolerance},
                   {"tolerance_kind", c.relative ? "relative" : "absolute"},
                   {"within_tolerance", c.within()}});
  }
  return arr;
}

bool all_within(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.within(); });
}

std::vector<Check> energy_checks(const RunConfig& cfg) {
  const auto& s = cfg.sim;
  const auto we = write_energy_per_bit(s.energy, s.geometry, s.timing, s.caps);
  const auto re = read_energy_per_bit(s.energy, s.geometry, s.timing);
  std::vector<Check> checks;
  checks.push_back({"read energy per bit", "pJ/bit",
                    deviation(re.pj_per_bit, cfg.published.read_energy_pj_per_bit), true,
                    cfg.tolerance.read_energy_rel});
  checks.push_back({"write energy per bit", "pJ/bit",
                    deviation(we.pj_per_bit, cfg.published.write_energy_pj_per_bit), true,
                    cfg.tolerance.write_energy_rel});
  // The published write power itself implies a different per-bit figure;
  // shown for reference, never gating.
  checks.push_back({"write energy from published power", "pJ/bit",
                    deviation(write_energy_from_power(cfg.published.write_power_mw, s.timing, s.caps),
                              cfg.published.write_energy_pj_per_bit),
                    true, std::numeric_limits<double>::infinity()});
  checks.push_back({"write power", "mW", deviation(we.power_mw, cfg.published.write_power_mw), true,
                    std::numeric_limits<double>::infinity()});
  return checks;
}

std::vector<RunConfig> build_configs(const std::vector<std::string>& paths, const std::string& preset,
                                     const std::vector<std::string>& sets) {
  std::vector<RunConfig> configs;
  if (paths.empty()) {
    configs.push_back(preset_config(preset.empty() ? "cosmos-4bit" : preset));
  } else {
    if (!preset.empty()) {
      throw Error(ErrorCode::ConfigError, "--preset and --config are exclusive; set [run] preset");
    }
    for (const auto& p : paths) configs.push_back(load_run_config(p));
  }
  for (auto& cfg : configs) {
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--set needs section.key=value");
      apply_setting(cfg, trim(std::string_view(s).substr(0, eq)), std::string_view(s).substr(eq + 1));
    }
  }
  return configs;
}

std::string records_csv(const std::vector<RequestRecord>& records) {
  std::ostringstream os;
  os << "id,op,address,arrival_ns,issue_ns,complete_ns,latency_ns,served_as\n";
  for (const auto& r : records) {
    os << r.id << ',' << (r.op == RequestOp::Read ? 'R' : 'W') << ",0x" << std::hex << r.address
       << std::dec << ',' << ps_to_ns(r.arrival) << ',' << ps_to_ns(r.issue) << ','
       << ps_to_ns(r.complete) << ',' << ps_to_ns(r.complete - r.arrival) << ','
       << to_string(r.served_as) << '\n';
  }
  return os.str();
}

struct TraceSpec {
  std::string path;
  std::string pattern;
  std::uint64_t length = 10000;
  std::uint64_t seed = 1;
  std::optional<double> gap_ns;
  double read_fraction = 0.67;
  std::uint64_t lines = 0;
};

std::vector<MemoryRequest> obtain_trace(const TraceSpec& spec, const RunConfig& cfg,
                                        std::vector<std::string>& warnings) {
  const std::string path = !spec.path.empty() ? spec.path : cfg.trace_path;
  if (!path.empty()) {
    auto loaded = load_trace_file(path, {cfg.sim.geometry.cacheline_bytes, cfg.payload_seed});
    warnings.insert(warnings.end(), loaded.warnings.begin(), loaded.warnings.end());
    return std::move(loaded.requests);
  }
  if (spec.pattern.empty()) {
    throw Error(ErrorCode::ConfigError, "no trace: pass --trace, --gen or set [run] trace");
  }
  TraceGenOptions o;
  o.pattern = parse_trace_pattern(spec.pattern);
  o.length = spec.length;
  o.seed = spec.seed;
  o.gap_ns = spec.gap_ns;
  o.read_fraction = spec.read_fraction;
  o.address_lines = spec.lines;
  return gen_trace(o, cfg.sim.geometry);
}

struct RunOutcome {
  RunConfig config;
  SimulationResult result;
  std::vector<Check> checks;
};

int cmd_run(const std::vector<std::string>& config_paths, const std::string& preset,
            const std::vector<std::string>& sets, const TraceSpec& trace_spec,
            const std::string& out_dir, OutputPaths overrides, bool strict, std::ostream& out) {
  std::vector<RunConfig> configs = build_configs(config_paths, preset, sets);
  {
    std::map<std::string, int> seen;
    for (const auto& c : configs) {
      if (++seen[c.sim.name] > 1) {
        throw Error(ErrorCode::ConfigError,
                    "two configs are named '" + c.sim.name + "'; give each a distinct [run] name");
      }
    }
  }
  if (configs.size() > 1 && (!overrides.json.empty() || !overrides.text.empty() ||
                             !overrides.records_csv.empty())) {
    throw Error(ErrorCode::ConfigError, "--json/--text/--records need a single config; use --out-dir");
  }

  // One thread per configuration; runs share nothing mutable.
  std::vector<std::optional<RunOutcome>> outcomes(configs.size());
  std::vector<std::exception_ptr> failures(configs.size());
  {
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          RunOutcome o{configs[i], {}, {}};
          std::vector<std::string> warnings;
          const auto trace = obtain_trace(trace_spec, o.config, warnings);
          o.result = simulate(o.config.sim, trace);
          o.result.report.warnings = std::move(warnings);
          if (o.config.sim.backend == BackendKind::Cosmos) o.checks = energy_checks(o.config);
          outcomes[i] = std::move(o);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<RunOutcome*> ordered;
  for (auto& o : outcomes) ordered.push_back(&*o);
  std::sort(ordered.begin(), ordered.end(), [](const RunOutcome* a, const RunOutcome* b) {
    return a->config.sim.name < b->config.sim.name;
  });

  // Assemble everything before touching the filesystem.
  std::vector<std::pair<std::string, std::string>> files;
  bool ok = true;
  for (const RunOutcome* o : ordered) {
    const StatsReport& r = o->result.report;
    std::string text = report_to_text(r);
    std::string json = report_to_json(r);
    if (!o->checks.empty()) {
      std::ostringstream os;
      os << "  calculator checks:\n";
      print_checks(os, o->checks);
      text += os.str();
      auto j = ordered_json::parse(json);
      j["calculator_checks"] = checks_json(o->checks);
      json = j.dump(2);
      ok = ok && all_within(o->checks);
    }
    out << text << '\n';
    OutputPaths paths = o->config.output;
    if (!out_dir.empty()) {
      const std::string base = (std::filesystem::path(out_dir) / r.name).string();
      paths = {base + ".json", base + ".txt", base + ".records.csv"};
    }
    if (!overrides.json.empty()) paths.json = overrides.json;
    if (!overrides.text.empty()) paths.text = overrides.text;
    if (!overrides.records_csv.empty()) paths.records_csv = overrides.records_csv;
    if (!paths.json.empty()) files.emplace_back(paths.json, json + '\n');
    if (!paths.text.empty()) files.emplace_back(paths.text, text);
    if (!paths.records_csv.empty()) files.emplace_back(paths.records_csv, records_csv(o->result.records));
  }
  if (ordered.size() > 1) {
    std::vector<StatsReport> reports;
    for (const RunOutcome* o : ordered) reports.push_back(o->result.report);
    try {
      out << "comparison (candidate / baseline):\n" << compare(reports).text;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TraceMismatch) throw;
      out << "comparison skipped: runs used different traces\n";
    }
  }
  for (const auto& [path, content] : files) write_file_atomic(path, content);
  return strict && !ok ? kExitDeviation : kExitOk;
}

RunConfig analysis_config(const std::string& config_path, const std::string& preset,
                          const std::vector<std::string>& sets) {
  return build_configs(config_path.empty() ? std::vector<std::string>{}
                                           : std::vector<std::string>{config_path},
                       preset, sets)
      .front();
}

int cmd_budget(const std::string& chain_path, const RunConfig& cfg,
               std::optional<std::uint64_t> signals_opt, std::optional<double> efficiency_opt,
               const std::string& json_path, bool strict, std::ostream& out) {
  std::vector<BudgetComponent> chain;
  if (chain_path.empty()) {
    chain = reference_budget_chain();
  } else {
    std::ifstream in(chain_path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open budget '" + chain_path + "'");
    chain = parse_budget(in);
  }
  const std::uint64_t signals = signals_opt.value_or(cfg.laser_signal_count);
  const double efficiency = efficiency_opt.value_or(cfg.sim.energy.wall_plug_efficiency);
  const auto& pub = cfg.published;
  const auto& tol = cfg.tolerance;

  const double required_dbm = required_laser_power_per_signal(chain);
  const double required_mw = dbm_to_mw(required_dbm);
  const LaserPower computed = total_laser_electrical_power(required_mw, signals, efficiency);
  // The published per-signal figure carried through the same arithmetic.
  const LaserPower from_published =
      total_laser_electrical_power(dbm_to_mw(pub.laser_power_dbm), signals, efficiency);
  double net = 0.0;
  for (const auto& c : chain) net += signed_db(c);

  std::vector<Check> checks{
      {"per-signal optical power", "dBm", deviation(required_dbm, pub.laser_power_dbm), false,
       tol.budget_db_abs},
      {"per-signal optical power", "mW", deviation(required_mw, pub.laser_power_mw), true,
       tol.laser_power_rel},
      {"total laser electrical power", "W", deviation(computed.total_electrical_w, pub.total_laser_power_w),
       true, tol.laser_power_rel},
      {"published dBm -> mW", "mW", deviation(dbm_to_mw(pub.laser_power_dbm), pub.laser_power_mw),
       true, tol.laser_power_rel},
      {"published mW -> electrical", "mW",
       deviation(total_laser_electrical_power(pub.laser_power_mw, 1, efficiency).per_signal_electrical_mw,
                 pub.laser_electrical_mw),
       true, tol.laser_power_rel},
      {"published path total", "W", deviation(from_published.total_electrical_w, pub.total_laser_power_w),
       true, tol.laser_power_rel},
  };

  out << "optical budget (" << (chain_path.empty() ? "built-in reference chain" : chain_path) << ")\n";
  for (const auto& c : chain) {
    out << "  " << std::left << std::setw(28) << c.name << std::setw(11) << to_string(c.kind)
        << std::right << std::setw(9) << fmt(c.value, 3) << '\n';
  }
  out << "  net path gain                " << fmt(net, 3) << " dB\n"
      << "  required per signal          " << fmt(required_dbm, 3) << " dBm = " << fmt(required_mw)
      << " mW optical\n"
      << "  electrical per signal        " << fmt(computed.per_signal_electrical_mw) << " mW at "
      << fmt(100 * efficiency, 1) << "% wall-plug\n"
      << "  total over " << signals << " signals  " << fmt(computed.total_electrical_w) << " W\n";
  print_checks(out, checks);

  if (!json_path.empty()) {
    ordered_json j;
    ordered_json comps = ordered_json::array();
    for (const auto& c : chain) {
      comps.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}, {"value", c.value}});
    }
    j["components"] = comps;
    j["net_db"] = net;
    j["required_dbm"] = required_dbm;
    j["required_mw"] = required_mw;
    j["electrical_mw_per_signal"] = computed.per_signal_electrical_mw;
    j["signals"] = signals;
    j["wall_plug_efficiency"] = efficiency;
    j["total_w"] = computed.total_electrical_w;
    j["checks"] = checks_json(checks);
    write_file_atomic(json_path, j.dump(2) + '\n');
  }
  return strict && !all_within(checks) ? kExitDeviation : kExitOk;
}

int cmd_area(const RunConfig& cfg, const std::string& json_path, bool strict, std::ostream& out) {
  const auto& g = cfg.sim.geometry;
  const AreaReport r = array_area_and_density(cfg.area, g);
  std::vector<Check> checks;
  if (g.bits_per_cell == 4) {
    checks.push_back({"array area (4-bit)", "mm^2", deviation(r.footprint_mm2, cfg.published.area_4bit_mm2),
                      true, cfg.tolerance.area_rel});
  } else if (g.bits_per_cell == 8) {
    checks.push_back({"array area (8-bit)", "mm^2", deviation(r.footprint_mm2, cfg.published.area_8bit_mm2),
                      true, cfg.tolerance.area_rel});
  }
  out << "array area (" << g.bits_per_cell << "-bit, " << g.tile_rows_per_bank << "x"
      << g.tile_cols_per_bank << " tiles of " << g.cells_per_tile_side << "x"
      << g.cells_per_tile_side << " cells)\n"
      << "  layer width                  " << fmt(r.width_mm) << " mm\n"
      << "  layer height                 " << fmt(r.height_mm) << " mm\n"
      << "  layer area                   " << fmt(r.layer_area_mm2) << " mm^2\n"
      << "  layers                       " << r.layers << '\n'
      << "  footprint                    " << fmt(r.footprint_mm2) << " mm^2\n"
      << "  summed layer area            " << fmt(r.summed_area_mm2) << " mm^2\n"
      << "  capacity                     " << fmt(r.capacity_mib, 1) << " MiB\n"
      << "  density                      " << fmt(r.density_mb_per_mm2) << " MB/mm^2 ("
      << (cfg.area.density_mode == DensityMode::Footprint ? "footprint" : "summed layers") << ")\n"
      << "  published 4-bit/8-bit ratio  "
      << fmt(cfg.published.area_4bit_mm2 / cfg.published.area_8bit_mm2) << '\n';
  print_checks(out, checks);
  if (!json_path.empty()) {
    ordered_json j{{"width_mm", r.width_mm},
                   {"height_mm", r.height_mm},
                   {"layer_area_mm2", r.layer_area_mm2},
                   {"layers", r.layers},
                   {"footprint_mm2", r.footprint_mm2},
                   {"summed_area_mm2", r.summed_area_mm2},
                   {"capacity_mib", r.capacity_mib},
                   {"density_mb_per_mm2", r.density_mb_per_mm2},
                   {"checks", checks_json(checks)}};
    write_file_atomic(json_path, j.dump(2) + '\n');
  }
  return strict && !all_within(checks) ? kExitDeviation : kExitOk;
}

int cmd_lifetime(const RunConfig& cfg, const LifetimeParams& p, const std::string& json_path,
                 bool strict, std::ostream& out) {
  const double years = lifetime_years(p);
  std::vector<Check> checks;
  const LifetimeParams worked;
  if (p.size_bytes == worked.size_bytes && p.max_writes_per_cell == worked.max_writes_per_cell &&
      p.bytes_per_cycle == worked.bytes_per_cycle && p.frequency_hz == worked.frequency_hz) {
    checks.push_back({"lifetime (worked example)", "years",
                      deviation(years, cfg.published.lifetime_years), true,
                      cfg.tolerance.lifetime_rel});
  }
  out << "lifetime\n"
      << "  size                         " << std::setprecision(12) << p.size_bytes << " bytes\n"
      << "  max writes per cell          " << p.max_writes_per_cell << '\n'
      << "  traffic                      " << p.bytes_per_cycle << " bytes/cycle\n"
      << "  frequency                    " << p.frequency_hz << " Hz\n"
      << "  lifetime                     " << fmt(years, 6) << " years\n";
  print_checks(out, checks);
  if (!json_path.empty()) {
    ordered_json j{{"size_bytes", p.size_bytes},
                   {"max_writes_per_cell", p.max_writes_per_cell},
                   {"bytes_per_cycle", p.bytes_per_cycle},
                   {"frequency_hz", p.frequency_hz},
                   {"lifetime_years", years},
                   {"checks", checks_json(checks)}};
    write_file_atomic(json_path, j.dump(2) + '\n');
  }
  return strict && !all_within(checks) ? kExitDeviation : kExitOk;
}

int cmd_gen_trace(const TraceSpec& spec, const RunConfig& cfg, const std::string& out_path,
                  std::ostream& out) {
  TraceSpec s = spec;
  s.path.clear();
  std::vector<std::string> unused;
  RunConfig c = cfg;
  c.trace_path.clear();
  const auto trace = obtain_trace(s, c, unused);
  std::ostringstream os;
  os << "# pattern " << s.pattern << " length " << s.length << " seed " << s.seed << '\n';
  write_trace(os, trace);
  if (out_path.empty()) {
    out << os.str();
  } else {
    write_file_atomic(out_path, os.str());
    out << "wrote " << trace.size() << " requests to " << out_path << " (fingerprint "
        << std::hex << std::setw(16) << std::setfill('0') << trace_fingerprint(trace) << std::dec
        << std::setfill(' ') << ")\n";
  }
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& json_path,
                std::ostream& out) {
  std::vector<StatsReport> reports;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open report '" + p + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    reports.push_back(report_from_json(buf.str()));
  }
  const Comparison c = compare(reports);
  out << c.text;
  if (!json_path.empty()) write_file_atomic(json_path, c.json + '\n');
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optically-controlled PCM main memory: trace simulator and analysis calculators",
               "cosmos"};
  app.require_subcommand(1);
  app.footer(config_help());

  // run
  std::vector<std::string> configs;
  std::string preset;
  std::vector<std::string> sets;
  TraceSpec trace;
  std::string out_dir;
  OutputPaths overrides;
  bool strict = false;
  auto* run = app.add_subcommand("run", "simulate a trace on one or more configurations");
  run->add_option("--config", configs, "config file; repeat to run several concurrently");
  run->add_option("--preset", preset, "preset to use when no --config is given");
  run->add_option("--set", sets, "override section.key=value (repeatable)");
  run->add_option("--trace", trace.path, "trace file");
  run->add_option("--gen", trace.pattern, "generate a trace: saturate-w | saturate-r | mixed | random");
  run->add_option("--length", trace.length, "generated trace length (requests)");
  run->add_option("--seed", trace.seed, "generator seed");
  run->add_option("--gap-ns", trace.gap_ns, "generated inter-arrival gap (ns)");
  run->add_option("--read-fraction", trace.read_fraction, "read fraction for --gen mixed");
  run->add_option("--lines", trace.lines, "restrict generated addresses to the first N lines");
  run->add_option("--out-dir", out_dir, "write <name>.json/.txt/.records.csv per run here");
  run->add_option("--json", overrides.json, "JSON report path (single config)");
  run->add_option("--text", overrides.text, "text report path (single config)");
  run->add_option("--records", overrides.records_csv, "per-request CSV path (single config)");
  run->add_flag("--strict", strict, "exit 2 when a calculator deviates beyond tolerance");
  run->footer(config_help());

  // budget
  std::string chain_path;
  std::string config_path;
  std::optional<std::uint64_t> signals;
  std::optional<double> efficiency;
  std::string json_path;
  auto* budget = app.add_subcommand("budget", "optical power budget and laser power");
  budget->add_option("--chain", chain_path, "budget file: name,kind,value per line");
  budget->add_option("--config", config_path, "config supplying published values and tolerances");
  budget->add_option("--signals", signals, "optical signal count");
  budget->add_option("--efficiency", efficiency, "laser wall-plug efficiency (fraction)");
  budget->add_option("--json", json_path, "JSON output path");
  budget->add_flag("--strict", strict, "exit 2 on deviation beyond tolerance");

  // area
  auto* area = app.add_subcommand("area", "array area and bit density");
  area->add_option("--config", config_path, "config file");
  area->add_option("--preset", preset, "preset when no --config is given");
  area->add_option("--set", sets, "override section.key=value (repeatable)");
  area->add_option("--json", json_path, "JSON output path");
  area->add_flag("--strict", strict, "exit 2 on deviation beyond tolerance");

  // lifetime
  std::string size_text = "2GiB";
  LifetimeParams life;
  auto* lifetime = app.add_subcommand("lifetime", "cell-endurance lifetime in years");
  lifetime->add_option("--size", size_text, "memory size (bytes, KiB/MiB/GiB suffixes)");
  lifetime->add_option("--rate", life.bytes_per_cycle, "read+write traffic (bytes/cycle)");
  lifetime->add_option("--freq", life.frequency_hz, "core frequency (Hz)");
  lifetime->add_option("--writes", life.max_writes_per_cell, "maximum writes per cell");
  lifetime->add_option("--config", config_path, "config supplying published values and tolerances");
  lifetime->add_option("--json", json_path, "JSON output path");
  lifetime->add_flag("--strict", strict, "exit 2 on deviation beyond tolerance");

  // gen-trace
  std::string out_path;
  auto* gen = app.add_subcommand("gen-trace", "write a synthetic trace");
  gen->add_option("--pattern", trace.pattern, "saturate-w | saturate-r | mixed | random")->required();
  gen->add_option("--length", trace.length, "requests")->required();
  gen->add_option("--seed", trace.seed, "seed");
  gen->add_option("--gap-ns", trace.gap_ns, "inter-arrival gap (ns)");
  gen->add_option("--read-fraction", trace.read_fraction, "read fraction for mixed");
  gen->add_option("--lines", trace.lines, "restrict addresses to the first N lines");
  gen->add_option("--config", config_path, "config supplying the geometry");
  gen->add_option("--preset", preset, "preset supplying the geometry");
  gen->add_option("--out", out_path, "output path (default: stdout)");

  // compare
  std::vector<std::string> report_paths;
  auto* cmp = app.add_subcommand("compare", "compare JSON reports over the same trace");
  cmp->add_option("reports", report_paths, "report files (first is the baseline)")->required();
  cmp->add_option("--json", json_path, "JSON output path");

  std::vector<const char*> argv;
  argv.push_back("cosmos");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (run->parsed()) {
      return cmd_run(configs, preset, sets, trace, out_dir, overrides, strict, out);
    }
    if (budget->parsed()) {
      return cmd_budget(chain_path, analysis_config(config_path, "", {}), signals, efficiency,
                        json_path, strict, out);
    }
    if (area->parsed()) {
      return cmd_area(analysis_config(config_path, preset, sets), json_path, strict, out);
    }
    if (lifetime->parsed()) {
      life.size_bytes = static_cast<double>(parse_size(size_text, "--size"));
      return cmd_lifetime(analysis_config(config_path, "", {}), life, json_path, strict, out);
    }
    if (gen->parsed()) {
      return cmd_gen_trace(trace, analysis_config(config_path, preset, {}), out_path, out);
    }
    if (cmp->parsed()) {
      if (report_paths.size() < 2) throw Error(ErrorCode::ConfigError, "compare needs two or more reports");
      return cmd_compare(report_paths, json_path, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cosmos
