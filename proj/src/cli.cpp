#include "exoverse/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "exoverse/analysis.hpp"
#include "exoverse/config.hpp"
#include "exoverse/manifest.hpp"
#include "exoverse/version.hpp"

namespace exoverse::cli {

namespace {

using nlohmann::json;

namespace fs = std::filesystem;

struct RunResult {
  std::map<std::string, std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

void ensure_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path);
  out << text;
}

// ------------------------------------------------------------------ envs

RunResult run_envs(const json& r) {
  RunResult res;
  std::vector<EnvironmentSpec> envs;
  const std::string file = r.value("file", "");
  if (!file.empty()) {
    envs = load_environments(file);
    res.inputs[file] = file_digest(file);
  } else {
    envs = builtin_environments();
  }

  std::printf("%-14s %7s %10s %10s %6s %6s %12s %8s\n", "name", "g", "rho_fluid", "mu_fluid",
              "v", "l", "Re", "C_D");
  for (const auto& env : envs) {
    const FluidConstants fc = fluid_constants(env);
    std::printf("%-14s %7.2f %10.2f %10.2e %6.2f %6.2f %12.4g %8.4g\n", env.name.c_str(), env.g,
                env.rho_fluid, env.mu_fluid, env.ref_velocity, env.char_length, fc.reynolds,
                fc.drag_coeff);
  }

  if (r.value("json", false) || r.contains("json_file")) {
    const std::string doc = environments_to_json(envs);
    const std::string json_file = r.value("json_file", "");
    if (json_file.empty()) {
      std::fputs(doc.c_str(), stdout);
    } else {
      write_text(json_file, doc);
      res.outputs.push_back(json_file);
    }
  }

  if (r.value("check", false)) {
    bool ok = true;
    for (const auto& ref : catalog_reference()) {
      const FluidConstants fc = fluid_constants(find_environment(ref.name));
      const double re_err = std::abs(fc.reynolds - ref.reynolds) / ref.reynolds;
      const double cd_err = std::abs(fc.drag_coeff - ref.drag_coeff) / ref.drag_coeff;
      const bool row_ok = re_err <= 0.01 && cd_err <= 0.01;
      std::printf("check %-14s Re %12.4g (ref %8g, %+.2f%%)  C_D %8.4g (ref %5g, %+.2f%%)  %s\n",
                  ref.name.c_str(), fc.reynolds, ref.reynolds, 100.0 * re_err, fc.drag_coeff,
                  ref.drag_coeff, 100.0 * cd_err, row_ok ? "ok" : "FAIL");
      ok = ok && row_ok;
    }
    if (!ok) throw ValidationError("catalog deviates from reference values by more than 1%");
  }
  return res;
}

// -------------------------------------------------------------- playback

GaitKinematics resolve_gait(const std::string& gait, double speed, double cycle_duration,
                            RunResult* res) {
  if (gait == "synthetic") {
    return to_kinematics(synthetic_normal_gait(speed), cycle_duration, speed);
  }
  if (!fs::exists(gait)) throw IoError("gait file not found: " + gait);
  if (res != nullptr) res->inputs[gait] = file_digest(gait);
  return to_kinematics(load_trajectory(gait), cycle_duration, speed);
}

RunResult run_playback(const json& r) {
  RunResult res;
  const std::string out = r.value("out", ".");
  ensure_dir(out);

  const double cycle_duration = r.value("cycle_duration", 1.4);
  const double speed = r.value("speed", kNominalWalkingSpeed);
  const int cycles = r.value("cycles", 1);
  const GaitKinematics kin = resolve_gait(r.value("gait", "synthetic"), speed, cycle_duration, &res);
  const BodyModel body = default_body();

  std::vector<EnvironmentSpec> envs;
  if (r.value("all_envs", false)) {
    envs = builtin_environments();
  } else if (r.contains("env_file") && !r["env_file"].get<std::string>().empty()) {
    const std::string env_file = r["env_file"].get<std::string>();
    envs = load_environments(env_file);
    res.inputs[env_file] = file_digest(env_file);
  } else {
    envs.push_back(find_environment(r.at("env").get<std::string>()));
  }

  const bool serial = r.value("serial", false);
  RmsTable table;
  for (const auto& env : envs) {
    const SimTrace trace = serial ? torque_playback_serial(body, env, kin, cycles)
                                  : torque_playback(body, env, kin, cycles);
    const std::string csv = join_path(out, "playback_" + env.name + ".csv");
    save_trace_csv(trace, csv);
    save_trace_sidecar(trace, csv + ".meta.json");
    res.outputs.push_back(csv);
    res.outputs.push_back(csv + ".meta.json");
    if (r.value("rms", false)) {
      for (const auto& row : rms_components(trace)) table.push_back(row);
    }
  }

  if (r.value("rms", false)) {
    // hip block first, then knee, environments in catalog order
    RmsTable ordered;
    for (const std::string joint : {"hip", "knee"}) {
      for (const auto& row : table) {
        if (row.joint == joint) ordered.push_back(row);
      }
    }
    std::fputs(rms_table_text(ordered).c_str(), stdout);
    const std::string base = join_path(out, "rms_report");
    write_text(base + ".csv", rms_table_csv(ordered));
    write_text(base + ".json", rms_table_json(ordered));
    res.outputs.push_back(base + ".csv");
    res.outputs.push_back(base + ".json");
  }
  return res;
}

// -------------------------------------------------------------- simulate

RunResult run_simulate(const json& r) {
  RunResult res;
  const std::string out = r.value("out", ".");
  ensure_dir(out);

  RunConfig cfg = run_config_from_json(r.at("config").dump());
  const GaitKinematics kin = resolve_gait(cfg.gait, cfg.walking_speed, cfg.cycle_duration, &res);

  std::vector<EnvironmentSpec> sweep;
  if (r.contains("sweep") && !r["sweep"].empty()) {
    for (const auto& name : r["sweep"]) sweep.push_back(find_environment(name.get<std::string>()));
  } else {
    sweep.push_back(cfg.sim.virtual_env);
  }

  const auto n = static_cast<std::ptrdiff_t>(sweep.size());
  std::vector<SimTrace> traces(sweep.size());
  std::vector<std::string> errors(sweep.size());
  std::vector<bool> diverged(sweep.size(), false);
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      RunConfig local = cfg;
      local.sim.virtual_env = sweep[i];
      SimTrace trace = run_closed_loop(local.body, local.robot, local.gains, kin, local.sim);
      trace.config_echo = run_config_to_json(local);
      traces[i] = std::move(trace);
    } catch (const DivergenceError& e) {
      errors[i] = e.what();
      diverged[i] = true;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!errors[i].empty()) {
      const std::string msg = "simulate '" + sweep[i].name + "': " + errors[i];
      if (diverged[i]) throw DivergenceError(msg, 0);
      throw ValidationError(msg);
    }
  }

  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const std::string csv = join_path(out, "sim_" + sweep[i].name + ".csv");
    save_trace_csv(traces[i], csv);
    save_trace_sidecar(traces[i], csv + ".meta.json");
    res.outputs.push_back(csv);
    res.outputs.push_back(csv + ".meta.json");
    for (const auto& w : traces[i].warnings) {
      res.warnings.push_back(sweep[i].name + ": " + w);
    }
    std::printf("sim %-14s %zu steps, %zu warning(s)\n", sweep[i].name.c_str(),
                traces[i].size(), traces[i].warnings.size());
  }
  return res;
}

// --------------------------------------------------------------- analyze

RunResult run_analyze(const json& r) {
  RunResult res;
  const std::string out = r.value("out", ".");
  ensure_dir(out);
  const std::string trace_path = r.at("trace").get<std::string>();
  if (!fs::exists(trace_path)) throw IoError("trace file not found: " + trace_path);
  res.inputs[trace_path] = file_digest(trace_path);
  const SimTrace trace = load_trace_csv(trace_path);

  const std::string op = r.at("op").get<std::string>();
  if (op == "rms") {
    std::optional<GcWindow> window;
    if (r.contains("window")) {
      window = GcWindow{r["window"][0].get<double>(), r["window"][1].get<double>()};
    }
    const auto rows = rms_components(trace, window);
    const RmsTable table(rows.begin(), rows.end());
    std::fputs(rms_table_text(table).c_str(), stdout);
    const std::string base = join_path(out, "rms_report");
    write_text(base + ".csv", rms_table_csv(table));
    write_text(base + ".json", rms_table_json(table));
    res.outputs.push_back(base + ".csv");
    res.outputs.push_back(base + ".json");
  } else if (op == "pearson") {
    const auto a = trace_column(trace, r.at("col_a").get<std::string>());
    const auto b = trace_column(trace, r.at("col_b").get<std::string>());
    const double rho = pearson_r(a, b);
    std::printf("pearson_r(%s, %s) = %.6f\n", r.at("col_a").get<std::string>().c_str(),
                r.at("col_b").get<std::string>().c_str(), rho);
    const std::string path = join_path(out, "pearson.json");
    json doc{{"col_a", r.at("col_a")}, {"col_b", r.at("col_b")}, {"pearson_r", rho}};
    write_text(path, doc.dump(2) + "\n");
    res.outputs.push_back(path);
  } else if (op == "envelope") {
    EnvelopeParams params;
    params.sample_rate = r.value("fs", 1.0 / trace.dt);
    const std::string column = r.value("column", "tau_M1");
    const auto signal = trace_column(trace, column);
    const auto env = emg_envelope(signal, params);
    std::string csv = "t," + column + "_envelope\n";
    char buf[64];
    for (std::size_t i = 0; i < env.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", trace.t[i], env[i]);
      csv += buf;
    }
    const std::string path = join_path(out, "envelope.csv");
    write_text(path, csv);
    res.outputs.push_back(path);
    std::printf("envelope of %s written (%zu samples)\n", column.c_str(), env.size());
  } else if (op == "phase") {
    const std::string column = r.value("column", "tau_M1");
    const int bins = r.value("bins", 101);
    const PhaseStats stats = phase_average(trace, column, bins);
    if (stats.single_cycle) {
      res.warnings.push_back("trace spans fewer than 2 cycles; per-bin std is zero");
    }
    std::string csv = "gc_percent,mean,std\n";
    char buf[96];
    for (std::size_t i = 0; i < stats.mean.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", stats.gc_percent[i], stats.mean[i],
                    stats.stddev[i]);
      csv += buf;
    }
    const std::string path = join_path(out, "phase.csv");
    write_text(path, csv);
    res.outputs.push_back(path);
    std::printf("phase average of %s over %d bins written\n", column.c_str(), bins);
  } else {
    throw ValidationError("unknown analyze operation '" + op + "'");
  }
  return res;
}

// ------------------------------------------------------------- dispatch

RunResult run_from_resolved(const std::string& subcommand, const json& resolved) {
  if (subcommand == "envs") return run_envs(resolved);
  if (subcommand == "playback") return run_playback(resolved);
  if (subcommand == "simulate") return run_simulate(resolved);
  if (subcommand == "analyze") return run_analyze(resolved);
  throw ValidationError("unknown subcommand in manifest: " + subcommand);
}

void finish_run(const std::string& subcommand, const json& resolved, const RunResult& res,
                const std::string& out_dir, std::uint64_t seed) {
  // outputs are recorded relative to the manifest so a run directory can be
  // moved (or recreated elsewhere) and still replay byte-identically
  json portable = resolved;
  if (portable.contains("out")) portable["out"] = ".";
  RunManifest m;
  m.subcommand = subcommand;
  m.resolved = portable.dump();
  m.input_digests = res.inputs;
  for (const auto& p : res.outputs) m.outputs.push_back(fs::path(p).filename().string());
  m.tool_version = kVersion;
  m.seed = seed;
  m.warnings = res.warnings;
  save_manifest(m, join_path(out_dir, "manifest.json"));
  for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse seed '" + text + "'");
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"virtual-environment torque rendering for a planar two-link leg"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // envs
  auto* envs_cmd = app.add_subcommand("envs", "show the environment catalog");
  bool envs_json = false, envs_check = false;
  std::string envs_json_file, envs_file, envs_out;
  envs_cmd->add_flag("--json", envs_json, "emit the catalog as JSON");
  envs_cmd->add_option("--json-file", envs_json_file, "write the JSON catalog to this file");
  envs_cmd->add_flag("--check", envs_check, "verify derived Re and C_D against reference values");
  envs_cmd->add_option("--file", envs_file, "load environments from a JSON file");
  envs_cmd->add_option("--out", envs_out, "output directory for the manifest");

  // playback
  auto* pb_cmd = app.add_subcommand("playback", "open-loop torque evaluation along a gait cycle");
  std::string pb_env, pb_env_file, pb_gait = "synthetic", pb_out = ".";
  double pb_duration = 1.4, pb_speed = kNominalWalkingSpeed;
  int pb_cycles = 1;
  bool pb_all = false, pb_rms = false, pb_serial = false;
  pb_cmd->add_option("--env", pb_env, "environment name from the catalog");
  pb_cmd->add_option("--env-file", pb_env_file, "environment JSON file");
  pb_cmd->add_option("--gait", pb_gait, "gait CSV path or 'synthetic'");
  pb_cmd->add_option("--speed", pb_speed, "walking speed m/s for the synthetic gait");
  pb_cmd->add_option("--cycle-duration", pb_duration, "gait cycle duration in seconds");
  pb_cmd->add_option("--cycles", pb_cycles, "number of cycles to evaluate");
  pb_cmd->add_option("--out", pb_out, "output directory");
  pb_cmd->add_flag("--all-envs", pb_all, "iterate the whole catalog");
  pb_cmd->add_flag("--rms", pb_rms, "emit the RMS component report");
  pb_cmd->add_flag("--serial", pb_serial, "use the serial reference kernel");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop torque-feedback simulation");
  std::string sim_config, sim_out = ".", sim_sweep, sim_seed;
  sim_cmd->add_option("--config", sim_config, "run configuration JSON")->required();
  sim_cmd->add_option("--out", sim_out, "output directory");
  sim_cmd->add_option("--sweep", sim_sweep, "e.g. env=water,honey,peanut_butter");
  sim_cmd->add_option("--seed", sim_seed, "override the run seed");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "reduce a trace to reports");
  std::string an_trace, an_out = ".", an_col_a, an_col_b, an_column = "tau_M1";
  std::vector<double> an_window;
  double an_fs = 0.0;
  int an_bins = 101;
  bool an_rms = false, an_envelope = false, an_phase = false;
  std::vector<std::string> an_pearson;
  an_cmd->add_option("--trace", an_trace, "trace CSV to analyze")->required();
  an_cmd->add_flag("--rms", an_rms, "RMS torque components");
  an_cmd->add_option("--window", an_window, "gait-cycle window begin end (percent)")->expected(2);
  an_cmd->add_option("--pearson", an_pearson, "two column names to correlate")->expected(2);
  an_cmd->add_flag("--envelope", an_envelope, "EMG-style envelope of a column");
  an_cmd->add_option("--fs", an_fs, "sample rate for the envelope (default 1/dt)");
  an_cmd->add_flag("--phase", an_phase, "phase average of a column");
  an_cmd->add_option("--column", an_column, "trace column (envelope/phase)");
  an_cmd->add_option("--bins", an_bins, "phase-average bin count");
  an_cmd->add_option("--out", an_out, "output directory");

  // replay
  auto* rp_cmd = app.add_subcommand("replay", "re-run a recorded manifest");
  std::string rp_manifest;
  rp_cmd->add_option("manifest", rp_manifest, "manifest.json from a previous run")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (envs_cmd->parsed()) {
      json r{{"json", envs_json}, {"check", envs_check}};
      if (!envs_json_file.empty()) r["json_file"] = envs_json_file;
      if (!envs_file.empty()) r["file"] = envs_file;
      const RunResult res = run_envs(r);
      if (!envs_out.empty()) {
        ensure_dir(envs_out);
        finish_run("envs", r, res, envs_out, 0);
      }
    } else if (pb_cmd->parsed()) {
      if (!pb_all && pb_env.empty() && pb_env_file.empty()) {
        throw ValidationError("playback needs --env, --env-file or --all-envs");
      }
      json r{{"gait", pb_gait},          {"speed", pb_speed},   {"cycle_duration", pb_duration},
             {"cycles", pb_cycles},      {"out", pb_out},       {"all_envs", pb_all},
             {"rms", pb_rms},            {"serial", pb_serial}};
      if (!pb_env.empty()) r["env"] = pb_env;
      if (!pb_env_file.empty()) r["env_file"] = pb_env_file;
      const RunResult res = run_playback(r);
      finish_run("playback", r, res, pb_out, 0);
    } else if (sim_cmd->parsed()) {
      if (!fs::exists(sim_config)) throw IoError("config file not found: " + sim_config);
      RunConfig cfg = load_run_config(sim_config);
      // seed precedence: flag, then environment, then config file
      if (const char* env_seed = std::getenv("EXOVERSE_SEED")) {
        cfg.sim.seed = parse_seed(env_seed);
      }
      if (!sim_seed.empty()) cfg.sim.seed = parse_seed(sim_seed);

      json r{{"config", json::parse(run_config_to_json(cfg))}, {"out", sim_out}};
      if (!sim_sweep.empty()) {
        if (sim_sweep.rfind("env=", 0) != 0) {
          throw ValidationError("--sweep expects env=name1,name2,...");
        }
        json names = json::array();
        std::istringstream ss(sim_sweep.substr(4));
        std::string name;
        while (std::getline(ss, name, ',')) {
          if (!name.empty()) names.push_back(name);
        }
        if (names.empty()) throw ValidationError("--sweep lists no environments");
        r["sweep"] = names;
      }
      RunResult res = run_simulate(r);
      res.inputs[sim_config] = file_digest(sim_config);
      finish_run("simulate", r, res, sim_out, cfg.sim.seed);
    } else if (an_cmd->parsed()) {
      json r{{"trace", an_trace}, {"out", an_out}};
      if (an_rms) {
        r["op"] = "rms";
        if (!an_window.empty()) r["window"] = an_window;
      } else if (!an_pearson.empty()) {
        r["op"] = "pearson";
        r["col_a"] = an_pearson[0];
        r["col_b"] = an_pearson[1];
      } else if (an_envelope) {
        r["op"] = "envelope";
        r["column"] = an_column;
        if (an_fs > 0.0) r["fs"] = an_fs;
      } else if (an_phase) {
        r["op"] = "phase";
        r["column"] = an_column;
        r["bins"] = an_bins;
      } else {
        throw ValidationError("analyze needs one of --rms, --pearson, --envelope, --phase");
      }
      const RunResult res = run_analyze(r);
      finish_run("analyze", r, res, an_out, 0);
    } else if (rp_cmd->parsed()) {
      const RunManifest m = load_manifest(rp_manifest);
      json resolved = json::parse(m.resolved);
      std::string out = fs::path(rp_manifest).parent_path().string();
      if (out.empty()) out = ".";
      if (resolved.contains("out")) resolved["out"] = out;
      RunResult res = run_from_resolved(m.subcommand, resolved);
      if (m.subcommand == "simulate") {
        // keep the original config digest so replayed manifests match
        res.inputs.insert(m.input_digests.begin(), m.input_digests.end());
      }
      finish_run(m.subcommand, resolved, res, out, m.seed);
    }
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace exoverse::cli
