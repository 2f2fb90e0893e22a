// pev-mzi command line front end. Talks to the simulation core exclusively
// through the C API in pevmzi.h.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pevmzi.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitPhysics = 3;

int exit_code_for(int status) {
  switch (status) {
    case PEV_OK: return 0;
    case PEV_ERR_PHYSICS: return kExitPhysics;
    default: return kExitUsage; // config, io, invalid
  }
}

[[noreturn]] void fail(int status, const std::string& context) {
  std::fprintf(stderr, "pev-mzi: %s: %s\n", context.c_str(), pev_last_error());
  std::exit(exit_code_for(status));
}

struct ScenarioHandle {
  PevScenario* ptr = nullptr;
  ~ScenarioHandle() { pev_scenario_free(ptr); }
};

struct ResultHandle {
  PevResult* ptr = nullptr;
  ~ResultHandle() { pev_result_free(ptr); }
};

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int parse_mode(const std::string& mode) {
  if (mode == "closed") return PEV_MODE_CLOSED_FORM;
  if (mode == "pipeline") return PEV_MODE_PIPELINE;
  if (mode == "both") return PEV_MODE_BOTH;
  std::fprintf(stderr, "pev-mzi: unknown mode '%s' (use closed|pipeline|both)\n",
               mode.c_str());
  std::exit(kExitUsage);
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    std::fprintf(stderr, "pev-mzi: cannot create output directory %s\n",
                 dir.string().c_str());
    std::exit(kExitUsage);
  }
  // Probe writability up front so a failed run leaves no partial files.
  fs::path probe = dir / ".write-probe";
  std::FILE* f = std::fopen(probe.string().c_str(), "w");
  if (f == nullptr) {
    std::fprintf(stderr, "pev-mzi: output directory %s is not writable\n",
                 dir.string().c_str());
    std::exit(kExitUsage);
  }
  std::fclose(f);
  fs::remove(probe, ec);
}

void write_file(const fs::path& path, const std::string& content) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (f == nullptr) {
    std::fprintf(stderr, "pev-mzi: cannot write %s: %s\n", path.string().c_str(),
                 std::strerror(errno));
    std::exit(kExitUsage);
  }
  std::fwrite(content.data(), 1, content.size(), f);
  std::fclose(f);
}

std::string curve_csv(const PevResult* result) {
  size_t n = 0;
  pev_result_curve_length(result, &n);
  std::string out = "t_bar,prob_d1,prob_d2,cum_d1,cum_d2\n";
  double cum1 = 0.0, cum2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double tb = 0.0, p1 = 0.0, p2 = 0.0;
    pev_result_curve_point(result, PEV_DETECTOR_D1, i, &tb, &p1);
    pev_result_curve_point(result, PEV_DETECTOR_D2, i, &tb, &p2);
    cum1 += p1;
    cum2 += p2;
    out += fmt12(tb) + "," + fmt12(p1) + "," + fmt12(p2) + "," + fmt12(cum1) +
           "," + fmt12(cum2) + "\n";
  }
  return out;
}

struct RunArtifacts {
  double p_d1 = 0.0;
  double p_d2 = 0.0;
};

RunArtifacts emit_run(const PevScenario* scenario, const PevResult* result,
                      const fs::path& out_dir, int mode) {
  std::string csv = curve_csv(result);
  write_file(out_dir / "curve_d1.csv", csv);
  write_file(out_dir / "curve_d2.csv", csv);

  double p1 = 0.0, p2 = 0.0;
  pev_result_totals(result, &p1, &p2);
  char digest[17] = {0};
  pev_result_digest(result, digest);
  double delta = 0.0;
  pev_result_convergence_delta(result, &delta);
  double wall = 0.0;
  pev_result_wall_ms(result, &wall);

  std::string report;
  report += "scenario digest: " + std::string(digest) + "\n";
  report += "mode: " + std::string(mode == PEV_MODE_CLOSED_FORM ? "closed"
                                   : mode == PEV_MODE_PIPELINE  ? "pipeline"
                                                                : "both") +
            "\n";
  report += "p_d1: " + fmt12(p1) + "\n";
  report += "p_d2: " + fmt12(p2) + "\n";
  report += "grid convergence delta (h vs 2h): " + fmt12(delta) + "\n";
  if (mode == PEV_MODE_BOTH) {
    double disc = 0.0;
    if (pev_result_discrepancy(result, &disc) == PEV_OK)
      report += "max engine/closed-form density discrepancy: " + fmt12(disc) + "\n";
  }
  size_t steps = 0;
  pev_result_step_count(result, &steps);
  if (steps > 0) {
    report += "step log:\n";
    for (size_t i = 0; i < steps; ++i) {
      const char* label = nullptr;
      const char* op = nullptr;
      double pre = 0.0, post = 0.0;
      pev_result_step(result, i, &label, &op, &pre, &post);
      report += "  " + std::string(label) + ": " + op + " (pre-norm " +
                fmt12(pre) + ", post-norm " + fmt12(post) + ")\n";
    }
  } else {
    report += "step log: (closed-form mode, pipeline not run)\n";
  }
  size_t warn_count = 0;
  pev_scenario_warning_count(scenario, &warn_count);
  for (size_t i = 0; i < warn_count; ++i) {
    const char* msg = nullptr;
    pev_scenario_warning(scenario, i, &msg);
    report += "warning: " + std::string(msg) + "\n";
  }
  report += "curve files: curve_d1.csv curve_d2.csv\n";
  report += "wall ms: " + fmt12(wall) + "\n";
  write_file(out_dir / "report.txt", report);
  return {p1, p2};
}

void print_warnings(const PevScenario* scenario) {
  size_t n = 0;
  pev_scenario_warning_count(scenario, &n);
  for (size_t i = 0; i < n; ++i) {
    const char* msg = nullptr;
    pev_scenario_warning(scenario, i, &msg);
    std::fprintf(stderr, "pev-mzi: warning: %s\n", msg);
  }
}

int run_one(PevScenario* scenario, const std::string& out_dir,
            const std::string& mode_str, const std::string& dump_path) {
  int mode = parse_mode(mode_str);
  prepare_out_dir(out_dir);
  print_warnings(scenario);

  ResultHandle result;
  if (int rc = pev_run(scenario, mode, &result.ptr)) fail(rc, "run");
  RunArtifacts art = emit_run(scenario, result.ptr, out_dir, mode);

  if (!dump_path.empty()) {
    if (mode == PEV_MODE_CLOSED_FORM) {
      std::fprintf(stderr, "pev-mzi: --dump-state needs mode pipeline or both\n");
      return kExitUsage;
    }
    if (int rc = pev_dump_state(scenario, dump_path.c_str())) fail(rc, "state dump");
  }

  std::printf("p_d1 = %s\np_d2 = %s\n", fmt12(art.p_d1).c_str(), fmt12(art.p_d2).c_str());
  std::printf("outputs in %s\n", out_dir.c_str());
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& param,
              const std::string& values_csv, const std::string& out_dir,
              const std::string& mode_str) {
  int mode = parse_mode(mode_str);
  std::vector<std::string> values;
  std::string cur;
  for (char c : values_csv) {
    if (c == ',') {
      values.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) values.push_back(cur);
  if (values.empty()) {
    std::fprintf(stderr, "pev-mzi: sweep needs a non-empty --values list\n");
    return kExitUsage;
  }

  ScenarioHandle base;
  if (int rc = pev_scenario_from_file(config.c_str(), &base.ptr)) fail(rc, config);
  prepare_out_dir(out_dir);

  std::string summary = "value,p_d1,p_d2\n";
  for (const auto& value : values) {
    ScenarioHandle modified;
    if (int rc = pev_scenario_with_param(base.ptr, param.c_str(), value.c_str(),
                                         &modified.ptr))
      fail(rc, param + "=" + value);
    std::string sub = value;
    for (char& c : sub)
      if (c == ':' || c == '/' || c == ',') c = '_';
    fs::path dir = fs::path(out_dir) / (param + "=" + sub);
    prepare_out_dir(dir);
    print_warnings(modified.ptr);
    ResultHandle result;
    if (int rc = pev_run(modified.ptr, mode, &result.ptr))
      fail(rc, param + "=" + value);
    RunArtifacts art = emit_run(modified.ptr, result.ptr, dir, mode);
    summary += value + "," + fmt12(art.p_d1) + "," + fmt12(art.p_d2) + "\n";
  }
  write_file(fs::path(out_dir) / "sweep_summary.csv", summary);
  std::printf("sweep outputs in %s\n", out_dir.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon Mach-Zehnder interferometer simulator "
               "(spacetime wavefunction, step-wise projection evolution)"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir = "out", mode = "closed";
  std::string dump_path;
  std::string sweep_param, sweep_values;

  auto* run = app.add_subcommand("run", "Run a scenario config file");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--mode", mode, "closed|pipeline|both");
  run->add_option("--dump-state", dump_path, "write the final pipeline state (binary)");

  auto* preset = app.add_subcommand("preset", "Run a named preset");
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--out", out_dir, "output directory");
  preset->add_option("--mode", mode, "closed|pipeline|both");
  preset->add_option("--dump-state", dump_path, "write the final pipeline state (binary)");

  auto* sweep = app.add_subcommand("sweep", "Run a config once per parameter value");
  sweep->add_option("config", config_path, "scenario config file")->required();
  sweep->add_option("--param", sweep_param, "parameter to vary")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--mode", mode, "closed|pipeline|both");

  auto* list = app.add_subcommand("list-presets", "List preset names");

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force verifier utilities");
  std::string fixture_path = "fixtures/derived_values.csv";
  auto* regen = oracle_cmd->add_subcommand("regen", "Regenerate the derived-values fixture");
  regen->add_option("--out", fixture_path, "fixture CSV path");
  oracle_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (list->parsed()) {
    size_t n = 0;
    pev_preset_count(&n);
    for (size_t i = 0; i < n; ++i) {
      const char* name = nullptr;
      pev_preset_name(i, &name);
      std::printf("%s\n", name);
    }
    return 0;
  }

  if (oracle_cmd->parsed()) {
    if (int rc = pev_oracle_regen(fixture_path.c_str())) fail(rc, fixture_path);
    std::printf("wrote %s\n", fixture_path.c_str());
    return 0;
  }

  if (run->parsed()) {
    ScenarioHandle scenario;
    if (int rc = pev_scenario_from_file(config_path.c_str(), &scenario.ptr))
      fail(rc, config_path);
    return run_one(scenario.ptr, out_dir, mode, dump_path);
  }

  if (preset->parsed()) {
    ScenarioHandle scenario;
    if (int rc = pev_scenario_preset(preset_name.c_str(), &scenario.ptr))
      fail(rc, preset_name);
    return run_one(scenario.ptr, out_dir, mode, dump_path);
  }

  if (sweep->parsed()) {
    return cmd_sweep(config_path, sweep_param, sweep_values, out_dir, mode);
  }

  return kExitUsage;
}
