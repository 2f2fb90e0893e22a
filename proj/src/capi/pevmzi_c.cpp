#include "pevmzi.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "core/engine.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"
#include "core/runner.hpp"
#include "core/scenarios.hpp"

struct PevScenario {
  pevmzi::Scenario scenario;
  std::vector<std::string> warnings;
};

struct PevResult {
  pevmzi::RunOutputs outputs;
};

namespace {

thread_local std::string g_last_error;

int set_error(pevmzi::ErrorKind kind, const std::string& msg) {
  g_last_error = msg;
  switch (kind) {
    case pevmzi::ErrorKind::Config: return PEV_ERR_CONFIG;
    case pevmzi::ErrorKind::Physics: return PEV_ERR_PHYSICS;
    case pevmzi::ErrorKind::Io: return PEV_ERR_IO;
    case pevmzi::ErrorKind::Invalid: return PEV_ERR_INVALID;
  }
  return PEV_ERR_INVALID;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const pevmzi::Error& e) {
    return set_error(e.kind(), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(pevmzi::ErrorKind::Invalid, "out of memory");
  } catch (const std::exception& e) {
    return set_error(pevmzi::ErrorKind::Invalid, e.what());
  }
}

int require(bool ok, const char* msg) {
  if (ok) return PEV_OK;
  return set_error(pevmzi::ErrorKind::Invalid, msg);
}

PevScenario* wrap(pevmzi::Scenario s) {
  auto* handle = new PevScenario{std::move(s), {}};
  handle->warnings = pevmzi::validate(handle->scenario);
  return handle;
}

} // namespace

extern "C" {

const char* pev_version(void) { return "pev-mzi 1.0.0"; }

const char* pev_last_error(void) { return g_last_error.c_str(); }

int pev_preset_count(size_t* count) {
  if (int rc = require(count != nullptr, "count is null")) return rc;
  *count = pevmzi::preset_names().size();
  return PEV_OK;
}

int pev_preset_name(size_t index, const char** name) {
  if (int rc = require(name != nullptr, "name is null")) return rc;
  const auto& names = pevmzi::preset_names();
  if (int rc = require(index < names.size(), "preset index out of range")) return rc;
  *name = names[index].c_str();
  return PEV_OK;
}

int pev_scenario_preset(const char* name, PevScenario** out) {
  if (int rc = require(name != nullptr && out != nullptr, "null argument")) return rc;
  return guarded([&] {
    *out = wrap(pevmzi::preset(name));
    return PEV_OK;
  });
}

int pev_scenario_from_file(const char* path, PevScenario** out) {
  if (int rc = require(path != nullptr && out != nullptr, "null argument")) return rc;
  return guarded([&] {
    *out = wrap(pevmzi::load_config_file(path));
    return PEV_OK;
  });
}

int pev_scenario_from_string(const char* config_text, PevScenario** out) {
  if (int rc = require(config_text != nullptr && out != nullptr, "null argument")) return rc;
  return guarded([&] {
    *out = wrap(pevmzi::parse_config(config_text));
    return PEV_OK;
  });
}

int pev_scenario_with_param(const PevScenario* s, const char* key,
                            const char* value, PevScenario** out) {
  if (int rc = require(s != nullptr && key != nullptr && value != nullptr && out != nullptr,
                       "null argument"))
    return rc;
  return guarded([&] {
    pevmzi::Scenario modified = s->scenario;
    pevmzi::set_param(modified, key, value);
    *out = wrap(std::move(modified));
    return PEV_OK;
  });
}

void pev_scenario_free(PevScenario* s) { delete s; }

int pev_scenario_render(const PevScenario* s, char** out_text) {
  if (int rc = require(s != nullptr && out_text != nullptr, "null argument")) return rc;
  return guarded([&]() -> int {
    std::string text = pevmzi::render_config(s->scenario);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) return set_error(pevmzi::ErrorKind::Invalid, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
    return PEV_OK;
  });
}

void pev_string_free(char* text) { std::free(text); }

int pev_scenario_digest(const PevScenario* s, char out_hex[17]) {
  if (int rc = require(s != nullptr && out_hex != nullptr, "null argument")) return rc;
  return guarded([&] {
    std::string d = pevmzi::digest(s->scenario);
    std::memcpy(out_hex, d.c_str(), 17);
    return PEV_OK;
  });
}

int pev_scenario_warning_count(const PevScenario* s, size_t* count) {
  if (int rc = require(s != nullptr && count != nullptr, "null argument")) return rc;
  *count = s->warnings.size();
  return PEV_OK;
}

int pev_scenario_warning(const PevScenario* s, size_t index, const char** message) {
  if (int rc = require(s != nullptr && message != nullptr, "null argument")) return rc;
  if (int rc = require(index < s->warnings.size(), "warning index out of range")) return rc;
  *message = s->warnings[index].c_str();
  return PEV_OK;
}

int pev_run(const PevScenario* s, int mode, PevResult** out) {
  if (int rc = require(s != nullptr && out != nullptr, "null argument")) return rc;
  if (int rc = require(mode >= PEV_MODE_CLOSED_FORM && mode <= PEV_MODE_BOTH,
                       "unknown run mode"))
    return rc;
  return guarded([&] {
    auto outputs =
        pevmzi::run_scenario(s->scenario, static_cast<pevmzi::RunMode>(mode));
    *out = new PevResult{std::move(outputs)};
    return PEV_OK;
  });
}

void pev_result_free(PevResult* r) { delete r; }

int pev_result_totals(const PevResult* r, double* p_d1, double* p_d2) {
  if (int rc = require(r != nullptr && p_d1 != nullptr && p_d2 != nullptr, "null argument"))
    return rc;
  *p_d1 = r->outputs.p_d1;
  *p_d2 = r->outputs.p_d2;
  return PEV_OK;
}

int pev_result_curve_length(const PevResult* r, size_t* count) {
  if (int rc = require(r != nullptr && count != nullptr, "null argument")) return rc;
  *count = r->outputs.curve_d1.points.size();
  return PEV_OK;
}

int pev_result_curve_point(const PevResult* r, int detector, size_t index,
                           double* t_bar, double* probability) {
  if (int rc = require(r != nullptr && t_bar != nullptr && probability != nullptr,
                       "null argument"))
    return rc;
  if (int rc = require(detector == PEV_DETECTOR_D1 || detector == PEV_DETECTOR_D2,
                       "unknown detector"))
    return rc;
  const auto& curve =
      detector == PEV_DETECTOR_D1 ? r->outputs.curve_d1 : r->outputs.curve_d2;
  if (int rc = require(index < curve.points.size(), "curve index out of range")) return rc;
  *t_bar = curve.points[index].t_bar;
  *probability = curve.points[index].prob;
  return PEV_OK;
}

int pev_result_discrepancy(const PevResult* r, double* max_abs) {
  if (int rc = require(r != nullptr && max_abs != nullptr, "null argument")) return rc;
  if (int rc = require(r->outputs.max_discrepancy.has_value(),
                       "discrepancy is only available in both mode"))
    return rc;
  *max_abs = *r->outputs.max_discrepancy;
  return PEV_OK;
}

int pev_result_convergence_delta(const PevResult* r, double* delta) {
  if (int rc = require(r != nullptr && delta != nullptr, "null argument")) return rc;
  *delta = r->outputs.convergence_delta_2h;
  return PEV_OK;
}

int pev_result_step_count(const PevResult* r, size_t* count) {
  if (int rc = require(r != nullptr && count != nullptr, "null argument")) return rc;
  *count = r->outputs.step_log.has_value() ? r->outputs.step_log->steps.size() : 0;
  return PEV_OK;
}

int pev_result_step(const PevResult* r, size_t index, const char** tau_label,
                    const char** op, double* pre_norm, double* post_norm) {
  if (int rc = require(r != nullptr && tau_label != nullptr && op != nullptr &&
                           pre_norm != nullptr && post_norm != nullptr,
                       "null argument"))
    return rc;
  if (int rc = require(r->outputs.step_log.has_value(), "no step log in this mode")) return rc;
  const auto& steps = r->outputs.step_log->steps;
  if (int rc = require(index < steps.size(), "step index out of range")) return rc;
  *tau_label = steps[index].tau_label.c_str();
  *op = steps[index].op.c_str();
  *pre_norm = steps[index].pre_norm;
  *post_norm = steps[index].post_norm;
  return PEV_OK;
}

int pev_result_wall_ms(const PevResult* r, double* ms) {
  if (int rc = require(r != nullptr && ms != nullptr, "null argument")) return rc;
  *ms = r->outputs.wall_ms;
  return PEV_OK;
}

int pev_result_digest(const PevResult* r, char out_hex[17]) {
  if (int rc = require(r != nullptr && out_hex != nullptr, "null argument")) return rc;
  std::memcpy(out_hex, r->outputs.digest_hex.c_str(), 17);
  return PEV_OK;
}

int pev_dump_state(const PevScenario* s, const char* path) {
  if (int rc = require(s != nullptr && path != nullptr, "null argument")) return rc;
  return guarded([&] {
    auto [state, log] = pevmzi::run_pipeline(s->scenario);
    (void)log;
    pevmzi::dump_state(state, path);
    return PEV_OK;
  });
}

int pev_oracle_regen(const char* path) {
  if (int rc = require(path != nullptr, "null argument")) return rc;
  return guarded([&] {
    pevmzi::oracle::write_fixture_file(path);
    return PEV_OK;
  });
}

} // extern "C"
