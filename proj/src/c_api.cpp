#include "sgnav/sgnav.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>

#include "sgnav/checkpoint.hpp"
#include "sgnav/error.hpp"
#include "sgnav/evaluation.hpp"
#include "sgnav/plots.hpp"
#include "sgnav/run_config.hpp"
#include "sgnav/scene_gen.hpp"
#include "sgnav/scene_io.hpp"
#include "sgnav/training.hpp"

struct sgnav_config {
  sgnav::RunConfig config;
};

struct sgnav_report {
  sgnav::EvalReport report;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

int status_for(sgnav::ErrorCode code) {
  using sgnav::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SGNAV_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return SGNAV_ERR_CONFIG;
    case ErrorCode::NaNDetected: return SGNAV_ERR_NUMERIC;
    case ErrorCode::Io: return SGNAV_ERR_IO;
    case ErrorCode::EmptyGrid:
    case ErrorCode::NoTargetCell:
    case ErrorCode::InitExhausted: return SGNAV_ERR_GEOMETRY;
    case ErrorCode::EmptyLabel:
    case ErrorCode::ZeroVector:
    case ErrorCode::EmptyGraph:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyBucket: return SGNAV_ERR_DATA;
  }
  return SGNAV_ERR_INTERNAL;
}

int fail(int status, const char* kind, std::string message) {
  g_kind = kind;
  g_error = std::move(message);
  return status;
}

// Runs `f`, translating exceptions into status codes.
template <typename F>
int guarded(F&& f) {
  try {
    f();
    g_error.clear();
    g_kind.clear();
    return SGNAV_OK;
  } catch (const sgnav::Error& e) {
    return fail(status_for(e.code()), sgnav::to_string(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SGNAV_ERR_IO, "Io", e.what());
  } catch (const std::exception& e) {
    return fail(SGNAV_ERR_INTERNAL, "Internal", e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw sgnav::Error(sgnav::ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

const char* sgnav_version(void) { return "0.1.0"; }
const char* sgnav_last_error(void) { return g_error.c_str(); }
const char* sgnav_last_error_kind(void) { return g_kind.c_str(); }
void sgnav_string_free(char* s) { delete[] s; }

int sgnav_config_new(sgnav_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new sgnav_config{};
  });
}

int sgnav_config_load(const char* path, sgnav_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sgnav_config{sgnav::load_run_config(path)};
  });
}

int sgnav_config_parse(const char* json, sgnav_config** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw sgnav::Error(sgnav::ErrorCode::Config, e.what());
    }
    *out = new sgnav_config{sgnav::run_config_from_json(j)};
  });
}

int sgnav_config_set(sgnav_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config != nullptr && key != nullptr && value != nullptr, "null argument");
    nlohmann::json j = sgnav::to_json(config->config);
    nlohmann::json* node = &j;
    std::string k = key;
    std::size_t start = 0;
    for (;;) {
      const std::size_t dot = k.find('.', start);
      const std::string part = k.substr(start, dot - start);
      if (!node->is_object() || !node->contains(part)) {
        throw sgnav::Error(sgnav::ErrorCode::Config, std::string("unknown config key ") + key);
      }
      node = &(*node)[part];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (node->is_object()) {
      throw sgnav::Error(sgnav::ErrorCode::Config, std::string(key) + " is a section");
    }
    if (node->is_string()) {
      // accept both `NO_GRAPH` and the JSON literal `"NO_GRAPH"`
      const nlohmann::json literal = nlohmann::json::parse(value, nullptr, false);
      *node = literal.is_string() ? literal : nlohmann::json(value);
    } else {
      try {
        *node = nlohmann::json::parse(value);
      } catch (const nlohmann::json::exception&) {
        throw sgnav::Error(sgnav::ErrorCode::Config,
                           std::string("bad value '") + value + "' for " + key);
      }
    }
    config->config = sgnav::run_config_from_json(j);
  });
}

int sgnav_config_to_json(const sgnav_config* config, char** out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    const std::string s = sgnav::to_json(config->config).dump(2);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

int sgnav_config_save(const sgnav_config* config, const char* path) {
  return guarded([&] {
    require(config != nullptr && path != nullptr, "null argument");
    sgnav::save_run_config(config->config, path);
  });
}

void sgnav_config_free(sgnav_config* config) { delete config; }

int sgnav_train(const sgnav_config* config, const char* metrics_dir, const char* checkpoint_path,
                sgnav_train_summary* out) {
  return guarded([&] {
    require(config != nullptr, "null config");
    sgnav::TrainingOutput o;
    if (metrics_dir != nullptr) o.metrics_dir = metrics_dir;
    if (checkpoint_path != nullptr) o.checkpoint_path = checkpoint_path;
    const sgnav::TrainingResult r = sgnav::run_training(config->config, o);
    if (out != nullptr) {
      const auto& lvl = r.curriculum.current();
      *out = {r.env_steps, static_cast<long>(r.episodes.size()), lvl.index, lvl.R, lvl.phi};
    }
  });
}

int sgnav_eval(const sgnav_config* config, const char* checkpoint, int policy,
               const double* distances, size_t num_distances, long episodes_per_bucket,
               uint64_t seed, sgnav_report** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    require(distances != nullptr || num_distances == 0, "null distances");
    sgnav::EvalOptions opt;
    opt.distances.assign(distances, distances + num_distances);
    opt.episodes_per_bucket = episodes_per_bucket;
    opt.seed = seed;
    auto report = std::make_unique<sgnav_report>();
    switch (policy) {
      case SGNAV_POLICY_CHECKPOINT: {
        require(checkpoint != nullptr, "checkpoint policy needs a checkpoint path");
        const sgnav::Checkpoint ck = sgnav::load_checkpoint(checkpoint);
        const sgnav::RunConfig& rc = config ? config->config : ck.config;
        auto p = sgnav::make_sac_policy(ck.agent, rc.env.limits);
        report->report = sgnav::run_eval_sweep(rc, *p, opt);
        break;
      }
      case SGNAV_POLICY_EXPERT: {
        require(config != nullptr, "expert policy needs a config");
        auto p = sgnav::make_expert_policy(config->config);
        report->report = sgnav::run_eval_sweep(config->config, *p, opt);
        break;
      }
      case SGNAV_POLICY_RANDOM: {
        require(config != nullptr, "random policy needs a config");
        auto p = sgnav::make_random_policy(config->config.env.limits);
        report->report = sgnav::run_eval_sweep(config->config, *p, opt);
        break;
      }
      default:
        require(false, "unknown policy");
    }
    *out = report.release();
  });
}

size_t sgnav_report_size(const sgnav_report* report) {
  return report ? report->report.buckets.size() : 0;
}

int sgnav_report_bucket(const sgnav_report* report, size_t index, sgnav_eval_bucket* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    require(index < report->report.buckets.size(), "bucket index out of range");
    const auto& b = report->report.buckets[index];
    *out = {b.distance, b.episodes, b.successes, b.success_rate(), b.mean_length};
  });
}

int sgnav_report_write_csv(const sgnav_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "null argument");
    sgnav::write_eval_csv(report->report, path);
  });
}

void sgnav_report_free(sgnav_report* report) { delete report; }

int sgnav_gen_scene(const char* family, uint64_t seed, const char* path) {
  return guarded([&] {
    require(family != nullptr && path != nullptr, "null argument");
    const auto f = sgnav::parse_scene_family(family);
    if (!f) throw sgnav::Error(sgnav::ErrorCode::Config, std::string("unknown family ") + family);
    sgnav::save_scene(sgnav::gen_scene(*f, seed), path);
  });
}

int sgnav_plot(const char* metrics_dir, const char* out_dir) {
  return guarded([&] {
    require(metrics_dir != nullptr && out_dir != nullptr, "null argument");
    sgnav::emit_plots(metrics_dir, out_dir);
  });
}

int sgnav_gradcheck(const sgnav_config* config, uint64_t seed, int batches,
                    int weights_per_batch, double* max_rel_error) {
  return guarded([&] {
    require(batches > 0 && weights_per_batch > 0, "batches and weights must be positive");
    require(max_rel_error != nullptr, "null output pointer");
    const sgnav::RunConfig rc = config ? config->config : sgnav::RunConfig{};
    const sgnav::SacConfig sc = rc.sac_config();
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int b = 0; b < batches; ++b) {
      const sgnav::SacAgent agent(sc, rng());
      const sgnav::Batch batch = sgnav::sac::random_batch(sc.obs_dim, sc.action_dim, 32, rng);
      const auto r = sgnav::gradient_check(agent, batch, rng,
                                           static_cast<std::size_t>(weights_per_batch));
      worst = std::max(worst, r.max_rel_error);
    }
    *max_rel_error = worst;
  });
}

}  // extern "C"
