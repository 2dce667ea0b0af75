// Command-line front end. Links only the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgnav/sgnav.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int exit_code(int status) {
  switch (status) {
    case SGNAV_OK: return kExitOk;
    case SGNAV_ERR_CONFIG:
    case SGNAV_ERR_INVALID_ARGUMENT: return kExitConfig;
    case SGNAV_ERR_NUMERIC: return kExitNumeric;
    default: return kExitFailure;
  }
}

int report(int status, const char* what) {
  if (status != SGNAV_OK) {
    std::fprintf(stderr, "sgnav-cli %s: %s: %s\n", what, sgnav_last_error_kind(),
                 sgnav_last_error());
  }
  return exit_code(status);
}

std::filesystem::path metrics_dir() {
  const char* env = std::getenv("SGNAV_METRICS_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("metrics");
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::string>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out.push_back(key);
    }
  }
}

std::vector<std::string> config_keys() {
  sgnav_config* c = nullptr;
  char* text = nullptr;
  std::vector<std::string> keys;
  if (sgnav_config_new(&c) == SGNAV_OK && sgnav_config_to_json(c, &text) == SGNAV_OK) {
    flatten(nlohmann::json::parse(text), "", keys);
  }
  sgnav_string_free(text);
  sgnav_config_free(c);
  return keys;
}

// --config FILE plus one --<key> flag per RunConfig field.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", file, "RunConfig JSON file");
    for (const auto& k : keys) {
      app->add_option("--" + k, values[k], "RunConfig field " + k)->group("Run config");
    }
  }

  // Builds the config; on failure returns the status and leaves *out null.
  int build(CLI::App* app, sgnav_config** out) const {
    *out = nullptr;
    sgnav_config* c = nullptr;
    int s = file.empty() ? sgnav_config_new(&c) : sgnav_config_load(file.c_str(), &c);
    if (s != SGNAV_OK) return s;
    for (const auto& [k, v] : values) {
      if (app->count("--" + k) == 0) continue;
      s = sgnav_config_set(c, k.c_str(), v.c_str());
      if (s != SGNAV_OK) {
        sgnav_config_free(c);
        return s;
      }
    }
    *out = c;
    return SGNAV_OK;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-graph conditioned navigation: training and evaluation harness"};
  app.require_subcommand(1);
  const std::vector<std::string> keys = config_keys();

  auto* train = app.add_subcommand("train", "Train an agent; metrics go to $SGNAV_METRICS_DIR");
  ConfigFlags train_cfg;
  train_cfg.attach(train, keys);
  std::string train_checkpoint;
  train->add_option("--checkpoint", train_checkpoint,
                    "Checkpoint path (default: <metrics>/checkpoint.bin)");

  auto* eval = app.add_subcommand("eval", "Success rate per initial distance");
  ConfigFlags eval_cfg;
  eval_cfg.attach(eval, keys);
  std::string eval_checkpoint;
  std::string policy = "checkpoint";
  std::vector<double> distances{0.5, 1.0, 1.5, 2.0, 2.4};
  long episodes = 200;
  std::uint64_t eval_seed = 0;
  eval->add_option("--checkpoint", eval_checkpoint, "Trained agent");
  eval->add_option("--policy", policy, "checkpoint | expert | random")
      ->check(CLI::IsMember({"checkpoint", "expert", "random"}));
  eval->add_option("--distances", distances, "Initial distance buckets [m]")->delimiter(',');
  eval->add_option("--episodes", episodes, "Episodes per bucket")->check(CLI::PositiveNumber);
  eval->get_option("--distances")->check(CLI::Range(0.0, 3.0));
  eval->add_option("--eval-seed", eval_seed, "Evaluation seed");

  auto* gen = app.add_subcommand("gen-scene", "Write a generated scene file");
  std::string family = "SIMPLE";
  std::uint64_t scene_seed = 0;
  std::string scene_out;
  gen->add_option("--family", family, "SIMPLE | TWO_WALL | RANDOM_CHAIRS");
  gen->add_option("--seed", scene_seed, "Scene seed");
  gen->add_option("--out", scene_out, "Output scene file")->required();

  auto* plot = app.add_subcommand("plot", "Render SVG plots from metrics CSVs");
  std::string plot_in;
  std::string plot_out;
  plot->add_option("--metrics", plot_in, "Metrics directory (default: $SGNAV_METRICS_DIR)");
  plot->add_option("--out", plot_out, "Output directory (default: metrics directory)");

  auto* grad = app.add_subcommand("gradcheck", "Analytic vs finite-difference SAC gradients");
  ConfigFlags grad_cfg;
  grad_cfg.attach(grad, keys);
  std::uint64_t grad_seed = 0;
  int batches = 20;
  int weights = 200;
  double tolerance = 1e-4;
  grad->add_option("--check-seed", grad_seed, "Seed for weights and batches");
  grad->add_option("--batches", batches, "Random batches");
  grad->add_option("--weights", weights, "Checked weights per batch");
  grad->add_option("--tolerance", tolerance, "Maximum relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const std::filesystem::path metrics = metrics_dir();

  if (*train) {
    sgnav_config* c = nullptr;
    if (int s = train_cfg.build(train, &c); s != SGNAV_OK) return report(s, "train");
    const std::string ck =
        train_checkpoint.empty() ? (metrics / "checkpoint.bin").string() : train_checkpoint;
    sgnav_train_summary summary{};
    const int s = sgnav_train(c, metrics.c_str(), ck.c_str(), &summary);
    if (s == SGNAV_OK) {
      std::printf("steps %ld  episodes %ld  level %d (R=%.2f m, phi=%.3f rad)\n",
                  summary.env_steps, summary.episodes, summary.level_index, summary.level_R,
                  summary.level_phi);
      std::printf("metrics: %s  checkpoint: %s\n", metrics.c_str(), ck.c_str());
    }
    sgnav_config_free(c);
    return report(s, "train");
  }

  if (*eval) {
    sgnav_config* c = nullptr;
    const bool want_config = policy != "checkpoint" || !eval_cfg.file.empty() ||
                             std::any_of(eval_cfg.values.begin(), eval_cfg.values.end(),
                                         [&](const auto& kv) { return eval->count("--" + kv.first) > 0; });
    if (want_config) {
      if (int s = eval_cfg.build(eval, &c); s != SGNAV_OK) return report(s, "eval");
    }
    const int pol = policy == "expert"   ? SGNAV_POLICY_EXPERT
                    : policy == "random" ? SGNAV_POLICY_RANDOM
                                         : SGNAV_POLICY_CHECKPOINT;
    const std::string ck =
        eval_checkpoint.empty() ? (metrics / "checkpoint.bin").string() : eval_checkpoint;
    sgnav_report* r = nullptr;
    int s = sgnav_eval(c, ck.c_str(), pol, distances.data(), distances.size(), episodes,
                       eval_seed, &r);
    sgnav_config_free(c);
    if (s != SGNAV_OK) return report(s, "eval");
    std::printf("%8s %9s %10s %12s\n", "R [m]", "episodes", "success", "mean steps");
    for (size_t i = 0; i < sgnav_report_size(r); ++i) {
      sgnav_eval_bucket b{};
      sgnav_report_bucket(r, i, &b);
      std::printf("%8.2f %9ld %10.3f %12.1f\n", b.distance, b.episodes, b.success_rate,
                  b.mean_length);
    }
    std::filesystem::create_directories(metrics);
    s = sgnav_report_write_csv(r, (metrics / "eval.csv").c_str());
    sgnav_report_free(r);
    return report(s, "eval");
  }

  if (*gen) {
    return report(sgnav_gen_scene(family.c_str(), scene_seed, scene_out.c_str()), "gen-scene");
  }

  if (*plot) {
    const std::string in = plot_in.empty() ? metrics.string() : plot_in;
    const std::string out = plot_out.empty() ? in : plot_out;
    return report(sgnav_plot(in.c_str(), out.c_str()), "plot");
  }

  if (*grad) {
    sgnav_config* c = nullptr;
    if (int s = grad_cfg.build(grad, &c); s != SGNAV_OK) return report(s, "gradcheck");
    double worst = 0.0;
    const int s = sgnav_gradcheck(c, grad_seed, batches, weights, &worst);
    sgnav_config_free(c);
    if (s != SGNAV_OK) return report(s, "gradcheck");
    std::printf("max relative error %.3e over %d batches (tolerance %.1e)\n", worst, batches,
                tolerance);
    if (!(worst < tolerance)) {
      std::fprintf(stderr, "sgnav-cli gradcheck: gradient mismatch\n");
      return kExitNumeric;
    }
    return kExitOk;
  }
  return kExitFailure;
}
