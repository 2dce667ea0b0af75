// Exercises the shared library through its C header only.
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "sgnav/sgnav.h"

namespace fs = std::filesystem;

namespace {

fs::path work_dir(const char* name) {
  const char* env = std::getenv("SGNAV_TEST_TMP");
  const fs::path base = env ? fs::path(env) : fs::temp_directory_path() / "sgnav_c_api";
  const fs::path dir = base / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string json_of(const sgnav_config* c) {
  char* s = nullptr;
  REQUIRE(sgnav_config_to_json(c, &s) == SGNAV_OK);
  std::string out(s);
  sgnav_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and clean error state") {
  CHECK(std::strlen(sgnav_version()) > 0);
  sgnav_config* c = nullptr;
  REQUIRE(sgnav_config_new(&c) == SGNAV_OK);
  CHECK(std::string(sgnav_last_error()).empty());
  sgnav_config_free(c);
}

TEST_CASE("config set, serialize, reload") {
  sgnav_config* c = nullptr;
  REQUIRE(sgnav_config_new(&c) == SGNAV_OK);
  CHECK(sgnav_config_set(c, "sac.batch_size", "32") == SGNAV_OK);
  CHECK(sgnav_config_set(c, "family", "TWO_WALL") == SGNAV_OK);
  CHECK(sgnav_config_set(c, "ablation", "\"NO_GRAPH\"") == SGNAV_OK);
  const std::string before = json_of(c);
  CHECK(before.find("\"batch_size\": 32") != std::string::npos);

  CHECK(sgnav_config_set(c, "sac.no_such_field", "1") == SGNAV_ERR_CONFIG);
  CHECK(std::string(sgnav_last_error()).find("no_such_field") != std::string::npos);
  CHECK(sgnav_config_set(c, "control_fraction", "1.5") == SGNAV_ERR_CONFIG);
  CHECK(sgnav_config_set(c, "sac.batch_size", "[1,") == SGNAV_ERR_CONFIG);
  CHECK(json_of(c) == before);  // failed sets leave the config unchanged

  const fs::path dir = work_dir("config");
  const std::string path = (dir / "run.json").string();
  REQUIRE(sgnav_config_save(c, path.c_str()) == SGNAV_OK);
  sgnav_config* d = nullptr;
  REQUIRE(sgnav_config_load(path.c_str(), &d) == SGNAV_OK);
  CHECK(json_of(d) == before);
  sgnav_config_free(d);

  CHECK(sgnav_config_parse("{\"bogus\": 1}", &d) == SGNAV_ERR_CONFIG);
  CHECK(sgnav_config_load((dir / "missing.json").string().c_str(), &d) != SGNAV_OK);
  CHECK(sgnav_config_new(nullptr) == SGNAV_ERR_INVALID_ARGUMENT);
  sgnav_config_free(c);
}

TEST_CASE("train, evaluate the checkpoint, plot") {
  const fs::path dir = work_dir("train");
  sgnav_config* c = nullptr;
  REQUIRE(sgnav_config_new(&c) == SGNAV_OK);
  REQUIRE(sgnav_config_set(c, "total_steps", "1200") == SGNAV_OK);
  REQUIRE(sgnav_config_set(c, "warmup_steps", "400") == SGNAV_OK);
  REQUIRE(sgnav_config_set(c, "sac.batch_size", "32") == SGNAV_OK);
  const std::string ckpt = (dir / "agent.bin").string();
  sgnav_train_summary s{};
  REQUIRE(sgnav_train(c, dir.string().c_str(), ckpt.c_str(), &s) == SGNAV_OK);
  CHECK(s.env_steps == 1200);
  CHECK(s.episodes > 0);
  CHECK(s.level_R >= 0.5);
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(dir / "difficulty.csv"));

  const double distances[] = {0.5, 2.0};
  sgnav_report* r = nullptr;
  // config NULL: use the one stored in the checkpoint
  REQUIRE(sgnav_eval(nullptr, ckpt.c_str(), SGNAV_POLICY_CHECKPOINT, distances, 2, 10, 3, &r) ==
          SGNAV_OK);
  REQUIRE(sgnav_report_size(r) == 2);
  sgnav_eval_bucket b{};
  REQUIRE(sgnav_report_bucket(r, 1, &b) == SGNAV_OK);
  CHECK(b.distance == 2.0);
  CHECK(b.episodes == 10);
  CHECK(b.success_rate >= 0.0);
  CHECK(b.success_rate <= 1.0);
  CHECK(sgnav_report_bucket(r, 2, &b) == SGNAV_ERR_INVALID_ARGUMENT);
  REQUIRE(sgnav_report_write_csv(r, (dir / "eval.csv").string().c_str()) == SGNAV_OK);
  sgnav_report_free(r);

  const fs::path plots = dir / "plots";
  REQUIRE(sgnav_plot(dir.string().c_str(), plots.string().c_str()) == SGNAV_OK);
  CHECK(fs::exists(plots / "difficulty.svg"));
  CHECK(fs::exists(plots / "success.svg"));
  sgnav_config_free(c);
}

TEST_CASE("expert evaluation and error mapping") {
  sgnav_config* c = nullptr;
  REQUIRE(sgnav_config_new(&c) == SGNAV_OK);
  const double d2[] = {2.0};
  sgnav_report* r = nullptr;
  REQUIRE(sgnav_eval(c, nullptr, SGNAV_POLICY_EXPERT, d2, 1, 40, 1, &r) == SGNAV_OK);
  sgnav_eval_bucket b{};
  REQUIRE(sgnav_report_bucket(r, 0, &b) == SGNAV_OK);
  CHECK(b.success_rate >= 0.9);
  sgnav_report_free(r);

  CHECK(sgnav_eval(c, nullptr, SGNAV_POLICY_EXPERT, d2, 1, 0, 1, &r) == SGNAV_ERR_DATA);
  CHECK(std::string(sgnav_last_error_kind()) == "EmptyBucket");
  const double far[] = {4.0};
  CHECK(sgnav_eval(c, nullptr, SGNAV_POLICY_RANDOM, far, 1, 5, 1, &r) ==
        SGNAV_ERR_INVALID_ARGUMENT);
  CHECK(sgnav_eval(c, nullptr, 42, d2, 1, 5, 1, &r) == SGNAV_ERR_INVALID_ARGUMENT);
  CHECK(sgnav_eval(nullptr, nullptr, SGNAV_POLICY_RANDOM, d2, 1, 5, 1, &r) ==
        SGNAV_ERR_INVALID_ARGUMENT);
  CHECK(sgnav_eval(c, "/nonexistent.bin", SGNAV_POLICY_CHECKPOINT, d2, 1, 5, 1, &r) ==
        SGNAV_ERR_IO);

  // no admissible start anywhere in the room
  REQUIRE(sgnav_config_set(c, "footprint.radius", "4.0") == SGNAV_OK);
  sgnav_train_summary s{};
  REQUIRE(sgnav_config_set(c, "total_steps", "10") == SGNAV_OK);
  CHECK(sgnav_train(c, nullptr, nullptr, &s) == SGNAV_ERR_GEOMETRY);
  CHECK(std::string(sgnav_last_error_kind()) == "InitExhausted");
  sgnav_config_free(c);
}

TEST_CASE("scene generation and gradient check") {
  const fs::path dir = work_dir("scene");
  const std::string path = (dir / "chairs.json").string();
  REQUIRE(sgnav_gen_scene("RANDOM_CHAIRS", 7, path.c_str()) == SGNAV_OK);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("chair") != std::string::npos);
  CHECK(sgnav_gen_scene("CASTLE", 7, path.c_str()) == SGNAV_ERR_CONFIG);

  double err = 1.0;
  REQUIRE(sgnav_gradcheck(nullptr, 5, 2, 100, &err) == SGNAV_OK);
  CHECK(err < 1e-4);
  CHECK(sgnav_gradcheck(nullptr, 5, 0, 100, &err) == SGNAV_ERR_INVALID_ARGUMENT);
}
