// Regression seed for the training loop: SIMPLE scene, SCENE_POOLED, 5e4
// steps. The curriculum must get past the first distance level.
#include <cstdio>

#include "sgnav/training.hpp"

int main() {
  sgnav::RunConfig c;
  c.family = sgnav::SceneFamily::Simple;
  c.ablation = sgnav::Ablation::ScenePooled;
  c.total_steps = 50000;
  c.seed = 0;
  c.sac.batch_size = 64;
  const sgnav::TrainingResult r = sgnav::run_training(c);
  const auto& level = r.curriculum.current();
  const bool pass = level.R >= 1.0;
  std::printf("%s smoke_training: %zu episodes, final level %d (R=%.2f m, phi=%.3f rad), need R >= 1.0\n",
              pass ? "PASS" : "FAIL", r.episodes.size(), level.index, level.R, level.phi);
  return pass ? 0 : 1;
}
