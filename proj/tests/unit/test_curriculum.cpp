#include <deque>
#include <random>

#include "doctest.h"
#include "sgnav/curriculum.hpp"
#include "sgnav/error.hpp"

using namespace sgnav;

namespace {

void feed(Curriculum& c, int successes, int failures) {
  for (int i = 0; i < failures; ++i) c.record_outcome(false, EpisodeMode::Policy);
  for (int i = 0; i < successes; ++i) c.record_outcome(true, EpisodeMode::Policy);
}

}  // namespace

TEST_CASE("start level") {
  CHECK(Curriculum().start_level().R == 0.5);
  CHECK(Curriculum().start_level().phi == 0.0);
  CurriculumConfig cfg;
  cfg.r_min = 0.0;
  CHECK(Curriculum(cfg).current().R == 0.0);
}

TEST_CASE("26 of 30 advances phi, 25 of 30 does not") {
  Curriculum c;
  feed(c, 25, 5);
  CHECK_FALSE(c.maybe_advance());
  CHECK(c.current().phi == 0.0);
  Curriculum d;
  feed(d, 26, 4);
  CHECK(d.maybe_advance());
  CHECK(d.current().phi == doctest::Approx(kPi / 8));
  CHECK(d.current().R == 0.5);
  CHECK(d.current().index == 1);
  CHECK(d.window().empty());
}

TEST_CASE("phi at its maximum resets and R increases") {
  Curriculum c;
  for (int i = 0; i < 8; ++i) {
    feed(c, 30, 0);
    REQUIRE(c.maybe_advance());
  }
  CHECK(c.current().phi == kPi);
  feed(c, 27, 3);
  CHECK(c.maybe_advance());
  CHECK(c.current().phi == 0.0);
  CHECK(c.current().R == 1.0);
}

TEST_CASE("full window required; window slides") {
  Curriculum c;
  feed(c, 29, 0);
  CHECK_FALSE(c.maybe_advance());
  feed(c, 31, 0);
  CHECK(c.window().size() == 30);
  CHECK(c.maybe_advance());
  // immediately after advancing, 29 more successes cannot advance again
  feed(c, 29, 0);
  CHECK_FALSE(c.maybe_advance());
}

TEST_CASE("control episodes never enter the window") {
  Curriculum c;
  for (int i = 0; i < 100; ++i) {
    c.record_outcome(true, EpisodeMode::Control);
    CHECK_FALSE(c.maybe_advance());
  }
  CHECK(c.window().empty());
}

TEST_CASE("window equals filter-then-tail oracle") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  Curriculum c;
  std::deque<bool> oracle;
  for (int i = 0; i < 500; ++i) {
    const bool policy = coin(rng);
    const bool success = coin(rng);
    c.record_outcome(success, policy ? EpisodeMode::Policy : EpisodeMode::Control);
    if (policy) {
      oracle.push_back(success);
      if (oracle.size() > 30) oracle.pop_front();
    }
    CHECK(c.window() == oracle);
  }
}

TEST_CASE("levels escalate monotonically and saturate") {
  Curriculum c;
  DifficultyLevel prev = c.current();
  int advances = 0;
  for (int i = 0; i < 100; ++i) {
    feed(c, 30, 0);
    const bool adv = c.maybe_advance();
    const DifficultyLevel now = c.current();
    if (adv) {
      ++advances;
      CHECK(now.index == prev.index + 1);
      const bool reset = now.R > prev.R && now.phi == 0.0;
      CHECK((reset || (now.R == prev.R && now.phi > prev.phi)));
    }
    prev = now;
  }
  // (3.0 - 0.5) / 0.5 = 5 R steps, 8 phi steps per R level
  CHECK(advances == 6 * 8 + 5);
  CHECK(c.saturated());
  CHECK(c.current().R == 3.0);
  CHECK(c.current().phi == kPi);
}

TEST_CASE("history csv") {
  Curriculum c;
  c.log_episode(0);
  feed(c, 30, 0);
  c.maybe_advance();
  c.log_episode(1);
  REQUIRE(c.history().size() == 2);
  CHECK(c.history()[1].level.index == 1);
  CHECK_THROWS_AS(Curriculum(CurriculumConfig{0.5, 0.2}), Error);
}
