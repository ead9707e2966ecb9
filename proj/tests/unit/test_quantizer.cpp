#include <cmath>
#include <sstream>

#include <doctest.h>

#include "omt/eval.hpp"
#include "omt/quantizer.hpp"
#include "omt/rng.hpp"
#include "oracles.hpp"

using namespace omt;

TEST_SUITE_BEGIN("quantizer");

namespace {

FeatureVector vec2(double a, double b) {
  FeatureVector v(2);
  v << a, b;
  return v;
}

OmtConfig small_config() {
  OmtConfig cfg;
  cfg.labeled_anchor = vec2(0, 0);
  cfg.generalization_radius = 1.0;
  cfg.max_representatives = 2;
  cfg.initial_cover_radius = 0.1;
  return cfg;
}

}  // namespace

TEST_CASE("first gated point becomes the sole representative") {
  auto cfg = small_config();
  auto state = initial_cover(cfg);
  state = quantize_step(std::move(state), vec2(0.3, 0), cfg, 7);
  REQUIRE(state.size() == 1);
  CHECK(state.representatives[0].stream_index == 7);
  CHECK(state.representatives[0].vector == vec2(0.3, 0));
  CHECK(state.cover_radius == 0.1);
  CHECK(state.doubling_count == 0);
}

TEST_CASE("point within r of an existing representative leaves the state unchanged") {
  auto cfg = small_config();
  auto state = initial_cover(cfg);
  state = quantize_step(std::move(state), vec2(0.3, 0), cfg, 0);
  state = quantize_step(std::move(state), vec2(0.35, 0), cfg, 1);
  CHECK(state.size() == 1);
  CHECK(state.representatives[0].stream_index == 0);
}

TEST_CASE("ungated point leaves the state unchanged") {
  auto cfg = small_config();
  cfg.generalization_radius = 0.3;
  auto state = initial_cover(cfg);
  state = quantize_step(std::move(state), vec2(1.5, 0), cfg, 0);
  CHECK(state.empty());
}

TEST_CASE("doubling hand trace: k=2, collinear points") {
  auto cfg = small_config();  // k=2, r0=0.1, R=1
  auto state = initial_cover(cfg);
  state = quantize_step(std::move(state), vec2(0.3, 0), cfg, 0);
  state = quantize_step(std::move(state), vec2(0.6, 0), cfg, 1);
  CHECK(state.size() == 2);
  state = quantize_step(std::move(state), vec2(0.9, 0), cfg, 2);
  REQUIRE(state.size() == 2);
  CHECK(state.cover_radius == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(state.doubling_count == 2);
  CHECK(state.representatives[0].vector == vec2(0.3, 0));
  CHECK(state.representatives[1].vector == vec2(0.9, 0));
}

TEST_CASE("greedy_repartition") {
  auto rep = [](double x, std::uint64_t i) { return Representative{i, vec2(x, 0)}; };

  SUBCASE("single representative is kept") {
    auto kept = greedy_repartition({rep(0.5, 0)}, 0.4);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].stream_index == 0);
  }
  SUBCASE("two reps within r keep only the first") {
    auto kept = greedy_repartition({rep(0, 0), rep(0.3, 1)}, 0.4);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].stream_index == 0);
  }
  SUBCASE("three collinear reps keep the endpoints") {
    auto kept = greedy_repartition({rep(0, 0), rep(0.3, 1), rep(0.6, 2)}, 0.4);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].stream_index == 0);
    CHECK(kept[1].stream_index == 2);
  }
  SUBCASE("random inputs satisfy cover and separation conditions") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Representative> reps;
      auto n = 1 + rng.index(12);
      for (std::uint64_t i = 0; i < n; ++i)
        reps.push_back({i, rng.gaussian_vector(3)});
      double r = 0.5 + rng.unit() * 2.0;
      auto kept = greedy_repartition(reps, r);
      REQUIRE(!kept.empty());
      CHECK(kept[0].stream_index == reps[0].stream_index);
      for (const auto& original : reps) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& k : kept)
          nearest = std::min(nearest, oracles::naive_distance(original.vector, k.vector));
        CHECK(nearest <= r);
      }
      for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
          CHECK(oracles::naive_distance(kept[i].vector, kept[j].vector) > r);
    }
  }
}

TEST_CASE("nearest_representative") {
  auto cfg = small_config();
  auto state = initial_cover(cfg);
  CHECK_THROWS_AS(nearest_representative(state, vec2(0, 0)), UsageError);

  state.representatives.push_back({0, vec2(0.5, 0)});
  auto [i0, d0] = nearest_representative(state, vec2(0.9, 0));
  CHECK(i0 == 0);
  CHECK(d0 == doctest::Approx(0.4).epsilon(1e-12));

  auto [i1, d1] = nearest_representative(state, vec2(0.5, 0));
  CHECK(i1 == 0);
  CHECK(d1 == 0.0);

  SUBCASE("ties break to the earlier insertion") {
    state.representatives.push_back({1, vec2(-0.5, 0)});
    auto [i, d] = nearest_representative(state, vec2(0, 0));
    CHECK(i == 0);
    CHECK(d == doctest::Approx(0.5));
  }
  SUBCASE("matches a linear scan oracle on random queries") {
    Rng rng(22);
    for (int i = 0; i < 10; ++i) state.representatives.push_back({static_cast<std::uint64_t>(i + 5), rng.gaussian_vector(2)});
    std::vector<FeatureVector> points;
    for (const auto& rep : state.representatives) points.push_back(rep.vector);
    for (int trial = 0; trial < 100; ++trial) {
      FeatureVector q = rng.gaussian_vector(2);
      auto [gi, gd] = nearest_representative(state, q);
      auto [oi, od] = oracles::linear_scan_nearest(points, q);
      CHECK(gi == oi);
      CHECK(gd == doctest::Approx(od).epsilon(1e-12));
    }
  }
}

TEST_CASE("stream invariants: cardinality, separation, radius ladder, gate, 2r bound") {
  Rng rng(23);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    OmtConfig cfg;
    cfg.labeled_anchor = rng.gaussian_vector(4);
    cfg.generalization_radius = 1.5;
    cfg.max_representatives = 6;
    cfg.initial_cover_radius = 0.2;

    auto state = initial_cover(cfg);
    CoverErrorTracker tracker;
    std::vector<FeatureVector> gated_history;
    for (std::uint64_t t = 0; t < 300; ++t) {
      FeatureVector x = cfg.labeled_anchor + 0.8 * rng.gaussian_vector(4);
      state = quantize_step(std::move(state), x, cfg, t);

      CHECK(state.size() <= static_cast<std::size_t>(cfg.max_representatives));
      CHECK(state.cover_radius ==
            doctest::Approx(cfg.initial_cover_radius * std::pow(2.0, state.doubling_count))
                .epsilon(1e-12));
      for (std::size_t i = 0; i < state.size(); ++i) {
        CHECK(distance(state.representatives[i].vector, cfg.labeled_anchor) <=
              cfg.generalization_radius);
        for (std::size_t j = i + 1; j < state.size(); ++j)
          CHECK(distance(state.representatives[i].vector, state.representatives[j].vector) >
                state.cover_radius);
      }

      if (distance(x, cfg.labeled_anchor) <= cfg.generalization_radius) {
        gated_history.push_back(x);
        double d_max = tracker.observe(x, state);
        CHECK(d_max <= 2.0 * state.cover_radius + 1e-12);
        if (t % 97 == 0) CHECK(d_max == doctest::Approx(cover_error(gated_history, state)).epsilon(1e-12));
      }
    }
    if (!gated_history.empty())
      CHECK(tracker.current() == doctest::Approx(cover_error(gated_history, state)).epsilon(1e-12));
  }
}

TEST_CASE("doubling terminates: r stays bounded by the data spread") {
  OmtConfig cfg;
  cfg.labeled_anchor = vec2(0, 0);
  cfg.generalization_radius = 0.5;
  cfg.max_representatives = 1;
  cfg.initial_cover_radius = 1e-4;

  Rng rng(24);
  auto state = initial_cover(cfg);
  for (std::uint64_t t = 0; t < 500; ++t) {
    FeatureVector x = 0.4 * rng.gaussian_vector(2);
    state = quantize_step(std::move(state), x, cfg, t);
    CHECK(state.size() <= 1);
    // max pairwise distance of gated data is <= 2R = 1; r never exceeds twice that
    CHECK(state.cover_radius <= 2.0 * (2.0 * cfg.generalization_radius) + 1e-12);
  }
}

TEST_CASE("determinism: identical inputs give identical cover sequences") {
  auto run = [] {
    OmtConfig cfg;
    cfg.labeled_anchor = vec2(0.1, 0.2);
    cfg.generalization_radius = 1.0;
    cfg.max_representatives = 5;
    cfg.initial_cover_radius = 0.05;
    Rng rng(25);
    auto state = initial_cover(cfg);
    std::ostringstream trace;
    for (std::uint64_t t = 0; t < 200; ++t) {
      state = quantize_step(std::move(state), 0.5 * rng.gaussian_vector(2), cfg, t);
      trace << state.size() << ':' << state.cover_radius << ';';
    }
    std::ostringstream dump;
    dump_cover_csv(state, dump);
    return trace.str() + "|" + dump.str();
  };
  CHECK(run() == run());
}

TEST_CASE("cover dump format") {
  auto cfg = small_config();
  auto state = initial_cover(cfg);
  state = quantize_step(std::move(state), vec2(0.5, 0.25), cfg, 3);
  std::ostringstream out;
  dump_cover_csv(state, out);
  CHECK(out.str() == "3,0.5,0.25\n");
}

TEST_SUITE_END();
