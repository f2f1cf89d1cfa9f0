#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "core/rng.hpp"
#include "core/selection.hpp"
#include "test_support.hpp"

using namespace rankgauge;

namespace {

RunManifest sweep(const std::vector<double>& ranks, bool ordered = true) {
  RunManifest m;
  m.axis_name = "axis";
  m.ordered = ordered;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    RunRecord r;
    r.run_id = "run-" + std::to_string(i);
    r.hp_value = static_cast<double>(i);  // strictly increasing when ordered
    r.rank = ranks[i];
    m.runs.push_back(std::move(r));
  }
  return m;
}

std::vector<Decision> decisions(const SelectionResult& r) {
  std::vector<Decision> out;
  for (const auto& t : r.trace) out.push_back(t.decision);
  return out;
}

}  // namespace

TEST_CASE("clip_rank") {
  CHECK(clip_rank(2400.0, 2048.0) == 2048.0);
  CHECK(clip_rank(100.0, 2048.0) == 100.0);
  CHECK(clip_rank(2048.0, 2048.0) == 2048.0);

  SUBCASE("idempotent and monotone") {
    testsupport::Gaussian g(11);
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double rank = prev + g.uniform();
      const double clipped = clip_rank(rank, 50.0);
      CHECK(clip_rank(clipped, 50.0) == clipped);
      CHECK(clipped >= clip_rank(prev, 50.0));
      prev = rank;
    }
  }

  SUBCASE("cap must be positive") {
    CHECK_THROWS_AS(clip_rank(1.0, 0.0), Error);
  }
}

TEST_CASE("published covariance-weight sweep picks the last run") {
  const RunManifest m = load_manifest(testsupport::fixture("vicreg_cov_sweep.json"));
  const SelectionResult r = select_by_rank(m);

  CHECK(r.chosen_run_id == "vicreg-cov-11");
  CHECK(r.chosen_rank == doctest::Approx(1938.44));
  CHECK(!r.unordered_tie);
  REQUIRE(r.trace.size() == 12);
  CHECK(r.trace[0].decision == Decision::KeptInitial);
  // Strictly increasing ranks: every later run replaces by greater.
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].decision == Decision::ReplacedByGreater);
  }
}

TEST_CASE("plateau tie-break step-through") {
  const SelectionResult r = select_by_rank(sweep({10, 20, 20, 20, 5}), 0.0);

  CHECK(r.chosen_run_id == "run-3");
  CHECK(r.chosen_rank == 20.0);
  CHECK(decisions(r) == std::vector<Decision>{Decision::KeptInitial,
                                              Decision::ReplacedByGreater,
                                              Decision::Skipped,
                                              Decision::ReplacedByTiebreak,
                                              Decision::Skipped});
}

TEST_CASE("clipping happens before the plateau logic") {
  RunManifest m = sweep({2400, 2100, 1900});
  for (auto& run : m.runs) run.clip_cap = 2048.0;
  const SelectionResult r = select_by_rank(m);

  // Clipped ranks (2048, 2048, 1900): run-1 ties the incumbent and its right
  // neighbour is smaller, so the tie-break promotes it.
  CHECK(r.chosen_run_id == "run-1");
  CHECK(r.chosen_rank == 2048.0);
  CHECK(decisions(r) == std::vector<Decision>{Decision::KeptInitial,
                                              Decision::ReplacedByTiebreak,
                                              Decision::Skipped});
  CHECK(r.trace[0].rank == 2048.0);
  CHECK(r.trace[2].rank == 1900.0);
}

TEST_CASE("single run keeps the initial") {
  const SelectionResult r = select_by_rank(sweep({42.0}));
  CHECK(r.chosen_run_id == "run-0");
  CHECK(r.trace.size() == 1);
  CHECK(r.trace[0].decision == Decision::KeptInitial);
}

TEST_CASE("monotone sweeps select the extremes") {
  SUBCASE("strictly increasing selects the last") {
    const SelectionResult r = select_by_rank(sweep({1, 2, 3, 4, 5, 6}));
    CHECK(r.chosen_run_id == "run-5");
  }
  SUBCASE("strictly decreasing selects the first") {
    const SelectionResult r = select_by_rank(sweep({6, 5, 4, 3, 2, 1}));
    CHECK(r.chosen_run_id == "run-0");
  }
}

TEST_CASE("selection properties on random sweeps") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    testsupport::Gaussian g(seed * 17);
    const std::size_t n = 2 + static_cast<std::size_t>(g.uniform() * 12);
    std::vector<double> ranks;
    for (std::size_t i = 0; i < n; ++i) ranks.push_back(g.uniform() * 1000.0);

    const SelectionResult r = select_by_rank(sweep(ranks));
    CAPTURE(seed);

    // chosen rank is always the maximum (exact tie tolerance)
    CHECK(r.chosen_rank == *std::max_element(ranks.begin(), ranks.end()));
    // trace covers every run exactly once, in order
    REQUIRE(r.trace.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.trace[i].run_id == "run-" + std::to_string(i));
    }
  }
}

TEST_CASE("unique maxima are invariant under reordering") {
  const std::vector<double> ranks = {10, 250, 30, 80, 110};
  std::vector<std::size_t> order(ranks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  // A few deterministic shuffles; the winner's id must not change.
  SplitMix64 rng(404);
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.next_below(i))]);
    }
    RunManifest m;
    m.axis_name = "axis";
    m.ordered = false;
    for (const std::size_t idx : order) {
      RunRecord r;
      r.run_id = "run-" + std::to_string(idx);
      r.hp_value = std::string("variant-") + std::to_string(idx);
      r.rank = ranks[idx];
      m.runs.push_back(std::move(r));
    }
    const SelectionResult r = select_by_rank(m);
    CHECK(r.chosen_run_id == "run-1");
    CHECK(!r.unordered_tie);
  }
}

TEST_CASE("unordered manifests with tied maxima report the whole set") {
  RunManifest m;
  m.axis_name = "augmentation";
  m.ordered = false;
  for (std::size_t i = 0; i < 4; ++i) {
    RunRecord r;
    r.run_id = "run-" + std::to_string(i);
    r.hp_value = std::string("policy-") + std::to_string(i);
    r.rank = (i == 1 || i == 3) ? 70.0 : 20.0;
    m.runs.push_back(std::move(r));
  }

  const SelectionResult r = select_by_rank(m);
  CHECK(r.unordered_tie);
  CHECK(r.tied_max_run_ids == std::vector<std::string>{"run-1", "run-3"});
  CHECK(r.chosen_run_id == "run-1");  // earliest maximal run
  CHECK(r.chosen_rank == 70.0);
}

TEST_CASE("relative tie tolerance") {
  // 1000 vs 1000.5: a 1e-3 relative tolerance treats them as tied, and the
  // plateau logic can promote the later run only via a smaller neighbour.
  const SelectionResult strict = select_by_rank(sweep({1000.0, 1000.5, 900.0}), 0.0);
  CHECK(strict.chosen_run_id == "run-1");

  const SelectionResult loose = select_by_rank(sweep({1000.0, 1000.5, 900.0}), 1e-3);
  CHECK(loose.chosen_run_id == "run-1");
  CHECK(loose.trace[1].decision == Decision::ReplacedByTiebreak);
}

TEST_CASE("missing rank is an error") {
  RunManifest m = sweep({1, 2});
  m.runs[1].rank.reset();
  m.runs[1].embeddings_path = "somewhere.npy";
  bool matched = false;
  try {
    select_by_rank(m);
  } catch (const Error& e) {
    matched = e.code() == ErrorCode::MissingRank;
  }
  CHECK(matched);
}

TEST_CASE("alpha selection") {
  const RunManifest m = sweep({1, 1, 1});
  SUBCASE("closest to one wins") {
    const SelectionResult r =
        select_by_alpha(m, {{"run-0", 0.4}, {"run-1", 0.9}, {"run-2", 1.3}});
    CHECK(r.chosen_run_id == "run-1");
    CHECK(r.chosen_rank == 0.9);
  }
  SUBCASE("ties go to the earliest run") {
    const SelectionResult r =
        select_by_alpha(m, {{"run-0", 1.0}, {"run-1", 1.0}, {"run-2", 0.5}});
    CHECK(r.chosen_run_id == "run-0");
  }
  SUBCASE("single run") {
    const SelectionResult r = select_by_alpha(sweep({1.0}), {{"run-0", 2.0}});
    CHECK(r.chosen_run_id == "run-0");
  }
  SUBCASE("missing alpha is an error") {
    bool matched = false;
    try {
      select_by_alpha(m, {{"run-0", 1.0}});
    } catch (const Error& e) {
      matched = e.code() == ErrorCode::MissingAlpha;
    }
    CHECK(matched);
  }
}
