#include "core/selection.hpp"

#include <algorithm>
#include <cmath>

namespace rankgauge {

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::KeptInitial: return "kept_initial";
    case Decision::ReplacedByGreater: return "replaced_by_greater";
    case Decision::ReplacedByTiebreak: return "replaced_by_tiebreak";
    case Decision::Skipped: return "skipped";
  }
  return "?";
}

double clip_rank(double rank, double cap) {
  if (cap <= 0.0) fail(ErrorCode::InvalidArgument, "clip cap must be positive");
  return std::min(rank, cap);
}

namespace {

bool approx_equal(double a, double b, double tol) {
  if (tol <= 0.0) return a == b;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Strictly greater beyond the tie tolerance.
bool strictly_greater(double a, double b, double tol) {
  return a > b && !approx_equal(a, b, tol);
}

std::vector<double> clipped_ranks(const RunManifest& m) {
  std::vector<double> ranks;
  ranks.reserve(m.runs.size());
  for (const auto& run : m.runs) {
    if (!run.rank) {
      fail(ErrorCode::MissingRank, "run '" + run.run_id + "' has no rank value");
    }
    ranks.push_back(run.clip_cap ? clip_rank(*run.rank, *run.clip_cap) : *run.rank);
  }
  return ranks;
}

}  // namespace

SelectionResult select_by_rank(const RunManifest& m, double tie_tolerance) {
  validate_manifest(m);
  if (tie_tolerance < 0.0) {
    fail(ErrorCode::InvalidArgument, "tie tolerance must be >= 0");
  }
  const std::vector<double> ranks = clipped_ranks(m);
  const std::size_t n = ranks.size();

  SelectionResult result;
  result.trace.reserve(n);
  result.trace.push_back({m.runs[0].run_id, ranks[0], Decision::KeptInitial});

  std::size_t best = 0;
  double best_rank = ranks[0];
  for (std::size_t i = 1; i < n; ++i) {
    Decision decision = Decision::Skipped;
    if (strictly_greater(ranks[i], best_rank, tie_tolerance)) {
      best = i;
      best_rank = ranks[i];
      decision = Decision::ReplacedByGreater;
    } else if (approx_equal(ranks[i], best_rank, tie_tolerance) && m.ordered) {
      // Plateau edge test; a missing neighbour compares false.
      const bool above_prev = strictly_greater(ranks[i], ranks[i - 1], tie_tolerance);
      const bool above_next =
          i + 1 < n && strictly_greater(ranks[i], ranks[i + 1], tie_tolerance);
      if (above_prev || above_next) {
        best = i;
        best_rank = ranks[i];
        decision = Decision::ReplacedByTiebreak;
      }
    }
    result.trace.push_back({m.runs[i].run_id, ranks[i], decision});
  }

  result.chosen_run_id = m.runs[best].run_id;
  result.chosen_rank = best_rank;

  if (!m.ordered) {
    // Hyperparameter values are not comparable, so the plateau logic is
    // meaningless; when several runs attain the maximum, report them all.
    const double max_rank = *std::max_element(ranks.begin(), ranks.end());
    std::vector<std::string> maximal;
    for (std::size_t i = 0; i < n; ++i) {
      if (approx_equal(ranks[i], max_rank, tie_tolerance)) {
        maximal.push_back(m.runs[i].run_id);
      }
    }
    if (maximal.size() >= 2) {
      result.unordered_tie = true;
      result.tied_max_run_ids = std::move(maximal);
    }
  }
  return result;
}

SelectionResult select_by_alpha(const RunManifest& m,
                                const std::map<std::string, double>& alphas) {
  validate_manifest(m);

  std::vector<double> values;
  values.reserve(m.runs.size());
  for (const auto& run : m.runs) {
    const auto it = alphas.find(run.run_id);
    if (it == alphas.end()) {
      fail(ErrorCode::MissingAlpha, "run '" + run.run_id + "' has no alpha value");
    }
    values.push_back(it->second);
  }

  SelectionResult result;
  result.trace.reserve(m.runs.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    Decision decision;
    if (i == 0) {
      decision = Decision::KeptInitial;
    } else if (std::abs(values[i] - 1.0) < std::abs(values[best] - 1.0)) {
      best = i;
      decision = Decision::ReplacedByGreater;
    } else {
      decision = Decision::Skipped;
    }
    result.trace.push_back({m.runs[i].run_id, values[i], decision});
  }
  result.chosen_run_id = m.runs[best].run_id;
  result.chosen_rank = values[best];
  return result;
}

}  // namespace rankgauge
