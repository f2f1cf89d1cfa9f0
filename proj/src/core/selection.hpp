#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/manifest.hpp"

namespace rankgauge {

enum class Decision { KeptInitial, ReplacedByGreater, ReplacedByTiebreak, Skipped };

const char* decision_name(Decision d);

struct TraceEntry {
  std::string run_id;
  double rank = 0.0;  // clipped rank (or score) the decision was made on
  Decision decision = Decision::Skipped;
};

struct SelectionResult {
  std::string chosen_run_id;
  double chosen_rank = 0.0;
  std::vector<TraceEntry> trace;  // one entry per run, manifest order
  // Set when the manifest is unordered and several runs share the maximal
  // rank: the plateau tie-break is meaningless there, so all maximal runs are
  // reported and the earliest is chosen.
  bool unordered_tie = false;
  std::vector<std::string> tied_max_run_ids;
};

// min(rank, cap).
double clip_rank(double rank, double cap);

// Scans runs in manifest order keeping the incumbent with the highest rank;
// a run tying the incumbent (relative tolerance tie_tolerance, exact when 0)
// replaces it when it sits on a plateau edge, i.e. its rank exceeds either
// neighbour's (missing neighbours compare false). Ranks are clipped with the
// per-run clip_cap before any comparison. Every run needs a rank.
SelectionResult select_by_rank(const RunManifest& m, double tie_tolerance = 0.0);

// Picks the run whose decay exponent is closest to 1; ties go to the earliest
// manifest position. Trace ranks hold the alpha values.
SelectionResult select_by_alpha(const RunManifest& m,
                                const std::map<std::string, double>& alphas);

}  // namespace rankgauge
