#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ctb/cell_geometry.hpp"

namespace ctb {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class CtbVariant {
  kCtb1,          // zero initial score for every enumerated cell
  kCtb2Explicit,  // zero initial score over a full-order table (reference)
  kCtb3,          // initial scores from prior cell masses
};

// Per-cell duel scores: an exact integer increment count on top of a real
// initial score (minus infinity marks permanently excluded cells).
struct ScoreTable {
  std::vector<double> init;        // m_i(0)
  std::vector<std::int64_t> inc;   // increments since the start
  std::int64_t t = 0;

  double score(std::size_t i) const {
    return init[i] == kNegInf ? kNegInf : init[i] + static_cast<double>(inc[i]);
  }
};

// Maps a prior mass to an initial score; zero mass gives minus infinity.
// Requires q in (0.5, 1).
double prior_mass_to_init_score(double mass, double q);

// kCtb3 reads prior masses off the table and needs q in (0.5, 1); the other
// variants initialize every cell to zero.
ScoreTable init_scores(const CellTable& table, CtbVariant variant,
                       std::optional<double> q = std::nullopt);

// First arm: best arm of a maximum-score cell. Second arm: best arm of the
// maximum-score cell among cells with a different best arm. Ties resolve to
// the smallest best-arm index, then the smallest cell index, so the
// decomposed implementation selects identically. Throws
// DegenerateCandidatesError when every finite-score cell names one arm.
std::pair<int, int> select_arms(const ScoreTable& scores,
                                const CellTable& table);

// Every cell on the winner's side of the duel pair gains one point.
void update(ScoreTable& scores, const CellTable& table, int first, int second,
            int outcome);

}  // namespace ctb
