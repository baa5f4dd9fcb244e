#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctb/arm_model.hpp"
#include "ctb/errors.hpp"
#include "ctb/rng.hpp"

namespace ctb {

// Utility ties within this tolerance put a point on a cell boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

// 0-based position of pair (i, j), i < j, in the length n(n-1)/2 cell
// vector; pairs are laid out in lexicographic order. Throws on i >= j.
std::size_t pair_index(int i, int j, int n_arms);

inline std::size_t n_pairs(int n_arms) {
  return static_cast<std::size_t>(n_arms) * (n_arms - 1) / 2;
}

// Sign vector of a cell: one bit per unordered arm pair. Bit 0 at pair
// (i, j), i < j, means arm i is preferred over arm j everywhere in the cell.
struct CellVector {
  int n_arms = 0;
  std::vector<std::uint8_t> bits;  // length n_arms*(n_arms-1)/2

  CellVector() = default;
  CellVector(int n, std::vector<std::uint8_t> b);

  // True iff the cell prefers arm i over arm j (i.e. lies in the winning
  // space of i against j). Valid for any i != j.
  bool prefers(int i, int j) const;

  bool operator==(const CellVector& o) const { return bits == o.bits; }
  // Lexicographic order on bits; table order and cell-index order coincide.
  bool operator<(const CellVector& o) const { return bits < o.bits; }
};

// Lexicographic rank of the bit vector, 1-based: the all-zero vector has
// rank 1. The u64 form requires at most 63 bits; the decimal form works for
// any length.
std::uint64_t lex_rank_u64(const CellVector& cell);
CellVector cell_from_rank_u64(int n_arms, std::uint64_t rank);
std::string lex_rank_decimal(const CellVector& cell);

// The arm the cell ranks above all others, or nullopt for cyclic vectors.
std::optional<int> best_arm(const CellVector& cell);

// The ordered pairs (i, j) whose winning space contains the cell: exactly
// one orientation per unordered pair.
std::vector<std::pair<int, int>> membership_set(const CellVector& cell);

// (best, runner-up) by within-cell win counts; exact for total orders.
std::pair<int, int> top_two(const CellVector& cell);

struct Cell {
  CellVector vec;
  int best = -1;                        // defined for every table entry
  std::vector<double> representative;   // interior point; may be empty
  double prior_mass = 0.0;
};

// Enumerated candidate cells, sorted by sign vector. Vectors without a best
// arm are never stored: they cannot propose an arm and are treated as
// permanently excluded (score minus infinity).
struct CellTable {
  int n_arms = 0;
  bool approximate = false;  // true for sampling-based enumeration
  std::vector<Cell> cells;

  std::size_t size() const { return cells.size(); }
  std::optional<std::size_t> find(const CellVector& vec) const;
};

// Sign vector of the cell containing `x`. Throws BoundaryError if some pair
// of utilities ties within kBoundaryTolerance.
CellVector classify(std::span<const double> x, const ArmSet& arms,
                    const UtilityModel& util);

// d = 2, linear utility: collects the boundary angles where some pair's
// utilities coincide on the unit circle, then classifies every arc midpoint.
// At most n(n-1) cells; prior masses are exact arc-length fractions.
CellTable enumerate_cells_sweep(const ArmSet& arms);

// Small-n backend for general utilities: draws `samples` directions uniform
// on the unit sphere and keeps every arm ordering observed with pairwise
// utility margin above `margin`. Prior mass is the sample fraction; the
// table is marked approximate. Orderings of points in `ensure_points` are
// always inserted. Requires n_arms <= 8.
CellTable enumerate_cells_permutation(
    const ArmSet& arms, const UtilityModel& util, int samples, Rng& rng,
    const std::vector<std::vector<double>>& ensure_points = {},
    double margin = 1e-9);

// User-provided sign vectors. Vectors without a best arm are dropped.
// `masses` (aligned with `vectors`) defaults to uniform over retained cells.
CellTable cell_table_from_vectors(int n_arms,
                                  const std::vector<CellVector>& vectors,
                                  const std::vector<double>& masses = {});

// Every sign vector with a well-defined best arm: n * 2^((n-1)(n-2)/2)
// cells, uniform mass. Reference candidate set for the decomposed
// implementation; requires n_arms <= 6.
CellTable full_order_table(int n_arms);

enum class EnumerationBackend { kAngularSweep, kPermutationSampling };

// Dispatcher with applicability checks (sweep: d = 2 linear; permutation
// sampling: n <= 8).
CellTable enumerate_cells(const ArmSet& arms, const UtilityModel& util,
                          EnumerationBackend backend, Rng& rng,
                          int samples = 100000);

// One row per cell: index (lexicographic rank, 1-based), bit string,
// best arm (1-based), prior mass.
std::string cell_listing(const CellTable& table);

}  // namespace ctb
