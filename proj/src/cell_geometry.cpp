#include "ctb/cell_geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace ctb {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinArcLength = 1e-9;

std::vector<double> utilities_at(std::span<const double> x, const ArmSet& arms,
                                 const UtilityModel& util) {
  std::vector<double> u(arms.n_arms);
  for (int i = 0; i < arms.n_arms; ++i) u[i] = util.value_at(x, arms.features[i]);
  return u;
}

CellVector bits_from_utilities(const std::vector<double>& u, int n_arms) {
  CellVector cell(n_arms, std::vector<std::uint8_t>(n_pairs(n_arms), 0));
  for (int i = 0; i < n_arms; ++i) {
    for (int j = i + 1; j < n_arms; ++j) {
      if (std::abs(u[i] - u[j]) <= kBoundaryTolerance) {
        throw BoundaryError("point lies on a utility-tie boundary");
      }
      cell.bits[pair_index(i, j, n_arms)] = u[i] > u[j] ? 0 : 1;
    }
  }
  return cell;
}

CellTable finalize_table(
    int n_arms, bool approximate,
    std::map<std::vector<std::uint8_t>,
             std::pair<double, std::vector<double>>>&& found) {
  CellTable table;
  table.n_arms = n_arms;
  table.approximate = approximate;
  for (auto& [bits, info] : found) {
    CellVector vec(n_arms, bits);
    auto best = best_arm(vec);
    if (!best) continue;  // orderless vector: permanently excluded
    table.cells.push_back(
        Cell{std::move(vec), *best, std::move(info.second), info.first});
  }
  return table;  // std::map iteration is already lexicographic
}

}  // namespace

std::size_t pair_index(int i, int j, int n_arms) {
  if (i < 0 || i >= j || j >= n_arms) {
    throw InvalidPairError("pair_index requires 0 <= i < j < n_arms");
  }
  // Lexicographic layout: all pairs (0, *) first, then (1, *), ...
  const std::size_t row_start =
      static_cast<std::size_t>(i) * (2 * n_arms - i - 1) / 2;
  return row_start + static_cast<std::size_t>(j - i - 1);
}

CellVector::CellVector(int n, std::vector<std::uint8_t> b)
    : n_arms(n), bits(std::move(b)) {
  if (bits.size() != n_pairs(n_arms)) {
    throw ConfigError("cell vector length must be n(n-1)/2");
  }
}

bool CellVector::prefers(int i, int j) const {
  if (i == j) throw InvalidPairError("prefers requires two distinct arms");
  if (i < j) return bits[pair_index(i, j, n_arms)] == 0;
  return bits[pair_index(j, i, n_arms)] == 1;
}

std::uint64_t lex_rank_u64(const CellVector& cell) {
  if (cell.bits.size() > 63) {
    throw ConfigError("lexicographic rank exceeds 64 bits; use the decimal form");
  }
  std::uint64_t value = 0;
  for (std::uint8_t b : cell.bits) value = (value << 1) | b;
  return value + 1;
}

CellVector cell_from_rank_u64(int n_arms, std::uint64_t rank) {
  const std::size_t len = n_pairs(n_arms);
  if (len > 63 || rank == 0 || rank > (std::uint64_t{1} << len)) {
    throw ConfigError("rank out of range for this arm count");
  }
  std::uint64_t value = rank - 1;
  std::vector<std::uint8_t> bits(len, 0);
  for (std::size_t k = 0; k < len; ++k) {
    bits[len - 1 - k] = static_cast<std::uint8_t>(value & 1);
    value >>= 1;
  }
  return CellVector(n_arms, std::move(bits));
}

std::string lex_rank_decimal(const CellVector& cell) {
  // Rank = binary value of the bits plus one; schoolbook double-and-add on a
  // decimal digit string keeps it exact for any vector length.
  std::vector<int> digits{0};  // little-endian decimal
  auto mul2_add = [&digits](int add) {
    int carry = add;
    for (int& d : digits) {
      const int v = d * 2 + carry;
      d = v % 10;
      carry = v / 10;
    }
    while (carry > 0) {
      digits.push_back(carry % 10);
      carry /= 10;
    }
  };
  for (std::uint8_t b : cell.bits) mul2_add(b);
  // +1 for the 1-based rank.
  int carry = 1;
  for (int& d : digits) {
    const int v = d + carry;
    d = v % 10;
    carry = v / 10;
    if (carry == 0) break;
  }
  if (carry > 0) digits.push_back(carry);
  std::string out;
  out.reserve(digits.size());
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    out.push_back(static_cast<char>('0' + *it));
  }
  return out;
}

std::optional<int> best_arm(const CellVector& cell) {
  for (int a = 0; a < cell.n_arms; ++a) {
    bool dominates = true;
    for (int b = 0; b < cell.n_arms && dominates; ++b) {
      if (b != a && !cell.prefers(a, b)) dominates = false;
    }
    if (dominates) return a;
  }
  return std::nullopt;
}

std::vector<std::pair<int, int>> membership_set(const CellVector& cell) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n_pairs(cell.n_arms));
  for (int i = 0; i < cell.n_arms; ++i) {
    for (int j = i + 1; j < cell.n_arms; ++j) {
      if (cell.prefers(i, j)) {
        pairs.emplace_back(i, j);
      } else {
        pairs.emplace_back(j, i);
      }
    }
  }
  return pairs;
}

std::pair<int, int> top_two(const CellVector& cell) {
  std::vector<int> wins(cell.n_arms, 0);
  for (int i = 0; i < cell.n_arms; ++i) {
    for (int j = i + 1; j < cell.n_arms; ++j) {
      ++wins[cell.prefers(i, j) ? i : j];
    }
  }
  int first = 0, second = -1;
  for (int a = 1; a < cell.n_arms; ++a) {
    if (wins[a] > wins[first]) first = a;
  }
  for (int a = 0; a < cell.n_arms; ++a) {
    if (a == first) continue;
    if (second < 0 || wins[a] > wins[second]) second = a;
  }
  return {first, second};
}

std::optional<std::size_t> CellTable::find(const CellVector& vec) const {
  auto it = std::lower_bound(
      cells.begin(), cells.end(), vec,
      [](const Cell& c, const CellVector& v) { return c.vec < v; });
  if (it != cells.end() && it->vec == vec) {
    return static_cast<std::size_t>(it - cells.begin());
  }
  return std::nullopt;
}

CellVector classify(std::span<const double> x, const ArmSet& arms,
                    const UtilityModel& util) {
  return bits_from_utilities(utilities_at(x, arms, util), arms.n_arms);
}

CellTable enumerate_cells_sweep(const ArmSet& arms) {
  if (arms.dim != 2) {
    throw ConfigError("angular sweep requires 2-dimensional arms");
  }
  UtilityModel linear;  // evaluated at explicit points only

  // Each pair contributes the two antipodal angles where its utilities tie.
  std::vector<double> angles;
  angles.reserve(2 * n_pairs(arms.n_arms));
  for (int i = 0; i < arms.n_arms; ++i) {
    for (int j = i + 1; j < arms.n_arms; ++j) {
      const double dx = arms.features[i][0] - arms.features[j][0];
      const double dy = arms.features[i][1] - arms.features[j][1];
      double a = std::atan2(-dx, dy);  // (cos a, sin a) is orthogonal to (dx, dy)
      if (a < 0) a += kTwoPi;
      double b = a + std::numbers::pi;
      if (b >= kTwoPi) b -= kTwoPi;
      angles.push_back(a);
      angles.push_back(b);
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               angles.end());
  if (angles.size() >= 2 && angles.front() + kTwoPi - angles.back() < 1e-12) {
    angles.pop_back();
  }

  std::map<std::vector<std::uint8_t>, std::pair<double, std::vector<double>>>
      found;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double lo = angles[k];
    const double hi = k + 1 < angles.size() ? angles[k + 1] : angles.front() + kTwoPi;
    const double len = hi - lo;
    if (len <= kMinArcLength) continue;
    const double mid = 0.5 * (lo + hi);
    const std::vector<double> point{std::cos(mid), std::sin(mid)};
    CellVector vec;
    try {
      vec = classify(point, arms, linear);
    } catch (const BoundaryError&) {
      continue;  // degenerate arc
    }
    auto [it, inserted] =
        found.try_emplace(vec.bits, std::pair{len / kTwoPi, point});
    if (!inserted) it->second.first += len / kTwoPi;
  }
  return finalize_table(arms.n_arms, false, std::move(found));
}

CellTable enumerate_cells_permutation(
    const ArmSet& arms, const UtilityModel& util, int samples, Rng& rng,
    const std::vector<std::vector<double>>& ensure_points, double margin) {
  if (arms.n_arms > 8) {
    throw ConfigError("permutation enumeration is limited to 8 arms");
  }
  if (samples < 1) throw ConfigError("permutation enumeration needs samples >= 1");

  std::map<std::vector<std::uint8_t>, std::pair<double, std::vector<double>>>
      found;
  const double weight = 1.0 / samples;
  for (int s = 0; s < samples; ++s) {
    // Uniform direction on the unit sphere.
    std::vector<double> x(arms.dim);
    double norm = 0.0;
    for (double& v : x) {
      v = rng.gaussian();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (double& v : x) v /= norm;

    auto u = utilities_at(x, arms, util);
    bool clear = true;
    for (int i = 0; i < arms.n_arms && clear; ++i) {
      for (int j = i + 1; j < arms.n_arms && clear; ++j) {
        if (std::abs(u[i] - u[j]) < margin) clear = false;
      }
    }
    if (!clear) continue;
    CellVector vec = bits_from_utilities(u, arms.n_arms);
    auto [it, inserted] = found.try_emplace(vec.bits, std::pair{weight, x});
    if (!inserted) it->second.first += weight;
  }
  for (const auto& point : ensure_points) {
    CellVector vec = classify(point, arms, util);
    found.try_emplace(vec.bits, std::pair{0.0, point});
  }
  return finalize_table(arms.n_arms, true, std::move(found));
}

CellTable cell_table_from_vectors(int n_arms,
                                  const std::vector<CellVector>& vectors,
                                  const std::vector<double>& masses) {
  if (!masses.empty() && masses.size() != vectors.size()) {
    throw ConfigError("cell mass list must align with the vector list");
  }
  std::map<std::vector<std::uint8_t>, std::pair<double, std::vector<double>>>
      found;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].n_arms != n_arms || vectors[k].bits.size() != n_pairs(n_arms)) {
      throw ConfigError("cell vector does not match the arm count");
    }
    const double mass = masses.empty() ? 0.0 : masses[k];
    auto [it, inserted] =
        found.try_emplace(vectors[k].bits, std::pair{mass, std::vector<double>{}});
    if (!inserted) throw ConfigError("duplicate cell vector in explicit list");
  }
  CellTable table = finalize_table(n_arms, false, std::move(found));
  if (masses.empty() && !table.cells.empty()) {
    const double uniform = 1.0 / static_cast<double>(table.cells.size());
    for (auto& c : table.cells) c.prior_mass = uniform;
  }
  return table;
}

CellTable full_order_table(int n_arms) {
  if (n_arms < 2 || n_arms > 6) {
    throw ConfigError("full order table is limited to 2..6 arms");
  }
  const std::size_t len = n_pairs(n_arms);
  // Free positions are the pairs not involving the designated best arm.
  std::vector<Cell> cells;
  for (int k = 0; k < n_arms; ++k) {
    std::vector<std::size_t> free_pos;
    std::vector<std::uint8_t> base(len, 0);
    for (int i = 0; i < n_arms; ++i) {
      for (int j = i + 1; j < n_arms; ++j) {
        const std::size_t pos = pair_index(i, j, n_arms);
        if (i == k) {
          base[pos] = 0;  // k preferred over j
        } else if (j == k) {
          base[pos] = 1;  // k preferred over i
        } else {
          free_pos.push_back(pos);
        }
      }
    }
    const std::uint64_t combos = std::uint64_t{1} << free_pos.size();
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
      std::vector<std::uint8_t> bits = base;
      for (std::size_t b = 0; b < free_pos.size(); ++b) {
        bits[free_pos[b]] = static_cast<std::uint8_t>((mask >> b) & 1);
      }
      cells.push_back(Cell{CellVector(n_arms, std::move(bits)), k, {}, 0.0});
    }
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.vec < b.vec; });
  const double uniform = 1.0 / static_cast<double>(cells.size());
  for (auto& c : cells) c.prior_mass = uniform;
  CellTable table;
  table.n_arms = n_arms;
  table.cells = std::move(cells);
  return table;
}

CellTable enumerate_cells(const ArmSet& arms, const UtilityModel& util,
                          EnumerationBackend backend, Rng& rng, int samples) {
  switch (backend) {
    case EnumerationBackend::kAngularSweep:
      if (util.kind != UtilityKind::kLinearDot) {
        throw ConfigError("angular sweep requires the linear utility");
      }
      return enumerate_cells_sweep(arms);
    case EnumerationBackend::kPermutationSampling:
      return enumerate_cells_permutation(arms, util, samples, rng);
  }
  throw ConfigError("unknown enumeration backend");
}

std::string cell_listing(const CellTable& table) {
  std::ostringstream out;
  out << "index,bits,best_arm,prior_mass\n";
  for (const auto& cell : table.cells) {
    out << lex_rank_decimal(cell.vec) << ',';
    for (std::uint8_t b : cell.vec.bits) out << static_cast<char>('0' + b);
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), cell.prior_mass);
    out << ',' << cell.best + 1 << ',' << std::string_view(buf, res.ptr - buf)
        << '\n';
  }
  return out.str();
}

}  // namespace ctb
