#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lineup/core.hpp"

namespace lineup {

enum class PointKind { Voter, Candidate, Position };

inline const char* to_string(PointKind kind) {
  switch (kind) {
    case PointKind::Voter: return "voter";
    case PointKind::Candidate: return "candidate";
    case PointKind::Position: return "position";
  }
  return "?";
}

/// Names a voter, a candidate, or a whole position (possibly a set of sites).
struct PointId {
  PointKind kind{PointKind::Voter};
  std::size_t index{0};

  static PointId voter(std::size_t i) { return {PointKind::Voter, i}; }
  static PointId candidate(std::size_t i) { return {PointKind::Candidate, i}; }
  static PointId position(std::size_t i) { return {PointKind::Position, i}; }

  friend bool operator==(const PointId&, const PointId&) = default;
};

/// A position is a nonempty list of base points; its distance to anything is
/// the average distance to its members. A singleton behaves as a point.
struct PositionSpec {
  std::vector<std::size_t> members;

  friend bool operator==(const PositionSpec&, const PositionSpec&) = default;
};

/// Dense row-major matrix of doubles.
class Table {
 public:
  Table() = default;
  Table(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<double> data_;
};

/// Injective map from positions to candidates: entry p is the candidate in position p.
struct Matching {
  std::vector<std::size_t> assignment;

  std::size_t size() const { return assignment.size(); }
  std::size_t operator[](std::size_t p) const { return assignment[p]; }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;
};

inline bool is_valid_matching(const Matching& matching, std::size_t m, std::size_t l) {
  if (matching.size() != l) return false;
  std::vector<bool> used(m, false);
  for (std::size_t c : matching.assignment) {
    if (c >= m || used[c]) return false;
    used[c] = true;
  }
  return true;
}

inline void require_valid_matching(const Matching& matching, std::size_t m, std::size_t l) {
  if (!is_valid_matching(matching, m, l)) {
    throw std::invalid_argument("matching is not an injective map from " + std::to_string(l) +
                                " positions into " + std::to_string(m) + " candidates");
  }
}

/// Candidate set of a matching as a membership mask of size m.
inline std::vector<bool> candidate_mask(const Matching& matching, std::size_t m) {
  std::vector<bool> mask(m, false);
  for (std::size_t c : matching.assignment) mask[c] = true;
  return mask;
}

struct CostBreakdown {
  double total{0.0};
  double voter_part{0.0};
  double position_part{0.0};
};

/// Voters, candidates and position sites in a finite metric space.
///
/// Base points are laid out as voters [0, n), candidates [n, n+m), then
/// position sites [n+m, n+m+s). Distances between base points live in a dense
/// symmetric table. Distances involving set positions are averaged on demand.
/// Immutable after construction.
class MetricInstance {
 public:
  MetricInstance() = default;

  static MetricInstance from_table(std::size_t n_voters, std::size_t n_candidates, std::size_t n_sites,
                                   Table distances, std::vector<PositionSpec> positions,
                                   std::string label = {}) {
    MetricInstance inst;
    inst.n_ = n_voters;
    inst.m_ = n_candidates;
    inst.s_ = n_sites;
    inst.table_ = std::move(distances);
    inst.positions_ = std::move(positions);
    inst.label_ = std::move(label);
    inst.check_structure();
    return inst;
  }

  /// Euclidean instance; coords has one entry per base point, all of the same dimension.
  static MetricInstance from_coordinates(std::size_t n_voters, std::size_t n_candidates, std::size_t n_sites,
                                         std::vector<std::vector<double>> coords,
                                         std::vector<PositionSpec> positions, std::string label = {}) {
    const std::size_t total = n_voters + n_candidates + n_sites;
    if (coords.size() != total) {
      throw std::invalid_argument("expected " + std::to_string(total) + " coordinate vectors, got " +
                                  std::to_string(coords.size()));
    }
    const std::size_t dim = total == 0 ? 0 : coords.front().size();
    Table table(total, total);
    for (std::size_t i = 0; i < total; ++i) {
      if (coords[i].size() != dim) throw std::invalid_argument("coordinate vectors differ in dimension");
      for (double x : coords[i]) {
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite coordinate");
      }
    }
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = i + 1; j < total; ++j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double diff = coords[i][k] - coords[j][k];
          sq += diff * diff;
        }
        table(i, j) = table(j, i) = std::sqrt(sq);
      }
    }
    MetricInstance inst = from_table(n_voters, n_candidates, n_sites, std::move(table), std::move(positions),
                                     std::move(label));
    inst.coords_ = std::move(coords);
    return inst;
  }

  /// Points on the real line, one singleton site per position.
  static MetricInstance on_line(const std::vector<double>& voters, const std::vector<double>& candidates,
                                const std::vector<double>& positions, std::string label = {}) {
    std::vector<std::vector<double>> coords;
    coords.reserve(voters.size() + candidates.size() + positions.size());
    for (double x : voters) coords.push_back({x});
    for (double x : candidates) coords.push_back({x});
    for (double x : positions) coords.push_back({x});
    std::vector<PositionSpec> specs;
    for (std::size_t p = 0; p < positions.size(); ++p) {
      specs.push_back({{voters.size() + candidates.size() + p}});
    }
    return from_coordinates(voters.size(), candidates.size(), positions.size(), std::move(coords),
                            std::move(specs), std::move(label));
  }

  std::size_t n_voters() const { return n_; }
  std::size_t n_candidates() const { return m_; }
  std::size_t n_positions() const { return positions_.size(); }
  std::size_t n_sites() const { return s_; }
  std::size_t n_points() const { return n_ + m_ + s_; }

  std::size_t voter_point(std::size_t v) const { return v; }
  std::size_t candidate_point(std::size_t c) const { return n_ + c; }
  std::size_t site_point(std::size_t k) const { return n_ + m_ + k; }

  double base_distance(std::size_t a, std::size_t b) const { return table_(a, b); }
  const Table& table() const { return table_; }
  const std::vector<PositionSpec>& positions() const { return positions_; }
  const std::string& label() const { return label_; }
  const std::optional<std::vector<std::vector<double>>>& coordinates() const { return coords_; }

  MetricInstance with_label(std::string label) const {
    MetricInstance copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

  /// Distance from base point `a` to position p (average over members).
  double point_to_position(std::size_t a, std::size_t p) const {
    const auto& members = positions_[p].members;
    double sum = 0.0;
    for (std::size_t q : members) sum += table_(a, q);
    return sum / static_cast<double>(members.size());
  }

  double voter_candidate(std::size_t v, std::size_t c) const { return table_(v, n_ + c); }
  double candidate_position(std::size_t c, std::size_t p) const { return point_to_position(n_ + c, p); }

  /// Candidate x position table of d(c, p).
  Table candidate_position_table() const {
    Table out(m_, positions_.size());
    for (std::size_t c = 0; c < m_; ++c) {
      for (std::size_t p = 0; p < positions_.size(); ++p) out(c, p) = candidate_position(c, p);
    }
    return out;
  }

  std::size_t base_index(PointId id) const {
    switch (id.kind) {
      case PointKind::Voter:
        if (id.index < n_) return id.index;
        break;
      case PointKind::Candidate:
        if (id.index < m_) return n_ + id.index;
        break;
      case PointKind::Position:
        break;
    }
    throw std::invalid_argument(std::string("unknown ") + to_string(id.kind) + " id " + std::to_string(id.index));
  }

 private:
  void check_structure() const {
    const std::size_t total = n_points();
    if (table_.rows() != total || table_.cols() != total) {
      throw std::invalid_argument("distance table must be " + std::to_string(total) + "x" + std::to_string(total));
    }
    for (double x : table_.data()) {
      if (!std::isfinite(x)) throw std::invalid_argument("non-finite distance entry");
    }
    if (positions_.size() > m_) {
      throw std::invalid_argument("more positions (" + std::to_string(positions_.size()) + ") than candidates (" +
                                  std::to_string(m_) + ")");
    }
    for (const auto& spec : positions_) {
      if (spec.members.empty()) throw std::invalid_argument("position with no members");
      for (std::size_t q : spec.members) {
        if (q >= total) throw std::invalid_argument("position member " + std::to_string(q) + " out of range");
      }
    }
  }

  std::size_t n_{0};
  std::size_t m_{0};
  std::size_t s_{0};
  Table table_;
  std::vector<PositionSpec> positions_;
  std::string label_;
  std::optional<std::vector<std::vector<double>>> coords_;
};

// ---------------------------------------------------------------------------
// Validation

enum class Axiom { NonzeroSelfDistance, Negative, Asymmetric, Triangle };

inline const char* to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::NonzeroSelfDistance: return "nonzero-self-distance";
    case Axiom::Negative: return "negative";
    case Axiom::Asymmetric: return "asymmetric";
    case Axiom::Triangle: return "triangle";
  }
  return "?";
}

struct Violation {
  Axiom axiom;
  // For Triangle: d(i,k) > d(i,j) + d(j,k). Unused indices are equal to i.
  std::size_t i{0};
  std::size_t j{0};
  std::size_t k{0};
  double excess{0.0};
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Informational remarks that do not reject the instance.
  std::vector<std::string> notes;

  bool accepted() const { return violations.empty(); }
};

/// Checks the metric axioms on a square table; every violation is reported.
inline ValidationReport validate_table(const Table& d) {
  ValidationReport report;
  const std::size_t size = d.rows();
  for (std::size_t i = 0; i < size; ++i) {
    if (std::abs(d(i, i)) > kAbsTol) report.violations.push_back({Axiom::NonzeroSelfDistance, i, i, i, d(i, i)});
    for (std::size_t j = i + 1; j < size; ++j) {
      if (d(i, j) < -kAbsTol) report.violations.push_back({Axiom::Negative, i, j, j, -d(i, j)});
      if (!approx_eq(d(i, j), d(j, i))) {
        report.violations.push_back({Axiom::Asymmetric, i, j, j, std::abs(d(i, j) - d(j, i))});
      }
    }
  }
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t k = i + 1; k < size; ++k) {
      for (std::size_t j = 0; j < size; ++j) {
        if (j == i || j == k) continue;
        const double via = d(i, j) + d(j, k);
        if (!approx_le(d(i, k), via)) report.violations.push_back({Axiom::Triangle, i, j, k, d(i, k) - via});
      }
    }
  }
  return report;
}

inline ValidationReport validate_metric(const MetricInstance& instance) {
  ValidationReport report = validate_table(instance.table());
  const std::size_t first_site = instance.n_voters() + instance.n_candidates();
  for (std::size_t p = 0; p < instance.n_positions(); ++p) {
    for (std::size_t q : instance.positions()[p].members) {
      if (q < first_site) {
        report.notes.push_back("position " + std::to_string(p) + " has member " + std::to_string(q) +
                               " which is a " + (q < instance.n_voters() ? "voter" : "candidate"));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Distances and costs

/// Distance between voters, candidates and (set) positions; symmetric.
inline double dist(const MetricInstance& instance, PointId a, PointId b) {
  const bool a_pos = a.kind == PointKind::Position;
  const bool b_pos = b.kind == PointKind::Position;
  auto check_position = [&](PointId id) {
    if (id.index >= instance.n_positions()) {
      throw std::invalid_argument("unknown position id " + std::to_string(id.index));
    }
  };
  if (!a_pos && !b_pos) return instance.base_distance(instance.base_index(a), instance.base_index(b));
  if (a_pos && b_pos) {
    check_position(a);
    check_position(b);
    if (a.index == b.index) return 0.0;
    const auto& ma = instance.positions()[a.index].members;
    double sum = 0.0;
    for (std::size_t q : ma) sum += instance.point_to_position(q, b.index);
    return sum / static_cast<double>(ma.size());
  }
  if (a_pos) std::swap(a, b);
  check_position(b);
  return instance.point_to_position(instance.base_index(a), b.index);
}

/// Pairwise table over voters, candidates and positions (in that order), with
/// set positions lifted to averaged distances.
inline Table lifted_table(const MetricInstance& instance) {
  std::vector<PointId> ids;
  for (std::size_t v = 0; v < instance.n_voters(); ++v) ids.push_back(PointId::voter(v));
  for (std::size_t c = 0; c < instance.n_candidates(); ++c) ids.push_back(PointId::candidate(c));
  for (std::size_t p = 0; p < instance.n_positions(); ++p) ids.push_back(PointId::position(p));
  Table out(ids.size(), ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < ids.size(); ++j) out(i, j) = i == j ? 0.0 : dist(instance, ids[i], ids[j]);
  }
  return out;
}

inline CostBreakdown cost_of_matching(const MetricInstance& instance, const Matching& matching) {
  require_valid_matching(matching, instance.n_candidates(), instance.n_positions());
  CostBreakdown out;
  for (std::size_t p = 0; p < matching.size(); ++p) {
    const std::size_t c = matching[p];
    for (std::size_t v = 0; v < instance.n_voters(); ++v) out.voter_part += instance.voter_candidate(v, c);
    out.position_part += instance.candidate_position(c, p);
  }
  out.position_part *= static_cast<double>(instance.n_voters());
  out.total = out.voter_part + out.position_part;
  return out;
}

/// Social cost of assigning candidate c to position p: sum_v d(v,c) + n d(c,p).
inline double pair_cost(const MetricInstance& instance, std::size_t c, std::size_t p) {
  double sum = 0.0;
  for (std::size_t v = 0; v < instance.n_voters(); ++v) sum += instance.voter_candidate(v, c);
  return sum + static_cast<double>(instance.n_voters()) * instance.candidate_position(c, p);
}

// ---------------------------------------------------------------------------
// Line embedding for two candidates and one position

namespace detail {
inline double zeta(double to_a, double to_b, double a_to_b) { return 0.5 * (to_a + to_b - a_to_b); }
}  // namespace detail

/// Embeds a (2,1) instance into the segment [0, d(A,B)]: A at 0, B at d(A,B),
/// every other point x at d(x,A) - (d(x,A) + d(x,B) - d(A,B)) / 2.
/// Preferences are preserved and each winner's distortion can only grow.
inline MetricInstance line_embed_two_candidates(const MetricInstance& instance) {
  if (instance.n_candidates() != 2 || instance.n_positions() != 1 ||
      instance.positions()[0].members.size() != 1) {
    throw std::invalid_argument("line embedding needs exactly 2 candidates and 1 singleton position");
  }
  const std::size_t a = instance.candidate_point(0);
  const std::size_t b = instance.candidate_point(1);
  const double ab = instance.base_distance(a, b);
  auto embed = [&](std::size_t x) {
    const double xa = instance.base_distance(x, a);
    return xa - detail::zeta(xa, instance.base_distance(x, b), ab);
  };
  std::vector<double> voters(instance.n_voters());
  for (std::size_t v = 0; v < voters.size(); ++v) voters[v] = embed(instance.voter_point(v));
  const double position = embed(instance.positions()[0].members.front());
  return MetricInstance::on_line(voters, {0.0, ab}, {position}, instance.label() + "+line");
}

}  // namespace lineup
