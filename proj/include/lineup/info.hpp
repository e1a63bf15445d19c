#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lineup/metric.hpp"
#include "lineup/ordinal.hpp"

namespace lineup {

/// What a mechanism (or the adversary) is allowed to know about an election.
enum class InfoKind { VP, PP, VP_PP, LOC, LOC_VP };

inline const char* to_string(InfoKind kind) {
  switch (kind) {
    case InfoKind::VP: return "vp";
    case InfoKind::PP: return "pp";
    case InfoKind::VP_PP: return "vp+pp";
    case InfoKind::LOC: return "loc";
    case InfoKind::LOC_VP: return "loc+vp";
  }
  return "?";
}

inline InfoKind parse_info_kind(std::string_view text) {
  if (text == "vp") return InfoKind::VP;
  if (text == "pp") return InfoKind::PP;
  if (text == "vp+pp" || text == "pp+vp") return InfoKind::VP_PP;
  if (text == "loc") return InfoKind::LOC;
  if (text == "loc+vp" || text == "vp+loc") return InfoKind::LOC_VP;
  throw std::invalid_argument("unknown information kind '" + std::string(text) + "'");
}

inline bool has_voter_preferences(InfoKind k) { return k == InfoKind::VP || k == InfoKind::VP_PP || k == InfoKind::LOC_VP; }
inline bool has_position_preferences(InfoKind k) { return k == InfoKind::PP || k == InfoKind::VP_PP; }
inline bool has_locations(InfoKind k) { return k == InfoKind::LOC || k == InfoKind::LOC_VP; }

/// Point layout of an election without distances: voters, candidates, sites,
/// and the member lists of every position.
struct Shape {
  std::size_t n{0};
  std::size_t m{0};
  std::size_t sites{0};
  std::vector<PositionSpec> positions;

  std::size_t l() const { return positions.size(); }
  std::size_t points() const { return n + m + sites; }

  static Shape of(const MetricInstance& instance) {
    return {instance.n_voters(), instance.n_candidates(), instance.n_sites(), instance.positions()};
  }
  /// One singleton site per position.
  static Shape simple(std::size_t n, std::size_t m, std::size_t l) {
    Shape s{n, m, l, {}};
    for (std::size_t p = 0; p < l; ++p) s.positions.push_back({{n + m + p}});
    return s;
  }
};

/// Exact locations of candidates and positions.
struct LocationInfo {
  /// d(c, p) for every candidate and position.
  Table cp;
  /// Distances among candidates and sites, indexed [0, m) candidates then
  /// [m, m + sites) sites. Absent when only the cp table is known.
  std::optional<Table> located;
};

struct InfoSet {
  InfoKind kind{InfoKind::VP};
  Shape shape;
  std::optional<VoterProfile> voters;
  std::optional<PositionProfile> positions;
  std::optional<LocationInfo> location;

  void validate() const {
    if (has_voter_preferences(kind) != voters.has_value() || has_position_preferences(kind) != positions.has_value() ||
        has_locations(kind) != location.has_value()) {
      throw std::invalid_argument(std::string("information set fields do not match kind ") + to_string(kind));
    }
    if (voters && (voters->n_voters() != shape.n || voters->n_candidates() != shape.m ||
                   voters->n_positions() != shape.l())) {
      throw std::invalid_argument("voter profile shape mismatch");
    }
    if (positions && (positions->n_candidates() != shape.m || positions->n_positions() != shape.l())) {
      throw std::invalid_argument("position profile shape mismatch");
    }
    if (location) {
      if (location->cp.rows() != shape.m || location->cp.cols() != shape.l()) {
        throw std::invalid_argument("candidate-position table shape mismatch");
      }
      if (location->located && (location->located->rows() != shape.m + shape.sites ||
                                location->located->cols() != shape.m + shape.sites)) {
        throw std::invalid_argument("located distance table shape mismatch");
      }
    }
  }
};

inline LocationInfo location_info(const MetricInstance& instance) {
  LocationInfo info{instance.candidate_position_table(), std::nullopt};
  const std::size_t m = instance.n_candidates();
  const std::size_t total = m + instance.n_sites();
  Table located(total, total);
  auto base = [&](std::size_t i) { return i < m ? instance.candidate_point(i) : instance.site_point(i - m); };
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) located(i, j) = instance.base_distance(base(i), base(j));
  }
  info.located = std::move(located);
  return info;
}

/// Derives the information set of the given kind from a full instance.
inline InfoSet make_info(const MetricInstance& instance, InfoKind kind) {
  InfoSet info;
  info.kind = kind;
  info.shape = Shape::of(instance);
  if (has_voter_preferences(kind)) info.voters = voter_profile(instance);
  if (has_position_preferences(kind)) info.positions = position_profile(instance);
  if (has_locations(kind)) info.location = location_info(instance);
  return info;
}

}  // namespace lineup
