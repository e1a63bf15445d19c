#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lineup/adversary.hpp"
#include "lineup/harness.hpp"
#include "lineup/metric.hpp"
#include "lineup/ordinal.hpp"

namespace lineup::io {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline PointKind parse_kind(const std::string& s) {
  if (s == "voter") return PointKind::Voter;
  if (s == "candidate") return PointKind::Candidate;
  if (s == "position") return PointKind::Position;
  throw ParseError("unknown point kind '" + s + "'");
}

inline double finite_nonnegative(const json& value, const char* what) {
  if (!value.is_number()) throw ParseError(std::string(what) + " entry is not a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ParseError(std::string(what) + " entry is not finite");
  if (x < 0.0) throw ParseError(std::string(what) + " entry is negative");
  return x;
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

/// Parses an instance document. Points may appear in any order; they are laid
/// out as voters, candidates, then position sites, each by index.
inline MetricInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance document must be an object");
  const auto n = detail::require<std::size_t>(j, "n_voters");
  const auto m = detail::require<std::size_t>(j, "candidates");
  const json& points = j.contains("points") ? j.at("points") : throw ParseError("missing field 'points'");
  if (!points.is_array()) throw ParseError("'points' must be an array");
  const bool has_coords = j.contains("coords");
  const bool has_matrix = j.contains("distance_matrix");
  if (has_coords == has_matrix) throw ParseError("exactly one of 'coords' and 'distance_matrix' is required");

  const std::size_t total = points.size();
  std::size_t sites = 0;
  for (const auto& pt : points) {
    if (detail::parse_kind(detail::require<std::string>(pt, "kind")) == PointKind::Position) ++sites;
  }
  if (total != n + m + sites) throw ParseError("point counts disagree with n_voters and candidates");

  // where[i] = base index of the i-th listed point
  std::vector<std::size_t> where(total);
  std::vector<bool> seen(total, false);
  for (std::size_t i = 0; i < total; ++i) {
    const PointKind kind = detail::parse_kind(detail::require<std::string>(points[i], "kind"));
    const auto index = detail::require<std::size_t>(points[i], "index");
    const std::size_t count = kind == PointKind::Voter ? n : (kind == PointKind::Candidate ? m : sites);
    if (index >= count) throw ParseError("point index out of range");
    const std::size_t base = (kind == PointKind::Voter ? 0 : (kind == PointKind::Candidate ? n : n + m)) + index;
    if (seen[base]) throw ParseError("duplicate point");
    seen[base] = true;
    where[i] = base;
  }

  std::vector<PositionSpec> positions;
  for (const auto& members : detail::require<std::vector<std::vector<std::size_t>>>(j, "positions")) {
    PositionSpec spec;
    for (std::size_t ref : members) {
      if (ref >= total) throw ParseError("position member out of range");
      spec.members.push_back(where[ref]);
    }
    positions.push_back(std::move(spec));
  }
  const std::string label = j.value("label", std::string{});

  try {
    if (has_coords) {
      const json& raw = j.at("coords");
      if (!raw.is_array() || raw.size() != total) throw ParseError("'coords' must list one vector per point");
      std::vector<std::vector<double>> coords(total);
      for (std::size_t i = 0; i < total; ++i) {
        if (!raw[i].is_array()) throw ParseError("coordinate entry is not an array");
        for (const auto& x : raw[i]) {
          if (!x.is_number() || !std::isfinite(x.get<double>())) throw ParseError("coordinate is not finite");
          coords[where[i]].push_back(x.get<double>());
        }
      }
      return MetricInstance::from_coordinates(n, m, sites, std::move(coords), std::move(positions), label);
    }
    const json& raw = j.at("distance_matrix");
    if (!raw.is_array() || raw.size() != total * (total - (total > 0 ? 1 : 0)) / 2) {
      throw ParseError("'distance_matrix' must hold the strict upper triangle");
    }
    Table table(total, total);
    std::size_t k = 0;
    for (std::size_t a = 0; a < total; ++a) {
      for (std::size_t b = a + 1; b < total; ++b) {
        const double x = detail::finite_nonnegative(raw[k++], "distance_matrix");
        table(where[a], where[b]) = table(where[b], where[a]) = x;
      }
    }
    return MetricInstance::from_table(n, m, sites, std::move(table), std::move(positions), label);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline json instance_to_json(const MetricInstance& inst) {
  json j;
  j["label"] = inst.label();
  j["n_voters"] = inst.n_voters();
  j["candidates"] = inst.n_candidates();
  json points = json::array();
  for (std::size_t v = 0; v < inst.n_voters(); ++v) points.push_back({{"kind", "voter"}, {"index", v}});
  for (std::size_t c = 0; c < inst.n_candidates(); ++c) points.push_back({{"kind", "candidate"}, {"index", c}});
  for (std::size_t s = 0; s < inst.n_sites(); ++s) points.push_back({{"kind", "position"}, {"index", s}});
  j["points"] = std::move(points);
  json positions = json::array();
  for (const auto& spec : inst.positions()) positions.push_back(spec.members);
  j["positions"] = std::move(positions);
  if (inst.coordinates()) {
    j["coords"] = *inst.coordinates();
  } else {
    std::vector<double> upper;
    for (std::size_t a = 0; a < inst.n_points(); ++a) {
      for (std::size_t b = a + 1; b < inst.n_points(); ++b) upper.push_back(inst.base_distance(a, b));
    }
    j["distance_matrix"] = std::move(upper);
  }
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline MetricInstance read_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

// Profiles: plain nested arrays of candidate indices.

inline json to_json(const VoterProfile& profile) { return profile.nested(); }
inline json to_json(const PositionProfile& profile) { return profile.nested(); }

inline VoterProfile voter_profile_from_json(const json& j, std::size_t m, std::size_t l) {
  try {
    return VoterProfile(m, l, j.get<std::vector<std::vector<std::vector<std::size_t>>>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("voter profile: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("voter profile: ") + e.what());
  }
}

inline PositionProfile position_profile_from_json(const json& j, std::size_t m) {
  try {
    return PositionProfile(m, j.get<std::vector<std::vector<std::size_t>>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("position profile: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("position profile: ") + e.what());
  }
}

// Reports

inline json to_json(const ValidationReport& report) {
  json j;
  j["accepted"] = report.accepted();
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"axiom", to_string(v.axiom)}, {"points", {v.i, v.j, v.k}}, {"excess", v.excess}});
  }
  j["violations"] = std::move(violations);
  j["notes"] = report.notes;
  return j;
}

inline json ratio_to_json(double value) {
  if (std::isinf(value)) return "inf";
  return value;
}

inline json to_json(const AdversaryResult& result) {
  json j;
  j["value"] = ratio_to_json(result.value);
  j["binding_alternative"] = result.binding_alternative.assignment;
  j["has_witness"] = result.witness.has_value();
  return j;
}

/// Parses "p0:c2,p1:c0" (or "2,0") into a matching over l positions.
inline Matching parse_matching(const std::string& text, std::size_t l) {
  Matching out;
  out.assignment.assign(l, static_cast<std::size_t>(-1));
  std::stringstream ss(text);
  std::string item;
  std::size_t next = 0;
  auto number = [&](const std::string& s, char prefix) {
    std::string body = s;
    if (!body.empty() && body.front() == prefix) body.erase(0, 1);
    if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("bad matching entry '" + s + "'");
    }
    return static_cast<std::size_t>(std::stoull(body));
  };
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    std::size_t p = next++;
    std::string cand = item;
    if (colon != std::string::npos) {
      p = number(item.substr(0, colon), 'p');
      cand = item.substr(colon + 1);
    }
    if (p >= l) throw ParseError("matching position out of range");
    out.assignment[p] = number(cand, 'c');
  }
  for (std::size_t c : out.assignment) {
    if (c == static_cast<std::size_t>(-1)) throw ParseError("matching leaves a position unassigned");
  }
  return out;
}

// Sweep configuration: one object per run mirroring GeneratorSpec.

inline GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec g;
  try {
    g.family = parse_family(j.value("family", std::string("euclidean")));
    g.dim = j.value("dim", std::size_t{2});
    g.n = j.value("n", std::size_t{1});
    g.m = j.value("m", std::size_t{1});
    g.l = j.value("l", std::size_t{1});
    g.seed = j.value("seed", std::uint64_t{0});
    g.vary_sizes = j.value("vary_sizes", false);
    if (j.contains("set_positions")) {
      const auto range = j.at("set_positions").get<std::vector<std::size_t>>();
      if (range.size() != 2) throw ParseError("'set_positions' must be [min, max]");
      g.set_positions = std::make_pair(range[0], range[1]);
    }
    g.fixture = j.value("fixture", std::string{});
    g.eps = j.value("eps", 1e-3);
    g.validate();
  } catch (const json::exception& e) {
    throw ParseError(std::string("generator: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("generator: ") + e.what());
  }
  return g;
}

struct SweepConfig {
  std::vector<ExperimentRun> runs;
  std::size_t trials{0};
  std::size_t threads{1};
};

inline SweepConfig sweep_from_json(const json& j) {
  SweepConfig cfg;
  cfg.trials = detail::require<std::size_t>(j, "trials");
  cfg.threads = j.value("threads", std::size_t{1});
  if (!j.contains("runs") || !j.at("runs").is_array()) throw ParseError("'runs' must be an array");
  for (const auto& r : j.at("runs")) {
    ExperimentRun run;
    run.generator = generator_from_json(r);
    run.mechanism = detail::require<std::string>(r, "mechanism");
    try {
      find_mechanism(run.mechanism);
      if (r.contains("info")) run.info = parse_info_kind(r.at("info").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    cfg.runs.push_back(std::move(run));
  }
  return cfg;
}

}  // namespace lineup::io
