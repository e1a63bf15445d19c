#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lineup/exact.hpp"
#include "lineup/info.hpp"
#include "lineup/lower_bounds.hpp"
#include "lineup/mechanisms.hpp"
#include "lineup/metric.hpp"

namespace lineup {

// ---------------------------------------------------------------------------
// Random numbers

/// SplitMix64: tiny, portable, and splittable by hashing the trial index into the seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 h(index * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
  return seed ^ h.next();
}

// ---------------------------------------------------------------------------
// Generators

enum class Family { EuclideanBox, Line, RandomMetric, PaperFixture, Mixed };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::EuclideanBox: return "euclidean";
    case Family::Line: return "line";
    case Family::RandomMetric: return "random-metric";
    case Family::PaperFixture: return "fixture";
    case Family::Mixed: return "mixed";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "euclidean") return Family::EuclideanBox;
  if (s == "line") return Family::Line;
  if (s == "random-metric") return Family::RandomMetric;
  if (s == "fixture") return Family::PaperFixture;
  if (s == "mixed") return Family::Mixed;
  throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

struct GeneratorSpec {
  Family family{Family::EuclideanBox};
  std::size_t dim{2};
  std::size_t n{1};
  std::size_t m{1};
  std::size_t l{1};
  std::uint64_t seed{0};
  /// Treat n, m, l as maxima and draw each instance's sizes (n >= 1, m >= 1, 1 <= l <= m).
  bool vary_sizes{false};
  /// Member-count range for set positions; absent means singleton positions.
  std::optional<std::pair<std::size_t, std::size_t>> set_positions;
  std::string fixture;
  double eps{1e-3};

  void validate() const {
    if (family == Family::PaperFixture) {
      lower_bound_closed_form(fixture, 0.01);
      return;
    }
    if (m == 0) throw std::invalid_argument("generator needs at least one candidate");
    if (l > m) throw std::invalid_argument("generator needs l <= m");
    if (l == 0 && !vary_sizes) throw std::invalid_argument("generator needs at least one position");
    if (family == Family::EuclideanBox && dim == 0) throw std::invalid_argument("dimension must be positive");
    if (set_positions && (set_positions->first == 0 || set_positions->first > set_positions->second)) {
      throw std::invalid_argument("set position member range must satisfy 1 <= min <= max");
    }
  }
};

namespace detail {

inline MetricInstance random_metric(std::size_t n, std::size_t m, std::size_t sites,
                                    std::vector<PositionSpec> positions, SplitMix64& rng, std::string label) {
  const std::size_t total = n + m + sites;
  const double inf = std::numeric_limits<double>::infinity();
  Table d(total, total, inf);
  for (std::size_t i = 0; i < total; ++i) d(i, i) = 0.0;
  // A random spanning path keeps the graph connected; other edges appear with probability 1/2.
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.between(0, i - 1)]);
  for (std::size_t i = 0; i + 1 < total; ++i) {
    const double w = rng.uniform(0.05, 1.0);
    d(order[i], order[i + 1]) = d(order[i + 1], order[i]) = w;
  }
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const double w = rng.uniform(0.05, 1.0);
      if (rng.uniform() < 0.5) d(i, j) = d(j, i) = std::min(d(i, j), w);
    }
  }
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = 0; j < total; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return MetricInstance::from_table(n, m, sites, std::move(d), std::move(positions), std::move(label));
}

}  // namespace detail

/// Deterministic given the generator settings, seed included.
inline MetricInstance generate_instance(const GeneratorSpec& spec) {
  spec.validate();
  if (spec.family == Family::PaperFixture) return lower_bound_instance(spec.fixture, spec.eps).instance;

  SplitMix64 rng(spec.seed);
  std::size_t n = spec.n, m = spec.m, l = spec.l;
  if (spec.vary_sizes) {
    n = rng.between(1, std::max<std::size_t>(spec.n, 1));
    m = rng.between(1, spec.m);
    l = rng.between(1, std::max<std::size_t>(1, std::min(spec.l, m)));
  }
  Family family = spec.family;
  std::size_t dim = spec.dim;
  if (family == Family::Mixed) {
    const std::size_t pick = rng.between(0, 3);
    family = pick == 0 ? Family::Line : (pick == 3 ? Family::RandomMetric : Family::EuclideanBox);
    dim = pick == 2 ? 3 : 2;
  }
  if (family == Family::Line) dim = 1;

  std::vector<PositionSpec> positions(l);
  std::size_t sites = 0;
  for (std::size_t p = 0; p < l; ++p) {
    const std::size_t k = spec.set_positions ? rng.between(spec.set_positions->first, spec.set_positions->second) : 1;
    for (std::size_t i = 0; i < k; ++i) positions[p].members.push_back(n + m + sites++);
  }
  std::ostringstream label;
  label << to_string(family) << "(n=" << n << ",m=" << m << ",l=" << l << ",seed=" << spec.seed << ")";

  if (family == Family::RandomMetric) {
    return detail::random_metric(n, m, sites, std::move(positions), rng, label.str());
  }
  std::vector<std::vector<double>> coords(n + m + sites, std::vector<double>(dim));
  for (auto& point : coords) {
    for (double& x : point) x = rng.uniform();
  }
  return MetricInstance::from_coordinates(n, m, sites, std::move(coords), std::move(positions), label.str());
}

/// Spec for trial i: same shape, seed split by the trial index.
inline GeneratorSpec trial_spec(GeneratorSpec spec, std::uint64_t trial) {
  spec.seed = mix_seed(spec.seed, trial);
  return spec;
}

// ---------------------------------------------------------------------------
// Mechanism registry

struct MechanismEntry {
  std::string name;
  /// Information the mechanism reads.
  InfoKind needs;
  std::function<Matching(const InfoSet&)> run;
  std::function<bool(const Shape&)> applies;
  /// Proven distortion bound for the given shape.
  std::function<double(const Shape&)> bound;
};

inline const std::vector<MechanismEntry>& mechanism_registry() {
  static const std::vector<MechanismEntry> registry = [] {
    auto any = [](const Shape& s) { return s.l() >= 1 && s.l() <= s.m; };
    auto pair_shape = [](const Shape& s) { return s.m == 2 && s.l() == 1; };
    std::vector<MechanismEntry> r;
    r.push_back({"iterative-veto", InfoKind::VP, [](const InfoSet& i) { return iterative_election(*i.voters); }, any,
                 [](const Shape& s) { return s.l() == 1 || s.l() == s.m ? 3.0 : 7.0; }});
    r.push_back({"serial-dictatorship", InfoKind::PP,
                 [](const InfoSet& i) { return serial_dictatorship(*i.positions); }, any, [](const Shape& s) {
                   if (s.l() == 1) return 3.0;
                   if (s.l() == s.m) return 3.0 - std::ldexp(1.0, 2 - static_cast<int>(s.m));
                   return 5.0;
                 }});
    r.push_back({"min-cp-matching", InfoKind::LOC,
                 [](const InfoSet& i) { return min_position_cost_matching(i.location->cp); }, any,
                 [](const Shape& s) { return s.l() == s.m ? 1.0 : 3.0; }});
    r.push_back({"pair-location", InfoKind::LOC_VP,
                 [](const InfoSet& i) { return pair_location(i.location->cp, *i.voters); }, pair_shape,
                 [](const Shape&) { return 5.0 / 3.0; }});
    r.push_back({"pair-hybrid", InfoKind::VP_PP,
                 [](const InfoSet& i) { return pair_hybrid(*i.positions, *i.voters); }, pair_shape,
                 [](const Shape&) { return 2.0; }});
    r.push_back({"tournament-location", InfoKind::LOC_VP,
                 [](const InfoSet& i) { return Matching{{tournament_location_rule(i.location->cp, *i.voters)}}; },
                 [](const Shape& s) { return s.l() == 1 && s.m >= 1; }, [](const Shape&) { return 25.0 / 9.0; }});
    return r;
  }();
  return registry;
}

inline const MechanismEntry& find_mechanism(std::string_view name) {
  for (const auto& e : mechanism_registry()) {
    if (e.name == name) return e;
  }
  throw std::invalid_argument("unknown mechanism '" + std::string(name) + "'");
}

/// True when information of kind `have` includes everything of kind `need`.
inline bool provides(InfoKind have, InfoKind need) {
  return (!has_voter_preferences(need) || has_voter_preferences(have)) &&
         (!has_position_preferences(need) || has_position_preferences(have)) &&
         (!has_locations(need) || has_locations(have));
}

/// Runs the mechanism on an information set, rejecting sets that lack what it reads.
inline Matching run_mechanism(const MechanismEntry& mech, const InfoSet& info) {
  info.validate();
  if (!provides(info.kind, mech.needs)) {
    throw std::invalid_argument(mech.name + " needs " + to_string(mech.needs) + " information, got " +
                                to_string(info.kind));
  }
  if (!mech.applies(info.shape)) throw std::invalid_argument(mech.name + " does not apply to this shape");
  return mech.run(info);
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentRun {
  GeneratorSpec generator;
  std::string mechanism;
  /// Defaults to what the mechanism needs.
  std::optional<InfoKind> info;
};

struct ReportRow {
  std::size_t run{0};
  std::uint64_t trial{0};
  std::string label;
  std::string mechanism;
  InfoKind info{InfoKind::VP};
  std::size_t n{0}, m{0}, l{0};
  double mechanism_cost{0.0};
  double optimum_cost{0.0};
  double ratio{1.0};
  double bound{1.0};
  double margin{0.0};
  bool within_bound{true};
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  /// Per run, the instance with the largest ratio.
  std::vector<std::optional<MetricInstance>> worst;

  bool all_within_bounds() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.within_bound; });
  }
  double max_ratio() const {
    double best = 0.0;
    for (const auto& r : rows) best = std::max(best, r.ratio);
    return best;
  }
};

inline constexpr double kBoundSlack = 1e-9;

/// Scores one instance against the exact optimum.
inline ReportRow score_instance(const MetricInstance& instance, const MechanismEntry& mech, InfoKind kind) {
  const InfoSet info = make_info(instance, kind);
  const Matching chosen = run_mechanism(mech, info);
  ReportRow row;
  row.label = instance.label();
  row.mechanism = mech.name;
  row.info = kind;
  row.n = instance.n_voters();
  row.m = instance.n_candidates();
  row.l = instance.n_positions();
  row.mechanism_cost = cost_of_matching(instance, chosen).total;
  row.optimum_cost = cost_of_matching(instance, optimal_matching(instance)).total;
  row.ratio = cost_ratio(row.mechanism_cost, row.optimum_cost);
  row.bound = mech.bound(info.shape);
  row.margin = row.bound - row.ratio;
  row.within_bound = row.ratio >= 1.0 - kBoundSlack && row.ratio <= row.bound + kBoundSlack;
  return row;
}

/// Runs every (generator, mechanism) pair for `trials` seeded trials. Rows are
/// ordered by (run, trial) regardless of `threads`.
inline ExperimentReport run_experiment(const std::vector<ExperimentRun>& runs, std::size_t trials,
                                       std::size_t threads = 1) {
  struct Prepared {
    const MechanismEntry* mech;
    InfoKind kind;
  };
  std::vector<Prepared> prepared;
  for (const auto& run : runs) {
    run.generator.validate();
    const MechanismEntry& mech = find_mechanism(run.mechanism);
    const InfoKind kind = run.info.value_or(mech.needs);
    if (!provides(kind, mech.needs)) {
      throw std::invalid_argument(mech.name + " is incompatible with " + to_string(kind) + " information");
    }
    prepared.push_back({&mech, kind});
  }

  ExperimentReport report;
  report.rows.resize(runs.size() * trials);
  report.worst.resize(runs.size());
  std::vector<std::exception_ptr> errors(threads == 0 ? 1 : threads);

  auto work = [&](std::size_t worker, std::size_t stride) {
    try {
      for (std::size_t k = worker; k < report.rows.size(); k += stride) {
        const std::size_t r = k / trials;
        const std::uint64_t t = k % trials;
        const MetricInstance inst = generate_instance(trial_spec(runs[r].generator, t));
        ReportRow row = score_instance(inst, *prepared[r].mech, prepared[r].kind);
        row.run = r;
        row.trial = t;
        report.rows[k] = std::move(row);
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, threads);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Worst instance per run (first maximum in trial order), regenerated from its seed.
  for (std::size_t r = 0; r < runs.size() && trials > 0; ++r) {
    std::size_t best = r * trials;
    for (std::size_t k = r * trials; k < (r + 1) * trials; ++k) {
      if (report.rows[k].ratio > report.rows[best].ratio) best = k;
    }
    report.worst[r] = generate_instance(trial_spec(runs[r].generator, report.rows[best].trial));
  }
  return report;
}

inline constexpr const char* kCsvVersion = "# lineup-report v1";

inline void write_csv(std::ostream& out, const ExperimentReport& report) {
  out << kCsvVersion << '\n';
  out << "run,trial,label,mechanism,info,n,m,l,mechanism_cost,optimum_cost,ratio,bound,margin,within_bound\n";
  const auto old_precision = out.precision();
  out << std::setprecision(12);
  for (const auto& r : report.rows) {
    out << r.run << ',' << r.trial << ",\"" << r.label << "\"," << r.mechanism << ',' << to_string(r.info) << ','
        << r.n << ',' << r.m << ',' << r.l << ',' << r.mechanism_cost << ',' << r.optimum_cost << ',' << r.ratio
        << ',' << r.bound << ',' << r.margin << ',' << (r.within_bound ? "true" : "false") << '\n';
  }
  out.precision(old_precision);
}

}  // namespace lineup
