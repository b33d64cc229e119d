#pragma once

// Orbit experiments on the torus: x k orbits, hitting sets, window
// densities, finite-sums witnesses and exhaustive multiplier searches.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/algsem.hpp"
#include "gplab/brackets.hpp"
#include "gplab/genpoly.hpp"
#include "gplab/numbers.hpp"

namespace gplab {

using TorusPoint = std::vector<ExactScalar>;

/// ({k^n x})_{n=0..N}, each step reduced coordinatewise. x must lie in [0,1)^d.
std::vector<TorusPoint> torus_orbit(const TorusPoint& x, long k, std::size_t steps,
                                    unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

struct HitReport {
  std::vector<std::size_t> hits;
  std::vector<std::size_t> indeterminate;
};

HitReport hitting_times(const std::vector<TorusPoint>& orbit, const SemialgebraicSet& s,
                        unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

/// E intersected with [1, N]; bit i stands for the integer i + 1.
struct DensityWindow {
  std::vector<bool> bits;
  /// Banach window length W; 0 picks max(1, N / 10).
  std::size_t window = 0;
  std::size_t offset_step = 1;
  /// Smallest offset of the Banach scan; 0 picks W.
  std::size_t offset_min = 0;

  static DensityWindow from_predicate(std::size_t n, const std::function<bool(long)>& in_set);
  static DensityWindow from_set(const std::set<long>& e, std::size_t n);
  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
};

struct DensityStats {
  std::size_t n = 0;
  std::size_t count = 0;
  /// max / min of |E cap [1,N']| / N' over N' in [N/2, N].
  Rational upper;
  Rational lower;
  /// |E cap [1,N]| / N, set when upper - lower < tolerance.
  std::optional<Rational> natural;
  /// max over offsets M of |E cap [M, M+W)| / W.
  Rational banach_upper;
  std::size_t banach_offset = 0;
  std::size_t window = 0;
  nlohmann::json to_json() const;
};

DensityStats density_stats(const DensityWindow& e, const Rational& tolerance = Rational(1, 1000));

/// Sums over nonempty sub-multisets; at most 20 generators.
std::set<long> fs_set(const std::vector<long>& generators);

/// Strictly increasing n_1 < ... < n_r with fs_set inside E, by depth-first
/// search over E cap [1, bound]. `max_nodes` = 0 means unlimited; when the
/// budget runs out the result is nullopt and `exhausted` is set.
std::optional<std::vector<long>> find_fs_subset(const std::set<long>& e, std::size_t r, long bound,
                                                std::size_t max_nodes = 0, bool* exhausted = nullptr);

struct SearchOptions {
  unsigned max_bits = kDefaultMaxBits;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned jobs = 1;
  bool check_premise = true;
};

struct MultiplierReport {
  std::vector<long> multipliers;
  bool premise_checked = false;
  bool premise_holds = true;
  std::vector<long> premise_failures;
  /// Multipliers skipped because a comparison stayed undecided.
  std::vector<long> indeterminate;
  /// Multipliers whose fresh evaluation at doubled precision disagreed.
  std::vector<long> reverify_failures;
  PrecisionStats precision;
  nlohmann::json params;
  nlohmann::json to_json() const;
};

/// All l <= l_max with {l k^n x} in S for every n in [n0, n1].
MultiplierReport multiplier_search_torus(const TorusPoint& x, const SemialgebraicSet& s, long k, std::size_t n0,
                                         std::size_t n1, long l_max, const SearchOptions& opt = {});

struct FsProbe {
  std::size_t order = 0;
  std::vector<long> generators;
  bool budget_exhausted = false;
};

struct ExperimentReport {
  nlohmann::json params;
  bool premise_checked = false;
  bool premise_holds = true;
  std::vector<long> premise_failures;
  /// m with its witness exponents n.
  std::map<long, std::vector<std::size_t>> multipliers;
  /// Direct evaluation and T_k iteration agreed at every tested (m, n).
  bool path_independent = true;
  std::size_t path_checks = 0;
  std::vector<long> indeterminate;
  std::vector<long> reverify_failures;
  FsProbe fs_probe;
  std::optional<DensityStats> density;
  PrecisionStats precision;

  std::set<long> found() const;
  nlohmann::json to_json() const;
};

struct ExperimentOptions : SearchOptions {
  bool path_check = true;
  /// Largest FS order probed, and the node budget per order.
  std::size_t fs_max_order = 4;
  std::size_t fs_max_nodes = 200000;
};

/// m <= m_max with k not dividing m and {v^alpha(m k^n)} in zero_set for
/// some n in [n0, n1], computed directly and along T_k from {v^alpha(m)}.
ExperimentReport theoremA_experiment(const IndexSet& d, const std::map<unsigned, ExactScalar>& alpha,
                                     const SemialgebraicSet& zero_set, long k, long m_max, std::size_t n0,
                                     std::size_t n1, const ExperimentOptions& opt = {});

/// Scalar variant: g(m k^n) = 0 with g a univariate generalised polynomial.
ExperimentReport theoremA_experiment(const GenPoly& g, long k, long m_max, std::size_t n0, std::size_t n1,
                                     const ExperimentOptions& opt = {});

}  // namespace gplab
