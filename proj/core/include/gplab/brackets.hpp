#pragma once

// Bracket indices: formal products i[l_1]...[l_s] of a positive integer leaf
// with bracketed sub-indices, plus the finite downward-closed sets built
// from them.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/numbers.hpp"

namespace gplab {

class BracketIndex {
 public:
  explicit BracketIndex(unsigned leaf, std::vector<BracketIndex> factors = {});

  unsigned leaf() const { return leaf_; }
  /// Factors in canonical order.
  const std::vector<BracketIndex>& factors() const { return factors_; }
  bool is_leaf() const { return factors_.empty(); }
  unsigned height() const { return height_; }
  /// Number of leaves in the expression tree.
  std::size_t size() const { return size_; }

  /// k[l] for this index k.
  BracketIndex with_factor(const BracketIndex& l) const;
  /// Canonical split mu = kappa[lambda] with lambda the last canonical factor.
  /// Requires a compound index.
  std::pair<BracketIndex, BracketIndex> split() const;

  /// Literal form, e.g. "1[2][2[1]]".
  std::string to_string() const;

  /// Canonical, grading-independent total order: height, size, leaf, factors.
  friend std::strong_ordering operator<=>(const BracketIndex& a, const BracketIndex& b);
  friend bool operator==(const BracketIndex& a, const BracketIndex& b) { return (a <=> b) == 0; }

 private:
  unsigned leaf_;
  std::vector<BracketIndex> factors_;
  unsigned height_ = 0;
  std::size_t size_ = 1;
};

BracketIndex parse_index(std::string_view text);

/// Leaf degrees d_i >= 1.
using Grading = std::map<unsigned, unsigned>;

/// d_i on leaves, additive over factors. Throws MissingGrade.
unsigned degree(const BracketIndex& mu, const Grading& grading);
inline unsigned height(const BracketIndex& mu) { return mu.height(); }

/// nu derivable from mu (nu removed-factors-of mu, recursively).
bool derivable(const BracketIndex& nu, const BracketIndex& mu);

/// Every index derivable from some member, canonically sorted.
std::vector<BracketIndex> downward_closure(const std::vector<BracketIndex>& members);

/// c_i = number of members of height i. Throws NotDownwardClosed.
std::vector<std::size_t> complexity_vector(const std::vector<BracketIndex>& members);
/// Reverse lexicographic comparison (top coordinate first); missing entries are 0.
std::strong_ordering compare_complexity(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Finite downward-closed index set with grading and a coordinate order
/// extending derivability.
class IndexSet {
 public:
  /// Default coordinate order sorts by (degree, leaf, height, canonical);
  /// a supplied `order` must list exactly the members and extend derivability.
  IndexSet(std::vector<BracketIndex> members, Grading grading,
           std::optional<std::vector<BracketIndex>> order = std::nullopt);

  /// D = {1, 2, 1[2], 2[1], 3} with d_1 = d_2 = 1, d_3 = 2.
  static IndexSet running_example();
  static IndexSet closure_of(const std::vector<BracketIndex>& generators, Grading grading);

  std::size_t size() const { return order_.size(); }
  const std::vector<BracketIndex>& members() const { return order_; }
  const BracketIndex& at(std::size_t i) const { return order_[i]; }
  std::optional<std::size_t> position(const BracketIndex& mu) const;
  std::size_t index_of(const BracketIndex& mu) const;
  bool contains(const BracketIndex& mu) const { return position(mu).has_value(); }
  const Grading& grading() const { return grading_; }

  unsigned degree(std::size_t i) const { return degrees_[i]; }
  unsigned height(std::size_t i) const { return order_[i].height(); }
  /// at(j) derivable from at(i), i.e. at(j) precedes-or-equals at(i).
  bool below(std::size_t j, std::size_t i) const { return below_[i * size() + j]; }
  /// Positions of leaf coordinates.
  std::vector<std::size_t> leaf_positions() const;
  std::vector<std::size_t> complexity() const;

  nlohmann::json to_json() const;
  static IndexSet from_json(const nlohmann::json& j);

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.order_ == b.order_ && a.grading_ == b.grading_;
  }

 private:
  std::vector<BracketIndex> order_;
  Grading grading_;
  std::vector<unsigned> degrees_;
  std::vector<bool> below_;
  std::map<BracketIndex, std::size_t> pos_;
};

/// v_mu(t) = alpha_leaf t^{d_leaf} prod_j {v_{lambda_j}(t)}.
ExactScalar monomial_eval(const BracketIndex& mu, const std::map<unsigned, ExactScalar>& alpha, const ExactScalar& t,
                          const Grading& grading, unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

/// (v_mu(t))_{mu in D} in coordinate order.
std::vector<ExactScalar> v_vector(const IndexSet& d, const std::map<unsigned, ExactScalar>& alpha, const ExactScalar& t,
                                  unsigned max_bits = kDefaultMaxBits, PrecisionStats* stats = nullptr);

}  // namespace gplab
