#pragma once

// Generalised polynomials: expression DAGs over variables and exact
// constants closed under +, *, floor, fractional part and integer powers.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gplab/numbers.hpp"

namespace gplab {

class GenPoly {
 public:
  enum class Kind { Var, Const, Add, Mul, Floor, Frac, IntPow };

  /// The constant 0.
  GenPoly();

  static GenPoly var(std::size_t index);
  static GenPoly constant(const ExactScalar& c);
  /// Flattens nested sums and merges constant summands.
  static GenPoly add(std::vector<GenPoly> terms);
  /// Flattens nested products and merges constant factors.
  static GenPoly mul(std::vector<GenPoly> factors);
  static GenPoly floor(const GenPoly& g);
  static GenPoly frac(const GenPoly& g);
  static GenPoly pow(const GenPoly& g, unsigned exponent);

  Kind kind() const;
  std::size_t var_index() const;
  const ExactScalar& constant_value() const;
  const std::vector<GenPoly>& children() const;
  unsigned exponent() const;
  bool is_constant() const { return kind() == Kind::Const; }
  bool is_constant(long v) const;

  /// Number of variables referenced: 1 + largest Var index (0 if none).
  std::size_t arity() const;
  /// Distinct nodes in the DAG.
  std::size_t node_count() const;
  const void* id() const { return node_.get(); }

  friend GenPoly operator+(const GenPoly& a, const GenPoly& b) { return add({a, b}); }
  friend GenPoly operator-(const GenPoly& a, const GenPoly& b);
  friend GenPoly operator*(const GenPoly& a, const GenPoly& b) { return mul({a, b}); }
  friend GenPoly operator-(const GenPoly& a);

  /// Structural equality.
  friend bool operator==(const GenPoly& a, const GenPoly& b);
  friend bool operator!=(const GenPoly& a, const GenPoly& b) { return !(a == b); }

  struct Node;

 private:
  explicit GenPoly(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// DSL text. `n` denotes the single variable of a univariate expression; x_1,
/// x_2, ... are used otherwise.
std::string unparse(const GenPoly& g);

/// Parses the DSL. With `arity` = 0 the arity is inferred; otherwise every
/// variable must satisfy index < arity. `n` is only accepted when the arity
/// is (or is inferred to be) 1.
GenPoly parse_genpoly(std::string_view text, std::size_t arity = 0);

nlohmann::json to_json(const GenPoly& g);
GenPoly genpoly_from_json(const nlohmann::json& j);

/// Exact value at `point`. IndeterminateFloor carries the child-index path
/// from the root to the offending Floor/Frac node.
ExactScalar eval(const GenPoly& g, const std::vector<ExactScalar>& point, unsigned max_bits = kDefaultMaxBits,
                 PrecisionStats* stats = nullptr);

/// g(n) = sum_i h_i(n) n^i with every h_i bounded.
struct PolyInNExpansion {
  std::vector<GenPoly> coefficients;  // h_0 .. h_d
  std::vector<Rational> bounds;       // certified sup |h_i|

  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

PolyInNExpansion expand_in_var(const GenPoly& g, std::size_t var = 0);

/// Certified upper bound on |g| treating each Frac node as [0,1].
/// Throws UnboundedCoefficient when a variable occurs outside every Frac.
Rational sup_bound(const GenPoly& g);

/// {0,1}-valued generalised polynomial equal to 1 at n >= 1 iff g(n) >= 0.
GenPoly indicator_ge0(const GenPoly& g);
/// 1 at n >= 1 iff a <= g(n) < b. Requires a < b.
GenPoly indicator_interval(const GenPoly& g, const ExactScalar& a, const ExactScalar& b);
/// 1 at n >= 1 iff g(n) = 0.
GenPoly indicator_zero(const GenPoly& g);

}  // namespace gplab
