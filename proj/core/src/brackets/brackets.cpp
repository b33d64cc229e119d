#include "gplab/brackets.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "gplab/error.hpp"

namespace gplab {

BracketIndex::BracketIndex(unsigned leaf, std::vector<BracketIndex> factors) : leaf_(leaf), factors_(std::move(factors)) {
  if (leaf_ == 0) throw DomainError("bracket index leaves are positive integers");
  std::sort(factors_.begin(), factors_.end());
  for (const auto& f : factors_) {
    height_ = std::max(height_, f.height_ + 1);
    size_ += f.size_;
  }
}

BracketIndex BracketIndex::with_factor(const BracketIndex& l) const {
  std::vector<BracketIndex> fs = factors_;
  fs.push_back(l);
  return BracketIndex(leaf_, std::move(fs));
}

std::pair<BracketIndex, BracketIndex> BracketIndex::split() const {
  if (factors_.empty()) throw DomainError("cannot split a leaf index");
  std::vector<BracketIndex> fs(factors_.begin(), factors_.end() - 1);
  return {BracketIndex(leaf_, std::move(fs)), factors_.back()};
}

std::string BracketIndex::to_string() const {
  std::string s = std::to_string(leaf_);
  for (const auto& f : factors_) s += "[" + f.to_string() + "]";
  return s;
}

std::strong_ordering operator<=>(const BracketIndex& a, const BracketIndex& b) {
  if (auto c = a.height_ <=> b.height_; c != 0) return c;
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  if (auto c = a.leaf_ <=> b.leaf_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.factors_.begin(), a.factors_.end(), b.factors_.begin(),
                                                b.factors_.end());
}

namespace {

class IndexParser {
 public:
  explicit IndexParser(std::string_view s) : s_(s) {}

  BracketIndex parse() {
    BracketIndex mu = index();
    skip();
    if (pos_ != s_.size()) throw SyntaxError("unexpected character in bracket index", pos_);
    return mu;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  BracketIndex index() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw SyntaxError("expected positive integer leaf", pos_);
    unsigned long leaf = std::stoul(std::string(s_.substr(start, pos_ - start)));
    if (leaf == 0) throw SyntaxError("leaf must be positive", start);
    std::vector<BracketIndex> factors;
    for (;;) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '[') {
        ++pos_;
        factors.push_back(index());
        skip();
        if (pos_ >= s_.size() || s_[pos_] != ']') throw SyntaxError("expected ']'", pos_);
        ++pos_;
      } else {
        break;
      }
    }
    return BracketIndex(static_cast<unsigned>(leaf), std::move(factors));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

BracketIndex parse_index(std::string_view text) { return IndexParser(text).parse(); }

unsigned degree(const BracketIndex& mu, const Grading& grading) {
  auto it = grading.find(mu.leaf());
  if (it == grading.end()) throw MissingGrade("no degree for leaf " + std::to_string(mu.leaf()));
  unsigned d = it->second;
  for (const auto& f : mu.factors()) d += degree(f, grading);
  return d;
}

bool derivable(const BracketIndex& nu, const BracketIndex& mu) {
  if (nu.leaf() != mu.leaf()) return false;
  const auto& a = nu.factors();
  const auto& b = mu.factors();
  if (a.size() > b.size()) return false;
  if (a.empty()) return true;
  // Bipartite matching of nu's factors into mu's (Kuhn's algorithm).
  std::vector<std::vector<std::size_t>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (derivable(a[i], b[j])) adj[i].push_back(j);
  std::vector<long> match(b.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
    for (std::size_t j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = true;
      if (match[j] < 0 || augment(static_cast<std::size_t>(match[j]), seen)) {
        match[j] = static_cast<long>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<bool> seen(b.size(), false);
    if (!augment(i, seen)) return false;
  }
  return true;
}

namespace {

std::vector<BracketIndex> below_set(const BracketIndex& mu) {
  // Each factor is either dropped or replaced by something derivable from it.
  std::vector<std::vector<BracketIndex>> options;
  for (const auto& f : mu.factors()) options.push_back(below_set(f));
  std::set<BracketIndex> out;
  std::vector<BracketIndex> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == options.size()) {
      out.insert(BracketIndex(mu.leaf(), chosen));
      return;
    }
    rec(i + 1);
    for (const auto& o : options[i]) {
      chosen.push_back(o);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<BracketIndex> downward_closure(const std::vector<BracketIndex>& members) {
  std::set<BracketIndex> out;
  for (const auto& m : members)
    for (auto& b : below_set(m)) out.insert(std::move(b));
  return {out.begin(), out.end()};
}

std::vector<std::size_t> complexity_vector(const std::vector<BracketIndex>& members) {
  std::set<BracketIndex> set(members.begin(), members.end());
  for (const auto& m : members)
    for (const auto& b : below_set(m))
      if (!set.count(b))
        throw NotDownwardClosed(b.to_string() + " is derivable from " + m.to_string() + " but missing");
  std::vector<std::size_t> c;
  for (const auto& m : set) {
    if (c.size() <= m.height()) c.resize(m.height() + 1, 0);
    ++c[m.height()];
  }
  return c;
}

std::strong_ordering compare_complexity(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = n; i-- > 0;) {
    std::size_t x = i < a.size() ? a[i] : 0;
    std::size_t y = i < b.size() ? b[i] : 0;
    if (x != y) return x <=> y;
  }
  return std::strong_ordering::equal;
}

IndexSet::IndexSet(std::vector<BracketIndex> members, Grading grading, std::optional<std::vector<BracketIndex>> order)
    : grading_(std::move(grading)) {
  for (const auto& [leaf, d] : grading_)
    if (d == 0) throw MissingGrade("leaf " + std::to_string(leaf) + " has degree 0; degrees must be positive");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  complexity_vector(members);  // validates downward closure
  std::map<BracketIndex, unsigned> deg;
  for (const auto& m : members) deg[m] = gplab::degree(m, grading_);
  if (order) {
    std::vector<BracketIndex> sorted = *order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != members) throw DomainError("coordinate order must list exactly the members");
    order_ = *order;
  } else {
    order_ = members;
    std::sort(order_.begin(), order_.end(), [&](const BracketIndex& a, const BracketIndex& b) {
      if (deg[a] != deg[b]) return deg[a] < deg[b];
      if (a.leaf() != b.leaf()) return a.leaf() < b.leaf();
      if (a.height() != b.height()) return a.height() < b.height();
      return a < b;
    });
  }
  const std::size_t n = order_.size();
  for (std::size_t i = 0; i < n; ++i) {
    pos_[order_[i]] = i;
    degrees_.push_back(deg[order_[i]]);
  }
  below_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool b = derivable(order_[j], order_[i]);
      below_[i * n + j] = b;
      if (b && j > i) throw DomainError("coordinate order does not extend derivability");
    }
}

IndexSet IndexSet::running_example() {
  std::vector<BracketIndex> m = {BracketIndex(1), BracketIndex(2), parse_index("1[2]"), parse_index("2[1]"),
                                 BracketIndex(3)};
  return IndexSet(std::move(m), Grading{{1, 1}, {2, 1}, {3, 2}});
}

IndexSet IndexSet::closure_of(const std::vector<BracketIndex>& generators, Grading grading) {
  return IndexSet(downward_closure(generators), std::move(grading));
}

std::optional<std::size_t> IndexSet::position(const BracketIndex& mu) const {
  auto it = pos_.find(mu);
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

std::size_t IndexSet::index_of(const BracketIndex& mu) const {
  auto p = position(mu);
  if (!p) throw DomainError("index " + mu.to_string() + " is not a member");
  return *p;
}

std::vector<std::size_t> IndexSet::leaf_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (order_[i].is_leaf()) out.push_back(i);
  return out;
}

std::vector<std::size_t> IndexSet::complexity() const { return complexity_vector(order_); }

nlohmann::json IndexSet::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : order_) members.push_back(m.to_string());
  nlohmann::json grading = nlohmann::json::object();
  for (const auto& [leaf, d] : grading_) grading[std::to_string(leaf)] = d;
  return {{"members", members}, {"grading", grading}, {"order", members}};
}

IndexSet IndexSet::from_json(const nlohmann::json& j) {
  std::vector<BracketIndex> members;
  for (const auto& m : j.at("members")) members.push_back(parse_index(m.get<std::string>()));
  Grading grading;
  for (const auto& [k, v] : j.at("grading").items()) grading[static_cast<unsigned>(std::stoul(k))] = v.get<unsigned>();
  std::optional<std::vector<BracketIndex>> order;
  if (j.contains("order")) {
    order.emplace();
    for (const auto& m : j.at("order")) order->push_back(parse_index(m.get<std::string>()));
  }
  return IndexSet(std::move(members), std::move(grading), std::move(order));
}

namespace {

ExactScalar monomial_eval_memo(const BracketIndex& mu, const std::map<unsigned, ExactScalar>& alpha,
                               const ExactScalar& t, const Grading& grading, unsigned max_bits, PrecisionStats* stats,
                               std::map<BracketIndex, ExactScalar>& memo) {
  auto it = memo.find(mu);
  if (it != memo.end()) return it->second;
  auto a = alpha.find(mu.leaf());
  if (a == alpha.end()) throw DomainError("no coefficient for leaf " + std::to_string(mu.leaf()));
  auto g = grading.find(mu.leaf());
  if (g == grading.end()) throw MissingGrade("no degree for leaf " + std::to_string(mu.leaf()));
  ExactScalar v = a->second * t.pow(g->second);
  for (const auto& f : mu.factors()) {
    if (v.is_zero()) break;
    v = v * frac_exact(monomial_eval_memo(f, alpha, t, grading, max_bits, stats, memo), max_bits, stats);
  }
  memo.emplace(mu, v);
  return v;
}

}  // namespace

ExactScalar monomial_eval(const BracketIndex& mu, const std::map<unsigned, ExactScalar>& alpha, const ExactScalar& t,
                          const Grading& grading, unsigned max_bits, PrecisionStats* stats) {
  std::map<BracketIndex, ExactScalar> memo;
  return monomial_eval_memo(mu, alpha, t, grading, max_bits, stats, memo);
}

std::vector<ExactScalar> v_vector(const IndexSet& d, const std::map<unsigned, ExactScalar>& alpha, const ExactScalar& t,
                                  unsigned max_bits, PrecisionStats* stats) {
  std::map<BracketIndex, ExactScalar> memo;
  std::vector<ExactScalar> out;
  out.reserve(d.size());
  for (const auto& m : d.members())
    out.push_back(monomial_eval_memo(m, alpha, t, d.grading(), max_bits, stats, memo));
  return out;
}

}  // namespace gplab
