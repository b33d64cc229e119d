#include "gplab/orbitlab.hpp"

#include <algorithm>
#include <thread>

#include "gplab/error.hpp"
#include "gplab/timesk.hpp"

namespace gplab {

namespace {

ExactScalar reduce(const ExactScalar& v, unsigned max_bits, PrecisionStats* stats) {
  return frac_exact(v, max_bits, stats);
}

TorusPoint reduce_all(const TorusPoint& v, unsigned max_bits, PrecisionStats* stats) {
  TorusPoint out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(reduce(c, max_bits, stats));
  return out;
}

TorusPoint scale_reduce(const TorusPoint& x, const ExactScalar& l, unsigned max_bits, PrecisionStats* stats) {
  TorusPoint out;
  out.reserve(x.size());
  for (const auto& c : x) out.push_back(reduce(l * c, max_bits, stats));
  return out;
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [1, hi] into contiguous chunks, runs `work(lo, hi, slot)` per chunk
/// and returns the slots in chunk order.
template <typename Slot, typename Work>
std::vector<Slot> parallel_chunks(long hi, unsigned jobs, Work work) {
  const long n_chunks = std::max<long>(1, std::min<long>(resolve_jobs(jobs), hi));
  std::vector<Slot> slots(static_cast<std::size_t>(n_chunks));
  std::vector<std::exception_ptr> errors(slots.size());
  auto bounds = [&](long c) {
    long lo = 1 + hi * c / n_chunks;
    long up = hi * (c + 1) / n_chunks;
    return std::pair{lo, up};
  };
  auto run = [&](long c) {
    try {
      auto [lo, up] = bounds(c);
      work(lo, up, slots[static_cast<std::size_t>(c)]);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };
  if (n_chunks == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (long c = 0; c < n_chunks; ++c) threads.emplace_back(run, c);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return slots;
}

nlohmann::json scalars_json(const TorusPoint& x) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : x) j.push_back(c.to_string());
  return j;
}

nlohmann::json precision_json(const PrecisionStats& p, const std::vector<long>& indeterminate) {
  return {{"max_bits_used", p.max_bits_used},
          {"refinements", p.refinements},
          {"indeterminate_events", p.indeterminate_events},
          {"indeterminate", indeterminate}};
}

Integer power_of(long k, std::size_t n) { return ipow(Integer(k), n); }

bool same_point(const TorusPoint& a, const TorusPoint& b, unsigned max_bits) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    try {
      if (compare(a[i], b[i], max_bits) != Ordering::EQ) return false;
    } catch (const IndeterminateComparison&) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<TorusPoint> torus_orbit(const TorusPoint& x, long k, std::size_t steps, unsigned max_bits,
                                    PrecisionStats* stats) {
  for (const auto& c : x)
    if (sign(c, max_bits, stats) < 0 || compare(c, ExactScalar(1), max_bits, stats) != Ordering::LT)
      throw DomainError("orbit start must lie in [0,1)^d");
  std::vector<TorusPoint> orbit{x};
  orbit.reserve(steps + 1);
  const ExactScalar kk(k);
  for (std::size_t n = 0; n < steps; ++n) {
    try {
      orbit.push_back(scale_reduce(orbit.back(), kk, max_bits, stats));
    } catch (const IndeterminateFloor& e) {
      throw e.with_step(static_cast<long>(n));
    }
  }
  return orbit;
}

HitReport hitting_times(const std::vector<TorusPoint>& orbit, const SemialgebraicSet& s, unsigned max_bits,
                        PrecisionStats* stats) {
  HitReport r;
  for (std::size_t n = 0; n < orbit.size(); ++n) {
    try {
      if (membership(s, orbit[n], max_bits, stats)) r.hits.push_back(n);
    } catch (const IndeterminateComparison&) {
      r.indeterminate.push_back(n);
      if (stats) ++stats->indeterminate_events;
    }
  }
  return r;
}

DensityWindow DensityWindow::from_predicate(std::size_t n, const std::function<bool(long)>& in_set) {
  DensityWindow w;
  w.bits.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.bits[i] = in_set(static_cast<long>(i) + 1);
  return w;
}

DensityWindow DensityWindow::from_set(const std::set<long>& e, std::size_t n) {
  DensityWindow w;
  w.bits.assign(n, false);
  for (long v : e)
    if (v >= 1 && static_cast<std::size_t>(v) <= n) w.bits[static_cast<std::size_t>(v) - 1] = true;
  return w;
}

std::size_t DensityWindow::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true)); }

nlohmann::json DensityStats::to_json() const {
  nlohmann::json j = {{"N", n},
                      {"count", count},
                      {"upper", to_string(upper)},
                      {"lower", to_string(lower)},
                      {"banach_upper", to_string(banach_upper)},
                      {"banach_offset", banach_offset},
                      {"window", window}};
  j["natural"] = natural ? nlohmann::json(to_string(*natural)) : nlohmann::json(nullptr);
  return j;
}

DensityStats density_stats(const DensityWindow& e, const Rational& tolerance) {
  const std::size_t n = e.size();
  if (n == 0) throw DomainError("density window is empty");
  std::vector<std::size_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (e.bits[i] ? 1 : 0);

  DensityStats st;
  st.n = n;
  st.count = prefix[n];
  const std::size_t start = std::max<std::size_t>(1, n / 2);
  st.upper = Rational(prefix[start], start);
  st.lower = st.upper;
  for (std::size_t m = start; m <= n; ++m) {
    Rational r(prefix[m], m);
    r.canonicalize();
    if (r > st.upper) st.upper = r;
    if (r < st.lower) st.lower = r;
  }
  st.upper.canonicalize();
  st.lower.canonicalize();
  if (st.upper - st.lower < tolerance) {
    Rational nat(st.count, n);
    nat.canonicalize();
    st.natural = nat;
  }

  std::size_t w = e.window != 0 ? e.window : std::max<std::size_t>(1, n / 10);
  w = std::min(w, n);
  st.window = w;
  const std::size_t step = std::max<std::size_t>(1, e.offset_step);
  std::size_t m_lo = e.offset_min != 0 ? e.offset_min : w;
  if (m_lo + w - 1 > n) m_lo = 1;
  std::size_t best = 0;
  st.banach_offset = m_lo;
  for (std::size_t m = m_lo; m + w - 1 <= n; m += step) {
    std::size_t c = prefix[m + w - 1] - prefix[m - 1];
    if (c > best) {
      best = c;
      st.banach_offset = m;
    }
  }
  st.banach_upper = Rational(best, w);
  st.banach_upper.canonicalize();
  return st;
}

std::set<long> fs_set(const std::vector<long>& generators) {
  if (generators.size() > 20) throw DomainError("fs_set supports at most 20 generators");
  std::set<long> sums;
  for (long g : generators) {
    std::vector<long> next{g};
    for (long s : sums) next.push_back(s + g);
    sums.insert(next.begin(), next.end());
  }
  return sums;
}

std::optional<std::vector<long>> find_fs_subset(const std::set<long>& e, std::size_t r, long bound,
                                                std::size_t max_nodes, bool* exhausted) {
  if (exhausted) *exhausted = false;
  if (r == 0) return std::vector<long>{};
  std::vector<bool> in(static_cast<std::size_t>(std::max<long>(bound, 0)) + 1, false);
  std::vector<long> elems;
  for (long v : e)
    if (v >= 1 && v <= bound) {
      in[static_cast<std::size_t>(v)] = true;
      elems.push_back(v);
    }
  auto member = [&](long v) { return v >= 1 && v <= bound && in[static_cast<std::size_t>(v)]; };

  std::vector<long> chosen;
  std::size_t nodes = 0;
  bool out_of_budget = false;
  // sums holds the finite sums of `chosen`; extending by g needs g and g + s in E.
  auto dfs = [&](auto&& self, std::size_t from, const std::vector<long>& sums) -> bool {
    if (chosen.size() == r) return true;
    for (std::size_t i = from; i < elems.size(); ++i) {
      if (max_nodes != 0 && ++nodes > max_nodes) {
        out_of_budget = true;
        return false;
      }
      const long g = elems[i];
      // Remaining generators are larger than g, so the total needs room.
      const long total = (sums.empty() ? 0 : sums.back()) + g * static_cast<long>(r - chosen.size());
      if (total > bound) break;
      bool ok = true;
      for (long s : sums)
        if (!member(s + g)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      std::vector<long> next = sums;
      next.push_back(g);
      for (long s : sums) next.push_back(s + g);
      std::sort(next.begin(), next.end());
      chosen.push_back(g);
      if (self(self, i + 1, next)) return true;
      chosen.pop_back();
      if (out_of_budget) return false;
    }
    return false;
  };
  if (dfs(dfs, 0, {})) return chosen;
  if (exhausted) *exhausted = out_of_budget;
  return std::nullopt;
}

nlohmann::json MultiplierReport::to_json() const {
  return {{"params", params},
          {"premise_check", {{"checked", premise_checked}, {"holds", premise_holds}, {"failures", premise_failures}}},
          {"multipliers", multipliers},
          {"count", multipliers.size()},
          {"reverify_failures", reverify_failures},
          {"precision", precision_json(precision, indeterminate)}};
}

MultiplierReport multiplier_search_torus(const TorusPoint& x, const SemialgebraicSet& s, long k, std::size_t n0,
                                         std::size_t n1, long l_max, const SearchOptions& opt) {
  if (n0 > n1) throw DomainError("empty exponent window");
  if (x.size() != s.dim) throw DomainError("point dimension mismatch");
  MultiplierReport rep;
  rep.params = {{"x", scalars_json(x)}, {"k", k},         {"S", s.to_json()},
                {"n0", n0},             {"n1", n1},       {"l_max", l_max}};
  const auto orbit = torus_orbit(x, k, n1, opt.max_bits, &rep.precision);

  if (opt.check_premise) {
    rep.premise_checked = true;
    for (std::size_t n = n0; n <= n1; ++n) {
      bool in = false;
      try {
        in = membership(s, orbit[n], opt.max_bits, &rep.precision);
      } catch (const IndeterminateComparison&) {
        ++rep.precision.indeterminate_events;
      }
      if (!in) rep.premise_failures.push_back(static_cast<long>(n));
    }
    rep.premise_holds = rep.premise_failures.empty();
  }

  struct Slot {
    std::vector<long> found, indeterminate, reverify_failures;
    PrecisionStats stats;
  };
  const unsigned bits2 = 2 * opt.max_bits;
  auto slots = parallel_chunks<Slot>(l_max, opt.jobs, [&](long lo, long hi, Slot& slot) {
    for (long l = lo; l <= hi; ++l) {
      const ExactScalar ll(l);
      bool all = true;
      try {
        for (std::size_t n = n0; n <= n1 && all; ++n)
          all = membership(s, scale_reduce(orbit[n], ll, opt.max_bits, &slot.stats), opt.max_bits, &slot.stats);
      } catch (const IndeterminateComparison&) {
        slot.indeterminate.push_back(l);
        ++slot.stats.indeterminate_events;
        continue;
      } catch (const IndeterminateFloor&) {
        slot.indeterminate.push_back(l);
        ++slot.stats.indeterminate_events;
        continue;
      }
      if (!all) continue;
      slot.found.push_back(l);
      bool again = true;
      try {
        for (std::size_t n = n0; n <= n1 && again; ++n) {
          const ExactScalar mult{Integer(Integer(l) * power_of(k, n))};
          again = membership(s, scale_reduce(x, mult, bits2, nullptr), bits2, nullptr);
        }
      } catch (const Error&) {
        again = false;
      }
      if (!again) slot.reverify_failures.push_back(l);
    }
  });
  for (auto& sl : slots) {
    rep.multipliers.insert(rep.multipliers.end(), sl.found.begin(), sl.found.end());
    rep.indeterminate.insert(rep.indeterminate.end(), sl.indeterminate.begin(), sl.indeterminate.end());
    rep.reverify_failures.insert(rep.reverify_failures.end(), sl.reverify_failures.begin(),
                                 sl.reverify_failures.end());
    rep.precision.merge(sl.stats);
  }
  return rep;
}

std::set<long> ExperimentReport::found() const {
  std::set<long> out;
  for (const auto& [m, w] : multipliers) out.insert(m);
  return out;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& [m, w] : multipliers) ms.push_back({{"m", m}, {"witnesses", w}});
  nlohmann::json j = {
      {"params", params},
      {"premise_check", {{"checked", premise_checked}, {"holds", premise_holds}, {"failures", premise_failures}}},
      {"multipliers", ms},
      {"count", multipliers.size()},
      {"path_independence", {{"holds", path_independent}, {"checks", path_checks}}},
      {"reverify_failures", reverify_failures},
      {"fs_probe",
       {{"order", fs_probe.order}, {"generators", fs_probe.generators}, {"budget_exhausted", fs_probe.budget_exhausted}}},
      {"precision", precision_json(precision, indeterminate)}};
  j["density"] = density ? density->to_json() : nlohmann::json(nullptr);
  return j;
}

namespace {

void finish_report(ExperimentReport& rep, long m_max, const ExperimentOptions& opt) {
  const auto found = rep.found();
  for (std::size_t r = 1; r <= opt.fs_max_order; ++r) {
    bool exhausted = false;
    auto g = find_fs_subset(found, r, m_max, opt.fs_max_nodes, &exhausted);
    if (!g) {
      rep.fs_probe.budget_exhausted = exhausted;
      break;
    }
    rep.fs_probe.order = r;
    rep.fs_probe.generators = *g;
  }
  if (m_max >= 1) rep.density = density_stats(DensityWindow::from_set(found, static_cast<std::size_t>(m_max)));
}

template <typename Slot>
void merge_slots(ExperimentReport& rep, std::vector<Slot>& slots) {
  for (auto& sl : slots) {
    for (auto& [m, w] : sl.found) rep.multipliers.emplace(m, std::move(w));
    rep.indeterminate.insert(rep.indeterminate.end(), sl.indeterminate.begin(), sl.indeterminate.end());
    rep.reverify_failures.insert(rep.reverify_failures.end(), sl.reverify_failures.begin(),
                                 sl.reverify_failures.end());
    rep.path_independent = rep.path_independent && sl.path_ok;
    rep.path_checks += sl.path_checks;
    rep.precision.merge(sl.stats);
  }
}

struct ExperimentSlot {
  std::vector<std::pair<long, std::vector<std::size_t>>> found;
  std::vector<long> indeterminate, reverify_failures;
  bool path_ok = true;
  std::size_t path_checks = 0;
  PrecisionStats stats;
};

}  // namespace

ExperimentReport theoremA_experiment(const IndexSet& d, const std::map<unsigned, ExactScalar>& alpha,
                                     const SemialgebraicSet& zero_set, long k, long m_max, std::size_t n0,
                                     std::size_t n1, const ExperimentOptions& opt) {
  if (n0 > n1) throw DomainError("empty exponent window");
  if (k < 2) throw DomainError("k must be at least 2");
  if (zero_set.dim != d.size()) throw DomainError("zero set dimension must match the index set");
  ExperimentReport rep;
  nlohmann::json alpha_j = nlohmann::json::object();
  for (const auto& [leaf, a] : alpha) alpha_j[std::to_string(leaf)] = a.to_string();
  rep.params = {{"D", d.to_json()}, {"alpha", alpha_j}, {"zero_set", zero_set.to_json()}, {"k", k},
                {"m_max", m_max},   {"n0", n0},         {"n1", n1}};
  const unsigned bits = opt.max_bits;

  auto point_at = [&](const Integer& t, unsigned b, PrecisionStats* st) {
    return reduce_all(v_vector(d, alpha, ExactScalar(t), b, st), b, st);
  };

  if (opt.check_premise) {
    rep.premise_checked = true;
    for (std::size_t n = n0; n <= n1; ++n) {
      bool in = false;
      try {
        in = membership(zero_set, point_at(power_of(k, n), bits, &rep.precision), bits, &rep.precision);
      } catch (const IndeterminateComparison&) {
        ++rep.precision.indeterminate_events;
      }
      if (!in) rep.premise_failures.push_back(static_cast<long>(n));
    }
    rep.premise_holds = rep.premise_failures.empty();
  }

  const Integer kk(k);
  auto slots = parallel_chunks<ExperimentSlot>(m_max, opt.jobs, [&](long lo, long hi, ExperimentSlot& slot) {
    for (long m = lo; m <= hi; ++m) {
      if (m % k == 0) continue;
      std::vector<std::size_t> witnesses;
      try {
        std::vector<TorusPoint> along;
        if (opt.path_check) along = iterate_T(d, point_at(Integer(m), bits, &slot.stats), kk, n1, bits, &slot.stats);
        for (std::size_t n = 0; n <= n1; ++n) {
          if (n < n0 && !opt.path_check) continue;
          const TorusPoint direct = point_at(Integer(m) * power_of(k, n), bits, &slot.stats);
          if (opt.path_check) {
            ++slot.path_checks;
            if (!same_point(direct, along[n], bits)) slot.path_ok = false;
          }
          if (n >= n0 && membership(zero_set, direct, bits, &slot.stats)) witnesses.push_back(n);
        }
      } catch (const IndeterminateComparison&) {
        slot.indeterminate.push_back(m);
        ++slot.stats.indeterminate_events;
        continue;
      } catch (const IndeterminateFloor&) {
        slot.indeterminate.push_back(m);
        ++slot.stats.indeterminate_events;
        continue;
      }
      if (witnesses.empty()) continue;
      bool again = false;
      try {
        const Integer t = Integer(m) * power_of(k, witnesses.front());
        again = membership(zero_set, point_at(t, 2 * bits, nullptr), 2 * bits, nullptr);
      } catch (const Error&) {
      }
      if (!again) slot.reverify_failures.push_back(m);
      slot.found.emplace_back(m, std::move(witnesses));
    }
  });
  merge_slots(rep, slots);
  finish_report(rep, m_max, opt);
  return rep;
}

ExperimentReport theoremA_experiment(const GenPoly& g, long k, long m_max, std::size_t n0, std::size_t n1,
                                     const ExperimentOptions& opt) {
  if (n0 > n1) throw DomainError("empty exponent window");
  if (k < 2) throw DomainError("k must be at least 2");
  ExperimentReport rep;
  rep.params = {{"g", unparse(g)}, {"k", k}, {"m_max", m_max}, {"n0", n0}, {"n1", n1}};
  rep.path_independent = true;
  const unsigned bits = opt.max_bits;
  auto vanishes = [&](const Integer& t, unsigned b, PrecisionStats* st) {
    return eval(g, {ExactScalar(t)}, b, st).is_zero();
  };

  if (opt.check_premise) {
    rep.premise_checked = true;
    for (std::size_t n = n0; n <= n1; ++n) {
      bool z = false;
      try {
        z = vanishes(power_of(k, n), bits, &rep.precision);
      } catch (const IndeterminateFloor&) {
        ++rep.precision.indeterminate_events;
      }
      if (!z) rep.premise_failures.push_back(static_cast<long>(n));
    }
    rep.premise_holds = rep.premise_failures.empty();
  }

  auto slots = parallel_chunks<ExperimentSlot>(m_max, opt.jobs, [&](long lo, long hi, ExperimentSlot& slot) {
    for (long m = lo; m <= hi; ++m) {
      if (m % k == 0) continue;
      std::vector<std::size_t> witnesses;
      try {
        for (std::size_t n = n0; n <= n1; ++n)
          if (vanishes(Integer(m) * power_of(k, n), bits, &slot.stats)) witnesses.push_back(n);
      } catch (const IndeterminateFloor&) {
        slot.indeterminate.push_back(m);
        ++slot.stats.indeterminate_events;
        continue;
      }
      if (witnesses.empty()) continue;
      bool again = false;
      try {
        again = vanishes(Integer(m) * power_of(k, witnesses.front()), 2 * bits, nullptr);
      } catch (const Error&) {
      }
      if (!again) slot.reverify_failures.push_back(m);
      slot.found.emplace_back(m, std::move(witnesses));
    }
  });
  merge_slots(rep, slots);
  finish_report(rep, m_max, opt);
  return rep;
}

}  // namespace gplab
