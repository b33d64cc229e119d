#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "gplab/algsem.hpp"
#include "gplab/brackets.hpp"
#include "gplab/error.hpp"
#include "gplab/genpoly.hpp"
#include "gplab/numbers.hpp"
#include "gplab/orbitlab.hpp"
#include "gplab/stlie.hpp"
#include "gplab/timesk.hpp"
#include "parse.hpp"

namespace gplab::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  unsigned max_bits = kDefaultMaxBits;
  unsigned jobs = 1;
  int decimal = -1;
};

std::string dec(const ExactScalar& v, const Globals& g) { return v.to_decimal(static_cast<unsigned>(g.decimal)); }

/// Adds `<key>_decimal` next to an exact value when --decimal is set.
void with_decimal(nlohmann::json& j, const std::string& key, const ExactScalar& v, const Globals& g) {
  if (g.decimal >= 0) j[key + "_decimal"] = {{"value", dec(v, g)}, {"inexact", true}};
}

std::vector<ExactScalar> reduce_mod1(const std::vector<ExactScalar>& v, unsigned bits) {
  std::vector<ExactScalar> out;
  for (const auto& c : v) out.push_back(frac_exact(c, bits));
  return out;
}

GradedLayout chain_layout(std::size_t n, const std::vector<long>& degrees) {
  std::vector<unsigned> degs(n, 1);
  if (!degrees.empty()) {
    if (degrees.size() != n) throw UsageError("--degrees needs one entry per row");
    for (std::size_t i = 0; i < n; ++i) degs[i] = static_cast<unsigned>(degrees[i]);
  }
  std::vector<std::vector<bool>> prec(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) prec[i][j] = true;
  return GradedLayout(degs, prec);
}

struct Command {
  CLI::App* app;
  std::string path;
  std::function<int()> exec;
};

nlohmann::json echo_options(const CLI::App* app) {
  nlohmann::json j = nlohmann::json::object();
  for (const CLI::Option* o : app->get_options()) {
    if (o->get_name() == "--help" || o->get_name() == "-h") continue;
    std::string name = o->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    if (o->count() > 0) {
      const auto& r = o->results();
      j[name] = r.size() == 1 ? nlohmann::json(r.front()) : nlohmann::json(r);
    } else if (!o->get_default_str().empty()) {
      j[name] = o->get_default_str();
    } else {
      j[name] = nullptr;
    }
  }
  return j;
}

int report_exit(bool premise_holds, bool indeterminate) {
  if (!premise_holds) return kPremiseViolated;
  if (indeterminate) return kPrecisionExhausted;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact generalised-polynomial, x k map and orbit experiments.", "gplab"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  if (const char* env = std::getenv("GENPOLY_MAX_BITS")) {
    try {
      g.max_bits = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      err << "gplab: ignoring GENPOLY_MAX_BITS='" << env << "' (not a number)\n";
    }
  }
  std::optional<unsigned> max_bits_flag;
  app.add_option("--max-bits", max_bits_flag,
                 "Precision cap in bits for exact decisions (default 4096, env GENPOLY_MAX_BITS)");
  app.add_option("--jobs", g.jobs, "Worker threads for multiplier searches (0 = all cores)")->capture_default_str();
  app.add_option("--decimal", g.decimal, "Also print rounded decimals with this many digits (marked inexact)");

  std::vector<Command> commands;
  auto group = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->require_subcommand(1);
    sub->fallthrough();
    return sub;
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->fallthrough();
    return sub;
  };

  // ---- gp ----
  CLI::App* gp = group("gp", "Generalised polynomials");
  std::string gp_expr, gp_n, gp_point, gp_kind = "ge0", gp_a, gp_b;
  {
    CLI::App* c = leaf(gp, "eval", "Evaluate an expression exactly");
    c->add_option("--expr", gp_expr, "Expression in n (or x_1, x_2, ...), with floor() and frac()")->required();
    auto* n = c->add_option("--n", gp_n, "Value of n");
    c->add_option("--point", gp_point, "Comma-separated values for x_1, x_2, ...")->excludes(n);
    commands.push_back({c, "gp eval", [&] {
                          if (gp_n.empty() && gp_point.empty()) throw UsageError("gp eval needs --n or --point");
                          GenPoly e = parse_genpoly(gp_expr);
                          std::vector<ExactScalar> at =
                              gp_point.empty() ? std::vector<ExactScalar>{parse_scalar(gp_n)} : parse_scalar_list(gp_point);
                          ExactScalar v = eval(e, at, g.max_bits);
                          out << v.to_string();
                          if (g.decimal >= 0) out << "  ~" << dec(v, g) << " (inexact)";
                          out << "\n";
                          return kOk;
                        }});
  }
  {
    CLI::App* c = leaf(gp, "indicator", "Build the {0,1}-valued indicator of a condition on g(n)");
    c->add_option("--expr", gp_expr, "Univariate expression g(n)")->required();
    c->add_option("--kind", gp_kind, "ge0: g >= 0, interval: a <= g < b, zero: g = 0")
        ->check(CLI::IsMember({"ge0", "interval", "zero"}))
        ->capture_default_str();
    c->add_option("--a", gp_a, "Lower end for --kind interval");
    c->add_option("--b", gp_b, "Upper end for --kind interval");
    c->add_option("--n", gp_n, "Also evaluate the indicator and the direct test at n");
    commands.push_back({c, "gp indicator", [&] {
                          GenPoly e = parse_genpoly(gp_expr, 1);
                          GenPoly ind;
                          if (gp_kind == "ge0") {
                            ind = indicator_ge0(e);
                          } else if (gp_kind == "zero") {
                            ind = indicator_zero(e);
                          } else {
                            if (gp_a.empty() || gp_b.empty()) throw UsageError("--kind interval needs --a and --b");
                            ind = indicator_interval(e, parse_scalar(gp_a), parse_scalar(gp_b));
                          }
                          nlohmann::json j = {{"expr", unparse(e)},
                                              {"kind", gp_kind},
                                              {"indicator", unparse(ind)},
                                              {"nodes", ind.node_count()},
                                              {"tree", to_json(ind)}};
                          if (!gp_n.empty()) {
                            ExactScalar n = parse_scalar(gp_n);
                            ExactScalar gv = eval(e, {n}, g.max_bits);
                            bool direct = false;
                            if (gp_kind == "ge0") direct = sign(gv, g.max_bits) >= 0;
                            else if (gp_kind == "zero") direct = gv.is_zero() || sign(gv, g.max_bits) == 0;
                            else
                              direct = compare(gv, parse_scalar(gp_a), g.max_bits) != Ordering::LT &&
                                       compare(gv, parse_scalar(gp_b), g.max_bits) == Ordering::LT;
                            j["n"] = n.to_string();
                            j["value"] = eval(ind, {n}, g.max_bits).to_string();
                            j["direct"] = direct ? 1 : 0;
                          }
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }

  // ---- bk ----
  CLI::App* bk = group("bk", "Bracket index sets");
  std::string d_spec = "running", grading_spec;
  {
    CLI::App* c = leaf(bk, "info", "Order, degrees, heights and derivability of an index set");
    c->add_option("--D", d_spec, "'running' or comma-separated indices such as 1,2,1[2]")->capture_default_str();
    c->add_option("--grading", grading_spec, "Leaf degrees such as 1:1,2:1,3:2 (missing leaves get 1)");
    commands.push_back({c, "bk info", [&] {
                          IndexSet d = parse_index_set(d_spec, grading_spec);
                          nlohmann::json members = nlohmann::json::array();
                          for (std::size_t i = 0; i < d.size(); ++i) {
                            nlohmann::json below = nlohmann::json::array();
                            for (std::size_t j = 0; j < d.size(); ++j)
                              if (j != i && d.below(j, i)) below.push_back(d.at(j).to_string());
                            members.push_back({{"index", d.at(i).to_string()},
                                               {"degree", d.degree(i)},
                                               {"height", d.height(i)},
                                               {"derivable", below}});
                          }
                          nlohmann::json j = {
                              {"index_set", d.to_json()}, {"members", members}, {"complexity", d.complexity()}};
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }

  // ---- timesk ----
  CLI::App* tk = group("timesk", "The x k map on [0,1)^D");
  std::string tk_x, tk_alpha;
  long tk_k = 2, tk_m = 1;
  std::size_t tk_steps = 10;
  auto add_point_source = [&](CLI::App* c) {
    c->add_option("--D", d_spec, "'running' or comma-separated indices")->capture_default_str();
    c->add_option("--grading", grading_spec, "Leaf degrees such as 1:1,2:1,3:2");
    c->add_option("--k", tk_k, "Multiplier k")->capture_default_str();
    c->add_option("--x", tk_x, "Point, comma-separated in coordinate order");
    c->add_option("--alpha", tk_alpha, "Leaf weights; the point is then {v^alpha(m)}");
    c->add_option("--m", tk_m, "Integer m for --alpha")->capture_default_str();
  };
  auto tk_point = [&](const IndexSet& d) {
    if (!tk_x.empty()) {
      auto x = parse_scalar_list(tk_x);
      if (x.size() != d.size()) throw UsageError("--x needs " + std::to_string(d.size()) + " coordinates");
      return x;
    }
    if (tk_alpha.empty()) throw UsageError("give --x or --alpha");
    return reduce_mod1(v_vector(d, parse_alpha(tk_alpha, d), ExactScalar(tk_m), g.max_bits), g.max_bits);
  };
  {
    CLI::App* c = leaf(tk, "build", "A_k(x), b_k(x) and T_k(x)");
    add_point_source(c);
    commands.push_back({c, "timesk build", [&] {
                          IndexSet d = parse_index_set(d_spec, grading_spec);
                          auto x = tk_point(d);
                          IntMatrix a = build_A(d, tk_k, x, g.max_bits);
                          Point sx = S_k(d, tk_k, x, g.max_bits);
                          std::vector<Integer> b;
                          Point y;
                          for (const auto& v : sx) {
                            b.push_back(floor_exact(v, g.max_bits));
                            y.push_back(v - ExactScalar(b.back()));
                          }
                          nlohmann::json j = matrix_to_json(d, tk_k, a, x, b);
                          j["y"] = scalar_list_json(y);
                          nlohmann::json abar = nlohmann::json::array();
                          IntMatrix aug = augment(a, b);
                          for (std::size_t r = 0; r < aug.rows(); ++r) {
                            nlohmann::json row = nlohmann::json::array();
                            for (std::size_t q = 0; q < aug.cols(); ++q) row.push_back(aug(r, q).get_str());
                            abar.push_back(row);
                          }
                          j["A_bar"] = abar;
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }
  {
    CLI::App* c = leaf(tk, "check", "Check the x k identities along {v^alpha(m')} for m' = 1..m");
    add_point_source(c);
    commands.push_back({c, "timesk check", [&] {
                          IndexSet d = parse_index_set(d_spec, grading_spec);
                          if (tk_alpha.empty()) throw UsageError("timesk check needs --alpha");
                          auto alpha = parse_alpha(tk_alpha, d);
                          const unsigned bits = g.max_bits;
                          const Integer k(tk_k), k2 = k * k;
                          struct Tally {
                            std::string name;
                            std::size_t cases = 0;
                            std::vector<long> fails;
                          };
                          std::vector<Tally> t;
                          for (const char* name : {"intertwining S_k(v(m)) = v(km)",
                                                   "reduced T_k({v(m)}) = {v(km)}",
                                                   "commutation T_k T_k = T_k^2, S_k S_k = S_k^2",
                                                   "cocycle A_k(S_k x) A_k(x) = A_k^2(x)",
                                                   "structure: lower triangular, diagonal k^d, column divisibility",
                                                   "recovery of A_k, b_k from (x, T_k x)"})
                            t.push_back({name, 0, {}});
                          auto tally = [&](std::size_t i, bool ok, long m) {
                            ++t[i].cases;
                            if (!ok) t[i].fails.push_back(m);
                          };
                          for (long m = 1; m <= tk_m; ++m) {
                            Point vm = v_vector(d, alpha, ExactScalar(m), bits);
                            Point vkm = v_vector(d, alpha, ExactScalar(Integer(k * m)), bits);
                            tally(0, S_k(d, k, vm, bits) == vkm, m);
                            Point x = reduce_mod1(vm, bits);
                            AffineStep st = T_k(d, k, x, bits);
                            tally(1, st.y == reduce_mod1(vkm, bits), m);
                            tally(2,
                                  T_k(d, k, st.y, bits).y == T_k(d, k2, x, bits).y &&
                                      S_k(d, k, S_k(d, k, vm, bits), bits) == S_k(d, k2, vm, bits),
                                  m);
                            tally(3, build_A(d, k, S_k(d, k, x, bits), bits) * st.A == build_A(d, k2, x, bits), m);
                            bool structure = true;
                            for (std::size_t i = 0; i < d.size(); ++i)
                              for (std::size_t j = 0; j < d.size(); ++j) {
                                const Integer& e = st.A(i, j);
                                if (i == j) structure = structure && e == ipow(k, d.degree(i));
                                else if (e != 0) structure = structure && d.below(j, i);
                                Integer kd = ipow(k, d.degree(j));
                                structure = structure && e % kd == 0;
                              }
                            tally(4, structure, m);
                            AffineStep rec = A_from_pair(d, k, x, st.y);
                            tally(5, rec.A == st.A && rec.b == st.b, m);
                          }
                          bool all = true;
                          for (const auto& r : t) {
                            bool ok = r.fails.empty();
                            all = all && ok;
                            out << (ok ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases";
                            if (!ok) {
                              out << "; failing m:";
                              for (long m : r.fails) out << ' ' << m;
                            }
                            out << ")\n";
                          }
                          out << (all ? "all identities PASS" : "some identities FAIL") << "\n";
                          return all ? kOk : kCheckFailed;
                        }});
  }
  {
    CLI::App* c = leaf(tk, "orbit", "Iterate T_k and print the orbit as CSV");
    add_point_source(c);
    c->add_option("--steps", tk_steps, "Number of iterations")->capture_default_str();
    commands.push_back({c, "timesk orbit", [&] {
                          IndexSet d = parse_index_set(d_spec, grading_spec);
                          auto orbit = iterate_T(d, tk_point(d), tk_k, tk_steps, g.max_bits);
                          out << "n";
                          for (const auto& mu : d.members()) out << ',' << mu.to_string();
                          if (g.decimal >= 0)
                            for (const auto& mu : d.members()) out << ',' << mu.to_string() << "~inexact";
                          out << "\n";
                          for (std::size_t n = 0; n < orbit.size(); ++n) {
                            out << n;
                            for (const auto& v : orbit[n]) out << ',' << v.to_string();
                            if (g.decimal >= 0)
                              for (const auto& v : orbit[n]) out << ',' << dec(v, g);
                            out << "\n";
                          }
                          return kOk;
                        }});
  }

  // ---- lie ----
  CLI::App* lie = group("lie", "Triangular groups and their Lie algebras");
  std::string lie_matrix, lie_e, lie_degrees;
  bool lie_augmented = false, lie_use_d = false;
  auto add_layout = [&](CLI::App* c) {
    c->add_option("--matrix", lie_matrix, "Matrix as JSON rows or 'a,b;c,d'")->required();
    c->add_option("--D", d_spec, "Use the derivability layout of this index set");
    c->add_option("--grading", grading_spec, "Leaf degrees for --D");
    c->add_flag("--augmented", lie_augmented, "Prepend the degree-0 coordinate to the --D layout");
    c->add_option("--degrees", lie_degrees, "Degrees of a total-order layout when --D is absent");
  };
  auto layout_for = [&](CLI::App* c, std::size_t n) {
    lie_use_d = c->count("--D") > 0;
    if (lie_use_d) {
      IndexSet d = parse_index_set(d_spec, grading_spec);
      GradedLayout l = lie_augmented ? GradedLayout::augmented(d) : GradedLayout::of(d);
      if (l.size() != n) throw UsageError("matrix size does not match the layout");
      return l;
    }
    return chain_layout(n, lie_degrees.empty() ? std::vector<long>{} : parse_long_list(lie_degrees));
  };
  {
    CLI::App* c = leaf(lie, "exp", "Exponential of a strictly lower Z, or exp(log E * Lambda + Z) with --E");
    add_layout(c);
    c->add_option("--E", lie_e, "Scale E for the graded exponential");
    commands.push_back({c, "lie exp", [&, c] {
                          auto z = parse_matrix(lie_matrix);
                          GradedLayout l = layout_for(c, z.rows());
                          nlohmann::json j = {{"input", matrix_json(z)}};
                          if (lie_e.empty()) {
                            j["exp"] = matrix_json(exp_nilpotent(l, z));
                          } else {
                            j["E"] = lie_e;
                            j["exp"] = matrix_json(exp_graded(l, parse_scalar(lie_e), z));
                          }
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }
  {
    CLI::App* c = leaf(lie, "log", "Logarithm of a unipotent or standard triangular matrix");
    add_layout(c);
    commands.push_back({c, "lie log", [&, c] {
                          auto a = parse_matrix(lie_matrix);
                          GradedLayout l = layout_for(c, a.rows());
                          nlohmann::json j = {{"input", matrix_json(a)}};
                          if (is_unipotent(l, a)) {
                            j["log"] = matrix_json(log_unipotent(l, a));
                          } else {
                            GradedLog gl = log_graded(l, a);
                            j["E"] = gl.scale.to_string();
                            j["log"] = matrix_json(gl.z);
                          }
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }
  {
    CLI::App* c = leaf(lie, "diag", "Triangular P with P^-1 A P diagonal, checked by multiplication");
    add_layout(c);
    commands.push_back({c, "lie diag", [&, c] {
                          auto a = parse_matrix(lie_matrix);
                          GradedLayout l = layout_for(c, a.rows());
                          auto p = diagonalize(l, a);
                          auto dm = inverse_lower(p) * a * p;
                          bool diagonal = true;
                          for (std::size_t i = 0; i < dm.rows(); ++i)
                            for (std::size_t j = 0; j < dm.cols(); ++j)
                              if (i != j && !dm(i, j).is_zero()) diagonal = false;
                          nlohmann::json j = {{"input", matrix_json(a)}, {"P", matrix_json(p)},
                                              {"P_inv_A_P", matrix_json(dm)}, {"verified", diagonal}};
                          out << j.dump(2) << "\n";
                          return diagonal ? kOk : kCheckFailed;
                        }});
  }

  // ---- ideal ----
  CLI::App* ideal = group("ideal", "Degree-bounded vanishing ideals");
  std::string id_points, id_x, id_starts = "0";
  unsigned id_degree = 3;
  std::size_t id_dim = 0, id_steps = 30;
  long id_k = 2;
  {
    CLI::App* c = leaf(ideal, "fit", "Vanishing ideal of a point set up to a degree");
    c->add_option("--points", id_points, "Points as JSON rows or 'a,b;c,d'")->required();
    c->add_option("--degree", id_degree, "Degree bound")->capture_default_str();
    c->add_option("--dim", id_dim, "Ambient dimension (default: from the points)");
    commands.push_back({c, "ideal fit", [&] {
                          auto b = vanishing_ideal(parse_points(id_points), id_degree, id_dim);
                          out << b.to_json().dump(2) << "\n";
                          return kOk;
                        }});
  }
  {
    CLI::App* c = leaf(ideal, "tail", "Vanishing ideals of the tails of a sequence");
    auto* pts = c->add_option("--points", id_points, "Sequence as JSON rows or 'a,b;c,d'");
    c->add_option("--x", id_x, "Start of a x k torus orbit instead of --points")->excludes(pts);
    c->add_option("--k", id_k, "Multiplier for --x")->capture_default_str();
    c->add_option("--steps", id_steps, "Orbit length for --x")->capture_default_str();
    c->add_option("--starts", id_starts, "Comma-separated tail starts")->capture_default_str();
    c->add_option("--degree", id_degree, "Degree bound")->capture_default_str();
    commands.push_back({c, "ideal tail", [&] {
                          std::vector<PointQ> seq;
                          if (!id_points.empty()) {
                            seq = parse_points(id_points);
                          } else if (!id_x.empty()) {
                            seq = torus_orbit(reduce_mod1(parse_scalar_list(id_x), g.max_bits), id_k, id_steps,
                                              g.max_bits);
                          } else {
                            throw UsageError("ideal tail needs --points or --x");
                          }
                          std::vector<std::size_t> starts;
                          for (long s : parse_long_list(id_starts)) starts.push_back(static_cast<std::size_t>(s));
                          out << tail_closure(seq, starts, id_degree).to_json().dump(2) << "\n";
                          return kOk;
                        }});
  }

  // ---- semialg ----
  CLI::App* sa = group("semialg", "Semialgebraic sets");
  std::string sa_set, sa_x, sa_family, sa_param = "inv-n", sa_grid = "-1,1,100";
  std::size_t sa_dim = 1;
  long sa_n_lo = 100, sa_n_hi = 300;
  {
    CLI::App* c = leaf(sa, "member", "Exact membership of a point");
    c->add_option("--S", sa_set, "Set as JSON or e.g. '0 < x_1 < 1/2 & x_2 = x_1^2 | x_1 > 3/4'")->required();
    c->add_option("--x", sa_x, "Point, comma-separated")->required();
    commands.push_back({c, "semialg member", [&] {
                          auto x = parse_scalar_list(sa_x);
                          auto s = parse_set(sa_set, x.size());
                          nlohmann::json j = {{"set", s.to_json()},
                                              {"x", scalar_list_json(x)},
                                              {"member", membership(s, x, g.max_bits)},
                                              {"complexity", complexity(s)}};
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }
  {
    CLI::App* c = leaf(sa, "sandwich", "Limit sets R and U of a family g(x, s) > 0, checked on a grid");
    c->add_option("--family", sa_family, "Inequalities in x_1..x_d and s, joined by '&'")->required();
    c->add_option("--dim", sa_dim, "Dimension d")->capture_default_str();
    c->add_option("--param", sa_param, "s = n (n) or s = 1/n (inv-n)")
        ->check(CLI::IsMember({"n", "inv-n"}))
        ->capture_default_str();
    c->add_option("--grid", sa_grid, "lo,hi,count per axis; the grid is lo + i (hi - lo) / count")
        ->capture_default_str();
    c->add_option("--n-lo", sa_n_lo, "First n of the 'eventually' window")->capture_default_str();
    c->add_option("--n-hi", sa_n_hi, "Last n of the 'eventually' window")->capture_default_str();
    commands.push_back({c, "semialg sandwich", [&] {
                          InequalityFamily fam;
                          fam.dim = sa_dim;
                          fam.parameter = sa_param == "n" ? FamilyParameter::N : FamilyParameter::InverseN;
                          for (const auto& t : split_top(sa_family, '&'))
                            fam.inequalities.push_back(parse_poly(t, sa_dim, {"s"}));
                          auto grid_spec = parse_scalar_list(sa_grid);
                          if (grid_spec.size() != 3 || !grid_spec[2].is_integer())
                            throw UsageError("--grid needs lo,hi,count");
                          const long count = grid_spec[2].rational().get_num().get_si();
                          std::vector<PointQ> grid{{}};
                          for (std::size_t axis = 0; axis < sa_dim; ++axis) {
                            std::vector<PointQ> next;
                            for (const auto& p : grid)
                              for (long i = 0; i < count; ++i) {
                                PointQ q = p;
                                q.push_back(grid_spec[0] + (grid_spec[1] - grid_spec[0]) * ExactScalar(i) /
                                                               ExactScalar(count));
                                next.push_back(std::move(q));
                              }
                            grid = std::move(next);
                          }
                          Sandwich sw = limit_sandwich(fam);
                          auto rep = check_sandwich(fam, sw, grid, sa_n_lo, sa_n_hi);
                          nlohmann::json limits = nlohmann::json::array();
                          for (const auto& p : sw.limits) limits.push_back(p.to_string());
                          nlohmann::json j = {{"limits", limits},
                                              {"R", sw.r.to_json()},
                                              {"U", sw.u.to_json()},
                                              {"report", rep.to_json()},
                                              {"holds", rep.holds()}};
                          out << j.dump(2) << "\n";
                          return rep.holds() ? kOk : kCheckFailed;
                        }});
  }

  // ---- orbit ----
  CLI::App* orb = group("orbit", "Torus orbits and multiplier searches");
  std::string or_x, or_set = "all", or_g;
  long or_k = 2, or_lmax = 1000, or_mmax = 1000;
  std::size_t or_d = 0, or_steps = 20, or_n0 = 0, or_n1 = 10, or_fs = 4;
  bool or_no_premise = false, or_no_path = false;
  auto torus_start = [&] {
    auto x = reduce_mod1(parse_scalar_list(or_x), g.max_bits);
    if (or_d != 0 && x.size() != or_d) throw UsageError("--x has " + std::to_string(x.size()) + " coordinates, --d says " +
                                                        std::to_string(or_d));
    return x;
  };
  {
    CLI::App* c = leaf(orb, "run", "Orbit {k^n x} as CSV, with a hit column when --S is given");
    c->add_option("--d", or_d, "Dimension (checked against --x)");
    c->add_option("--x", or_x, "Start point, reduced mod 1")->required();
    c->add_option("--k", or_k, "Multiplier k")->capture_default_str();
    c->add_option("--steps", or_steps, "Number of steps")->capture_default_str();
    auto* s = c->add_option("--S", or_set, "Target set for the hit mask");
    commands.push_back({c, "orbit run", [&, s] {
                          auto x = torus_start();
                          auto orbit = torus_orbit(x, or_k, or_steps, g.max_bits);
                          std::optional<HitReport> hits;
                          if (s->count() > 0) hits = hitting_times(orbit, parse_set(or_set, x.size()), g.max_bits);
                          out << "n";
                          for (std::size_t i = 1; i <= x.size(); ++i) out << ",x_" << i;
                          if (g.decimal >= 0)
                            for (std::size_t i = 1; i <= x.size(); ++i) out << ",x_" << i << "~inexact";
                          if (hits) out << ",hit";
                          out << "\n";
                          for (std::size_t n = 0; n < orbit.size(); ++n) {
                            out << n;
                            for (const auto& v : orbit[n]) out << ',' << v.to_string();
                            if (g.decimal >= 0)
                              for (const auto& v : orbit[n]) out << ',' << dec(v, g);
                            if (hits) {
                              bool hit = std::find(hits->hits.begin(), hits->hits.end(), n) != hits->hits.end();
                              bool undecided = std::find(hits->indeterminate.begin(), hits->indeterminate.end(), n) !=
                                               hits->indeterminate.end();
                              out << ',' << (undecided ? "?" : hit ? "1" : "0");
                            }
                            out << "\n";
                          }
                          return hits && !hits->indeterminate.empty() ? kPrecisionExhausted : kOk;
                        }});
  }
  {
    CLI::App* c = leaf(orb, "search", "All l <= lmax with {l k^n x} in S for every n in [n0, n1]");
    c->add_option("--d", or_d, "Dimension (checked against --x)");
    c->add_option("--x", or_x, "Start point, reduced mod 1")->required();
    c->add_option("--k", or_k, "Multiplier k")->capture_default_str();
    c->add_option("--S", or_set, "Target set")->required();
    c->add_option("--lmax", or_lmax, "Largest multiplier l")->capture_default_str();
    c->add_option("--n0", or_n0, "First exponent of the window")->capture_default_str();
    c->add_option("--n1", or_n1, "Last exponent of the window")->capture_default_str();
    c->add_flag("--no-premise", or_no_premise, "Skip the premise check on {k^n x}");
    commands.push_back({c, "orbit search", [&] {
                          auto x = torus_start();
                          SearchOptions opt;
                          opt.max_bits = g.max_bits;
                          opt.jobs = g.jobs;
                          opt.check_premise = !or_no_premise;
                          auto rep =
                              multiplier_search_torus(x, parse_set(or_set, x.size()), or_k, or_n0, or_n1, or_lmax, opt);
                          out << rep.to_json().dump(2) << "\n";
                          if (!rep.premise_holds) err << "gplab: premise violated at n =" << [&] {
                            std::ostringstream s;
                            for (long n : rep.premise_failures) s << ' ' << n;
                            return s.str();
                          }() << "\n";
                          return report_exit(rep.premise_holds, !rep.indeterminate.empty());
                        }});
  }
  {
    CLI::App* c = leaf(orb, "thmA", "m <= mmax, k not dividing m, with {v^alpha(m k^n)} in S for some n");
    c->add_option("--D", d_spec, "'running' or comma-separated indices")->capture_default_str();
    c->add_option("--grading", grading_spec, "Leaf degrees such as 1:1,2:1,3:2");
    c->add_option("--alpha", tk_alpha, "Leaf weights (with --S)");
    auto* s = c->add_option("--S", or_set, "Zero set in the coordinates of D");
    c->add_option("--g", or_g, "Univariate generalised polynomial; the target is g(m k^n) = 0")->excludes(s);
    c->add_option("--k", or_k, "Multiplier k")->capture_default_str();
    c->add_option("--mmax", or_mmax, "Largest m")->capture_default_str();
    c->add_option("--n0", or_n0, "First exponent of the window")->capture_default_str();
    c->add_option("--n1", or_n1, "Last exponent of the window")->capture_default_str();
    c->add_option("--fs-order", or_fs, "Largest finite-sums order probed on the found set")->capture_default_str();
    c->add_flag("--no-premise", or_no_premise, "Skip the premise check at m = 1");
    c->add_flag("--no-path-check", or_no_path, "Skip the comparison with T_k iteration");
    commands.push_back({c, "orbit thmA", [&, s] {
                          ExperimentOptions opt;
                          opt.max_bits = g.max_bits;
                          opt.jobs = g.jobs;
                          opt.check_premise = !or_no_premise;
                          opt.path_check = !or_no_path;
                          opt.fs_max_order = or_fs;
                          ExperimentReport rep;
                          if (!or_g.empty()) {
                            rep = theoremA_experiment(parse_genpoly(or_g, 1), or_k, or_mmax, or_n0, or_n1, opt);
                          } else {
                            if (s->count() == 0 || tk_alpha.empty())
                              throw UsageError("orbit thmA needs --g, or --alpha with --S");
                            IndexSet d = parse_index_set(d_spec, grading_spec);
                            rep = theoremA_experiment(d, parse_alpha(tk_alpha, d), parse_set(or_set, d.size()), or_k,
                                                      or_mmax, or_n0, or_n1, opt);
                          }
                          out << rep.to_json().dump(2) << "\n";
                          return report_exit(rep.premise_holds, !rep.indeterminate.empty());
                        }});
  }

  // ---- density ----
  std::size_t de_n = 10000, de_window = 0, de_step = 1, de_min = 0;
  std::string de_prog, de_zero, de_members, de_tol = "1/1000";
  long de_powers = 0;
  {
    CLI::App* c = app.add_subcommand("density", "Window densities of a set of positive integers");
    c->fallthrough();
    c->add_option("--N", de_n, "Window [1, N]")->capture_default_str();
    auto* p = c->add_option("--progression", de_prog, "a,b for {n : n = b mod a}");
    auto* z = c->add_option("--zero", de_zero, "Expression g; the set is {n : g(n) = 0}");
    auto* w = c->add_option("--powers", de_powers, "Base k for {k^j}");
    auto* m = c->add_option("--members", de_members, "Explicit comma-separated elements");
    p->excludes(z)->excludes(w)->excludes(m);
    z->excludes(w)->excludes(m);
    w->excludes(m);
    c->add_option("--window", de_window, "Banach window length (0 = N/10)")->capture_default_str();
    c->add_option("--offset-step", de_step, "Step of the Banach offset grid")->capture_default_str();
    c->add_option("--offset-min", de_min, "First Banach offset (0 = window length)")->capture_default_str();
    c->add_option("--tolerance", de_tol, "Upper - lower below this flags a natural density")->capture_default_str();
    commands.push_back({c, "density", [&] {
                          DensityWindow win;
                          if (!de_prog.empty()) {
                            auto ab = parse_long_list(de_prog);
                            if (ab.size() != 2 || ab[0] < 1) throw UsageError("--progression needs a,b with a >= 1");
                            const long a = ab[0], b = ((ab[1] % a) + a) % a;
                            win = DensityWindow::from_predicate(de_n, [&](long v) { return v % a == b; });
                          } else if (!de_zero.empty()) {
                            GenPoly e = parse_genpoly(de_zero, 1);
                            win = DensityWindow::from_predicate(
                                de_n, [&](long v) { return eval(e, {ExactScalar(v)}, g.max_bits).is_zero(); });
                          } else if (de_powers >= 2) {
                            std::set<long> e;
                            for (long v = 1; v <= static_cast<long>(de_n); v *= de_powers) e.insert(v);
                            win = DensityWindow::from_set(e, de_n);
                          } else if (!de_members.empty()) {
                            auto v = parse_long_list(de_members);
                            win = DensityWindow::from_set(std::set<long>(v.begin(), v.end()), de_n);
                          } else {
                            throw UsageError("density needs --progression, --zero, --powers or --members");
                          }
                          win.window = de_window;
                          win.offset_step = de_step;
                          win.offset_min = de_min;
                          auto st = density_stats(win, parse_rational(de_tol));
                          nlohmann::json j = st.to_json();
                          with_decimal(j, "upper", st.upper, g);
                          with_decimal(j, "lower", st.lower, g);
                          with_decimal(j, "banach_upper", st.banach_upper, g);
                          if (st.natural) with_decimal(j, "natural", *st.natural, g);
                          out << j.dump(2) << "\n";
                          return kOk;
                        }});
  }

  std::vector<std::string> argv_store{"gplab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (max_bits_flag) g.max_bits = *max_bits_flag;

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) chosen = &c;
  if (!chosen) {
    err << "gplab: no command given\n";
    return kUsage;
  }
  nlohmann::json config = {{"command", chosen->path},
                           {"max_bits", g.max_bits},
                           {"jobs", g.jobs},
                           {"decimal", g.decimal >= 0 ? nlohmann::json(g.decimal) : nlohmann::json(nullptr)},
                           {"options", echo_options(chosen->app)}};
  err << "config: " << config.dump() << "\n";

  try {
    return chosen->exec();
  } catch (const UsageError& e) {
    err << "gplab: " << e.what() << "\n";
    return kUsage;
  } catch (const PremiseViolated& e) {
    err << "gplab: premise violated: " << e.what() << "\n";
    return kPremiseViolated;
  } catch (const IndeterminateFloor& e) {
    err << "gplab: precision exhausted: " << e.what() << "\n";
    return kPrecisionExhausted;
  } catch (const IndeterminateComparison& e) {
    err << "gplab: precision exhausted: " << e.what() << "\n";
    return kPrecisionExhausted;
  } catch (const SyntaxError& e) {
    err << "gplab: syntax error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownVariable& e) {
    err << "gplab: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "gplab: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const nlohmann::json::exception& e) {
    err << "gplab: malformed JSON input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "gplab: malformed number: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "gplab: number out of range: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace gplab::cli
