// tkm: command-line front end.
// Exit codes: 0 ok, 2 invalid input, 3 window or resource limit, 4 missing fusion data.

#include <sys/resource.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "tkm/gluing.hpp"
#include "tkm/oracle.hpp"
#include "tkm/sugawara.hpp"

using namespace tkm;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.3.1";

struct Manifest {
  std::string sub;
  std::vector<std::string> inputs;
  std::vector<std::pair<std::string, std::string>> params;

  void print(std::ostream& os) const {
    os << "# subcommand: " << sub << "\n# inputs:";
    if (inputs.empty()) os << " -";
    for (auto& i : inputs) os << " " << i;
    os << "\n# parameters:";
    for (auto& [k, v] : params) os << " " << k << "=" << v;
    os << "\n# version: " << kVersion << "\n# exact: true\n";
  }
};

struct AlgOpts {
  std::string series = "A";
  int rank = 1;
  std::string tau = "id";
  std::string h;
  int m = 1;
  long c = 1;
};

std::vector<Q> parse_list(const std::string& s) {
  std::vector<Q> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      Q x(tok);
      x.canonicalize();
      out.push_back(x);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("not a rational number: '" + tok + "'");
    }
  }
  return out;
}

char series_char(const std::string& s) {
  if (s.size() != 1) throw std::invalid_argument("series must be one letter A..G");
  return s[0];
}

// Q for m in {1,2}, Q(omega) for m in {3,6}.
bool needs_omega(int m) {
  if (has_roots_of_unity<Q>(m)) return false;
  if (has_roots_of_unity<QOmega>(m)) return true;
  throw std::invalid_argument("m = " + std::to_string(m) + ": no exact base field (supported m: 1, 2, 3, 6)");
}

template <class F>
void with_field(bool omega, F&& f) {
  if (omega)
    f(QOmega{});
  else
    f(Q{});
}

std::vector<Q> h_or_zero(const AlgOpts& o, const SimpleLieAlgebra& g, const DiagramAutomorphism& t) {
  auto h = parse_list(o.h);
  if (o.h.empty()) h.assign(t.orbits.size(), Q(0));
  (void)g;
  return h;
}

void algebra_params(Manifest& M, const AlgOpts& o) {
  M.params.push_back({"algebra", o.series + std::to_string(o.rank)});
  M.params.push_back({"tau", o.tau});
  M.params.push_back({"h", o.h.empty() ? "0" : o.h});
  M.params.push_back({"m", std::to_string(o.m)});
  M.params.push_back({"c", std::to_string(o.c)});
}

void add_alg_options(CLI::App* sc, AlgOpts& o) {
  sc->add_option("series", o.series, "A..G")->required();
  sc->add_option("rank", o.rank)->required();
  sc->add_option("--tau", o.tau, "id | flip | triality");
  sc->add_option("--h", o.h, "a_i(h), comma separated");
  sc->add_option("--m", o.m, "order of sigma");
  sc->add_option("--c,--level", o.c, "level");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

bool curve_needs_omega(const GammaCurve& C) {
  if (needs_omega(C.N > 2 ? C.N : 1)) return true;
  for (auto& d : C.phi)
    if (d.inverse_of < 0 && needs_omega(d.m)) return true;
  return false;
}

// ---------------------------------------------------------------- subcommands

template <class K>
void run_dc(const AlgOpts& o, Manifest& M) {
  auto g = build_simple_algebra(series_char(o.series), o.rank);
  auto t = make_diagram_automorphism(g, o.tau);
  auto S = build_automorphism<K>(g, t, h_or_zero(o, g, t), o.m);
  auto D = enumerate_Dc(S, o.c);
  M.print(std::cout);
  std::cout << "# zero_in_Dc: " << (zero_in_Dc(S, o.c) ? "yes" : "no") << "\n";
  std::cout << "# columns: index weight n_0..n_l\n";
  for (size_t i = 0; i < D.size(); ++i) {
    std::cout << i << " " << weight_str(D[i]);
    for (auto& x : n_coefficients(S, D[i], o.c)) std::cout << " " << to_str(x);
    std::cout << "\n";
  }
}

template <class K>
void run_virasoro(const AlgOpts& o, const std::string& lam, int dmax, long n, long k, bool verma, Manifest& M) {
  auto g = build_simple_algebra(series_char(o.series), o.rank);
  auto t = make_diagram_automorphism(g, o.tau);
  auto S = build_automorphism<K>(g, t, h_or_zero(o, g, t), o.m);
  auto L = build_loop_algebra(S);
  WeightQ w = lam.empty() ? WeightQ(S.l, Q(0)) : parse_list(lam);
  if (static_cast<int>(w.size()) != S.l) throw std::invalid_argument("lambda needs " + std::to_string(S.l) + " coordinates");
  auto T = verma ? build_verma_truncation(L, w, o.c, dmax) : build_integrable_truncation(L, w, o.c, dmax);
  Sugawara<K> Sg(T);
  auto R = virasoro_defect(Sg, n, k);
  M.print(std::cout);
  std::cout << "# [L_n, L_k] - (n-k) L_{n+k}, expected scalar " << R.expected << "\n";
  std::cout << "# columns: degree scalar value\n";
  for (auto& r : R.layers) std::cout << r.degree << " " << (r.scalar ? "yes" : "no") << " " << r.value << "\n";
  std::cout << "result " << (R.ok ? "ok" : "FAIL") << "\n";
}

template <class K>
void run_gluing(const AlgOpts& o, const std::string& mu, int dmax, long nmax, Manifest& M) {
  auto g = build_simple_algebra(series_char(o.series), o.rank);
  auto t = make_diagram_automorphism(g, o.tau);
  auto S = build_automorphism<K>(g, t, h_or_zero(o, g, t), o.m);
  auto L1 = build_loop_algebra(S, false);
  auto L2 = build_loop_algebra(S, true);
  WeightQ w = mu.empty() ? WeightQ(S.l, Q(0)) : parse_list(mu);
  if (static_cast<int>(w.size()) != S.l) throw std::invalid_argument("mu needs " + std::to_string(S.l) + " coordinates");
  auto G = build_gluing_tensor(L1, L2, w, o.c, dmax);
  M.print(std::cout);
  std::cout << "# mu* = " << weight_str(G.mu_star) << "\n# columns: degree dim canonical annihilated/checked\n";
  bool all = true;
  for (int d = 0; d <= dmax; ++d) {
    bool can = delta_is_canonical(G, d);
    int ok = 0, tot = 0;
    for (long n = -nmax; n <= nmax; ++n) {
      if (d + n > dmax) continue;
      int j = L1.cls(n);
      for (int a = 0; a < L1.n(j); ++a) {
        ++tot;
        ok += check_annihilation(G, a, n, d);
      }
    }
    all = all && can && ok == tot;
    std::cout << d << " " << G.H1.dim(d) << " " << (can ? "yes" : "no") << " " << ok << "/" << tot << "\n";
  }
  std::cout << "result " << (all ? "ok" : "FAIL") << "\n";
}

MoveOrder order_from_seed(std::optional<unsigned> seed) {
  MoveOrder mo;
  if (!seed) return mo;
  std::mt19937 rng(*seed);
  mo.separating_first = rng() % 2;
  mo.reverse_nodes = rng() % 2;
  mo.rotation = static_cast<int>(rng() % 4);
  return mo;
}

std::string order_str(const MoveOrder& mo) {
  return std::string(mo.separating_first ? "separating" : "nonseparating") + "-first,rotation=" + std::to_string(mo.rotation) +
         (mo.reverse_nodes ? ",reversed" : "");
}

template <class K>
void run_factorize(const GammaCurve& raw, int node, Manifest& M) {
  auto g = build_simple_algebra(raw.series, raw.rank);
  GroupAction<K> G(g, raw.N, raw.phi);
  auto C = validate_curve(raw, G);
  if (C.nodes.empty()) throw CurveError("factorize: the curve has no node");
  bool nonsep = is_nonseparating(C, node);
  auto kids = factorize(C, G, node);
  M.print(std::cout);
  std::cout << "# node " << node << " (" << (nonsep ? "non-separating" : "separating") << "), power "
            << C.node_power(C.nodes.at(node)) << "\n# columns: child mu mu*\n";
  const auto& nd = C.nodes[node];
  int p2 = G.norm(-C.node_power(nd));
  for (size_t i = 0; i < kids.size(); ++i)
    std::cout << i << " " << weight_str(kids[i].first) << " " << weight_str(G.co_weight(p2, kids[i].first)) << "\n";
}

template <class K>
int run_dim(const GammaCurve& raw, const std::string& fusion, bool oracle, int dmax, const MoveOrder& mo, Manifest& M) {
  auto g = build_simple_algebra(raw.series, raw.rank);
  GroupAction<K> G(g, raw.N, raw.phi);
  auto C = validate_curve(raw, G);
  auto tree = reduce_to_trinions(C, G, mo);
  FusionTable F;
  if (!fusion.empty()) F = FusionTable::from_json(load_json(fusion));
  std::vector<OracleFill> fills;
  if (oracle) fills = fill_from_oracle(F, G, tree.leaves(), dmax);
  M.print(std::cout);
  for (auto& f : fills) {
    std::cout << "# oracle " << f.t.key();
    if (f.rep.dims.empty()) {
      std::cout << " " << f.rep.note << " " << f.rep.value << "\n";
      continue;
    }
    std::cout << " dims";
    for (auto d : f.rep.dims) std::cout << " " << d;
    std::cout << (f.rep.stabilized ? " stabilized " + std::to_string(f.rep.value) : " not stabilized") << "\n";
  }
  for (auto& l : tree.log()) std::cout << "log " << l << "\n";
  try {
    auto v = dimension(tree, F);
    std::cout << "dimension " << v.get_str() << "\n";
  } catch (const MissingFusion& e) {
    std::cout.flush();
    std::cerr << e.what() << "\n";
    return 4;
  }
  return 0;
}

template <class K>
void run_oracle(const GammaCurve& raw, int dmax, std::optional<std::string> p0s, Manifest& M) {
  auto g = build_simple_algebra(raw.series, raw.rank);
  GroupAction<K> G(g, raw.N, raw.phi);
  auto C = validate_curve(raw, G);
  if (C.comps.size() != 1 || !C.nodes.empty() || C.comps[0].genus != 0)
    throw CurveError("oracle: needs a single smooth genus-0 component");
  std::vector<OraclePoint> pts;
  bool placed = true;
  std::vector<Leg> legs;
  for (auto& q : C.comps[0].marks) {
    OraclePoint p;
    p.power = C.power(q);
    p.weight = q.weight;
    p.infinity = q.at_infinity;
    if (q.position) p.position = *q.position;
    if (!q.position && !q.at_infinity) placed = false;
    pts.push_back(p);
    legs.push_back({p.power, p.weight});
  }
  if (!placed) pts = place_on_p1(C.N, legs);
  std::optional<Q> p0;
  if (p0s) p0 = parse_list(*p0s).at(0);
  auto R = coinvariants_bruteforce(G, C.level, pts, dmax, p0);
  M.print(std::cout);
  std::cout << "# columns: degree dimension\n";
  for (size_t d = 0; d < R.dims.size(); ++d) std::cout << d << " " << R.dims[d] << "\n";
  std::cout << "stabilized " << (R.stabilized ? "yes" : "no") << "\n";
  if (R.stabilized) std::cout << "value " << R.value << "\n";
  if (!R.note.empty()) std::cout << "# " << R.note << "\n";
  if (C.N == 1) {
    std::vector<WeightQ> ws;
    for (auto& q : C.comps[0].marks) ws.push_back(q.weight);
    std::cout << "verlinde " << verlinde_untwisted(g, C.level, 0, ws).get_str() << "\n";
  }
}

void apply_memory_cap() {
  const char* s = std::getenv("TKM_MEM_CAP_MB");
  if (!s) return;
  long mb = std::atol(s);
  if (mb <= 0) return;
  rlimit r{};
  r.rlim_cur = r.rlim_max = static_cast<rlim_t>(mb) << 20;
  setrlimit(RLIMIT_AS, &r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted affine Kac-Moody toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", kVersion);
  std::optional<unsigned> seed;
  int dmax = 4;
  app.add_option("--seed", seed, "seed for randomized move orders");
  app.add_option("--d-max", dmax, "truncation degree");

  AlgOpts o;
  auto* dc = app.add_subcommand("dc", "list D_c");
  add_alg_options(dc, o);

  std::string lam;
  long vn = 2, vk = -2;
  bool verma = false;
  auto* vir = app.add_subcommand("virasoro", "Virasoro defect on a truncation of H(lambda)");
  add_alg_options(vir, o);
  vir->add_option("--lambda", lam, "highest weight, comma separated");
  vir->add_option("--n", vn);
  vir->add_option("--k", vk);
  vir->add_flag("--verma", verma, "use the Verma truncation");
  vir->add_option("--d-max", dmax);

  std::string mu;
  long nmax = 3;
  auto* glu = app.add_subcommand("gluing-check", "gluing tensor and its annihilation");
  add_alg_options(glu, o);
  glu->add_option("--mu", mu, "weight mu, comma separated");
  glu->add_option("--n-max", nmax);
  glu->add_option("--d-max", dmax);

  std::string curve_path, fusion_path;
  int node = 0;
  auto* fac = app.add_subcommand("factorize", "children of one node");
  fac->add_option("curve", curve_path)->required();
  fac->add_option("--node", node);

  bool use_oracle = false;
  auto* dim = app.add_subcommand("dim", "dimension by factorization");
  dim->add_option("curve", curve_path)->required();
  dim->add_option("--fusion", fusion_path);
  dim->add_flag("--oracle", use_oracle, "fill missing trinions by brute-force coinvariants");
  dim->add_option("--d-max", dmax);
  dim->add_option("--seed", seed);

  std::optional<std::string> p0;
  auto* orc = app.add_subcommand("oracle", "brute-force coinvariants on P^1");
  orc->add_option("curve", curve_path)->required();
  orc->add_option("--p0", p0, "position of the H(0) orbit");
  orc->add_option("--d-max", dmax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  apply_memory_cap();

  Manifest M;
  try {
    if (*dc) {
      M.sub = "dc";
      algebra_params(M, o);
      with_field(needs_omega(o.m), [&](auto k) { run_dc<decltype(k)>(o, M); });
    } else if (*vir) {
      M.sub = "virasoro";
      algebra_params(M, o);
      M.params.push_back({"lambda", lam.empty() ? "0" : lam});
      M.params.push_back({"n", std::to_string(vn)});
      M.params.push_back({"k", std::to_string(vk)});
      M.params.push_back({"d_max", std::to_string(dmax)});
      M.params.push_back({"module", verma ? "verma" : "integrable"});
      with_field(needs_omega(o.m), [&](auto k) { run_virasoro<decltype(k)>(o, lam, dmax, vn, vk, verma, M); });
    } else if (*glu) {
      M.sub = "gluing-check";
      algebra_params(M, o);
      M.params.push_back({"mu", mu.empty() ? "0" : mu});
      M.params.push_back({"n_max", std::to_string(nmax)});
      M.params.push_back({"d_max", std::to_string(dmax)});
      with_field(needs_omega(o.m), [&](auto k) { run_gluing<decltype(k)>(o, mu, dmax, nmax, M); });
    } else if (*fac) {
      M.sub = "factorize";
      M.inputs = {curve_path};
      M.params.push_back({"node", std::to_string(node)});
      auto C = parse_curve(load_json(curve_path));
      with_field(curve_needs_omega(C), [&](auto k) { run_factorize<decltype(k)>(C, node, M); });
    } else if (*dim) {
      M.sub = "dim";
      M.inputs = {curve_path};
      if (!fusion_path.empty()) M.inputs.push_back(fusion_path);
      if (fusion_path.empty() && !use_oracle) M.params.push_back({"fusion", "none"});
      if (use_oracle) M.params.push_back({"oracle", "on"});
      M.params.push_back({"d_max", std::to_string(dmax)});
      auto mo = order_from_seed(seed);
      if (seed) M.params.push_back({"seed", std::to_string(*seed)});
      M.params.push_back({"order", order_str(mo)});
      auto C = parse_curve(load_json(curve_path));
      int rc = 0;
      with_field(curve_needs_omega(C), [&](auto k) { rc = run_dim<decltype(k)>(C, fusion_path, use_oracle, dmax, mo, M); });
      return rc;
    } else if (*orc) {
      M.sub = "oracle";
      M.inputs = {curve_path};
      M.params.push_back({"d_max", std::to_string(dmax)});
      if (p0) M.params.push_back({"p0", *p0});
      auto C = parse_curve(load_json(curve_path));
      with_field(curve_needs_omega(C), [&](auto k) { run_oracle<decltype(k)>(C, dmax, p0, M); });
    }
  } catch (const WindowError& e) {
    std::cerr << "error: " << e.what() << "; required d_max = " << e.required << "\n";
    return 3;
  } catch (const TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 3;
  } catch (const MissingFusion& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
