#pragma once
// Gamma-stable pointed nodal curves in the dual-graph model over the quotient,
// and the reduction of block dimensions to trinion data.
//
// Gamma is cyclic of order N with generator gamma. A marked or nodal orbit
// carries its stabilizer order e and a character exponent k: gamma^{N/e}
// acts on the tangent line by exp(2 pi i k/e). The element of Gamma_q acting
// by exp(2 pi i/e) is gamma^p with p = (N/e) k^{-1}, and the local algebra at q
// is built from sigma_q = phi(gamma^p). A leg is the pair (p, weight), the
// weight being in the coordinates of the realization attached to power p.
// At a node the z' branch has power p, the z'' branch power -p.

#include "loop.hpp"
#include "twist.hpp"

#include <json.hpp>

#include <array>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace tkm {

struct CurveError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline Q parse_q(const nlohmann::json& j) {
  if (j.is_number_integer()) return Q(j.get<long>());
  if (j.is_string()) {
    Q x(j.get<std::string>());
    x.canonicalize();
    return x;
  }
  throw CurveError("expected an integer or a \"p/q\" string, got " + j.dump());
}

inline WeightQ parse_weight(const nlohmann::json& j) {
  if (!j.is_array()) throw CurveError("weight must be an array, got " + j.dump());
  WeightQ w;
  for (auto& x : j) w.push_back(parse_q(x));
  return w;
}

inline std::string weight_str(const WeightQ& w) {
  std::string s = "(";
  for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + to_str(w[i]);
  return s + ")";
}

inline long mod_inverse(long a, long n) {
  a = ((a % n) + n) % n;
  for (long x = 1; x < n; ++x)
    if (a * x % n == 1) return x;
  if (n == 1) return 0;
  throw CurveError("character exponent " + std::to_string(a) + " is not a unit mod " + std::to_string(n));
}

/// Power p with sigma_q = phi(gamma^p) for stabilizer order e and character exponent k.
inline int local_power(int N, int e, int k) {
  if (e == 1) return 0;
  return static_cast<int>((N / e) * mod_inverse(k, e) % N);
}
inline int stab_of_power(int N, int p) { return N / std::gcd(N, p % N == 0 ? N : p % N); }
inline int chi_of_power(int N, int p) {
  int e = stab_of_power(N, p);
  if (e == 1) return 0;
  return static_cast<int>(mod_inverse((p % N) / (N / e), e));
}

// ---------------------------------------------------------------- Gamma action on g

struct AutDescriptor {
  int power = 1;
  std::string tau = "id";
  std::vector<Q> h;
  int m = 1;
  int inverse_of = -1;  // realization of phi(gamma^power) as the inverse realization of another power
};

inline AutDescriptor parse_descriptor(const nlohmann::json& j) {
  AutDescriptor d;
  d.power = j.value("power", 1);
  if (j.contains("inverse_of")) {
    d.inverse_of = j.at("inverse_of").get<int>();
    return d;
  }
  d.tau = j.value("tau", std::string("id"));
  d.m = j.value("m", 1);
  if (j.contains("h"))
    for (auto& x : j.at("h")) d.h.push_back(parse_q(x));
  return d;
}

/// phi: Gamma -> Aut(g) on the powers of gamma, with one realization per power.
template <class K>
class GroupAction {
 public:
  const SimpleLieAlgebra* g = nullptr;
  int N = 1;

  GroupAction(const SimpleLieAlgebra& alg, int order, const std::vector<AutDescriptor>& phi) : g(&alg), N(order) {
    if (N < 1) throw CurveError("group_order: must be >= 1");
    src_.assign(N, -1);
    inv_.assign(N, false);
    add(make_diagram_automorphism(alg, "id"), std::vector<Q>(alg.rank, Q(0)), 1, 0);
    std::map<int, AutDescriptor> byp;
    for (auto& d : phi) {
      if (d.power <= 0 || d.power >= N) throw CurveError("phi: power " + std::to_string(d.power) + " outside 1.." + std::to_string(N - 1));
      if (byp.count(d.power)) throw CurveError("phi: power " + std::to_string(d.power) + " given twice");
      byp[d.power] = d;
    }
    for (int p = 1; p < N; ++p)
      if (!byp.count(p) && byp.count(N - p) && byp[N - p].inverse_of < 0) {
        AutDescriptor d;
        d.power = p;
        d.inverse_of = N - p;
        byp[p] = d;
      }
    if (N > 1 && (!byp.count(1) || byp[1].inverse_of >= 0))
      throw CurveError("phi: the generator gamma needs an explicit (tau, h, m) descriptor");
    for (int p = 1; p < N; ++p) {
      if (!byp.count(p)) throw CurveError("phi: no descriptor for gamma^" + std::to_string(p));
      const auto& d = byp[p];
      if (d.inverse_of >= 0) continue;
      int e = N / std::gcd(N, p);
      if (d.m != e)
        throw CurveError("phi: gamma^" + std::to_string(p) + " has order dividing " + std::to_string(e) + ", descriptor needs m = " +
                         std::to_string(e) + ", got " + std::to_string(d.m));
      add(make_diagram_automorphism(alg, d.tau), d.h, d.m, p);
    }
    for (int p = 1; p < N; ++p) {
      const auto& d = byp[p];
      if (d.inverse_of < 0) continue;
      int i = d.inverse_of;
      if (i <= 0 || i >= N || (i + p) % N != 0)
        throw CurveError("phi: gamma^" + std::to_string(p) + " can only be the inverse realization of gamma^" + std::to_string(N - p));
      if (src_[i] < 0 || inv_[i]) throw CurveError("phi: inverse_of must name an explicit descriptor");
      src_[p] = src_[i];
      inv_[p] = true;
    }
    for (int p = 0; p < N; ++p) loops_.push_back(build_loop_algebra(auts_[src_[p]], inv_[p]));
    check_powers();
  }
  GroupAction(const GroupAction&) = delete;
  GroupAction& operator=(const GroupAction&) = delete;

  int norm(int p) const { return ((p % N) + N) % N; }
  const FiniteOrderAutomorphism<K>& aut(int p) const { return auts_[src_[norm(p)]]; }
  const LoopAlgebra<K>& loop(int p) const { return loops_[norm(p)]; }
  bool inverse(int p) const { return inv_[norm(p)]; }

  const std::vector<WeightQ>& Dc(int p, long c) const {
    auto key = std::make_pair(src_[norm(p)], c);
    auto it = dc_.find(key);
    if (it == dc_.end()) it = dc_.emplace(key, enumerate_Dc(aut(p), c)).first;
    return it->second;
  }
  bool in_Dc(int p, long c, const WeightQ& w) const {
    const auto& D = Dc(p, c);
    return std::binary_search(D.begin(), D.end(), w);
  }
  bool zero_in(int p, long c) const { return zero_in_Dc(aut(p), c); }

  /// Weight on the branch of power -p whose module is dual to V(mu) on power p.
  WeightQ co_weight(int p, const WeightQ& mu) const {
    int a = norm(p), b = norm(-p);
    if (src_[a] == src_[b] && inv_[a] == inv_[b]) {
      if (inv_[a]) throw CurveError("co_weight: self-paired inverse realization");
      return dual_weight(aut(a), mu);
    }
    if (src_[a] == src_[b]) return mu;  // mutually inverse realizations share coordinates
    throw CurveError("phi: gamma^" + std::to_string(b) + " must be given as inverse_of " + std::to_string(a) +
                     " to glue nodes of power " + std::to_string(a));
  }

 private:
  void add(const DiagramAutomorphism& tau, const std::vector<Q>& h, int m, int p) {
    auts_.push_back(build_automorphism<K>(*g, tau, h, m));
    src_[p] = static_cast<int>(auts_.size()) - 1;
  }
  // eigenvalue multiplicities of phi(gamma^p) must be those of phi(gamma)^p
  void check_powers() const {
    if (N == 1) return;
    auto d1 = aut(1).dims();
    for (int p = 2; p < N; ++p) {
      if (inv_[p]) continue;
      int gg = std::gcd(p, N), e = N / gg;
      std::vector<int> want(e, 0);
      for (int c = 0; c < N; ++c) want[(long(c) * (p / gg)) % e] += d1[c];
      if (want != aut(p).dims())
        throw CurveError("phi: descriptor of gamma^" + std::to_string(p) + " is not conjugate to phi(gamma)^" + std::to_string(p) +
                         " (eigenvalue multiplicities differ)");
    }
  }
  std::deque<FiniteOrderAutomorphism<K>> auts_;
  std::deque<LoopAlgebra<K>> loops_;
  std::vector<int> src_;
  std::vector<bool> inv_;
  mutable std::map<std::pair<int, long>, std::vector<WeightQ>> dc_;
};

// ---------------------------------------------------------------- curves

struct Marking {
  int stab = 1;
  int chi = 0;
  WeightQ weight;
  std::optional<Q> position;  // representative point on P^1 for the coinvariant oracle
  bool at_infinity = false;
};

struct Component {
  int genus = 0;
  std::vector<Marking> marks;
};

struct NodeOrbit {
  int a = 0, b = 0;  // z' branch on component a, z'' branch on b
  int stab = 1;
  int chi = 0;
  std::optional<int> chi_other;
  bool exchanges_branches = false;
  bool degeneration = false;  // declared degeneration of a positive-genus component
};

struct GammaCurve {
  char series = 'A';
  int rank = 1;
  int N = 1;
  long level = 1;
  std::vector<AutDescriptor> phi;
  std::vector<Component> comps;
  std::vector<NodeOrbit> nodes;
  std::optional<long> declared_cover_genus;
  long cover_genus = 0;  // arithmetic genus of the cover, from Riemann-Hurwitz

  int power(const Marking& q) const { return local_power(N, q.stab, q.chi); }
  int node_power(const NodeOrbit& n) const { return local_power(N, n.stab, n.chi); }
};

/// Raw description; no invariant is checked here.
inline GammaCurve parse_curve(const nlohmann::json& j) {
  GammaCurve C;
  try {
    auto& alg = j.at("algebra");
    C.series = alg.at("series").get<std::string>().at(0);
    C.rank = alg.at("rank").get<int>();
    C.level = j.at("level").get<long>();
    C.N = j.contains("group") ? j.at("group").value("order", 1) : 1;
    if (j.contains("phi"))
      for (auto& d : j.at("phi")) C.phi.push_back(parse_descriptor(d));
    for (auto& cj : j.at("components")) {
      Component comp;
      comp.genus = cj.value("genus", 0);
      if (cj.contains("markings"))
        for (auto& mj : cj.at("markings")) {
          Marking q;
          q.stab = mj.value("stab_order", 1);
          q.chi = mj.value("char_exponent", q.stab == 1 ? 0 : 1);
          q.weight = parse_weight(mj.at("weight"));
          if (mj.contains("position")) {
            if (mj.at("position").is_string() && mj.at("position").get<std::string>() == "inf")
              q.at_infinity = true;
            else
              q.position = parse_q(mj.at("position"));
          }
          comp.marks.push_back(q);
        }
      C.comps.push_back(comp);
    }
    if (j.contains("nodes"))
      for (auto& nj : j.at("nodes")) {
        NodeOrbit n;
        auto ep = nj.at("endpoints");
        n.a = ep.at(0).get<int>();
        n.b = ep.at(1).get<int>();
        n.stab = nj.value("stab_order", 1);
        n.chi = nj.value("char_exponent", n.stab == 1 ? 0 : 1);
        if (nj.contains("char_exponent_other")) n.chi_other = nj.at("char_exponent_other").get<int>();
        n.exchanges_branches = nj.value("exchanges_branches", false);
        C.nodes.push_back(n);
      }
    if (j.contains("degenerations"))
      for (auto& dj : j.at("degenerations")) {
        NodeOrbit n;
        n.a = n.b = dj.at("component").get<int>();
        n.stab = dj.value("stab_order", 1);
        n.chi = dj.value("char_exponent", n.stab == 1 ? 0 : 1);
        n.degeneration = true;
        C.nodes.push_back(n);
      }
    if (j.contains("cover_genus")) C.declared_cover_genus = j.at("cover_genus").get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw CurveError(std::string("malformed curve description: ") + e.what());
  }
  return C;
}

inline int count_graph_components(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> par(n);
  std::iota(par.begin(), par.end(), 0);
  std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
  int k = n;
  for (auto [a, b] : edges) {
    int x = find(a), y = find(b);
    if (x != y) par[x] = y, --k;
  }
  return k;
}

/// Arithmetic genus of the quotient: component genera plus first Betti number of the dual graph.
inline long quotient_genus(const GammaCurve& C) {
  long g = 0;
  std::vector<std::pair<int, int>> e;
  for (auto& c : C.comps) g += c.genus;
  for (auto& n : C.nodes) e.emplace_back(n.a, n.b);
  int n = static_cast<int>(C.comps.size());
  return g + long(e.size()) - n + count_graph_components(n, e);
}

/// Checks every invariant and fills cover_genus. Declared degenerations are
/// folded in: each lowers its component's genus by one and adds a self-node.
template <class K>
GammaCurve validate_curve(GammaCurve C, const GroupAction<K>& G) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& name, const std::string& why) { bad.push_back(name + ": " + why); };
  const int N = C.N;
  if (C.level < 1) fail("level", "must be >= 1");
  if (C.comps.empty()) fail("components", "at least one component is required");
  int nc = static_cast<int>(C.comps.size());
  std::vector<long> mono(nc, 0);
  long ram = 0;
  for (int i = 0; i < nc; ++i) {
    auto& comp = C.comps[i];
    std::string where = "component " + std::to_string(i);
    if (comp.genus < 0) fail("genus", where + " has negative genus");
    if (comp.marks.empty()) fail("condition_star", where + " carries no marked orbit");
    for (size_t k = 0; k < comp.marks.size(); ++k) {
      auto& q = comp.marks[k];
      std::string w = where + " marking " + std::to_string(k);
      if (q.stab < 1 || N % q.stab) {
        fail("stabilizer_order", w + ": e = " + std::to_string(q.stab) + " does not divide |Gamma| = " + std::to_string(N));
        continue;
      }
      if (q.stab > 1 && std::gcd(((q.chi % q.stab) + q.stab) % q.stab, q.stab) != 1) {
        fail("primitive_character", w + ": exponent " + std::to_string(q.chi) + " has order < " + std::to_string(q.stab));
        continue;
      }
      int p = C.power(q);
      mono[i] += p;
      ram += (N / q.stab) * (q.stab - 1);
      const auto& S = G.aut(p);
      if (static_cast<int>(q.weight.size()) != S.l) {
        fail("weight_in_Dc", w + ": weight needs " + std::to_string(S.l) + " coordinates");
      } else if (!G.in_Dc(p, C.level, q.weight)) {
        fail("weight_in_Dc", w + ": " + weight_str(q.weight) + " is not in D_c for phi(gamma^" + std::to_string(p) + ")");
      }
    }
  }
  for (size_t k = 0; k < C.nodes.size(); ++k) {
    auto& n = C.nodes[k];
    std::string w = "node " + std::to_string(k);
    if (n.a < 0 || n.b < 0 || n.a >= nc || n.b >= nc) {
      fail("node_endpoints", w + " names a missing component");
      continue;
    }
    if (n.exchanges_branches) {
      fail("branch_exchange", w + ": stabilizer exchanges the two branches (unsupported)");
      continue;
    }
    if (n.stab < 1 || N % n.stab) {
      fail("stabilizer_order", w + ": e = " + std::to_string(n.stab) + " does not divide |Gamma|");
      continue;
    }
    if (n.stab > 1 && std::gcd(((n.chi % n.stab) + n.stab) % n.stab, n.stab) != 1) {
      fail("primitive_character", w + ": exponent " + std::to_string(n.chi) + " is not primitive");
      continue;
    }
    if (n.chi_other && ((n.chi + *n.chi_other) % n.stab + n.stab) % n.stab != 0)
      fail("stable_action", w + ": branch characters are not mutually inverse (det != 1)");
    int p = C.node_power(n);
    mono[n.a] += p;
    mono[n.b] -= p;
  }
  for (int i = 0; i < nc; ++i)
    if (((mono[i] % N) + N) % N)
      fail("monodromy", "component " + std::to_string(i) + ": local monodromies multiply to gamma^" +
                            std::to_string(((mono[i] % N) + N) % N) + " != 1");
  std::vector<std::pair<int, int>> e;
  for (auto& n : C.nodes)
    if (n.a >= 0 && n.b >= 0 && n.a < nc && n.b < nc) e.emplace_back(n.a, n.b);
  if (nc && count_graph_components(nc, e) != 1) fail("connected", "the dual graph is disconnected");
  if (bad.empty()) {
    long gbar = quotient_genus(C);
    long twice = long(N) * (2 * gbar - 2) + ram;
    if (twice % 2) {
      fail("riemann_hurwitz", "2g-2 = " + std::to_string(twice) + " is odd");
    } else {
      C.cover_genus = twice / 2 + 1;
      if (C.declared_cover_genus && *C.declared_cover_genus != C.cover_genus)
        fail("riemann_hurwitz", "declared genus " + std::to_string(*C.declared_cover_genus) + " but 2g-2 = |Gamma|(2gbar-2) + ramification gives " +
                                    std::to_string(C.cover_genus));
    }
    for (auto& n : C.nodes)
      if (n.degeneration) {
        if (C.comps[n.a].genus < 1) fail("degeneration", "component " + std::to_string(n.a) + " has no genus left to degenerate");
        else C.comps[n.a].genus -= 1;
        n.degeneration = false;
      }
  }
  if (!bad.empty()) {
    std::string msg = "invalid curve:";
    for (auto& b : bad) msg += "\n  " + b;
    throw CurveError(msg);
  }
  return C;
}

// ---------------------------------------------------------------- moves on curves

struct NormalizedNode {
  GammaCurve curve;
  std::pair<int, int> q1, q2;  // (component, marking index) of q' and q''
};

/// Cuts node k into two smooth marked orbits with equal stabilizers and inverse characters.
/// The new markings carry empty weights until factorize assigns them.
inline NormalizedNode normalize_at_node(const GammaCurve& C, int k) {
  if (k < 0 || k >= static_cast<int>(C.nodes.size())) throw CurveError("normalize_at_node: no node " + std::to_string(k));
  const NodeOrbit n = C.nodes[k];
  if (n.exchanges_branches) throw CurveError("branch_exchange: node stabilizer exchanges branches");
  NormalizedNode out{C, {}, {}};
  out.curve.nodes.erase(out.curve.nodes.begin() + k);
  Marking q1, q2;
  q1.stab = q2.stab = n.stab;
  q1.chi = n.stab == 1 ? 0 : ((n.chi % n.stab) + n.stab) % n.stab;
  q2.chi = n.stab == 1 ? 0 : (n.stab - q1.chi) % n.stab;
  out.curve.comps[n.a].marks.push_back(q1);
  out.q1 = {n.a, static_cast<int>(out.curve.comps[n.a].marks.size()) - 1};
  out.curve.comps[n.b].marks.push_back(q2);
  out.q2 = {n.b, static_cast<int>(out.curve.comps[n.b].marks.size()) - 1};
  return out;
}

/// Whether removing node k keeps its endpoints connected.
inline bool is_nonseparating(const GammaCurve& C, int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < static_cast<int>(C.nodes.size()); ++i)
    if (i != k) e.emplace_back(C.nodes[i].a, C.nodes[i].b);
  int n = static_cast<int>(C.comps.size());
  e.emplace_back(C.nodes[k].a, C.nodes[k].b);
  int with = count_graph_components(n, e);
  e.pop_back();
  return count_graph_components(n, e) == with;
}

/// Adds a weight-0 marked orbit with the given local data to component comp.
template <class K>
GammaCurve propagate(const GammaCurve& C, const GroupAction<K>& G, int comp, int stab = 1, int chi = 0) {
  if (comp < 0 || comp >= static_cast<int>(C.comps.size())) throw CurveError("propagate: no component " + std::to_string(comp));
  int p = local_power(C.N, stab, chi);
  const auto& S = G.aut(p);
  if (!G.zero_in(p, C.level)) {
    auto t = S.labels();
    throw CurveError("propagate: 0 is not in D_c at the new orbit: m = " + std::to_string(S.m) + " does not divide sbar*c = " +
                     std::to_string(t.sbar_gcd * C.level));
  }
  GammaCurve out = C;
  Marking q;
  q.stab = stab;
  q.chi = chi;
  q.weight = WeightQ(S.l, Q(0));
  out.comps[comp].marks.push_back(q);
  return out;
}

/// Children over mu in D_c at q'' (sorted); q' receives the co-weight mu*.
template <class K>
std::vector<std::pair<WeightQ, GammaCurve>> factorize(const GammaCurve& C, const GroupAction<K>& G, int k) {
  auto nn = normalize_at_node(C, k);
  int p2 = nn.curve.power(nn.curve.comps[nn.q2.first].marks[nn.q2.second]);
  std::vector<std::pair<WeightQ, GammaCurve>> out;
  for (auto& mu : G.Dc(p2, C.level)) {
    GammaCurve child = nn.curve;
    child.comps[nn.q2.first].marks[nn.q2.second].weight = mu;
    child.comps[nn.q1.first].marks[nn.q1.second].weight = G.co_weight(p2, mu);
    out.emplace_back(mu, std::move(child));
  }
  return out;
}

// ---------------------------------------------------------------- trinions and fusion tables

struct Leg {
  int power = 0;
  WeightQ weight;
  bool operator<(const Leg& o) const { return std::tie(power, weight) < std::tie(o.power, o.weight); }
  bool operator==(const Leg& o) const { return power == o.power && weight == o.weight; }
};

struct Trinion {
  long level = 1;
  std::array<Leg, 3> legs;  // sorted

  static Trinion make(long c, std::array<Leg, 3> l) {
    std::sort(l.begin(), l.end());
    return {c, l};
  }
  std::string key() const {
    std::string s = "c=" + std::to_string(level);
    for (auto& l : legs) s += " [" + std::to_string(l.power) + ":" + weight_str(l.weight) + "]";
    return s;
  }
};

struct FusionEntry {
  Trinion t;
  long value = 0;
  std::string provenance = "user";
};

class FusionTable {
 public:
  std::map<std::string, FusionEntry> entries;

  void add(const Trinion& t, long value, const std::string& prov) {
    if (value < 0) throw CurveError("fusion: negative value for " + t.key());
    auto it = entries.find(t.key());
    if (it != entries.end() && it->second.value != value)
      throw CurveError("fusion: conflicting values for " + t.key());
    entries[t.key()] = {t, value, prov};
  }
  std::optional<long> find(const Trinion& t) const {
    auto it = entries.find(t.key());
    if (it == entries.end()) return std::nullopt;
    return it->second.value;
  }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (auto& [k, e] : entries) {
      nlohmann::json legs = nlohmann::json::array();
      for (auto& l : e.t.legs) {
        nlohmann::json w = nlohmann::json::array();
        for (auto& x : l.weight) w.push_back(to_str(x));
        legs.push_back({{"power", l.power}, {"weight", w}});
      }
      arr.push_back({{"legs", legs}, {"level", e.t.level}, {"value", e.value}, {"provenance", e.provenance}});
    }
    return arr;
  }
  static FusionTable from_json(const nlohmann::json& j) {
    FusionTable T;
    try {
      for (auto& e : j) {
        std::array<Leg, 3> legs;
        if (e.at("legs").size() != 3) throw CurveError("fusion: an entry needs exactly 3 legs");
        for (int i = 0; i < 3; ++i) {
          legs[i].power = e.at("legs")[i].value("power", 0);
          legs[i].weight = parse_weight(e.at("legs")[i].at("weight"));
        }
        T.add(Trinion::make(e.at("level").get<long>(), legs), e.at("value").get<long>(), e.value("provenance", std::string("user")));
      }
    } catch (const nlohmann::json::exception& ex) {
      throw CurveError(std::string("malformed fusion table: ") + ex.what());
    }
    return T;
  }
};

struct MissingFusion : std::runtime_error {
  std::vector<Trinion> missing;
  explicit MissingFusion(std::vector<Trinion> m) : std::runtime_error(msg(m)), missing(std::move(m)) {}
  static std::string msg(const std::vector<Trinion>& m) {
    std::string s = "missing fusion entries:";
    for (auto& t : m) s += "\n  " + t.key();
    return s;
  }
};

// ---------------------------------------------------------------- reduction

struct TreeNode {
  enum Kind { leaf, sum, product } kind = leaf;
  std::string move;
  Trinion trinion;
  std::vector<int> kids;
  std::vector<std::pair<WeightQ, WeightQ>> pairs;  // sum nodes: (mu*, mu) per kid
};

/// Reduction DAG: equal sub-problems share one node.
struct FactorizationTree {
  std::vector<TreeNode> nodes;
  int root = -1;

  std::vector<Trinion> leaves() const {
    std::map<std::string, Trinion> m;
    for (auto& n : nodes)
      if (n.kind == TreeNode::leaf) m.emplace(n.trinion.key(), n.trinion);
    std::vector<Trinion> out;
    for (auto& [k, t] : m) out.push_back(t);
    return out;
  }
  std::vector<std::string> log() const {
    std::vector<std::string> out;
    for (size_t i = 0; i < nodes.size(); ++i) {
      auto& n = nodes[i];
      std::ostringstream s;
      s << "n" << i << " ";
      if (n.kind == TreeNode::leaf) {
        s << "leaf " << n.trinion.key();
      } else {
        s << (n.kind == TreeNode::sum ? "sum " : "product ") << n.move << " ->";
        for (size_t k = 0; k < n.kids.size(); ++k) {
          s << " n" << n.kids[k];
          if (n.kind == TreeNode::sum)
            s << "{mu*=" << weight_str(n.pairs[k].first) << ",mu=" << weight_str(n.pairs[k].second) << "}";
        }
      }
      out.push_back(s.str());
    }
    return out;
  }
};

/// Move ordering. Default: non-separating nodes first, split the first two legs
/// of the sorted leg list. Other choices give different trees with the same value.
struct MoveOrder {
  bool separating_first = false;
  int rotation = 0;
  bool reverse_nodes = false;
};

template <class K>
class Reducer {
 public:
  Reducer(const GroupAction<K>& G, long c, MoveOrder order) : G_(G), c_(c), order_(order) {}

  FactorizationTree run(const GammaCurve& C) {
    tree_ = {};
    memo_.clear();
    Graph gr;
    for (auto& comp : C.comps) {
      Piece p;
      p.genus = comp.genus;
      for (auto& q : comp.marks) p.legs.push_back({C.power(q), q.weight});
      gr.pieces.push_back(p);
    }
    for (auto& n : C.nodes) gr.edges.push_back({n.a, n.b, C.node_power(n)});
    tree_.root = graph(gr);
    return tree_;
  }

 private:
  struct Piece {
    int genus = 0;
    std::vector<Leg> legs;
  };
  struct Edge {
    int a, b, power;
  };
  struct Graph {
    std::vector<Piece> pieces;
    std::vector<Edge> edges;
  };

  int push(TreeNode n) {
    tree_.nodes.push_back(std::move(n));
    return static_cast<int>(tree_.nodes.size()) - 1;
  }

  bool nonseparating(const Graph& g, size_t k) const {
    std::vector<std::pair<int, int>> e;
    for (size_t i = 0; i < g.edges.size(); ++i)
      if (i != k) e.emplace_back(g.edges[i].a, g.edges[i].b);
    int n = static_cast<int>(g.pieces.size());
    int without = count_graph_components(n, e);
    e.emplace_back(g.edges[k].a, g.edges[k].b);
    return count_graph_components(n, e) == without;
  }

  int graph(const Graph& g) {
    if (g.edges.empty()) {
      // pieces are connected components now
      if (g.pieces.size() == 1) return piece(g.pieces[0]);
      TreeNode t;
      t.kind = TreeNode::product;
      t.move = "disconnected: " + std::to_string(g.pieces.size()) + " components";
      for (auto& p : g.pieces) t.kids.push_back(piece(p));
      return push(t);
    }
    std::vector<size_t> idx(g.edges.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (order_.reverse_nodes) std::reverse(idx.begin(), idx.end());
    size_t k = idx[0];
    bool want_nonsep = !order_.separating_first;
    bool found = false;
    for (size_t i : idx)
      if (nonseparating(g, i) == want_nonsep) {
        k = i;
        found = true;
        break;
      }
    bool ns = found ? want_nonsep : nonseparating(g, k);
    const Edge e = g.edges[k];
    Graph base = g;
    base.edges.erase(base.edges.begin() + k);
    TreeNode t;
    t.kind = TreeNode::sum;
    t.move = std::string("normalize ") + (ns ? "non-separating" : "separating") + " node power " + std::to_string(G_.norm(e.power)) +
             " between components " + std::to_string(e.a) + "," + std::to_string(e.b);
    for (auto& mu : G_.Dc(-e.power, c_)) {
      WeightQ ms = G_.co_weight(-e.power, mu);
      Graph ch = base;
      ch.pieces[e.a].legs.push_back({G_.norm(e.power), ms});
      ch.pieces[e.b].legs.push_back({G_.norm(-e.power), mu});
      t.kids.push_back(graph(ch));
      t.pairs.emplace_back(ms, mu);
    }
    return push(t);
  }

  std::string piece_key(const Piece& p) const {
    auto legs = p.legs;
    std::sort(legs.begin(), legs.end());
    std::string s = "g" + std::to_string(p.genus);
    for (auto& l : legs) s += " " + std::to_string(l.power) + ":" + weight_str(l.weight);
    return s;
  }

  int piece(Piece p) {
    std::sort(p.legs.begin(), p.legs.end());
    auto key = piece_key(p);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int id = piece_uncached(p);
    memo_[key] = id;
    return id;
  }

  int piece_uncached(const Piece& p) {
    const int s = static_cast<int>(p.legs.size());
    if (p.genus > 0) {
      if (G_.N != 1)
        throw CurveError("reduce: a genus " + std::to_string(p.genus) + " component remains; declare its degenerations");
      TreeNode t;
      t.kind = TreeNode::sum;
      t.move = "degenerate genus " + std::to_string(p.genus) + " -> " + std::to_string(p.genus - 1) + " with a non-separating node";
      for (auto& mu : G_.Dc(0, c_)) {
        Piece q = p;
        q.genus -= 1;
        WeightQ ms = G_.co_weight(0, mu);
        q.legs.push_back({0, ms});
        q.legs.push_back({0, mu});
        t.kids.push_back(piece(q));
        t.pairs.emplace_back(ms, mu);
      }
      return push(t);
    }
    if (s < 3) {
      if (!G_.zero_in(0, c_)) throw CurveError("reduce: padding blocked, 0 is not in D_c at an unramified orbit");
      Piece q = p;
      q.legs.push_back({0, WeightQ(G_.aut(0).l, Q(0))});
      TreeNode t;
      t.kind = TreeNode::product;
      t.move = "propagate: weight 0 at a new unramified orbit";
      t.kids.push_back(piece(q));
      return push(t);
    }
    if (s == 3) {
      TreeNode t;
      t.kind = TreeNode::leaf;
      t.trinion = Trinion::make(c_, {p.legs[0], p.legs[1], p.legs[2]});
      return push(t);
    }
    std::vector<Leg> legs = p.legs;
    std::rotate(legs.begin(), legs.begin() + (order_.rotation % s), legs.end());
    int pw = G_.norm(-(legs[0].power + legs[1].power));  // power of the new branch on the side of legs 0,1
    TreeNode t;
    t.kind = TreeNode::sum;
    t.move = "split " + std::to_string(legs[0].power) + ":" + weight_str(legs[0].weight) + " " + std::to_string(legs[1].power) + ":" +
             weight_str(legs[1].weight) + " | rest, separating node power " + std::to_string(pw);
    for (auto& mu : G_.Dc(-pw, c_)) {
      WeightQ ms = G_.co_weight(-pw, mu);
      Piece A, B;
      A.legs = {legs[0], legs[1], {pw, ms}};
      B.legs.assign(legs.begin() + 2, legs.end());
      B.legs.push_back({G_.norm(-pw), mu});
      TreeNode pr;
      pr.kind = TreeNode::product;
      pr.move = "separate";
      pr.kids = {piece(A), piece(B)};
      t.kids.push_back(push(pr));
      t.pairs.emplace_back(ms, mu);
    }
    return push(t);
  }

  const GroupAction<K>& G_;
  long c_;
  MoveOrder order_;
  FactorizationTree tree_;
  std::map<std::string, int> memo_;
};

template <class K>
FactorizationTree reduce_to_trinions(const GammaCurve& C, const GroupAction<K>& G, MoveOrder order = {}) {
  return Reducer<K>(G, C.level, order).run(C);
}

/// Sum over branches of products of leaf values.
inline mpz_class dimension(const FactorizationTree& T, const FusionTable& F) {
  std::vector<Trinion> missing;
  for (auto& t : T.leaves())
    if (!F.find(t)) missing.push_back(t);
  if (!missing.empty()) throw MissingFusion(missing);
  std::vector<std::optional<mpz_class>> val(T.nodes.size());
  std::function<mpz_class(int)> eval = [&](int i) -> mpz_class {
    if (val[i]) return *val[i];
    const auto& n = T.nodes[i];
    mpz_class v;
    if (n.kind == TreeNode::leaf) {
      v = *F.find(n.trinion);
    } else if (n.kind == TreeNode::sum) {
      v = 0;
      for (int k : n.kids) v += eval(k);
    } else {
      v = 1;
      for (int k : n.kids) v *= eval(k);
    }
    val[i] = v;
    return v;
  };
  return eval(T.root);
}

template <class K>
mpz_class dimension(const GammaCurve& C, const GroupAction<K>& G, const FusionTable& F, MoveOrder order = {}) {
  return dimension(reduce_to_trinions(C, G, order), F);
}

}  // namespace tkm
