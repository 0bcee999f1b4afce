#include "twofusion/local2.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace twofusion::local2 {

namespace {

int log2_exact(std::uint64_t n) {
  int e = 0;
  while (n > 1) {
    n >>= 1;
    ++e;
  }
  return e;
}

std::uint64_t set_key(const std::vector<Element> &sorted_elems) {
  std::uint64_t h = 14695981039346656037ull;
  for (const Element &e : sorted_elems) {
    h ^= e.hash();
    h *= 1099511628211ull;
  }
  return h;
}

// convert a subgroup to its own enumerated handle (same context)
GroupPtr subgroup_as_group(const Subgroup &h, const std::string &desc) {
  auto gens = h.canonical_generators();
  GroupPtr g = grp::make_group(h.parent->context(), gens, desc, true,
                               2 * h.order() + 2);
  if (g->order() != h.order())
    throw ConsistencyError("subgroup regeneration mismatch");
  return g;
}

} // namespace

ConnectivityReport k_connected(const Subgroup &p, int k,
                               std::optional<std::pair<Subgroup, Subgroup>> query,
                               std::size_t vertex_cap) {
  if (k < 1) throw InputError("k_connected needs k >= 1");
  std::vector<Subgroup> verts = grp::elementary_abelian_subgroups(p, k, vertex_cap);

  ConnectivityReport rep;
  rep.k = k;
  rep.vertex_count = verts.size();
  if (verts.empty()) {
    rep.component_count = 0;
    rep.connected = true; // vacuous
    return rep;
  }

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index;
  for (std::uint32_t i = 0; i < verts.size(); ++i)
    index[set_key(verts[i].elems)].push_back(i);
  auto find_vertex = [&](const std::vector<Element> &elems) -> std::optional<std::uint32_t> {
    auto it = index.find(set_key(elems));
    if (it == index.end()) return std::nullopt;
    for (std::uint32_t i : it->second)
      if (verts[i].elems == elems) return i;
    return std::nullopt;
  };

  // union-find plus explicit corank-1 edges for path reconstruction
  std::vector<std::uint32_t> parent(verts.size());
  for (std::uint32_t i = 0; i < verts.size(); ++i) parent[i] = i;
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::uint32_t>> adj(verts.size());
  const grp::GroupContext &c = p.ctx();
  for (std::uint32_t b = 0; b < verts.size(); ++b) {
    const auto &elems = verts[b].elems;
    int rank = log2_exact(elems.size());
    if (rank <= k) continue;
    // basis and coordinates of the elementary abelian group
    Subgroup bs;
    bs.parent = p.parent;
    bs.elems = elems;
    std::vector<Element> basis = bs.canonical_generators();
    std::vector<Element> span{c.identity()};
    for (const Element &g : basis) {
      std::size_t old = span.size();
      for (std::size_t i = 0; i < old; ++i) span.push_back(c.multiply(span[i], g));
    }
    // span[m] has coordinates m over the basis
    for (std::uint32_t f = 1; f < (1u << rank); ++f) {
      std::vector<Element> hyper;
      hyper.reserve(elems.size() / 2);
      for (std::uint32_t m = 0; m < span.size(); ++m)
        if (__builtin_parity(m & f) == 0) hyper.push_back(span[m]);
      std::sort(hyper.begin(), hyper.end());
      auto h = find_vertex(hyper);
      if (!h) continue; // hyperplane of rank k-1 is not a vertex
      std::uint32_t ra = find(b), rb = find(*h);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      adj[b].push_back(*h);
      adj[*h].push_back(b);
    }
  }
  std::map<std::uint32_t, std::size_t> comps;
  for (std::uint32_t i = 0; i < verts.size(); ++i) ++comps[find(i)];
  rep.component_count = comps.size();
  rep.connected = rep.component_count <= 1;

  if (query) {
    std::vector<Element> a = query->first.elems, b = query->second.elems;
    auto va = find_vertex(a), vb = find_vertex(b);
    if (!va || !vb)
      throw InputError("queried subgroups are not vertices (rank below k?)");
    // BFS over the corank-1 edges
    std::vector<std::int64_t> prev(verts.size(), -1);
    std::deque<std::uint32_t> queue{*va};
    prev[*va] = *va;
    while (!queue.empty()) {
      std::uint32_t cur = queue.front();
      queue.pop_front();
      if (cur == *vb) break;
      for (std::uint32_t nxt : adj[cur])
        if (prev[nxt] < 0) {
          prev[nxt] = cur;
          queue.push_back(nxt);
        }
    }
    if (prev[*vb] >= 0) {
      std::vector<std::uint32_t> path;
      for (std::uint32_t cur = *vb;; cur = static_cast<std::uint32_t>(prev[cur])) {
        path.push_back(cur);
        if (cur == *va) break;
      }
      std::reverse(path.begin(), path.end());
      for (std::uint32_t i : path) rep.witness_path.push_back(verts[i]);
    }
  }
  return rep;
}

bool normal_ea_test(const Subgroup &p, int k) {
  if (k < 1) throw InputError("normal_ea_test needs k >= 1");
  int need = (1 << (k - 1)) + 1;
  auto cands = grp::elementary_abelian_subgroups(p, need);
  const grp::GroupContext &c = p.ctx();
  Subgroup whole;
  whole.parent = p.parent;
  whole.elems = p.elems;
  std::vector<Element> pgens = whole.canonical_generators();
  for (const Subgroup &e : cands) {
    bool normal = true;
    for (const Element &g : pgens) {
      for (const Element &x : e.elems)
        if (!e.contains(c.conjugate(x, g))) {
          normal = false;
          break;
        }
      if (!normal) break;
    }
    if (normal) return true;
  }
  return false;
}

Subgroup gamma_sk(GroupPtr g, const Subgroup &s, int k) {
  g->enumerate();
  if (g->order() > 1000000ull) throw InputError("gamma_sk: order above 10^6");
  auto subs = grp::subgroups_of_2group(s);
  // S-conjugacy class representatives of the subgroups with m(T) >= k
  std::vector<Subgroup> reps;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  const grp::GroupContext &c = s.ctx();
  std::vector<std::vector<Element>> seen_sets;
  for (const Subgroup &t : subs) {
    if (!grp::rank_at_least(t, k)) continue;
    std::uint64_t key = set_key(t.elems);
    bool dup = false;
    auto it = seen.find(key);
    if (it != seen.end())
      for (std::size_t i : it->second)
        if (seen_sets[i] == t.elems) dup = true;
    if (dup) continue;
    reps.push_back(t);
    // mark the whole S-orbit as seen
    std::deque<std::vector<Element>> queue{t.elems};
    std::vector<std::vector<Element>> orbit{t.elems};
    seen[key].push_back(seen_sets.size());
    seen_sets.push_back(t.elems);
    while (!queue.empty()) {
      std::vector<Element> cur = std::move(queue.front());
      queue.pop_front();
      for (const Element &x : s.elems) {
        std::vector<Element> img;
        img.reserve(cur.size());
        for (const Element &e : cur) img.push_back(c.conjugate(e, x));
        std::sort(img.begin(), img.end());
        std::uint64_t ik = set_key(img);
        bool have = false;
        auto jt = seen.find(ik);
        if (jt != seen.end())
          for (std::size_t i : jt->second)
            if (seen_sets[i] == img) have = true;
        if (!have) {
          seen[ik].push_back(seen_sets.size());
          seen_sets.push_back(img);
          queue.push_back(img);
        }
      }
    }
  }
  if (reps.empty()) return g->trivial_subgroup();

  std::vector<Element> gens;
  for (const Subgroup &t : reps) {
    Subgroup t_in_g;
    t_in_g.parent = g;
    t_in_g.elems = t.elems;
    Subgroup n = grp::normalizer(*g, t_in_g);
    auto ngens = n.canonical_generators();
    gens.insert(gens.end(), ngens.begin(), ngens.end());
  }
  {
    Subgroup s_in_g;
    s_in_g.parent = g;
    s_in_g.elems = s.elems;
    auto sgens = s_in_g.canonical_generators();
    gens.insert(gens.end(), sgens.begin(), sgens.end());
  }
  return grp::subgroup_generated(g, gens, g->order() + 1);
}

bool is_k_generated(GroupPtr g, const Subgroup &s, int k) {
  return gamma_sk(g, s, k).order() == g->order();
}

Subgroup delta_e(GroupPtr g, const Subgroup &e) {
  g->enumerate();
  if (g->order() > 100000ull) throw InputError("delta_e: order above 10^5");
  const Element id = g->identity();
  std::optional<Subgroup> acc;
  for (const Element &a : e.elems) {
    if (a == id) continue;
    Subgroup cg = grp::centralizer(*g, a);
    GroupPtr cg_grp = subgroup_as_group(cg, "C_G(a)");
    Subgroup core = grp::odd_core(*cg_grp);
    Subgroup core_in_g;
    core_in_g.parent = g;
    core_in_g.elems = core.elems;
    if (!acc)
      acc = core_in_g;
    else
      acc = grp::subgroup_intersect(*acc, core_in_g);
  }
  if (!acc) throw InputError("delta_e: E must be nontrivial");
  return *acc;
}

BalanceReport is_k_balanced(GroupPtr g, const Subgroup &a, int k) {
  g->enumerate();
  BalanceReport rep;
  const Element id = g->identity();
  auto es = grp::elementary_abelian_subgroups(a, k);
  for (const Subgroup &e : es) {
    if (e.order() != (1ull << k)) continue; // rank exactly k
    Subgroup delta = delta_e(g, e);
    for (const Element &x : a.elems) {
      if (x == id) continue;
      Subgroup cg = grp::centralizer(*g, x);
      GroupPtr cg_grp = subgroup_as_group(cg, "C_G(a)");
      Subgroup core = grp::odd_core(*cg_grp);
      for (const Element &d : delta.elems) {
        if (!cg.contains(d)) continue;
        if (!core.contains(d)) {
          rep.balanced = false;
          rep.violating_e = e;
          rep.violating_a = x;
          rep.violating_element = d;
          return rep;
        }
      }
    }
  }
  return rep;
}

Subgroup w_closure(GroupPtr g, const Subgroup &a, int k) {
  g->enumerate();
  int rank_a = log2_exact(a.order());
  if (rank_a < k + 1) throw InputError("w_closure needs m(A) >= k+1");
  std::vector<Element> gens;
  auto es = grp::elementary_abelian_subgroups(a, k);
  for (const Subgroup &e : es) {
    if (e.order() != (1ull << k)) continue;
    Subgroup delta = delta_e(g, e);
    for (const Element &d : delta.elems) gens.push_back(d);
  }
  Subgroup w = gens.empty() ? g->trivial_subgroup()
                            : grp::subgroup_generated(g, gens, g->order() + 1);
  if (rank_a >= k + 2) {
    BalanceReport bal = is_k_balanced(g, a, k);
    if (bal.balanced && w.order() % 2 == 0)
      throw ConsistencyError("W_A must have odd order under k-balance");
  }
  return w;
}

} // namespace twofusion::local2
