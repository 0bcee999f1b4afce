#include "twofusion/twogroup.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace twofusion::grp {

namespace {

bool is_power_of_two(std::uint64_t n) { return n && (n & (n - 1)) == 0; }

int log2_exact(std::uint64_t n) {
  int e = 0;
  while (n > 1) {
    n >>= 1;
    ++e;
  }
  return e;
}

std::vector<Element> sorted_merge(const std::vector<Element> &a,
                                  const std::vector<Element> &b) {
  std::vector<Element> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t set_key(const std::vector<Element> &sorted_elems) {
  std::uint64_t h = 14695981039346656037ull;
  for (const Element &e : sorted_elems) {
    h ^= e.hash();
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

// ---------------------------------------------------------- HomomorphismTable

const Element &HomomorphismTable::image_of(const Element &x) const {
  auto it = std::lower_bound(
      graph.begin(), graph.end(), x,
      [](const std::pair<Element, Element> &p, const Element &v) { return p.first < v; });
  if (it == graph.end() || !(it->first == x))
    throw InputError("element outside homomorphism domain");
  return it->second;
}

bool HomomorphismTable::injective() const {
  std::vector<Element> imgs;
  imgs.reserve(graph.size());
  for (const auto &p : graph) imgs.push_back(p.second);
  std::sort(imgs.begin(), imgs.end());
  return std::adjacent_find(imgs.begin(), imgs.end()) == imgs.end();
}

std::optional<HomomorphismTable>
build_homomorphism(const Subgroup &domain, const Subgroup &codomain,
                   const std::vector<Element> &domain_gens,
                   const std::vector<Element> &gen_images) {
  if (domain_gens.size() != gen_images.size())
    throw InputError("generator/image count mismatch");
  const GroupContext &c = domain.ctx();
  for (const Element &y : gen_images)
    if (!codomain.contains(y)) return std::nullopt;

  // BFS closure of the partial map from the identity
  std::map<Element, Element> img;
  img[c.identity()] = c.identity();
  std::vector<Element> frontier{c.identity()};
  std::size_t head = 0;
  while (head < frontier.size()) {
    Element x = frontier[head++];
    const Element &fx = img.at(x);
    for (std::size_t i = 0; i < domain_gens.size(); ++i) {
      Element y = c.multiply(x, domain_gens[i]);
      Element fy = c.multiply(fx, gen_images[i]);
      auto it = img.find(y);
      if (it == img.end()) {
        img.emplace(y, fy);
        frontier.push_back(std::move(y));
      } else if (!(it->second == fy)) {
        return std::nullopt;
      }
    }
  }
  if (img.size() != domain.elems.size()) return std::nullopt; // gens don't span
  HomomorphismTable t;
  t.domain = domain;
  t.codomain = codomain;
  t.gen_images = gen_images;
  t.graph.assign(img.begin(), img.end());
  return t;
}

// ------------------------------------------------------------ subgroup lattice

bool is_2group(const Subgroup &p) { return is_power_of_two(p.order()); }

static void require_2group(const Subgroup &p, std::uint64_t cap, const char *what) {
  if (!is_2group(p)) throw InputError(std::string(what) + ": not a 2-group");
  if (p.order() > cap)
    throw InputError(std::string(what) + ": size cap exceeded (order " +
                     std::to_string(p.order()) + ")");
}

std::vector<Subgroup> subgroups_of_2group(const Subgroup &p, std::size_t count_cap) {
  require_2group(p, 1u << 9, "subgroups_of_2group");
  const GroupContext &c = p.ctx();

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  std::vector<Subgroup> out;
  std::vector<std::size_t> stack;

  auto add = [&](std::vector<Element> elems) -> std::optional<std::size_t> {
    std::uint64_t k = set_key(elems);
    auto &bucket = seen[k];
    for (std::size_t i : bucket)
      if (out[i].elems == elems) return std::nullopt;
    if (out.size() >= count_cap)
      throw CapExceededError("subgroups_of_2group: subgroup count cap", out.size());
    Subgroup s;
    s.parent = p.parent;
    s.elems = std::move(elems);
    bucket.push_back(out.size());
    out.push_back(std::move(s));
    return out.size() - 1;
  };

  auto root = add(p.elems);
  stack.push_back(*root);
  while (!stack.empty()) {
    std::size_t hi = stack.back();
    stack.pop_back();
    std::vector<Element> h = out[hi].elems; // copy: out may grow
    if (h.size() == 1) continue;

    // Frattini subgroup of a 2-group: closure of the squares
    std::vector<Element> squares;
    for (const Element &x : h) squares.push_back(c.multiply(x, x));
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
    std::vector<Element> phi{c.identity()};
    {
      std::vector<Element> work = phi;
      auto ins = [&](const Element &y) {
        auto it = std::lower_bound(phi.begin(), phi.end(), y);
        if (it != phi.end() && *it == y) return false;
        phi.insert(it, y);
        return true;
      };
      for (const Element &s : squares)
        if (ins(s)) work.push_back(s);
      std::size_t head = 0;
      while (head < work.size()) {
        Element x = work[head++];
        for (const Element &s : squares) {
          Element y = c.multiply(x, s);
          if (ins(y)) work.push_back(std::move(y));
        }
      }
    }

    // coset coordinates of h modulo phi
    const std::size_t d = log2_exact(h.size() / phi.size());
    std::vector<Element> coset_min(h.size());
    std::map<Element, std::uint32_t> coset_id; // min element -> id
    std::map<Element, std::uint32_t> elem_coset;
    for (const Element &x : h) {
      Element mn = c.multiply(x, phi[0]);
      for (std::size_t i = 1; i < phi.size(); ++i) {
        Element cand = c.multiply(x, phi[i]);
        if (cand < mn) mn = cand;
      }
      auto it = coset_id.find(mn);
      std::uint32_t id;
      if (it == coset_id.end()) {
        id = static_cast<std::uint32_t>(coset_id.size());
        coset_id.emplace(mn, id);
      } else {
        id = it->second;
      }
      elem_coset.emplace(x, id);
    }
    // greedy basis of the coset space, with coordinates by span BFS
    std::vector<std::uint32_t> coord(coset_id.size(), UINT32_MAX);
    std::uint32_t id0 = elem_coset.at(
        *std::min_element(phi.begin(), phi.end()));
    coord[id0] = 0;
    std::vector<Element> basis;
    std::vector<Element> span_reps{c.identity()};
    std::vector<std::uint32_t> span_coords{0};
    for (const Element &x : h) {
      std::uint32_t cx = elem_coset.at(x);
      if (coord[cx] != UINT32_MAX) continue;
      std::uint32_t bit = 1u << basis.size();
      basis.push_back(x);
      std::size_t old = span_reps.size();
      for (std::size_t i = 0; i < old; ++i) {
        Element y = c.multiply(span_reps[i], x);
        std::uint32_t cy = elem_coset.at(y);
        std::uint32_t co = span_coords[i] | bit;
        if (coord[cy] == UINT32_MAX) coord[cy] = co;
        span_reps.push_back(std::move(y));
        span_coords.push_back(co);
      }
      if (basis.size() == d) break;
    }

    // maximal subgroups = preimages of hyperplanes (kernels of functionals)
    for (std::uint32_t f = 1; f < (1u << d); ++f) {
      std::vector<Element> mx;
      mx.reserve(h.size() / 2);
      for (const Element &x : h)
        if (__builtin_parity(coord[elem_coset.at(x)] & f) == 0) mx.push_back(x);
      std::sort(mx.begin(), mx.end());
      auto idx = add(std::move(mx));
      if (idx) stack.push_back(*idx);
    }
  }

  std::sort(out.begin(), out.end(), [](const Subgroup &a, const Subgroup &b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elems < b.elems;
  });
  return out;
}

std::vector<Subgroup> subgroups_of_2group_cyclic_extension(const Subgroup &p) {
  require_2group(p, 1u << 9, "subgroups_of_2group_cyclic_extension");
  const GroupContext &c = p.ctx();

  std::vector<Subgroup> out;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  auto add = [&](std::vector<Element> elems) -> bool {
    std::uint64_t k = set_key(elems);
    auto &bucket = seen[k];
    for (std::size_t i : bucket)
      if (out[i].elems == elems) return false;
    Subgroup s;
    s.parent = p.parent;
    s.elems = std::move(elems);
    bucket.push_back(out.size());
    out.push_back(std::move(s));
    return true;
  };

  add({c.identity()});
  std::size_t level_begin = 0;
  while (level_begin < out.size()) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      std::vector<Element> h = out[i].elems;
      // normalizer of h in p
      for (const Element &x : p.elems) {
        if (std::binary_search(h.begin(), h.end(), x)) continue;
        if (!std::binary_search(h.begin(), h.end(), c.multiply(x, x))) continue;
        bool normalizes = true;
        for (const Element &e : h)
          if (!std::binary_search(h.begin(), h.end(), c.conjugate(e, x))) {
            normalizes = false;
            break;
          }
        if (!normalizes) continue;
        std::vector<Element> coset;
        coset.reserve(h.size());
        for (const Element &e : h) coset.push_back(c.multiply(e, x));
        std::sort(coset.begin(), coset.end());
        add(sorted_merge(h, coset));
      }
    }
    level_begin = level_end;
  }

  std::sort(out.begin(), out.end(), [](const Subgroup &a, const Subgroup &b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elems < b.elems;
  });
  return out;
}

// ----------------------------------------------------- elementary abelian DFS

namespace {

// Canonical DFS over elementary abelian subgroups: a state (A, cands) is
// extended by a candidate x exactly when x = min(xA), so every subgroup is
// visited once, by its canonical generating sequence (which is strictly
// increasing; candidates below the newest generator can be dropped).
// visit(elems, rank) returning false prunes the subtree below that subgroup.
template <typename Visit>
void ea_dfs(const Subgroup &p, Visit visit) {
  const GroupContext &c = p.ctx();
  std::vector<Element> invs = p.involutions();
  struct Frame {
    std::vector<Element> elems;
    std::vector<Element> cands;
    int rank;
  };
  std::vector<Element> triv{c.identity()};
  if (!visit(triv, 0)) return;
  std::vector<Frame> stack;
  stack.push_back(Frame{std::move(triv), std::move(invs), 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    for (std::size_t i = 0; i < f.cands.size(); ++i) {
      const Element &x = f.cands[i];
      bool canonical = true;
      std::vector<Element> coset;
      coset.reserve(f.elems.size());
      for (const Element &a : f.elems) {
        Element xa = c.multiply(x, a);
        if (xa < x) {
          canonical = false;
          break;
        }
        coset.push_back(std::move(xa));
      }
      if (!canonical) continue;
      std::sort(coset.begin(), coset.end());
      std::vector<Element> nelems = sorted_merge(f.elems, coset);
      if (!visit(nelems, f.rank + 1)) continue;
      std::vector<Element> ncands;
      for (std::size_t j = i + 1; j < f.cands.size(); ++j) {
        const Element &y = f.cands[j];
        if (std::binary_search(nelems.begin(), nelems.end(), y)) continue;
        if (c.multiply(x, y) == c.multiply(y, x)) ncands.push_back(y);
      }
      stack.push_back(Frame{std::move(nelems), std::move(ncands), f.rank + 1});
    }
  }
}

} // namespace

std::vector<Subgroup> elementary_abelian_subgroups(const Subgroup &p, int min_rank,
                                                   std::size_t count_cap) {
  require_2group(p, 1u << 13, "elementary_abelian_subgroups");
  std::vector<Subgroup> out;
  ea_dfs(p, [&](const std::vector<Element> &elems, int rank) {
    if (rank >= min_rank) {
      if (out.size() >= count_cap)
        throw CapExceededError("elementary_abelian_subgroups: vertex cap",
                               out.size());
      Subgroup s;
      s.parent = p.parent;
      s.elems = elems;
      out.push_back(std::move(s));
    }
    return true;
  });
  std::sort(out.begin(), out.end(), [](const Subgroup &a, const Subgroup &b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elems < b.elems;
  });
  return out;
}

int rank_2group(const Subgroup &p) {
  require_2group(p, 1u << 13, "rank_2group");
  const GroupContext &c = p.ctx();
  // shortcut: an elementary abelian group is its own witness
  bool ea = true;
  for (const Element &x : p.elems)
    if (!(c.multiply(x, x) == c.identity())) {
      ea = false;
      break;
    }
  if (ea) return log2_exact(p.order());
  int best = 0;
  ea_dfs(p, [&](const std::vector<Element> &, int rank) {
    if (rank > best) best = rank;
    return true;
  });
  return best;
}

// True iff m(P) >= k, with early exit.
bool rank_at_least(const Subgroup &p, int k) {
  if (k <= 0) return true;
  const GroupContext &c = p.ctx();
  bool ea = true;
  for (const Element &x : p.elems)
    if (!(c.multiply(x, x) == c.identity())) {
      ea = false;
      break;
    }
  if (ea) return log2_exact(p.order()) >= k;
  bool found = false;
  ea_dfs(p, [&](const std::vector<Element> &, int rank) {
    if (rank >= k) found = true;
    return !found;
  });
  return found;
}

// --------------------------------------------------------------- automorphisms

AutomorphismGroup automorphisms_of_2group(const Subgroup &p) {
  require_2group(p, 1u << 6, "automorphisms_of_2group");
  const GroupContext &c = p.ctx();
  std::vector<Element> gens = p.canonical_generators();

  std::vector<std::uint64_t> gen_orders;
  for (const Element &g : gens) gen_orders.push_back(c.element_order(g));

  std::vector<std::vector<Element>> pools(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (const Element &y : p.elems)
      if (c.element_order(y) == gen_orders[i]) pools[i].push_back(y);

  const std::uint8_t deg = static_cast<std::uint8_t>(p.elems.size());
  auto pctx = std::make_shared<PermContext>(deg);
  std::vector<Element> auts;

  std::vector<Element> imgs(gens.size(), c.identity());
  std::vector<std::size_t> pos(gens.size(), 0);
  if (gens.empty()) {
    auts.push_back(pctx->identity());
  } else {
    std::size_t depth = 0;
    for (;;) {
      if (pos[depth] == pools[depth].size()) {
        if (depth == 0) break;
        pos[depth] = 0;
        ++pos[--depth];
        continue;
      }
      imgs[depth] = pools[depth][pos[depth]];
      if (depth + 1 < gens.size()) {
        ++depth;
        continue;
      }
      auto hom = build_homomorphism(p, p, gens, imgs);
      if (hom && hom->injective()) {
        // permutation of the sorted element list
        Element perm(ElementKind::Permutation, deg);
        for (std::size_t i = 0; i < p.elems.size(); ++i) {
          const Element &img = hom->image_of(p.elems[i]);
          std::size_t j = std::lower_bound(p.elems.begin(), p.elems.end(), img) -
                          p.elems.begin();
          perm.data[i] = static_cast<std::uint16_t>(j + 1);
        }
        auts.push_back(std::move(perm));
      }
      ++pos[depth];
    }
  }

  AutomorphismGroup ag;
  ag.domain = p.elems;
  ag.perm_group = make_group(pctx, auts, "Aut(2-group:" + std::to_string(p.order()) + ")", true,
                             1u << 22);
  if (ag.perm_group->order() != auts.size())
    throw ConsistencyError("automorphism set not closed under composition");
  return ag;
}

HomomorphismTable AutomorphismGroup::table_of(const Element &perm,
                                              const Subgroup &p) const {
  HomomorphismTable t;
  t.domain = p;
  t.codomain = p;
  t.graph.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i)
    t.graph.emplace_back(domain[i], domain[perm.data[i] - 1]);
  std::sort(t.graph.begin(), t.graph.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  for (const Element &g : p.canonical_generators())
    t.gen_images.push_back(t.image_of(g));
  return t;
}

// ----------------------------------------------------------------- recognition

std::string TwoGroupType::tag() const {
  switch (family) {
    case TwoGroupFamily::Cyclic: return "cyclic";
    case TwoGroupFamily::ElementaryAbelian: return "elementary-abelian";
    case TwoGroupFamily::Dihedral: return "dihedral";
    case TwoGroupFamily::GeneralizedQuaternion: return "generalized-quaternion";
    case TwoGroupFamily::Semidihedral: return "semidihedral";
    case TwoGroupFamily::Wreathed: return "wreathed";
    case TwoGroupFamily::Other: return "other";
  }
  return "other";
}

TwoGroupType recognize_2group(const Subgroup &p) {
  require_2group(p, 1u << 13, "recognize_2group");
  const GroupContext &c = p.ctx();
  const std::uint64_t n = p.order();
  const int m = log2_exact(n);
  TwoGroupType t;
  t.log2_order = m;
  t.parameter = 0;

  // cyclic: witness of full order (covers the trivial group)
  for (const Element &x : p.elems) {
    if (c.element_order(x) == n) {
      t.family = TwoGroupFamily::Cyclic;
      t.witnesses = {x};
      return t;
    }
  }
  // elementary abelian
  {
    bool ea = true;
    for (const Element &x : p.elems)
      if (!(c.multiply(x, x) == c.identity())) {
        ea = false;
        break;
      }
    if (ea) {
      t.family = TwoGroupFamily::ElementaryAbelian;
      t.parameter = m;
      return t;
    }
  }

  if (n >= 8) {
    std::vector<Element> halfs; // elements of order 2^{m-1}
    for (const Element &x : p.elems)
      if (c.element_order(x) == (n >> 1)) halfs.push_back(x);
    Element id = c.identity();
    for (const Element &a : halfs) {
      Element a_inv = c.inverse(a);
      // a^{2^{m-2}}: the involution in <a>
      Element a_half = a;
      for (std::uint64_t i = 1; i < (n >> 2); ++i) a_half = c.multiply(a_half, a);
      // powers of a for membership test
      std::vector<Element> apow{id};
      {
        Element x = a;
        while (!(x == id)) {
          apow.push_back(x);
          x = c.multiply(x, a);
        }
        std::sort(apow.begin(), apow.end());
      }
      Element a_sd = c.multiply(a_half, a_inv); // a^{2^{m-2}-1}
      for (const Element &b : p.elems) {
        if (std::binary_search(apow.begin(), apow.end(), b)) continue;
        Element ab = c.conjugate(a, b);
        Element b2 = c.multiply(b, b);
        if (b2 == id && ab == a_inv) {
          t.family = TwoGroupFamily::Dihedral;
          t.witnesses = {a, b};
          return t;
        }
        if (b2 == a_half && ab == a_inv) {
          t.family = TwoGroupFamily::GeneralizedQuaternion;
          t.witnesses = {a, b};
          return t;
        }
        if (n >= 16 && b2 == id && ab == a_sd) {
          t.family = TwoGroupFamily::Semidihedral;
          t.witnesses = {a, b};
          return t;
        }
      }
    }
  }

  // wreathed C_{2^k} wr C_2: |P| = 2^{2k+1}, k >= 2
  if (m >= 5 && m % 2 == 1) {
    const int k = (m - 1) / 2;
    const std::uint64_t ord_u = std::uint64_t(1) << k;
    std::vector<Element> ucands;
    for (const Element &x : p.elems)
      if (c.element_order(x) == ord_u) ucands.push_back(x);
    for (const Element &u : ucands) {
      std::vector<Element> upow{c.identity()};
      {
        Element x = u;
        while (!(x == c.identity())) {
          upow.push_back(x);
          x = c.multiply(x, u);
        }
        std::sort(upow.begin(), upow.end());
      }
      for (const Element &v : ucands) {
        if (std::binary_search(upow.begin(), upow.end(), v)) continue;
        if (!(c.multiply(u, v) == c.multiply(v, u))) continue;
        // <u> and <v> must meet trivially
        bool meet_trivial = true;
        {
          Element x = v;
          while (!(x == c.identity())) {
            if (std::binary_search(upow.begin(), upow.end(), x) &&
                !(x == c.identity())) {
              meet_trivial = false;
              break;
            }
            x = c.multiply(x, v);
          }
        }
        if (!meet_trivial) continue;
        for (const Element &w : p.elems) {
          if (!(c.multiply(w, w) == c.identity()) || w == c.identity()) continue;
          if (!(c.conjugate(u, w) == v)) continue;
          // verify the three witnesses generate all of P
          std::vector<Element> closure_elems{c.identity()};
          std::vector<Element> gens3{u, v, w};
          std::vector<Element> work{c.identity()};
          auto ins = [&](const Element &y) {
            auto it = std::lower_bound(closure_elems.begin(), closure_elems.end(), y);
            if (it != closure_elems.end() && *it == y) return false;
            closure_elems.insert(it, y);
            return true;
          };
          std::size_t head = 0;
          while (head < work.size()) {
            Element x = work[head++];
            for (const Element &g : gens3) {
              Element y = c.multiply(x, g);
              if (ins(y)) work.push_back(std::move(y));
            }
          }
          if (closure_elems.size() == n) {
            t.family = TwoGroupFamily::Wreathed;
            t.parameter = k;
            t.witnesses = {u, v, w};
            return t;
          }
        }
      }
    }
  }

  t.family = TwoGroupFamily::Other;
  return t;
}

} // namespace twofusion::grp
