#include "twofusion/fusion.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "json.hpp"

namespace twofusion::fusion {

using nlohmann::json;

// ------------------------------------------------------------------ FusionData

void FusionData::init_index(ContextPtr ctx, std::vector<Element> sylow_elems,
                            std::string descriptor) {
  ctx_ = std::move(ctx);
  s_ = std::move(sylow_elems);
  std::sort(s_.begin(), s_.end());
  s_.erase(std::unique(s_.begin(), s_.end()), s_.end());
  descriptor_ = std::move(descriptor);
  if (s_.size() > (1u << 9))
    throw InputError("Sylow group above the 2^9 object cap");
  for (std::size_t i = 0; i < s_.size(); ++i)
    sidx_.emplace(s_[i], static_cast<std::uint16_t>(i));

  auto holder = grp::make_group(ctx_, {}, "sylow-holder");
  Subgroup s;
  s.parent = holder;
  s.elems = s_;
  auto subs = grp::subgroups_of_2group(s);
  subs_.reserve(subs.size());
  for (const auto &sub : subs) {
    SIndexSet is;
    is.reserve(sub.elems.size());
    for (const Element &e : sub.elems) is.push_back(element_index(e));
    std::sort(is.begin(), is.end());
    sub_idx_.emplace(is, static_cast<std::uint16_t>(subs_.size()));
    subs_.push_back(std::move(is));
  }
  for (std::uint16_t i = 0; i < subs_.size(); ++i) {
    if (subs_[i].size() == 1) trivial_id_ = i;
    if (subs_[i].size() == s_.size()) whole_id_ = i;
  }
}

std::uint16_t FusionData::element_index(const Element &e) const {
  auto it = sidx_.find(e);
  if (it == sidx_.end()) throw InputError("element not in the Sylow group");
  return it->second;
}

std::uint16_t FusionData::subgroup_index(const SIndexSet &elems) const {
  auto it = sub_idx_.find(elems);
  if (it == sub_idx_.end()) throw InputError("not a recorded subgroup of S");
  return it->second;
}

std::uint16_t FusionData::cyclic_subgroup_of(std::uint16_t elem_idx) const {
  const Element &x = s_[elem_idx];
  SIndexSet is;
  Element cur = ctx_->identity();
  for (;;) {
    is.push_back(element_index(cur));
    cur = ctx_->multiply(cur, x);
    if (cur == ctx_->identity()) break;
  }
  std::sort(is.begin(), is.end());
  return subgroup_index(is);
}

const MorphismSet &FusionData::hom_set(std::uint16_t p, std::uint16_t q) const {
  auto key = std::make_pair(p, q);
  auto it = hom_cache_.find(key);
  if (it != hom_cache_.end()) return it->second;
  MorphismSet ms = compute_hom(p, q);
  std::sort(ms.maps.begin(), ms.maps.end());
  ms.maps.erase(std::unique(ms.maps.begin(), ms.maps.end()), ms.maps.end());
  return hom_cache_.emplace(key, std::move(ms)).first->second;
}

void FusionData::generic_element_classes() {
  const std::size_t n = s_.size();
  std::vector<std::uint16_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint16_t>(i);
  std::function<std::uint16_t(std::uint16_t)> find = [&](std::uint16_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint16_t a, std::uint16_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::uint16_t i = 0; i < n; ++i) {
    std::uint16_t c = cyclic_subgroup_of(i);
    const SIndexSet &dom = subs_[c];
    std::size_t pos = std::lower_bound(dom.begin(), dom.end(), i) - dom.begin();
    for (const Morphism &m : hom_set(c, whole_id_).maps) unite(i, m.images[pos]);
  }
  eclass_.assign(n, 0);
  std::map<std::uint16_t, std::uint16_t> remap;
  for (std::uint16_t i = 0; i < n; ++i) {
    std::uint16_t r = find(i);
    auto it = remap.find(r);
    if (it == remap.end())
      it = remap.emplace(r, static_cast<std::uint16_t>(remap.size())).first;
    eclass_[i] = it->second;
  }
  eclass_count_ = remap.size();
}

void FusionData::generic_subgroup_classes() {
  const std::size_t n = subs_.size();
  std::vector<std::uint32_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint16_t p = 0; p < n; ++p) {
    for (const Morphism &m : hom_set(p, whole_id_).maps) {
      SIndexSet img = m.images;
      std::sort(img.begin(), img.end());
      std::uint32_t a = find(p), b = find(subgroup_index(img));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  sclass_.assign(n, 0);
  std::map<std::uint32_t, std::uint32_t> remap;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t r = find(i);
    auto it = remap.find(r);
    if (it == remap.end())
      it = remap.emplace(r, static_cast<std::uint32_t>(remap.size())).first;
    sclass_[i] = it->second;
  }
}

void FusionData::classify() {
  generic_element_classes();
  generic_subgroup_classes();
}

FusionData::InvolutionClasses FusionData::involution_classes() const {
  InvolutionClasses out;
  std::map<std::uint16_t, std::size_t> cls;
  Element id = ctx_->identity();
  for (std::uint16_t i = 0; i < s_.size(); ++i) {
    const Element &x = s_[i];
    if (x == id || !(ctx_->multiply(x, x) == id)) continue;
    auto it = cls.find(eclass_[i]);
    if (it == cls.end()) {
      it = cls.emplace(eclass_[i], out.classes.size()).first;
      out.classes.emplace_back();
    }
    out.classes[it->second].push_back(i);
  }
  return out;
}

bool FusionData::is_strongly_closed(const SIndexSet &a) const {
  std::vector<bool> in(s_.size(), false);
  for (auto i : a) in[i] = true;
  for (auto i : a)
    for (std::uint16_t j = 0; j < s_.size(); ++j)
      if (eclass_[j] == eclass_[i] && !in[j]) return false;
  return true;
}

SIndexSet FusionData::focal_subgroup() const {
  std::vector<Element> gens;
  for (std::uint16_t i = 0; i < s_.size(); ++i)
    for (std::uint16_t j = 0; j < s_.size(); ++j)
      if (i != j && eclass_[i] == eclass_[j])
        gens.push_back(ctx_->multiply(ctx_->inverse(s_[i]), s_[j]));
  auto holder = grp::make_group(ctx_, {}, "focal-holder");
  Subgroup sub = grp::subgroup_generated(holder, gens, s_.size() + 1);
  SIndexSet focal = index_set_of(sub.elems);
  if (GroupPtr g = ambient()) {
    // focal subgroup theorem: equals S cap G'
    Subgroup der = grp::derived_subgroup(*g);
    SIndexSet via_derived;
    for (std::uint16_t i = 0; i < s_.size(); ++i)
      if (der.contains(s_[i])) via_derived.push_back(i);
    if (via_derived != focal)
      throw ConsistencyError("focal subgroup cross-check failed");
  }
  return focal;
}

SIndexSet FusionData::hyperfocal_subgroup() const {
  // <[P, O^2(Aut_F(P))] : P <= S>
  std::vector<Element> gens;
  for (std::uint16_t p = 0; p < subs_.size(); ++p) {
    const MorphismSet &aut = hom_set(p, p);
    if (aut.maps.size() == 1) continue;
    const SIndexSet &dom = subs_[p];
    auto pctx = std::make_shared<grp::PermContext>(static_cast<std::uint8_t>(dom.size()));
    std::vector<Element> perms;
    for (const Morphism &m : aut.maps) {
      Element perm(grp::ElementKind::Permutation, static_cast<std::uint8_t>(dom.size()));
      for (std::size_t k = 0; k < dom.size(); ++k) {
        std::size_t pos =
            std::lower_bound(dom.begin(), dom.end(), m.images[k]) - dom.begin();
        perm.data[k] = static_cast<std::uint16_t>(pos + 1);
      }
      perms.push_back(std::move(perm));
    }
    auto aut_group = grp::make_group(pctx, perms, "autF", true, 1u << 20);
    if (aut_group->order() != aut.maps.size())
      throw ConsistencyError("Aut_F(P) not closed under composition");
    Subgroup odd = grp::odd_generated(*aut_group);
    for (const Element &alpha : odd.elems)
      for (std::size_t k = 0; k < dom.size(); ++k) {
        const Element &x = s_[dom[k]];
        const Element &xa = s_[dom[alpha.data[k] - 1]];
        gens.push_back(ctx_->multiply(ctx_->inverse(x), xa));
      }
  }
  auto holder = grp::make_group(ctx_, {}, "hyperfocal-holder");
  Subgroup sub = grp::subgroup_generated(holder, gens, s_.size() + 1);
  SIndexSet hyper = index_set_of(sub.elems);
  if (GroupPtr g = ambient()) {
    // equals S cap O^2(G)
    Subgroup o2 = grp::odd_generated(*g);
    SIndexSet via_o2;
    for (std::uint16_t i = 0; i < s_.size(); ++i)
      if (o2.contains(s_[i])) via_o2.push_back(i);
    if (via_o2 != hyper)
      throw ConsistencyError("hyperfocal subgroup cross-check failed");
  }
  return hyper;
}

SIndexSet FusionData::fusion_center() const {
  std::vector<std::size_t> class_size(eclass_count_, 0);
  for (std::uint16_t i = 0; i < s_.size(); ++i) ++class_size[eclass_[i]];
  SIndexSet out;
  for (std::uint16_t i = 0; i < s_.size(); ++i) {
    if (class_size[eclass_[i]] != 1) continue;
    bool central = true;
    for (const Element &y : s_)
      if (!(ctx_->multiply(s_[i], y) == ctx_->multiply(y, s_[i]))) {
        central = false;
        break;
      }
    if (central) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  if (GroupPtr g = ambient()) {
    if (g->order() <= 1000000ull) {
      Subgroup zs = grp::z_star(*g);
      SIndexSet via_zstar;
      for (std::uint16_t i = 0; i < s_.size(); ++i)
        if (zs.contains(s_[i])) via_zstar.push_back(i);
      if (via_zstar != out)
        throw ConsistencyError("fusion center cross-check against Z*(G) failed");
    }
  }
  return out;
}

bool FusionData::is_nilpotent() const {
  FusionPtr inner = inner_fusion();
  for (std::uint16_t p = 0; p < subs_.size(); ++p)
    for (std::uint16_t q = 0; q < subs_.size(); ++q)
      if (hom_set(p, q).maps.size() != inner->hom_set(p, q).maps.size()) return false;
  return true;
}

SIndexSet FusionData::index_set_of(const std::vector<Element> &elems) const {
  SIndexSet is;
  is.reserve(elems.size());
  for (const Element &e : elems) is.push_back(element_index(e));
  std::sort(is.begin(), is.end());
  is.erase(std::unique(is.begin(), is.end()), is.end());
  return is;
}

std::vector<Element> FusionData::elements_of(const SIndexSet &s) const {
  std::vector<Element> out;
  out.reserve(s.size());
  for (auto i : s) out.push_back(s_[i]);
  return out;
}

// ---------------------------------------------------------------- GroupFusion

namespace {

class GroupFusion : public FusionData {
public:
  GroupFusion(GroupPtr g, Subgroup s) : g_(std::move(g)) {
    init_index(g_->context(), s.elems, "F_S(" + g_->descriptor() + ")");
    classify();
  }

  GroupPtr ambient() const override { return g_; }

protected:
  void classify() override {
    // element fusion = ambient conjugacy restricted to S
    eclass_.assign(s_.size(), 0);
    std::map<std::uint32_t, std::uint16_t> remap;
    for (std::uint16_t i = 0; i < s_.size(); ++i) {
      std::uint32_t gc = g_->class_of(s_[i]);
      auto it = remap.find(gc);
      if (it == remap.end())
        it = remap.emplace(gc, static_cast<std::uint16_t>(remap.size())).first;
      eclass_[i] = it->second;
    }
    eclass_count_ = remap.size();

    // subgroup fusion via transporter orbits with a fingerprint prefilter
    sclass_.assign(subs_.size(), 0);
    witness_.assign(subs_.size(), g_->identity());
    class_rep_sub_.clear();
    std::map<std::vector<std::uint16_t>, std::vector<std::uint32_t>> buckets;
    for (std::uint16_t p = 0; p < subs_.size(); ++p) {
      std::vector<std::uint16_t> fp;
      fp.push_back(static_cast<std::uint16_t>(subs_[p].size()));
      for (auto i : subs_[p]) fp.push_back(eclass_[i]);
      std::sort(fp.begin() + 1, fp.end());
      auto &bucket = buckets[fp];
      Subgroup psub = as_subgroup(p);
      bool placed = false;
      for (std::uint32_t cid : bucket) {
        Subgroup rsub = as_subgroup(class_rep_sub_[cid]);
        auto w = grp::subgroup_conjugator(*g_, rsub, psub);
        if (w) {
          sclass_[p] = cid;
          witness_[p] = *w;
          placed = true;
          break;
        }
      }
      if (!placed) {
        std::uint32_t cid = static_cast<std::uint32_t>(class_rep_sub_.size());
        class_rep_sub_.push_back(p);
        sclass_[p] = cid;
        bucket.push_back(cid);
      }
    }
  }

  MorphismSet compute_hom(std::uint16_t p, std::uint16_t q) const override {
    MorphismSet ms;
    ms.domain = p;
    ms.codomain = q;
    const SIndexSet &dom = subs_[p];
    const SIndexSet &cod = subs_[q];
    std::uint32_t cid = sclass_[p];
    const std::vector<Element> &transversal = aut_transversal(cid);
    Element wp_inv = g_->inv(witness_[p]);
    for (std::uint16_t r = 0; r < subs_.size(); ++r) {
      if (sclass_[r] != cid) continue;
      if (subs_[r].size() != dom.size() ||
          !std::includes(cod.begin(), cod.end(), subs_[r].begin(), subs_[r].end()))
        continue;
      for (const Element &t : transversal) {
        Element g = g_->mul(g_->mul(wp_inv, t), witness_[r]);
        Morphism m;
        m.domain = p;
        m.codomain = q;
        m.witness = g;
        m.images.reserve(dom.size());
        for (auto i : dom) m.images.push_back(element_index(g_->conj(s_[i], g)));
        ms.maps.push_back(std::move(m));
      }
    }
    return ms;
  }

private:
  Subgroup as_subgroup(std::uint16_t p) const {
    Subgroup sub;
    sub.parent = g_;
    sub.elems = elements_of(subs_[p]);
    return sub;
  }

  const std::vector<Element> &aut_transversal(std::uint32_t cid) const {
    auto it = transversal_cache_.find(cid);
    if (it != transversal_cache_.end()) return it->second;
    std::uint16_t rep = class_rep_sub_[cid];
    std::vector<Element> transversal;
    if (subs_[rep].size() == 1) {
      transversal.push_back(g_->identity());
    } else {
      Subgroup rsub = as_subgroup(rep);
      Subgroup n = grp::normalizer(*g_, rsub);
      std::set<std::vector<std::uint16_t>> seen;
      for (const Element &x : n.elems) {
        std::vector<std::uint16_t> graph;
        graph.reserve(rsub.elems.size());
        for (const Element &e : rsub.elems)
          graph.push_back(element_index(g_->conj(e, x)));
        if (seen.insert(graph).second) transversal.push_back(x);
      }
    }
    return transversal_cache_.emplace(cid, std::move(transversal)).first->second;
  }

  GroupPtr g_;
  std::vector<Element> witness_; // class-rep subgroup -> this subgroup
  std::vector<std::uint16_t> class_rep_sub_;
  mutable std::map<std::uint32_t, std::vector<Element>> transversal_cache_;
};

class FactorFusion : public FusionData {
public:
  FactorFusion(std::shared_ptr<const FusionData> base, SIndexSet n_sub)
      : base_(std::move(base)), n_(std::move(n_sub)) {
    std::vector<Element> nelems = base_->elements_of(n_);
    auto qctx = std::make_shared<grp::QuotientContext>(base_->ctx(), nelems);
    std::vector<Element> cosets;
    for (const Element &x : base_->sylow_elements()) cosets.push_back(qctx->reduce(x));
    std::sort(cosets.begin(), cosets.end());
    cosets.erase(std::unique(cosets.begin(), cosets.end()), cosets.end());
    init_index(qctx, std::move(cosets),
               base_->descriptor() + "/(order-" + std::to_string(n_.size()) + ")");
    qmap_.resize(base_->sylow_order());
    for (std::uint16_t b = 0; b < base_->sylow_order(); ++b)
      qmap_[b] = element_index(qctx->reduce(base_->sylow_elements()[b]));
    classify();
  }

protected:
  MorphismSet compute_hom(std::uint16_t p, std::uint16_t q) const override {
    MorphismSet ms;
    ms.domain = p;
    ms.codomain = q;
    const SIndexSet &dom = subs_[p];
    SIndexSet pfull = preimage(dom);
    SIndexSet qfull = preimage(subs_[q]);
    std::uint16_t bp = base_->subgroup_index(pfull);
    std::uint16_t bq = base_->subgroup_index(qfull);
    std::set<std::vector<std::uint16_t>> seen;
    for (const Morphism &alpha : base_->hom_set(bp, bq).maps) {
      bool keeps_n = true;
      for (auto ni : n_) {
        std::size_t pos =
            std::lower_bound(pfull.begin(), pfull.end(), ni) - pfull.begin();
        if (!std::binary_search(n_.begin(), n_.end(), alpha.images[pos])) {
          keeps_n = false;
          break;
        }
      }
      if (!keeps_n) continue;
      Morphism m;
      m.domain = p;
      m.codomain = q;
      m.witness = ctx_->reduce(alpha.witness);
      m.images.reserve(dom.size());
      for (auto di : dom) {
        // the canonical coset representative is itself a base element
        std::uint16_t b = base_->element_index(s_[di]);
        std::size_t pos =
            std::lower_bound(pfull.begin(), pfull.end(), b) - pfull.begin();
        m.images.push_back(qmap_[alpha.images[pos]]);
      }
      if (seen.insert(m.images).second) ms.maps.push_back(std::move(m));
    }
    return ms;
  }

private:
  SIndexSet preimage(const SIndexSet &quot_sub) const {
    std::vector<bool> in(sylow_order(), false);
    for (auto i : quot_sub) in[i] = true;
    SIndexSet out;
    for (std::uint16_t b = 0; b < base_->sylow_order(); ++b)
      if (in[qmap_[b]]) out.push_back(b);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::shared_ptr<const FusionData> base_;
  SIndexSet n_;
  std::vector<std::uint16_t> qmap_;
};

} // namespace

std::shared_ptr<FusionData> FusionData::factor_system(const SIndexSet &q) const {
  subgroup_index(q); // must be a recorded subgroup
  std::vector<Element> qelems = elements_of(q);
  for (const Element &s : s_)
    for (const Element &x : qelems) {
      Element y = ctx_->conjugate(x, s);
      if (!std::binary_search(qelems.begin(), qelems.end(), y))
        throw InputError("factor_system: subgroup is not normal in S");
    }
  return std::make_shared<FactorFusion>(shared_from_this(), q);
}

std::shared_ptr<FusionData> FusionData::inner_fusion() const {
  if (inner_cache_) return inner_cache_;
  auto holder = grp::make_group(ctx_, {}, "inner-holder");
  Subgroup s;
  s.parent = holder;
  s.elems = s_;
  auto gens = s.canonical_generators();
  GroupPtr sgrp =
      grp::make_group(ctx_, gens, descriptor_ + "-sylow", true, 2 * s_.size() + 2);
  if (sgrp->order() != s_.size())
    throw ConsistencyError("Sylow regeneration mismatch");
  Subgroup whole = sgrp->whole_as_subgroup();
  inner_cache_ = std::make_shared<GroupFusion>(sgrp, whole);
  return inner_cache_;
}

FusionPtr build_fusion(GroupPtr g, std::optional<Subgroup> s, std::uint64_t sylow_cap) {
  g->enumerate();
  Subgroup sylow = s ? *s : grp::sylow_2_subgroup(g);
  if (sylow.order() > sylow_cap) throw InputError("Sylow subgroup above cap");
  if (sylow.order() == 0 || g->order() % sylow.order() != 0 ||
      (g->order() / sylow.order()) % 2 == 0)
    throw InputError("S is not a Sylow 2-subgroup of G (even index)");
  for (const Element &e : sylow.elems)
    if (!g->contains(e)) throw InputError("S is not contained in G");
  return std::make_shared<GroupFusion>(g, sylow);
}

// --------------------------------------------------------------- isomorphism

namespace {

struct IndexedGroup {
  std::vector<std::vector<std::uint16_t>> mult;
  std::vector<std::uint16_t> inv;
  std::vector<std::uint32_t> order;
};

IndexedGroup index_tables(const FusionData &f) {
  const auto &s = f.sylow_elements();
  const auto &ctx = *f.ctx();
  IndexedGroup t;
  std::size_t n = s.size();
  t.mult.assign(n, std::vector<std::uint16_t>(n));
  t.inv.resize(n);
  t.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      t.mult[i][j] = f.element_index(ctx.multiply(s[i], s[j]));
    t.inv[i] = f.element_index(ctx.inverse(s[i]));
    t.order[i] = static_cast<std::uint32_t>(ctx.element_order(s[i]));
  }
  return t;
}

bool close_iso(const IndexedGroup &t1, const IndexedGroup &t2,
               const std::vector<std::uint16_t> &gens1,
               const std::vector<std::uint16_t> &imgs2, std::uint16_t id1,
               std::uint16_t id2, std::vector<std::uint16_t> &phi_out) {
  std::size_t n = t1.mult.size();
  std::vector<std::uint16_t> phi(n, UINT16_MAX);
  phi[id1] = id2;
  std::vector<std::uint16_t> frontier{id1};
  std::size_t head = 0;
  while (head < frontier.size()) {
    std::uint16_t x = frontier[head++];
    for (std::size_t g = 0; g < gens1.size(); ++g) {
      std::uint16_t y = t1.mult[x][gens1[g]];
      std::uint16_t fy = t2.mult[phi[x]][imgs2[g]];
      if (phi[y] == UINT16_MAX) {
        phi[y] = fy;
        frontier.push_back(y);
      } else if (phi[y] != fy) {
        return false;
      }
    }
  }
  if (frontier.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (hit[phi[i]]) return false;
    hit[phi[i]] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (phi[t1.mult[i][j]] != t2.mult[phi[i]][phi[j]]) return false;
  phi_out = std::move(phi);
  return true;
}

// the Hom-set transport equation on every subgroup pair
bool verify_all_pairs(const FusionData &f1, const FusionData &f2,
                      const std::vector<std::uint16_t> &phi, std::size_t *pairs_out) {
  const auto &subs1 = f1.subgroups();
  std::size_t pairs = 0;
  std::vector<std::uint16_t> sub_image(subs1.size());
  for (std::uint16_t p = 0; p < subs1.size(); ++p) {
    SIndexSet img;
    img.reserve(subs1[p].size());
    for (auto i : subs1[p]) img.push_back(phi[i]);
    std::sort(img.begin(), img.end());
    sub_image[p] = f2.subgroup_index(img);
  }
  std::vector<std::uint16_t> inv_phi(phi.size());
  for (std::uint16_t i = 0; i < phi.size(); ++i) inv_phi[phi[i]] = i;
  for (std::uint16_t p = 0; p < subs1.size(); ++p) {
    const SIndexSet &dom1 = subs1[p];
    const SIndexSet &dom2 = f2.subgroups()[sub_image[p]];
    for (std::uint16_t q = 0; q < subs1.size(); ++q) {
      const MorphismSet &h1 = f1.hom_set(p, q);
      const MorphismSet &h2 = f2.hom_set(sub_image[p], sub_image[q]);
      if (h1.maps.size() != h2.maps.size()) return false;
      std::set<std::vector<std::uint16_t>> transported;
      for (const Morphism &m : h1.maps) {
        std::vector<std::uint16_t> graph(dom2.size());
        for (std::size_t k2 = 0; k2 < dom2.size(); ++k2) {
          std::uint16_t x1 = inv_phi[dom2[k2]];
          std::size_t k1 =
              std::lower_bound(dom1.begin(), dom1.end(), x1) - dom1.begin();
          graph[k2] = phi[m.images[k1]];
        }
        transported.insert(std::move(graph));
      }
      for (const Morphism &m : h2.maps)
        if (!transported.count(m.images)) return false;
      ++pairs;
    }
  }
  if (pairs_out) *pairs_out = pairs;
  return true;
}

struct Invariants {
  std::multiset<std::pair<std::uint32_t, std::size_t>> element_profile;
  std::multiset<std::size_t> subgroup_orders;
  std::size_t focal_order, center_order;
};

Invariants invariants_of(const FusionData &f, const IndexedGroup &t) {
  Invariants v;
  std::vector<std::size_t> class_size(f.element_class_count(), 0);
  for (std::uint16_t i = 0; i < f.sylow_order(); ++i) ++class_size[f.element_class(i)];
  for (std::uint16_t i = 0; i < f.sylow_order(); ++i)
    v.element_profile.emplace(t.order[i], class_size[f.element_class(i)]);
  for (const auto &s : f.subgroups()) v.subgroup_orders.insert(s.size());
  v.focal_order = f.focal_subgroup().size();
  v.center_order = f.fusion_center().size();
  return v;
}

} // namespace

IsoOutcome is_isomorphic(const FusionData &f1, const FusionData &f2,
                         std::size_t candidate_cap) {
  IsoOutcome out;
  if (f1.sylow_order() != f2.sylow_order()) {
    out.result = IsoResult::No;
    out.reason = "Sylow orders differ";
    return out;
  }
  IndexedGroup t1 = index_tables(f1), t2 = index_tables(f2);
  Invariants v1 = invariants_of(f1, t1), v2 = invariants_of(f2, t2);
  if (v1.element_profile != v2.element_profile) {
    out.result = IsoResult::No;
    out.reason = "element (order, fusion-class size) profiles differ";
    return out;
  }
  if (v1.subgroup_orders != v2.subgroup_orders) {
    out.result = IsoResult::No;
    out.reason = "subgroup counts per order differ";
    return out;
  }
  if (v1.focal_order != v2.focal_order || v1.center_order != v2.center_order) {
    out.result = IsoResult::No;
    out.reason = "focal or center order differs";
    return out;
  }

  std::vector<std::uint16_t> gens1;
  {
    auto holder = grp::make_group(f1.ctx(), {}, "iso-holder");
    Subgroup s;
    s.parent = holder;
    s.elems = f1.sylow_elements();
    for (const Element &g : s.canonical_generators())
      gens1.push_back(f1.element_index(g));
  }
  std::uint16_t id1 = f1.element_index(f1.ctx()->identity());
  std::uint16_t id2 = f2.element_index(f2.ctx()->identity());
  if (gens1.empty()) {
    out.result = IsoResult::Yes;
    out.certificate = IsoCertificate{{}, {}, 1};
    return out;
  }

  std::vector<std::size_t> cs1(f1.element_class_count(), 0),
      cs2(f2.element_class_count(), 0);
  for (std::uint16_t i = 0; i < f1.sylow_order(); ++i) ++cs1[f1.element_class(i)];
  for (std::uint16_t i = 0; i < f2.sylow_order(); ++i) ++cs2[f2.element_class(i)];

  std::vector<std::vector<std::uint16_t>> pools(gens1.size());
  for (std::size_t g = 0; g < gens1.size(); ++g)
    for (std::uint16_t y = 0; y < f2.sylow_order(); ++y)
      if (t2.order[y] == t1.order[gens1[g]] &&
          cs2[f2.element_class(y)] == cs1[f1.element_class(gens1[g])])
        pools[g].push_back(y);

  std::vector<std::size_t> pos(gens1.size(), 0);
  std::vector<std::uint16_t> imgs(gens1.size(), 0);
  std::size_t tried = 0;
  std::size_t depth = 0;
  bool exhausted = false;
  while (true) {
    if (pos[depth] == pools[depth].size()) {
      if (depth == 0) {
        exhausted = true;
        break;
      }
      pos[depth] = 0;
      ++pos[--depth];
      continue;
    }
    imgs[depth] = pools[depth][pos[depth]];
    if (depth + 1 < gens1.size()) {
      ++depth;
      continue;
    }
    if (++tried > candidate_cap) break;
    std::vector<std::uint16_t> phi;
    if (close_iso(t1, t2, gens1, imgs, id1, id2, phi)) {
      bool classes_ok = true;
      for (std::uint16_t i = 0; i < f1.sylow_order() && classes_ok; ++i)
        classes_ok = cs1[f1.element_class(i)] == cs2[f2.element_class(phi[i])];
      std::size_t pairs = 0;
      if (classes_ok && verify_all_pairs(f1, f2, phi, &pairs)) {
        IsoCertificate cert;
        for (std::size_t g = 0; g < gens1.size(); ++g) {
          cert.generators.push_back(f1.sylow_elements()[gens1[g]]);
          cert.images.push_back(f2.sylow_elements()[imgs[g]]);
        }
        cert.verified_pairs = pairs;
        out.result = IsoResult::Yes;
        out.certificate = std::move(cert);
        return out;
      }
    }
    ++pos[depth];
  }
  if (exhausted) {
    out.result = IsoResult::No;
    out.reason = "generator-image search exhausted without a certificate";
  } else {
    out.result = IsoResult::Indeterminate;
    out.reason = "candidate cap reached before exhausting the search space";
  }
  return out;
}

bool verify_certificate(const FusionData &f1, const FusionData &f2,
                        const IsoCertificate &cert) {
  if (cert.generators.size() != cert.images.size()) return false;
  IndexedGroup t1 = index_tables(f1), t2 = index_tables(f2);
  std::vector<std::uint16_t> gens1, imgs2;
  for (const Element &e : cert.generators) gens1.push_back(f1.element_index(e));
  for (const Element &e : cert.images) imgs2.push_back(f2.element_index(e));
  std::uint16_t id1 = f1.element_index(f1.ctx()->identity());
  std::uint16_t id2 = f2.element_index(f2.ctx()->identity());
  if (gens1.empty()) return f1.sylow_order() == 1 && f2.sylow_order() == 1;
  std::vector<std::uint16_t> phi;
  if (!close_iso(t1, t2, gens1, imgs2, id1, id2, phi)) return false;
  return verify_all_pairs(f1, f2, phi, nullptr);
}

namespace {

json element_to_json(const Element &e) {
  json j;
  j["kind"] = e.kind == grp::ElementKind::Matrix ? "matrix" : "perm";
  j["n"] = e.n;
  std::vector<std::uint32_t> data;
  for (std::size_t i = 0; i < e.data.size(); ++i) data.push_back(e.data[i]);
  j["data"] = data;
  return j;
}

Element element_from_json(const json &j) {
  Element e(j["kind"] == "matrix" ? grp::ElementKind::Matrix
                                  : grp::ElementKind::Permutation,
            static_cast<std::uint8_t>(j["n"].get<unsigned>()));
  auto data = j["data"].get<std::vector<std::uint32_t>>();
  if (data.size() != e.data.size()) throw InputError("bad element payload");
  for (std::size_t i = 0; i < data.size(); ++i)
    e.data[i] = static_cast<std::uint16_t>(data[i]);
  return e;
}

} // namespace

std::string certificate_to_json(const FusionData &f1, const FusionData &f2,
                                const IsoCertificate &cert) {
  json j;
  j["format"] = "twofusion-iso-certificate-v1";
  j["from"] = f1.descriptor();
  j["to"] = f2.descriptor();
  j["verified_pairs"] = cert.verified_pairs;
  j["generators"] = json::array();
  j["images"] = json::array();
  for (const Element &e : cert.generators) j["generators"].push_back(element_to_json(e));
  for (const Element &e : cert.images) j["images"].push_back(element_to_json(e));
  return j.dump(2);
}

IsoCertificate certificate_from_json(const FusionData &f1, const std::string &text) {
  (void)f1;
  json j = json::parse(text);
  if (j["format"] != "twofusion-iso-certificate-v1")
    throw InputError("unknown certificate format");
  IsoCertificate cert;
  for (const auto &e : j["generators"]) cert.generators.push_back(element_from_json(e));
  for (const auto &e : j["images"]) cert.images.push_back(element_from_json(e));
  cert.verified_pairs = j["verified_pairs"].get<std::size_t>();
  return cert;
}

} // namespace twofusion::fusion
