#include "twofusion/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace twofusion::grp {

// ---------------------------------------------------------------- ElementIndex

std::optional<std::uint32_t> ElementIndex::find(const Element &e) const {
  if (slots_.empty()) return std::nullopt;
  std::uint64_t h = e.hash();
  std::size_t mask = slots_.size() - 1;
  std::size_t pos = h & mask;
  while (slots_[pos]) {
    if (hashes_[pos] == h && (*store_)[slots_[pos] - 1] == e)
      return slots_[pos] - 1;
    pos = (pos + 1) & mask;
  }
  return std::nullopt;
}

void ElementIndex::insert(std::uint32_t idx) {
  if (slots_.empty() || count_ * 3 >= slots_.size() * 2) grow();
  const Element &e = (*store_)[idx];
  std::uint64_t h = e.hash();
  std::size_t mask = slots_.size() - 1;
  std::size_t pos = h & mask;
  while (slots_[pos]) pos = (pos + 1) & mask;
  slots_[pos] = idx + 1;
  hashes_[pos] = h;
  ++count_;
}

void ElementIndex::clear() {
  hashes_.clear();
  slots_.clear();
  count_ = 0;
}

void ElementIndex::grow() {
  std::size_t cap = slots_.empty() ? 1024 : slots_.size() * 2;
  std::vector<std::uint64_t> oh = std::move(hashes_);
  std::vector<std::uint32_t> os = std::move(slots_);
  hashes_.assign(cap, 0);
  slots_.assign(cap, 0);
  std::size_t mask = cap - 1;
  for (std::size_t i = 0; i < os.size(); ++i) {
    if (!os[i]) continue;
    std::size_t pos = oh[i] & mask;
    while (slots_[pos]) pos = (pos + 1) & mask;
    slots_[pos] = os[i];
    hashes_[pos] = oh[i];
  }
}

// ------------------------------------------------------------------- Subgroup

bool Subgroup::contains(const Element &e) const {
  return std::binary_search(elems.begin(), elems.end(), e);
}

bool Subgroup::contains_all(const Subgroup &other) const {
  return std::includes(elems.begin(), elems.end(), other.elems.begin(),
                       other.elems.end());
}

bool Subgroup::set_equals(const Subgroup &other) const {
  return elems == other.elems;
}

const GroupContext &Subgroup::ctx() const { return *parent->context(); }

std::vector<Element> Subgroup::canonical_generators() const {
  const GroupContext &c = ctx();
  std::vector<Element> gens;
  std::vector<Element> span{c.identity()}; // kept sorted
  while (span.size() < elems.size()) {
    const Element *next = nullptr;
    for (const Element &e : elems) {
      if (!std::binary_search(span.begin(), span.end(), e)) {
        next = &e;
        break;
      }
    }
    gens.push_back(*next);
    // grow the span: BFS from the old span plus the new generator
    std::vector<Element> work = span;
    auto insert_sorted = [&](const Element &y) {
      auto it = std::lower_bound(span.begin(), span.end(), y);
      if (it != span.end() && *it == y) return false;
      span.insert(it, y);
      return true;
    };
    if (insert_sorted(*next)) work.push_back(*next);
    std::size_t head = 0;
    while (head < work.size()) {
      Element x = work[head++];
      for (const Element &g : gens) {
        Element y = c.multiply(x, g);
        if (insert_sorted(y)) work.push_back(std::move(y));
      }
    }
  }
  return gens;
}

Subgroup Subgroup::conjugated(const Element &g) const {
  const GroupContext &c = ctx();
  Subgroup r;
  r.parent = parent;
  r.elems.reserve(elems.size());
  for (const Element &e : elems) r.elems.push_back(c.conjugate(e, g));
  std::sort(r.elems.begin(), r.elems.end());
  return r;
}

std::vector<Element> Subgroup::involutions() const {
  const GroupContext &c = ctx();
  Element id = c.identity();
  std::vector<Element> out;
  for (const Element &e : elems)
    if (!(e == id) && c.multiply(e, e) == id) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------- Group

Group::Group(ContextPtr ctx, std::vector<Element> gens, std::string descriptor)
    : ctx_(std::move(ctx)), gens_(std::move(gens)), descriptor_(std::move(descriptor)) {
  for (const Element &g : gens_)
    if (!ctx_->accepts(g))
      throw InputError("generator shape mismatch for context " + ctx_->describe());
}

void Group::enumerate(std::uint64_t cap) {
  if (enumerated_) return;
  if (cap > 10000000ull) throw InputError("enumeration cap above 10^7");
  elems_.clear();
  index_.attach(&elems_);
  index_.clear();

  std::vector<Element> gens;
  for (const Element &g : gens_) {
    Element r = ctx_->reduce(g);
    if (std::find(gens.begin(), gens.end(), r) == gens.end() &&
        !(r == ctx_->identity()))
      gens.push_back(r);
  }

  elems_.push_back(ctx_->identity());
  index_.insert(0);
  std::size_t head = 0;
  while (head < elems_.size()) {
    Element x = elems_[head++];
    for (const Element &g : gens) {
      Element y = ctx_->multiply(x, g);
      if (!index_.find(y)) {
        if (elems_.size() >= cap)
          throw CapExceededError("enumeration cap " + std::to_string(cap) +
                                     " exceeded for " + descriptor_,
                                 elems_.size());
        elems_.push_back(std::move(y));
        index_.insert(static_cast<std::uint32_t>(elems_.size() - 1));
      }
    }
  }
  enumerated_ = true;
}

void Group::require_enumerated(const char *what) const {
  if (!enumerated_)
    throw InputError(std::string(what) + " requires an enumerated handle (" +
                     descriptor_ + ")");
}

std::uint64_t Group::order() const {
  require_enumerated("order");
  return elems_.size();
}

const std::vector<Element> &Group::elements() const {
  require_enumerated("elements");
  return elems_;
}

std::optional<std::uint32_t> Group::index_of(const Element &e) const {
  require_enumerated("membership");
  return index_.find(ctx_->reduce(e));
}

void Group::fill_class_orbit(std::uint32_t start_idx) const {
  if (class_id_.empty()) {
    class_id_.assign(elems_.size(), UINT32_MAX);
    parent_.assign(elems_.size(), UINT32_MAX);
    genidx_.assign(elems_.size(), 0);
  }
  std::uint32_t cid = static_cast<std::uint32_t>(class_rep_idx_.size());
  std::vector<std::uint32_t> orbit{start_idx};
  class_id_[start_idx] = cid;
  parent_[start_idx] = start_idx;
  std::size_t head = 0;
  std::uint32_t best = start_idx;
  while (head < orbit.size()) {
    std::uint32_t cur = orbit[head++];
    const Element &x = elems_[cur];
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
      Element y = ctx_->conjugate(x, gens_[gi]);
      std::uint32_t yi = *index_.find(y);
      if (class_id_[yi] == UINT32_MAX) {
        class_id_[yi] = cid;
        parent_[yi] = cur;
        genidx_[yi] = static_cast<std::uint16_t>(gi);
        orbit.push_back(yi);
        if (elems_[yi] < elems_[best]) best = yi;
      }
    }
  }
  if (elems_[start_idx] < elems_[best]) best = start_idx;
  class_rep_idx_.push_back(best);
  class_size_.push_back(orbit.size());
}

std::uint32_t Group::class_of(std::uint32_t idx) const {
  require_enumerated("conjugacy");
  if (class_id_.empty() || class_id_[idx] == UINT32_MAX) fill_class_orbit(idx);
  return class_id_[idx];
}

std::uint32_t Group::class_of(const Element &e) const {
  auto i = index_of(e);
  if (!i) throw InputError("element not in group");
  return class_of(*i);
}

const Element &Group::class_rep(std::uint32_t cid) const {
  return elems_[class_rep_idx_.at(cid)];
}

std::uint64_t Group::class_size(std::uint32_t cid) const {
  return class_size_.at(cid);
}

Element Group::witness_from_rep(std::uint32_t idx) const {
  // path from the orbit start to idx, then adjust so the path starts at the
  // canonical representative
  std::uint32_t cid = class_of(idx);
  std::uint32_t rep = class_rep_idx_[cid];
  auto path_word = [&](std::uint32_t i) {
    Element w = ctx_->identity();
    while (parent_[i] != i) {
      w = ctx_->multiply(gens_[genidx_[i]], w);
      i = parent_[i];
    }
    return w; // start^w = elems_[original i]
  };
  Element wi = path_word(idx);
  Element wr = path_word(rep);
  // start^wi = x, start^wr = rep  =>  rep^(wr^-1 wi) = x
  return ctx_->multiply(ctx_->inverse(wr), wi);
}

const std::vector<std::uint32_t> &Group::conjugacy_class_reps() const {
  require_enumerated("conjugacy classes");
  if (!classes_complete_) {
    for (std::uint32_t i = 0; i < elems_.size(); ++i)
      if (class_id_.empty() || class_id_[i] == UINT32_MAX) fill_class_orbit(i);
    classes_complete_ = true;
    class_reps_cache_ = class_rep_idx_;
  }
  return class_reps_cache_;
}

std::size_t Group::class_count() const { return conjugacy_class_reps().size(); }

const Subgroup &Group::centralizer_of_class_rep(std::uint32_t cid) const {
  if (class_centralizer_.size() <= cid) class_centralizer_.resize(cid + 1);
  if (!class_centralizer_[cid]) {
    const Element &rep = class_rep(cid);
    auto self = const_cast<Group *>(this)->shared_from_this();
    Subgroup c;
    c.parent = self;
    for (const Element &g : elems_)
      if (ctx_->multiply(g, rep) == ctx_->multiply(rep, g)) c.elems.push_back(g);
    std::sort(c.elems.begin(), c.elems.end());
    class_centralizer_[cid] = std::make_unique<Subgroup>(std::move(c));
  }
  return *class_centralizer_[cid];
}

Subgroup Group::whole_as_subgroup() const {
  require_enumerated("whole_as_subgroup");
  Subgroup s;
  s.parent = const_cast<Group *>(this)->shared_from_this();
  s.elems = elems_;
  std::sort(s.elems.begin(), s.elems.end());
  return s;
}

Subgroup Group::trivial_subgroup() const {
  Subgroup s;
  s.parent = const_cast<Group *>(this)->shared_from_this();
  s.elems = {ctx_->identity()};
  return s;
}

GroupPtr make_group(ContextPtr ctx, std::vector<Element> gens,
                    const std::string &descriptor, bool enumerate_now,
                    std::uint64_t cap) {
  auto g = std::make_shared<Group>(std::move(ctx), std::move(gens), descriptor);
  if (enumerate_now) g->enumerate(cap);
  return g;
}

GroupPtr group_from_enumeration(ContextPtr ctx, std::vector<Element> gens,
                                std::vector<Element> elems,
                                const std::string &descriptor) {
  auto g = std::make_shared<Group>(std::move(ctx), std::move(gens), descriptor);
  g->elems_ = std::move(elems);
  g->index_.attach(&g->elems_);
  for (std::uint32_t i = 0; i < g->elems_.size(); ++i) g->index_.insert(i);
  g->enumerated_ = true;
  if (!g->contains(g->identity()))
    throw ConsistencyError("cached enumeration lacks the identity");
  for (const Element &gen : g->generators())
    if (!g->contains(gen))
      throw ConsistencyError("cached enumeration lacks a generator");
  return g;
}

// -------------------------------------------------------- subgroup construction

namespace {

std::vector<Element> closure(const GroupContext &ctx,
                             const std::vector<Element> &gens,
                             std::uint64_t cap, const char *what) {
  std::vector<Element> elems{ctx.identity()};
  ElementIndex idx(&elems);
  idx.insert(0);
  std::size_t head = 0;
  while (head < elems.size()) {
    Element x = elems[head++];
    for (const Element &g : gens) {
      Element y = ctx.multiply(x, g);
      if (!idx.find(y)) {
        if (elems.size() >= cap)
          throw CapExceededError(std::string(what) + ": closure cap exceeded",
                                 elems.size());
        elems.push_back(std::move(y));
        idx.insert(static_cast<std::uint32_t>(elems.size() - 1));
      }
    }
  }
  return elems;
}

} // namespace

Subgroup subgroup_generated(std::shared_ptr<const Group> parent,
                            const std::vector<Element> &gens, std::uint64_t cap) {
  const GroupContext &ctx = *parent->context();
  std::vector<Element> red;
  for (const Element &g : gens) red.push_back(ctx.reduce(g));
  Subgroup s;
  s.parent = std::move(parent);
  s.elems = closure(ctx, red, cap, "subgroup_generated");
  std::sort(s.elems.begin(), s.elems.end());
  return s;
}

Subgroup subgroup_from_elements(std::shared_ptr<const Group> parent,
                                std::vector<Element> elems) {
  Subgroup s;
  s.parent = std::move(parent);
  s.elems = std::move(elems);
  std::sort(s.elems.begin(), s.elems.end());
  s.elems.erase(std::unique(s.elems.begin(), s.elems.end()), s.elems.end());
  return s;
}

Subgroup subgroup_join(const Subgroup &a, const Subgroup &b, std::uint64_t cap) {
  std::vector<Element> gens = a.canonical_generators();
  auto bg = b.canonical_generators();
  gens.insert(gens.end(), bg.begin(), bg.end());
  return subgroup_generated(a.parent, gens, cap);
}

Subgroup subgroup_intersect(const Subgroup &a, const Subgroup &b) {
  Subgroup s;
  s.parent = a.parent;
  std::set_intersection(a.elems.begin(), a.elems.end(), b.elems.begin(),
                        b.elems.end(), std::back_inserter(s.elems));
  return s;
}

bool subgroup_is_normal_in_parent(const Group &g, const Subgroup &h) {
  for (const Element &gen : g.generators())
    for (const Element &x : h.elems)
      if (!h.contains(g.conj(x, gen))) return false;
  return true;
}

// -------------------------------------------------- stabilizer-type operations

Subgroup centralizer(const Group &g, const Element &x) {
  g.order();
  Subgroup c;
  c.parent = const_cast<Group &>(g).shared_from_this();
  for (const Element &e : g.elements())
    if (g.mul(e, x) == g.mul(x, e)) c.elems.push_back(e);
  std::sort(c.elems.begin(), c.elems.end());
  return c;
}

Subgroup centralizer(const Group &g, const Subgroup &x) {
  auto gens = x.canonical_generators();
  if (gens.empty()) return g.whole_as_subgroup();
  g.order();
  for (const Element &ge : gens)
    if (!g.contains(ge)) throw InputError("centralizer: subgroup not inside group");
  Subgroup c;
  c.parent = const_cast<Group &>(g).shared_from_this();
  for (const Element &e : g.elements()) {
    bool ok = true;
    for (const Element &ge : gens)
      if (!(g.mul(e, ge) == g.mul(ge, e))) {
        ok = false;
        break;
      }
    if (ok) c.elems.push_back(e);
  }
  std::sort(c.elems.begin(), c.elems.end());
  return c;
}

Subgroup normalizer(const Group &g, const Subgroup &x) {
  g.order();
  auto gens = x.canonical_generators();
  for (const Element &ge : gens)
    if (!g.contains(ge)) throw InputError("normalizer: subgroup not inside group");
  Subgroup n;
  n.parent = const_cast<Group &>(g).shared_from_this();
  for (const Element &e : g.elements()) {
    bool ok = true;
    for (const Element &ge : gens)
      if (!x.contains(g.conj(ge, e))) {
        ok = false;
        break;
      }
    if (ok) n.elems.push_back(e);
  }
  std::sort(n.elems.begin(), n.elems.end());
  return n;
}

std::optional<TransporterResult> transporter(const Group &g,
                                             const std::vector<Element> &src,
                                             const std::vector<Element> &dst) {
  if (src.size() != dst.size()) throw InputError("transporter: tuple length mismatch");
  g.order();
  for (const Element &e : src)
    if (!g.contains(e)) throw InputError("transporter: source entry not in group");
  for (const Element &e : dst)
    if (!g.contains(e)) throw InputError("transporter: target entry not in group");

  // pointwise stabilizer of src
  Subgroup cent;
  cent.parent = const_cast<Group &>(g).shared_from_this();
  for (const Element &e : g.elements()) {
    bool ok = true;
    for (const Element &s : src)
      if (!(g.mul(e, s) == g.mul(s, e))) {
        ok = false;
        break;
      }
    if (ok) cent.elems.push_back(e);
  }
  std::sort(cent.elems.begin(), cent.elems.end());

  if (src == dst)
    return TransporterResult{g.identity(), std::move(cent)};

  // BFS on the tuple orbit with witness words
  struct Node {
    std::vector<Element> tup;
    Element word;
  };
  auto key = [](const std::vector<Element> &t) {
    std::uint64_t h = 14695981039346656037ull;
    for (const Element &e : t) {
      h ^= e.hash();
      h *= 1099511628211ull;
    }
    return h;
  };
  std::unordered_map<std::uint64_t, std::vector<std::vector<Element>>> seen;
  std::deque<Node> queue;
  auto push = [&](std::vector<Element> t, Element w) {
    std::uint64_t h = key(t);
    auto &bucket = seen[h];
    for (const auto &have : bucket)
      if (have == t) return false;
    bucket.push_back(t);
    queue.push_back(Node{std::move(t), std::move(w)});
    return true;
  };
  push(src, g.identity());
  std::optional<Element> witness;
  while (!queue.empty() && !witness) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    for (const Element &gen : g.generators()) {
      std::vector<Element> nxt;
      nxt.reserve(cur.tup.size());
      for (const Element &e : cur.tup) nxt.push_back(g.conj(e, gen));
      Element w = g.mul(cur.word, gen);
      if (nxt == dst) {
        witness = w;
        break;
      }
      push(std::move(nxt), std::move(w));
    }
  }
  if (!witness) return std::nullopt;
  // deterministic least witness over the solution coset
  Element best = *witness;
  for (const Element &c : cent.elems) {
    Element cand = g.mul(c, *witness);
    if (cand < best) best = cand;
  }
  return TransporterResult{best, std::move(cent)};
}

std::optional<Element> conjugating_element(const Group &g, const Element &p,
                                           const Element &q) {
  auto pi = g.index_of(p), qi = g.index_of(q);
  if (!pi || !qi) throw InputError("conjugating_element: element not in group");
  if (g.class_of(*pi) != g.class_of(*qi)) return std::nullopt;
  Element wp = g.witness_from_rep(*pi);
  Element wq = g.witness_from_rep(*qi);
  return g.mul(g.inv(wp), wq);
}

std::optional<Element> subgroup_conjugator(const Group &g, const Subgroup &a,
                                           const Subgroup &b) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.set_equals(b)) return g.identity();
  std::vector<Element> gens = a.canonical_generators();
  if (gens.empty()) return g.identity();
  // steer by the generator with the largest conjugacy class
  std::size_t pivot = 0;
  std::uint64_t best_size = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::uint64_t cs = g.class_size(g.class_of(gens[i]));
    if (cs > best_size) {
      best_size = cs;
      pivot = i;
    }
  }
  std::swap(gens[0], gens[pivot]);
  if (best_size == 1) {
    // every generator is central: conjugation cannot move a
    return std::nullopt;
  }
  std::uint32_t p0 = *g.index_of(gens[0]);
  std::uint32_t cid = g.class_of(p0);
  Element w_p = g.witness_from_rep(p0);
  const Subgroup &cent_rep = g.centralizer_of_class_rep(cid);
  for (const Element &q0 : b.elems) {
    auto qi = g.index_of(q0);
    if (g.class_of(*qi) != cid) continue;
    Element h = g.mul(g.inv(w_p), g.witness_from_rep(*qi)); // gens[0]^h = q0
    // solutions mapping gens[0] -> q0: C_G(gens[0]) * h, and
    // C_G(gens[0]) = C_G(rep)^{w_p}
    for (const Element &c0 : cent_rep.elems) {
      Element cg = g.mul(g.conj(c0, w_p), h);
      bool ok = true;
      for (std::size_t i = 1; i < gens.size() && ok; ++i)
        ok = b.contains(g.conj(gens[i], cg));
      if (ok) return cg;
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------ normal structure

Subgroup normal_closure(const Group &g, const std::vector<Element> &seed,
                        std::uint64_t cap) {
  g.order();
  if (cap == 0) cap = g.order();
  std::vector<Element> basis;
  for (const Element &s : seed) {
    Element r = g.context()->reduce(s);
    if (!(r == g.identity())) basis.push_back(r);
  }
  for (;;) {
    std::vector<Element> elems = closure(*g.context(), basis, cap + 1, "normal_closure");
    if (elems.size() > cap)
      throw CapExceededError("normal_closure cap exceeded", elems.size());
    std::sort(elems.begin(), elems.end());
    std::vector<Element> missing;
    std::size_t basis_size = basis.size();
    for (std::size_t i = 0; i < basis_size && missing.empty(); ++i) {
      for (const Element &gen : g.generators()) {
        Element y = g.conj(basis[i], gen);
        if (!std::binary_search(elems.begin(), elems.end(), y))
          missing.push_back(std::move(y));
        Element y2 = g.conj(basis[i], g.inv(gen));
        if (!std::binary_search(elems.begin(), elems.end(), y2))
          missing.push_back(std::move(y2));
      }
    }
    if (missing.empty()) {
      Subgroup s;
      s.parent = const_cast<Group &>(g).shared_from_this();
      s.elems = std::move(elems);
      return s;
    }
    basis.insert(basis.end(), missing.begin(), missing.end());
  }
}

Subgroup derived_subgroup(const Group &g) {
  std::vector<Element> comms;
  // commutators of generator pairs seed the normal closure
  for (const Element &a : g.generators())
    for (const Element &b : g.generators())
      comms.push_back(g.context()->commutator(a, b));
  if (comms.empty()) return const_cast<Group &>(g).trivial_subgroup();
  return normal_closure(g, comms);
}

Subgroup center(const Group &g) {
  g.order();
  Subgroup c;
  c.parent = const_cast<Group &>(g).shared_from_this();
  for (const Element &e : g.elements()) {
    bool ok = true;
    for (const Element &gen : g.generators())
      if (!(g.mul(e, gen) == g.mul(gen, e))) {
        ok = false;
        break;
      }
    if (ok) c.elems.push_back(e);
  }
  std::sort(c.elems.begin(), c.elems.end());
  return c;
}

Subgroup sylow_2_subgroup(GroupPtr g) {
  g->enumerate();
  unsigned long long target = 1;
  {
    unsigned long long n = g->order();
    while (n % 2 == 0) {
      n /= 2;
      target *= 2;
    }
  }
  Subgroup t = g->trivial_subgroup();
  t.parent = g;
  while (t.order() < target) {
    bool grown = false;
    for (const Element &x : g->elements()) {
      if (!t.contains(g->mul(x, x))) continue;
      if (t.contains(x)) continue;
      bool normalizes = true;
      for (const Element &h : t.elems)
        if (!t.contains(g->conj(h, x))) {
          normalizes = false;
          break;
        }
      if (!normalizes) continue;
      std::vector<Element> coset;
      coset.reserve(t.elems.size());
      for (const Element &h : t.elems) coset.push_back(g->mul(h, x));
      std::sort(coset.begin(), coset.end());
      std::vector<Element> merged;
      std::merge(t.elems.begin(), t.elems.end(), coset.begin(), coset.end(),
                 std::back_inserter(merged));
      t.elems = std::move(merged);
      grown = true;
      break;
    }
    if (!grown) throw ConsistencyError("sylow growth stalled");
  }
  return t;
}

Subgroup odd_core(const Group &g) {
  g.order();
  if (g.order() > 1000000ull) throw InputError("odd_core: order above 10^6");
  std::uint64_t odd_part = g.order();
  while (odd_part % 2 == 0) odd_part /= 2;

  std::vector<Element> gens;
  const auto &reps = g.conjugacy_class_reps();
  for (std::uint32_t rep_idx : reps) {
    const Element &x = g.elem(rep_idx);
    if (x == g.identity()) continue;
    if (g.element_order(x) % 2 == 0) continue;
    try {
      Subgroup nc = normal_closure(g, {x}, odd_part);
      if (nc.order() % 2 == 1) gens.push_back(x);
    } catch (const CapExceededError &) {
      // closure is larger than the odd part, so not of odd order
    }
  }
  Subgroup core = gens.empty()
                      ? const_cast<Group &>(g).trivial_subgroup()
                      : normal_closure(g, gens);
  if (core.order() % 2 == 0 || !subgroup_is_normal_in_parent(g, core))
    throw ConsistencyError("odd_core verification failed");
  return core;
}

Subgroup z_star(const Group &g) {
  Subgroup core = odd_core(g);
  if (core.order() == 1) return center(g); // the quotient map is the identity
  GroupPtr q = quotient_group(g, core, g.descriptor() + "/O");
  Subgroup zq = center(*q);
  // preimage: x belongs iff its coset representative is central in G/O(G)
  Subgroup pre;
  pre.parent = const_cast<Group &>(g).shared_from_this();
  const GroupContext &qc = *q->context();
  for (const Element &x : g.elements())
    if (zq.contains(qc.reduce(x))) pre.elems.push_back(x);
  std::sort(pre.elems.begin(), pre.elems.end());
  return pre;
}

Subgroup odd_generated(const Group &g) {
  g.order();
  std::vector<Element> seeds;
  const auto &reps = g.conjugacy_class_reps();
  for (std::uint32_t idx : reps) {
    const Element &x = g.elem(idx);
    std::uint64_t ord = g.element_order(x);
    std::uint64_t two = 1;
    while (ord % 2 == 0) {
      ord /= 2;
      two *= 2;
    }
    // odd part of x generates the same odd-order cyclic subgroup
    Element xo = x;
    Element acc = g.identity();
    for (std::uint64_t i = 0; i < two; ++i) acc = g.mul(acc, x);
    xo = acc;
    if (!(xo == g.identity())) seeds.push_back(xo);
  }
  if (seeds.empty()) return const_cast<Group &>(g).trivial_subgroup();
  return normal_closure(g, seeds);
}

std::vector<Subgroup> normal_subgroups(const Group &g) {
  g.order();
  if (g.order() > 100000ull)
    throw InputError("normal_subgroups: class-union scan capped at 10^5 elements");
  const auto &reps = g.conjugacy_class_reps();
  std::size_t k = reps.size();
  // class element lists
  std::vector<std::vector<Element>> cls(k);
  for (const Element &e : g.elements()) cls[g.class_of(e)].push_back(e);

  std::vector<Subgroup> result;
  std::set<std::vector<Element>> seen;
  // DFS over class subsets containing the identity class, closing under
  // products as we go
  struct State {
    std::vector<bool> in;
    std::vector<Element> elems; // sorted
    std::size_t next;
  };
  std::uint32_t id_class = g.class_of(g.identity());
  State init;
  init.in.assign(k, false);
  init.in[id_class] = true;
  init.elems = {g.identity()};
  init.next = 0;
  std::vector<State> stack{init};
  auto try_close = [&](State st) -> std::optional<State> {
    // close the chosen class union under products; adding whole classes
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Element> sorted = st.elems;
      for (std::size_t i = 0; i < st.elems.size() && !changed; ++i)
        for (std::size_t j = 0; j < st.elems.size() && !changed; ++j) {
          Element p = g.mul(st.elems[i], st.elems[j]);
          if (!std::binary_search(sorted.begin(), sorted.end(), p)) {
            std::uint32_t c = g.class_of(p);
            st.in[c] = true;
            for (const Element &e : cls[c]) st.elems.push_back(e);
            std::sort(st.elems.begin(), st.elems.end());
            changed = true;
          }
        }
    }
    if (g.order() % st.elems.size() != 0) return std::nullopt;
    return st;
  };
  while (!stack.empty()) {
    State st = std::move(stack.back());
    stack.pop_back();
    if (seen.insert(st.elems).second) {
      Subgroup s;
      s.parent = const_cast<Group &>(g).shared_from_this();
      s.elems = st.elems;
      result.push_back(std::move(s));
    }
    for (std::size_t c = st.next; c < k; ++c) {
      if (st.in[c]) continue;
      State ext = st;
      ext.in[c] = true;
      for (const Element &e : cls[c]) ext.elems.push_back(e);
      std::sort(ext.elems.begin(), ext.elems.end());
      ext.next = c + 1;
      auto closed = try_close(std::move(ext));
      if (closed && seen.find(closed->elems) == seen.end())
        stack.push_back(std::move(*closed));
    }
  }
  std::sort(result.begin(), result.end(), [](const Subgroup &a, const Subgroup &b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elems < b.elems;
  });
  return result;
}

GroupPtr quotient_group(const Group &g, const Subgroup &n,
                        const std::string &descriptor) {
  g.order();
  if (!subgroup_is_normal_in_parent(g, n))
    throw InputError("quotient_group: subgroup is not normal");
  auto qctx = std::make_shared<QuotientContext>(g.context(), n.elems);
  std::vector<Element> qgens;
  for (const Element &gen : g.generators()) qgens.push_back(qctx->reduce(gen));
  std::string d = descriptor.empty() ? g.descriptor() + "/N" : descriptor;
  auto q = make_group(qctx, qgens, d, true, g.order());
  if (q->order() * n.order() != g.order())
    throw ConsistencyError("quotient order mismatch");
  return q;
}

GroupPtr central_quotient(const Group &g, const Subgroup &z,
                          const std::string &descriptor) {
  for (const Element &ze : z.elems)
    for (const Element &gen : g.generators())
      if (!(g.mul(ze, gen) == g.mul(gen, ze)))
        throw InputError("central_quotient: subgroup is not central");
  return quotient_group(g, z, descriptor.empty() ? g.descriptor() + "/Z" : descriptor);
}

GroupPredicates group_predicates(const Group &g) {
  g.order();
  if (g.order() > 1000000ull) throw InputError("group_predicates: order above 10^6");
  GroupPredicates p{};
  Subgroup d = derived_subgroup(g);
  p.perfect = d.order() == g.order();

  auto simple_test = [](const Group &h) {
    if (h.order() == 1) return false;
    const auto &reps = h.conjugacy_class_reps();
    for (std::uint32_t idx : reps) {
      const Element &x = h.elem(idx);
      if (x == h.identity()) continue;
      if (normal_closure(h, {x}).order() != h.order()) return false;
    }
    return true;
  };
  p.simple = simple_test(g);
  if (p.perfect) {
    Subgroup z = center(g);
    if (z.order() == 1) {
      p.quasisimple = p.simple;
    } else {
      GroupPtr q = central_quotient(g, z);
      p.quasisimple = simple_test(*q);
    }
  } else {
    p.quasisimple = false;
  }
  return p;
}

// ------------------------------------------------------- isomorphism search

namespace {

// Close a partial generator-image assignment into a full map, or detect a
// conflict. Returns the full image table indexed by a-element index.
bool close_hom(const Group &a, const Group &b,
               const std::vector<Element> &agens,
               const std::vector<Element> &bimgs,
               std::vector<std::uint32_t> &img_out) {
  std::vector<std::uint32_t> img(a.order(), UINT32_MAX);
  std::uint32_t ida = *a.index_of(a.identity());
  img[ida] = *b.index_of(b.identity());
  std::vector<std::uint32_t> frontier{ida};
  std::vector<std::uint32_t> gen_idx_a;
  for (const Element &x : agens) gen_idx_a.push_back(*a.index_of(x));
  std::size_t head = 0;
  while (head < frontier.size()) {
    std::uint32_t xi = frontier[head++];
    for (std::size_t gi = 0; gi < agens.size(); ++gi) {
      Element ya = a.mul(a.elem(xi), agens[gi]);
      std::uint32_t yi = *a.index_of(ya);
      Element yb = b.mul(b.elem(img[xi]), bimgs[gi]);
      std::uint32_t ybi = *b.index_of(yb);
      if (img[yi] == UINT32_MAX) {
        img[yi] = ybi;
        frontier.push_back(yi);
      } else if (img[yi] != ybi) {
        return false;
      }
    }
  }
  if (frontier.size() != a.order()) return false; // agens do not generate a
  // homomorphism + bijectivity check
  std::vector<bool> hit(b.order(), false);
  for (std::uint32_t i = 0; i < a.order(); ++i) {
    if (hit[img[i]]) return false;
    hit[img[i]] = true;
  }
  img_out = std::move(img);
  return true;
}

} // namespace

std::optional<std::vector<std::pair<Element, Element>>>
groups_isomorphic(const Group &a, const Group &b) {
  if (a.order() != b.order()) return std::nullopt;
  Subgroup whole_a = a.whole_as_subgroup();
  std::vector<Element> agens = whole_a.canonical_generators();
  if (agens.empty()) return std::vector<std::pair<Element, Element>>{};
  std::vector<std::uint64_t> aords;
  for (const Element &x : agens) aords.push_back(a.element_order(x));
  // order-class element pools in b
  std::vector<std::vector<Element>> pools(agens.size());
  for (std::size_t i = 0; i < agens.size(); ++i)
    for (const Element &y : b.elements())
      if (b.element_order(y) == aords[i]) pools[i].push_back(y);

  std::vector<Element> bimgs(agens.size(), b.identity());
  std::vector<std::uint32_t> img;
  std::vector<std::size_t> pos(agens.size(), 0);
  std::size_t depth = 0;
  while (true) {
    if (pos[depth] == pools[depth].size()) {
      if (depth == 0) return std::nullopt;
      pos[depth] = 0;
      ++pos[--depth];
      continue;
    }
    bimgs[depth] = pools[depth][pos[depth]];
    if (depth + 1 < agens.size()) {
      ++depth;
      pos[depth] = 0;
      continue;
    }
    if (close_hom(a, b, agens, bimgs, img)) {
      std::vector<std::pair<Element, Element>> result;
      for (std::size_t i = 0; i < agens.size(); ++i)
        result.emplace_back(agens[i], bimgs[i]);
      return result;
    }
    ++pos[depth];
  }
}

} // namespace twofusion::grp
