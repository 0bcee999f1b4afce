#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twofusion/element.hpp"

namespace twofusion::grp {

// Open-addressing map Element -> index, verifying candidates against an
// external element store so elements are kept once.
class ElementIndex {
public:
  ElementIndex() = default;
  explicit ElementIndex(const std::vector<Element> *store) : store_(store) {}

  void attach(const std::vector<Element> *store) { store_ = store; }
  std::optional<std::uint32_t> find(const Element &e) const;
  // The element must already sit at store[idx].
  void insert(std::uint32_t idx);
  std::size_t size() const { return count_; }
  void clear();

private:
  void grow();
  const std::vector<Element> *store_ = nullptr;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_; // index+1, 0 = empty
  std::size_t count_ = 0;
};

class Group;
using GroupPtr = std::shared_ptr<Group>;

// A subset of a group handle closed under the group operations, stored as an
// explicit element list in canonical (encoding) order. The parent handle is
// the ambient group; it need not be enumerated.
struct Subgroup {
  std::shared_ptr<const Group> parent;
  std::vector<Element> elems; // sorted ascending in canonical order

  std::uint64_t order() const { return elems.size(); }
  bool contains(const Element &e) const;
  bool contains_all(const Subgroup &other) const;
  bool set_equals(const Subgroup &other) const;
  bool is_trivial() const { return elems.size() == 1; }
  // Greedy minimal generating sequence: repeatedly the least element outside
  // the span so far.
  std::vector<Element> canonical_generators() const;
  // Conjugate subgroup (same parent): elements x^g.
  Subgroup conjugated(const Element &g) const;
  std::vector<Element> involutions() const;
  const GroupContext &ctx() const;
};

// A generated finite group with a multiplication oracle and optional full
// enumeration (BFS order: layer by layer, insertion order within a layer).
class Group : public std::enable_shared_from_this<Group> {
public:
  Group(ContextPtr ctx, std::vector<Element> gens, std::string descriptor);

  // BFS closure under product. Throws CapExceededError with the count found
  // so far if the cap is hit, InputError on malformed generators.
  void enumerate(std::uint64_t cap = 10000000);
  bool enumerated() const { return enumerated_; }

  const ContextPtr &context() const { return ctx_; }
  const std::vector<Element> &generators() const { return gens_; }
  const std::string &descriptor() const { return descriptor_; }
  void set_descriptor(const std::string &d) { descriptor_ = d; }

  std::uint64_t order() const;
  const std::vector<Element> &elements() const;
  const Element &elem(std::uint32_t i) const { return elements()[i]; }
  std::optional<std::uint32_t> index_of(const Element &e) const;
  bool contains(const Element &e) const { return index_of(e).has_value(); }

  Element identity() const { return ctx_->identity(); }
  Element mul(const Element &a, const Element &b) const { return ctx_->multiply(a, b); }
  Element inv(const Element &a) const { return ctx_->inverse(a); }
  Element conj(const Element &x, const Element &g) const { return ctx_->conjugate(x, g); }
  std::uint64_t element_order(const Element &a) const { return ctx_->element_order(a); }

  // ---- conjugacy machinery (requires enumeration) ----

  // Conjugacy class id of an element, orbits computed lazily.
  std::uint32_t class_of(std::uint32_t idx) const;
  std::uint32_t class_of(const Element &e) const;
  // Representative (least element in canonical order) of a class.
  const Element &class_rep(std::uint32_t class_id) const;
  std::uint64_t class_size(std::uint32_t class_id) const;
  // Witness g with rep^g = elems[idx].
  Element witness_from_rep(std::uint32_t idx) const;
  // Full partition; returns per-class representative indices ordered by
  // first appearance in enumeration order.
  const std::vector<std::uint32_t> &conjugacy_class_reps() const;
  std::size_t class_count() const;
  bool conjugacy_complete() const { return classes_complete_; }

  // Centralizer of the class representative, cached per class.
  const Subgroup &centralizer_of_class_rep(std::uint32_t class_id) const;

  Subgroup whole_as_subgroup() const;
  Subgroup trivial_subgroup() const;

private:
  friend GroupPtr group_from_enumeration(ContextPtr, std::vector<Element>,
                                         std::vector<Element>, const std::string &);
  void require_enumerated(const char *what) const;
  void fill_class_orbit(std::uint32_t start_idx) const;

  ContextPtr ctx_;
  std::vector<Element> gens_;
  std::string descriptor_;

  bool enumerated_ = false;
  std::vector<Element> elems_;
  ElementIndex index_;

  // lazy conjugacy data
  mutable std::vector<std::uint32_t> class_id_;
  mutable std::vector<std::uint32_t> parent_;  // conjugation BFS tree
  mutable std::vector<std::uint16_t> genidx_;
  mutable std::vector<std::uint32_t> class_rep_idx_;
  mutable std::vector<std::uint64_t> class_size_;
  mutable std::vector<std::uint32_t> class_reps_cache_;
  mutable bool classes_complete_ = false;
  mutable std::vector<std::unique_ptr<Subgroup>> class_centralizer_;
};

GroupPtr make_group(ContextPtr ctx, std::vector<Element> gens,
                    const std::string &descriptor, bool enumerate_now = false,
                    std::uint64_t cap = 10000000);

// Install a previously computed enumeration (cache loads). The element list
// is trusted to be closed; identity membership and generator membership are
// still checked.
GroupPtr group_from_enumeration(ContextPtr ctx, std::vector<Element> gens,
                                std::vector<Element> elems,
                                const std::string &descriptor);

// ---- subgroup construction ----

// Closure of the generators inside the parent's context.
Subgroup subgroup_generated(std::shared_ptr<const Group> parent,
                            const std::vector<Element> &gens,
                            std::uint64_t cap = 1u << 22);
Subgroup subgroup_from_elements(std::shared_ptr<const Group> parent,
                                std::vector<Element> elems);
// Join of two subgroups of one parent.
Subgroup subgroup_join(const Subgroup &a, const Subgroup &b,
                       std::uint64_t cap = 1u << 22);
Subgroup subgroup_intersect(const Subgroup &a, const Subgroup &b);
bool subgroup_is_normal_in_parent(const Group &g, const Subgroup &h);

// ---- stabilizer-type operations (parent must be enumerated) ----

Subgroup centralizer(const Group &g, const Element &x);
Subgroup centralizer(const Group &g, const Subgroup &x);
Subgroup normalizer(const Group &g, const Subgroup &x);

struct TransporterResult {
  Element witness;      // least solution in canonical order
  Subgroup centralizer; // pointwise stabilizer of src; solutions = centralizer * witness
};

// Deciding primitive for fusion morphisms: a g with src_i^g = dst_i for all
// i, if one exists. The full solution set is centralizer * witness.
std::optional<TransporterResult> transporter(const Group &g,
                                             const std::vector<Element> &src,
                                             const std::vector<Element> &dst);

// First-found conjugator with p^g = q for single elements, using cached class
// witnesses; nullopt if they are not conjugate.
std::optional<Element> conjugating_element(const Group &g, const Element &p,
                                           const Element &q);

// First-found g with A^g = B, via class-witness cosets on a well-chosen
// generator. Much cheaper than the public transporter on subgroup tuples.
std::optional<Element> subgroup_conjugator(const Group &g, const Subgroup &a,
                                           const Subgroup &b);

// ---- normal structure ----

Subgroup normal_closure(const Group &g, const std::vector<Element> &seed,
                        std::uint64_t cap = 0 /* 0 = |G| */);
Subgroup derived_subgroup(const Group &g);
Subgroup center(const Group &g);

// O(G): the largest normal odd-order subgroup, computed from odd-order
// normal closures and verified normal of odd order.
Subgroup odd_core(const Group &g);
// Z*(G): full preimage in G of Z(G/O(G)).
Subgroup z_star(const Group &g);
// O^2(G): the smallest normal subgroup with 2-group quotient (generated by
// all odd-order elements).
Subgroup odd_generated(const Group &g);

// All normal subgroups by DFS over unions of conjugacy classes with closure
// pruning. Desk-scale oracle; |G| should be small.
std::vector<Subgroup> normal_subgroups(const Group &g);

// Quotient by a verified-central subgroup; elements are canonical coset
// representatives (least element per coset).
GroupPtr central_quotient(const Group &g, const Subgroup &z,
                          const std::string &descriptor = "");
// General quotient by a normal subgroup (elements as canonical coset reps).
GroupPtr quotient_group(const Group &g, const Subgroup &n,
                        const std::string &descriptor = "");

struct GroupPredicates {
  bool perfect;
  bool simple;
  bool quasisimple;
};
GroupPredicates group_predicates(const Group &g);

// A Sylow 2-subgroup of an enumerated group, by deterministic index-2 growth.
Subgroup sylow_2_subgroup(GroupPtr g);

// Generator-image isomorphism search between small enumerated groups.
std::optional<std::vector<std::pair<Element, Element>>>
groups_isomorphic(const Group &a, const Group &b);

} // namespace twofusion::grp
