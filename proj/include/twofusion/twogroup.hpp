#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twofusion/group.hpp"

namespace twofusion::grp {

// A verified group homomorphism between subgroups, stored by generator images
// and by its full graph (image of every domain element, sorted by source).
struct HomomorphismTable {
  Subgroup domain;
  Subgroup codomain;
  std::vector<Element> gen_images; // images of domain.canonical_generators()
  std::vector<std::pair<Element, Element>> graph;

  const Element &image_of(const Element &x) const;
  bool injective() const;
};

// Close generator images into a full homomorphism, checking consistency on
// the whole domain. Returns nullopt if the assignment is not a well-defined
// homomorphism into the codomain.
std::optional<HomomorphismTable>
build_homomorphism(const Subgroup &domain, const Subgroup &codomain,
                   const std::vector<Element> &domain_gens,
                   const std::vector<Element> &gen_images);

// ---- 2-group structure ----

bool is_2group(const Subgroup &p);

// Every subgroup of a 2-group exactly once, ordered by size then element list.
// Top-down recursion over maximal subgroups (Frattini hyperplanes).
std::vector<Subgroup> subgroups_of_2group(const Subgroup &p,
                                          std::size_t count_cap = 200000);

// Independent bottom-up enumeration by index-2 cyclic extensions; test oracle.
std::vector<Subgroup> subgroups_of_2group_cyclic_extension(const Subgroup &p);

// All elementary abelian subgroups of rank >= min_rank (the trivial subgroup
// has rank 0), via canonical-generating-sequence DFS over commuting
// involutions. Deterministic order.
std::vector<Subgroup> elementary_abelian_subgroups(const Subgroup &p,
                                                   int min_rank,
                                                   std::size_t count_cap = 1000000);

// m(P): maximal rank of an elementary abelian subgroup.
int rank_2group(const Subgroup &p);
// m(P) >= k, with early exit.
bool rank_at_least(const Subgroup &p, int k);

// The automorphism group of a small 2-group, acting on the sorted element
// list of P; aut_perms holds one permutation per automorphism.
struct AutomorphismGroup {
  std::vector<Element> domain; // sorted elements of P
  GroupPtr perm_group;         // enumerated, degree |P|
  HomomorphismTable table_of(const Element &perm, const Subgroup &p) const;
};
AutomorphismGroup automorphisms_of_2group(const Subgroup &p);

enum class TwoGroupFamily {
  Cyclic,
  ElementaryAbelian,
  Dihedral,
  GeneralizedQuaternion,
  Semidihedral,
  Wreathed, // C_{2^k} wr C_2 with k >= 2
  Other,
};

struct TwoGroupType {
  TwoGroupFamily family;
  int log2_order;
  int parameter; // k for Wreathed, rank for ElementaryAbelian, 0 otherwise
  std::vector<Element> witnesses; // generators satisfying the defining relations
  std::string tag() const;
};

// Witness-based recognition: the tag is claimed only when generators
// satisfying the family's defining relations are exhibited.
TwoGroupType recognize_2group(const Subgroup &p);

} // namespace twofusion::grp
