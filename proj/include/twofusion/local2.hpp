#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twofusion/group.hpp"
#include "twofusion/twogroup.hpp"

namespace twofusion::local2 {

using grp::Element;
using grp::Group;
using grp::GroupPtr;
using grp::Subgroup;

struct ConnectivityReport {
  int k = 0;
  std::size_t vertex_count = 0;    // elementary abelian subgroups of rank >= k
  std::size_t component_count = 0; // 0 when there are no vertices
  bool connected = false;          // one component, or vacuously true
  // chain joining the queried pair, consecutive members ordered by containment
  std::vector<Subgroup> witness_path;
};

// Containment-graph connectivity on the elementary abelian subgroups of rank
// at least k. Components come from a union-find over corank-1 containments,
// which generates the same connectivity as full containment.
ConnectivityReport k_connected(const Subgroup &p, int k,
                               std::optional<std::pair<Subgroup, Subgroup>> query =
                                   std::nullopt,
                               std::size_t vertex_cap = 1000000);

// Whether P has a normal elementary abelian subgroup of rank >= 2^{k-1}+1
// (when it does, P is k-connected).
bool normal_ea_test(const Subgroup &p, int k);

// Gamma_{S,k}(G): the join of N_G(T) over subgroups T <= S with m(T) >= k,
// computed on S-conjugacy class representatives and closed with S.
Subgroup gamma_sk(GroupPtr g, const Subgroup &s, int k);
bool is_k_generated(GroupPtr g, const Subgroup &s, int k);

// Delta_G(E): the intersection of O(C_G(a)) over nontrivial a in E.
Subgroup delta_e(GroupPtr g, const Subgroup &e);

struct BalanceReport {
  bool balanced = true;
  // first violating triple, re-verifiable: witness in Delta_G(E) cap C_G(a)
  // but outside O(C_G(a))
  std::optional<Subgroup> violating_e;
  std::optional<Element> violating_a;
  std::optional<Element> violating_element;
};

// k-balance with respect to A: Delta_G(E) cap C_G(a) <= O(C_G(a)) for every
// rank-k subgroup E <= A and every nontrivial a in A.
BalanceReport is_k_balanced(GroupPtr g, const Subgroup &a, int k);

// W_A = < Delta_G(E) : E <= A, m(E) = k >. When G is k-balanced with respect
// to A and m(A) >= k+2, the order is verified odd.
Subgroup w_closure(GroupPtr g, const Subgroup &a, int k);

} // namespace twofusion::local2
