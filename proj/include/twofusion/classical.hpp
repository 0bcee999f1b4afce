#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twofusion/group.hpp"
#include "twofusion/twogroup.hpp"

namespace twofusion::classical {

using grp::Element;
using grp::Group;
using grp::GroupPtr;
using grp::Subgroup;

enum class Family { GL, SL, GU, SU, PGL, PSL, PGU, PSU, Alt, Sym, M11 };

// Text grammar: FAMILY(n,q), e.g. "PSL(3,3)", "SU(3,5)", "Alt(10)", "M11".
// Exact and case-sensitive.
struct GroupSpec {
  Family family;
  int n = 0;          // dimension, or degree for Alt/Sym
  std::uint32_t q = 0; // odd prime power; 0 for Alt/Sym/M11

  static GroupSpec parse(const std::string &text);
  std::string str() const;
  bool matrix_family() const;
  bool unitary() const;    // GU/SU/PGU/PSU
  bool projective() const; // P-variants
  int epsilon() const { return unitary() ? -1 : +1; } // sign alias
};

// Closed-form order of the group named by the spec.
unsigned long long spec_order(const GroupSpec &spec);

// Handle with standard generators; projective variants are realized as
// quotients by the scalar center (canonical coset representatives). Not
// enumerated; call enumerate() when the full element store is wanted.
GroupPtr make_group(const GroupSpec &spec);

// Membership conditions for the constructed families (invertibility,
// determinant, unitary condition, parity).
bool verify_membership(const GroupSpec &spec, const Element &e);

// Sylow 2-subgroup of an enumerated group by deterministic index-2 growth.
Subgroup sylow2_of_enumerated(GroupPtr g);

// Explicit Sylow 2-subgroup via the block constructions: concrete base cases
// for GL_1 and GL_2 (diagonal 2-part plus swap, or a semidihedral pair),
// doubled by block-diagonal plus block-swap, assembled over the binary
// expansion of n; intersected with SL / projected for P-variants. The order
// is verified equal to the 2-part of the group order.
Subgroup sylow2(const GroupSpec &spec);

// E: all diagonal +-1 matrices of determinant 1 in SL_n^eps(q); elementary
// abelian of order 2^{n-1}.
Subgroup diagonal_two_torus(int n, std::uint32_t q, int epsilon);

struct InvolutionRep {
  std::string label;  // "t1", "t2", ..., "w"
  Element element;    // in the projective group (coset representative)
  int i = 0;          // block size for t_i
  gf::Fel rho = 0;    // the fixed order-(n,q-1) element used
  gf::Fel mu = 0;     // square root of rho when it exists
};

// Conjugacy representatives for the involutions of PSL_n(q), by the case
// split on the parity of n and the squareness of rho; w is included exactly
// when its lift has determinant 1 (checked by evaluation).
std::vector<InvolutionRep> involution_reps(int n, std::uint32_t q);

// Classify an involution of PSL_n(q) by the eigenstructure of its lift
// (eigenvalue multiplicities for diagonalizable lifts, the non-square block
// form otherwise); never searches the group.
std::string match_involution_class(const GroupSpec &spec, const Element &x);

// Roots in the base field of the characteristic polynomial, with
// multiplicities, found by evaluation over every field element.
std::vector<std::pair<gf::Fel, int>> eigenvalues_in_field(const gf::FieldSpec &field,
                                                          const Element &m);

// Arithmetic criterion: PSL_n^eps(q) is a Goldschmidt group iff n = 2 and
// q = 3,5 mod 8. The excluded case (2,3) is an error.
bool goldschmidt_test(int n, std::uint32_t q, int epsilon);

struct GenerationData {
  std::vector<Subgroup> blocks;      // U_1 .. U_{n-1} inside SL_n^eps(q)
  std::vector<Element> conjugators;  // m_i with U_i^{m_i} = U_{i+1}
  GroupPtr ambient;
};

// The SL_2^eps(q) subgroups along the diagonal and monomial conjugators
// linking consecutive blocks, each identity verified elementwise.
GenerationData generation_subgroups(int n, std::uint32_t q, int epsilon);

// The explicit five-generator Sylow 2-subgroup of Alt(10); order 128.
Subgroup sylow_a10_explicit();

// Sorted cycle lengths >= 2 of a permutation.
std::vector<int> cycle_type(const Element &perm);

// (p, f) with q = p^f, p prime; error if q is not an odd prime power.
std::pair<std::uint32_t, std::uint32_t> factor_prime_power(std::uint32_t q);

} // namespace twofusion::classical
