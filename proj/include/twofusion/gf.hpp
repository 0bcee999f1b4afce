#pragma once

#include <cstdint>
#include <vector>

#include "twofusion/errors.hpp"

namespace twofusion::gf {

// An element of GF(p^f), encoded as an index in [0, q). The index is the
// base-p evaluation of the coefficient vector in the fixed polynomial basis,
// so 0 is the zero element and 1 is the one element.
using Fel = std::uint32_t;

// Exact arithmetic in a small finite field of odd characteristic.
//
// The modulus is the lexicographically least monic irreducible polynomial of
// degree f over GF(p), verified irreducible at construction, so the table
// layout is reproducible across runs. Multiplication goes through log/antilog
// tables; addition is digitwise mod p on the index encoding.
class FieldSpec {
public:
  FieldSpec(std::uint32_t p, std::uint32_t f);

  std::uint32_t p() const { return p_; }
  std::uint32_t f() const { return f_; }
  std::uint32_t q() const { return q_; }
  // Non-leading coefficients of the modulus, constant term first.
  const std::vector<std::uint32_t> &modulus() const { return modulus_; }
  // A fixed generator of the (cyclic) multiplicative group.
  Fel generator() const { return gen_; }

  Fel add(Fel a, Fel b) const;
  Fel neg(Fel a) const;
  Fel sub(Fel a, Fel b) const { return add(a, neg(b)); }
  Fel mul(Fel a, Fel b) const {
    if (a == 0 || b == 0) return 0;
    return antilog_[idx_mod(log_[a] + log_[b])];
  }
  Fel inv(Fel a) const;
  Fel div(Fel a, Fel b) const { return mul(a, inv(b)); }
  // a^e for integer e (negative allowed when a != 0).
  Fel pow(Fel a, long long e) const;

  Fel zero() const { return 0; }
  Fel one() const { return 1; }

  // Discrete log base generator(); a must be nonzero.
  std::uint32_t log(Fel a) const;
  // Multiplicative order of a nonzero element.
  std::uint32_t element_order(Fel a) const;
  bool is_square(Fel a) const;
  // Least square root in index order, error if a is not a square.
  Fel sqrt(Fel a) const;

  // The element of 2-power order generating the Sylow 2-subgroup of the
  // multiplicative group: generator^((q-1)/2-part).
  Fel two_element_generator() const;

private:
  std::uint32_t idx_mod(std::uint32_t e) const {
    return e >= q_ - 1 ? e - (q_ - 1) : e;
  }

  std::uint32_t p_, f_, q_;
  std::vector<std::uint32_t> modulus_;
  Fel gen_;
  std::vector<std::uint32_t> log_;     // log_[x] for x != 0
  std::vector<Fel> antilog_;           // antilog_[k] = gen^k, k in [0, q-1)
};

// Interned field registry: one immutable FieldSpec per (p, f), shared freely.
const FieldSpec &field(std::uint32_t p, std::uint32_t f);

// Entrywise q-power Frobenius data for a quadratic extension: for a field of
// order q^2 (even degree 2m over the prime field), returns x^q where
// q = p^m. The map is the involutory automorphism fixing exactly GF(q).
Fel frobenius(Fel x, const FieldSpec &fq2);

// Largest power of 2 dividing |n|; n must be nonzero.
long long two_part(long long n);

// For odd a, b with |a|, |b| > 1: whether (a-1)_2 = (b-1)_2 and
// (a+1)_2 = (b+1)_2.
bool tilde_related(long long a, long long b);

} // namespace twofusion::gf
