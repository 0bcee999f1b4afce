#include "doctest.h"

#include <random>
#include <set>

#include "twofusion/gf.hpp"

using namespace twofusion;
using namespace twofusion::gf;

TEST_CASE("prime field construction") {
  const FieldSpec &f3 = field(3, 1);
  CHECK(f3.q() == 3);
  CHECK(f3.add(2, 2) == 1);
  CHECK(f3.mul(2, 2) == 1);
  CHECK(f3.neg(1) == 2);
}

TEST_CASE("GF(9) multiplicative group is cyclic of order 8") {
  // oracle: brute-force the order of every nonzero element
  const FieldSpec &f9 = field(3, 2);
  CHECK(f9.q() == 9);
  std::set<std::uint32_t> orders;
  int generators = 0;
  for (Fel a = 1; a < 9; ++a) {
    std::uint32_t ord = 1;
    Fel x = a;
    while (x != 1) {
      x = f9.mul(x, a);
      ++ord;
    }
    orders.insert(ord);
    if (ord == 8) ++generators;
  }
  CHECK(generators == 4); // phi(8) generators in a cyclic group of order 8
  CHECK(orders == std::set<std::uint32_t>{1, 2, 4, 8});
  CHECK(f9.element_order(f9.generator()) == 8);
}

TEST_CASE("construction errors name the violated bound") {
  CHECK_THROWS_WITH_AS(FieldSpec(2, 1), "even characteristic unsupported", InputError);
  CHECK_THROWS_AS(FieldSpec(15, 1), InputError);
  CHECK_THROWS_AS(FieldSpec(3, 14), InputError); // 3^14 > 2^20
}

TEST_CASE("field laws, exhaustive on small orders") {
  // all odd prime powers up to 3^5; triple laws fully enumerated
  std::vector<std::pair<std::uint32_t, std::uint32_t>> specs;
  for (std::uint32_t p = 3; p <= 243; p += 2) {
    bool prime = true;
    for (std::uint32_t d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    std::uint64_t q = p;
    std::uint32_t f = 1;
    while (q <= 243) {
      specs.emplace_back(p, f);
      q *= p;
      ++f;
    }
  }
  for (auto [p, f] : specs) {
    const FieldSpec &F = field(p, f);
    const std::uint32_t q = F.q();
    for (Fel a = 1; a < q; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
    if (q > 81) continue; // triple laws exhaustive below, sampled above
    for (Fel a = 0; a < q; ++a)
      for (Fel b = 0; b < q; ++b)
        for (Fel c = 0; c < q; ++c) {
          REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
          REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
        }
  }
  // sampled triples on the larger fields
  std::mt19937 rng(20240811);
  for (auto [p, f] : specs) {
    const FieldSpec &F = field(p, f);
    if (F.q() <= 81) continue;
    std::uniform_int_distribution<std::uint32_t> d(0, F.q() - 1);
    for (int t = 0; t < 2000; ++t) {
      Fel a = d(rng), b = d(rng), c = d(rng);
      REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
      REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
    }
  }
}

TEST_CASE("frobenius on GF(9)") {
  const FieldSpec &f9 = field(3, 2);
  // fixes the prime subfield
  for (Fel x : {0u, 1u, 2u}) CHECK(frobenius(x, f9) == x);
  Fel g = f9.generator();
  CHECK(frobenius(g, f9) == f9.pow(g, 3));
  CHECK(frobenius(frobenius(g, f9), f9) == g);
}

TEST_CASE("frobenius fixed points on GF(25) are exactly GF(5)") {
  const FieldSpec &f25 = field(5, 2);
  int fixed = 0;
  for (Fel x = 0; x < 25; ++x)
    if (frobenius(x, f25) == x) ++fixed;
  CHECK(fixed == 5);
}

TEST_CASE("frobenius is additive, multiplicative, involutory") {
  for (auto [p, f] : {std::pair<std::uint32_t, std::uint32_t>{3, 2}, {5, 2}, {3, 4}}) {
    const FieldSpec &F = field(p, f);
    for (Fel a = 0; a < F.q(); ++a) {
      CHECK(frobenius(frobenius(a, F), F) == a);
      for (Fel b = 0; b < F.q(); ++b) {
        REQUIRE(frobenius(F.add(a, b), F) == F.add(frobenius(a, F), frobenius(b, F)));
        REQUIRE(frobenius(F.mul(a, b), F) == F.mul(frobenius(a, F), frobenius(b, F)));
      }
    }
  }
}

TEST_CASE("frobenius rejects non-quadratic extensions") {
  CHECK_THROWS_AS(frobenius(1, field(3, 1)), InputError);
}

TEST_CASE("two_part") {
  CHECK(two_part(80) == 16);
  CHECK(two_part(-6) == 2);
  CHECK(two_part(7) == 1);
  CHECK_THROWS_AS(two_part(0), InputError);
  // multiplicativity on odd * 2-power splits
  std::mt19937 rng(7);
  for (int t = 0; t < 500; ++t) {
    long long odd = 2 * (rng() % 5000) + 1;
    long long pw = 1ll << (rng() % 20);
    CHECK(two_part(odd * pw) == two_part(odd) * two_part(pw));
  }
}

TEST_CASE("tilde relation") {
  CHECK(tilde_related(9, -7));
  CHECK(tilde_related(5, -3));
  CHECK(!tilde_related(7, 9));
  CHECK(tilde_related(3, -5));
  CHECK_THROWS_AS(tilde_related(4, 7), InputError);
  CHECK_THROWS_AS(tilde_related(1, 7), InputError);

  // equivalence relation on a finite sample
  std::vector<long long> sample;
  for (long long v = 3; v <= 41; v += 2) {
    sample.push_back(v);
    sample.push_back(-v);
  }
  for (long long a : sample) CHECK(tilde_related(a, a));
  for (long long a : sample)
    for (long long b : sample) CHECK(tilde_related(a, b) == tilde_related(b, a));
  for (long long a : sample)
    for (long long b : sample)
      for (long long c : sample)
        if (tilde_related(a, b) && tilde_related(b, c)) REQUIRE(tilde_related(a, c));
}

TEST_CASE("modulus is deterministic and verified") {
  const FieldSpec &f1 = field(3, 2);
  const FieldSpec &f2 = field(3, 2);
  CHECK(&f1 == &f2); // interned
  CHECK(f1.modulus() == std::vector<std::uint32_t>{1, 0}); // x^2 + 1 over GF(3)
}
