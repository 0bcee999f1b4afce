#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "twofusion/group.hpp"
#include "twofusion/twogroup.hpp"

using namespace twofusion;
using namespace twofusion::grp;

namespace {

GroupPtr sl2_3() {
  const auto &F = gf::field(3, 1);
  auto ctx = std::make_shared<MatrixContext>(F, 2);
  std::vector<Element> gens{
      make_matrix(F, 2, {1, 1, 0, 1}),
      make_matrix(F, 2, {1, 0, 1, 1}),
  };
  return make_group(ctx, gens, "SL(2,3)", true);
}

GroupPtr dihedral8() {
  auto ctx = std::make_shared<PermContext>(4);
  std::vector<Element> gens{
      make_perm_cycles(4, {{1, 2, 3, 4}}),
      make_perm_cycles(4, {{1, 3}}),
  };
  return make_group(ctx, gens, "D8", true);
}

GroupPtr quaternion8() {
  const auto &F = gf::field(3, 1);
  auto ctx = std::make_shared<MatrixContext>(F, 2);
  // i and j inside SL(2,3)
  std::vector<Element> gens{
      make_matrix(F, 2, {0, 1, 2, 0}),
      make_matrix(F, 2, {1, 1, 1, 2}),
  };
  return make_group(ctx, gens, "Q8", true);
}

GroupPtr sym(int n, const std::string &name) {
  auto ctx = std::make_shared<PermContext>(static_cast<std::uint8_t>(n));
  std::vector<std::uint32_t> cyc;
  for (int i = 1; i <= n; ++i) cyc.push_back(i);
  std::vector<Element> gens{make_perm_cycles(n, {{1, 2}}),
                            make_perm_cycles(n, {cyc})};
  return make_group(ctx, gens, name, true);
}

} // namespace

TEST_CASE("BFS generation: SL(2,3) has order 24") {
  auto g = sl2_3();
  CHECK(g->order() == 24); // q(q^2-1) = 24
}

TEST_CASE("BFS generation: two 3-cycles give A4") {
  auto ctx = std::make_shared<PermContext>(4);
  auto g = make_group(ctx,
                      {make_perm_cycles(4, {{1, 2, 3}}), make_perm_cycles(4, {{2, 3, 4}})},
                      "A4", true);
  CHECK(g->order() == 12);
}

TEST_CASE("BFS generation: empty generator list gives the trivial group") {
  auto ctx = std::make_shared<PermContext>(5);
  auto g = make_group(ctx, {}, "1", true);
  CHECK(g->order() == 1);
}

TEST_CASE("generation cap reports elements found so far") {
  auto ctx = std::make_shared<PermContext>(6);
  std::vector<std::uint32_t> cyc{2, 3, 4, 5, 6, 1};
  try {
    make_group(ctx, {make_perm_cycles(6, {{1, 2}}), make_perm(6, cyc)}, "S6", true, 100);
    FAIL("expected cap error");
  } catch (const CapExceededError &e) {
    CHECK(e.elements_found == 100);
  }
}

TEST_CASE("mixed variants rejected") {
  auto ctx = std::make_shared<PermContext>(4);
  const auto &F = gf::field(3, 1);
  CHECK_THROWS_AS(make_group(ctx, {make_matrix(F, 2, {1, 0, 0, 1})}, "bad"),
                  InputError);
}

TEST_CASE("BFS closure is idempotent") {
  auto g = dihedral8();
  auto s = g->whole_as_subgroup();
  Subgroup regen = subgroup_generated(g, s.elems);
  CHECK(regen.elems == s.elems);
}

TEST_CASE("conjugacy classes of A4: sizes 1,3,4,4") {
  auto ctx = std::make_shared<PermContext>(4);
  auto g = make_group(ctx,
                      {make_perm_cycles(4, {{1, 2, 3}}), make_perm_cycles(4, {{2, 3, 4}})},
                      "A4", true);
  std::multiset<std::uint64_t> sizes;
  for (auto rep : g->conjugacy_class_reps()) sizes.insert(g->class_size(g->class_of(g->elem(rep))));
  CHECK(sizes == std::multiset<std::uint64_t>{1, 3, 4, 4});
}

TEST_CASE("central element forms a singleton class in SL(2,3)") {
  auto g = sl2_3();
  const auto &F = gf::field(3, 1);
  Element minus_i = make_matrix(F, 2, {2, 0, 0, 2});
  CHECK(g->class_size(g->class_of(minus_i)) == 1);
}

TEST_CASE("Q8 has 5 conjugacy classes") {
  auto g = quaternion8();
  REQUIRE(g->order() == 8);
  CHECK(g->class_count() == 5);
}

TEST_CASE("conjugation permutes each conjugacy class") {
  auto g = sl2_3();
  for (const Element &x : g->elements()) {
    std::uint32_t cx = g->class_of(x);
    for (const Element &gen : g->generators())
      REQUIRE(g->class_of(g->conj(x, gen)) == cx);
  }
}

TEST_CASE("witnesses connect class representatives to members") {
  auto g = sym(4, "S4");
  for (std::uint32_t i = 0; i < g->order(); ++i) {
    std::uint32_t cid = g->class_of(i);
    Element w = g->witness_from_rep(i);
    REQUIRE(g->conj(g->class_rep(cid), w) == g->elem(i));
  }
}

TEST_CASE("centralizer examples") {
  auto g = sl2_3();
  const auto &F = gf::field(3, 1);
  Element minus_i = make_matrix(F, 2, {2, 0, 0, 2});
  CHECK(centralizer(*g, minus_i).order() == 24); // central

  auto d8 = dihedral8();
  Element s = make_perm_cycles(4, {{1, 3}});
  CHECK(centralizer(*d8, s).order() == 4);
}

TEST_CASE("normalizer of a cyclic subgroup of S4 has order 8") {
  auto g = sym(4, "S4");
  Subgroup c4 = subgroup_generated(g, {make_perm_cycles(4, {{1, 2, 3, 4}})});
  CHECK(normalizer(*g, c4).order() == 8);
}

TEST_CASE("transporter on identical tuples returns identity and centralizer") {
  auto g = dihedral8();
  Element s = make_perm_cycles(4, {{1, 3}});
  auto r = transporter(*g, {s}, {s});
  REQUIRE(r.has_value());
  CHECK(r->witness == g->identity());
  CHECK(r->centralizer.order() == 4);
}

TEST_CASE("transporter in D8 moves a reflection to its partner") {
  auto g = dihedral8();
  Element s = make_perm_cycles(4, {{1, 3}});
  Element r2s = make_perm_cycles(4, {{2, 4}}); // r^2 s
  auto res = transporter(*g, {s}, {r2s});
  REQUIRE(res.has_value());
  CHECK(g->conj(s, res->witness) == r2s);
  // brute-force cross-check of the full solution set
  std::set<Element> sols;
  for (const Element &e : g->elements())
    if (g->conj(s, e) == r2s) sols.insert(e);
  std::set<Element> coset;
  for (const Element &c : res->centralizer.elems) coset.insert(g->mul(c, res->witness));
  CHECK(sols == coset);
  // least witness in canonical order
  CHECK(*sols.begin() == res->witness);
}

TEST_CASE("transporter in Q8 and SL(2,3): i to j, and i to -i") {
  auto g = quaternion8();
  const auto &F = gf::field(3, 1);
  Element i = make_matrix(F, 2, {0, 1, 2, 0});
  Element j = make_matrix(F, 2, {1, 1, 1, 2});
  Element mi = make_matrix(F, 2, {0, 2, 1, 0});
  // brute force inside Q8: <i> is normal, so i is conjugate to -i (witness j)
  // but not to j; the order-3 cycle i -> j lives only in the ambient SL(2,3)
  CHECK(!transporter(*g, {i}, {j}).has_value());
  auto rimi = transporter(*g, {i}, {mi});
  REQUIRE(rimi.has_value());
  CHECK(g->conj(i, rimi->witness) == mi);
  auto amb = sl2_3();
  auto rij = transporter(*amb, {i}, {j});
  REQUIRE(rij.has_value());
  CHECK(amb->conj(i, rij->witness) == j);
}

TEST_CASE("transporter returns none when no witness exists") {
  auto g = dihedral8();
  Element s = make_perm_cycles(4, {{1, 3}});
  Element r = make_perm_cycles(4, {{1, 2, 3, 4}});
  CHECK(!transporter(*g, {s}, {r}).has_value());
}

TEST_CASE("transporter witness iff conjugate, against brute force") {
  auto g = sym(4, "S4");
  for (std::uint32_t a = 0; a < g->order(); a += 3) {
    for (std::uint32_t b = 0; b < g->order(); b += 5) {
      bool brute = false;
      for (const Element &e : g->elements())
        if (g->conj(g->elem(a), e) == g->elem(b)) {
          brute = true;
          break;
        }
      CHECK(transporter(*g, {g->elem(a)}, {g->elem(b)}).has_value() == brute);
    }
  }
}

TEST_CASE("odd core: C6 -> C3") {
  auto ctx = std::make_shared<PermContext>(6);
  auto g = make_group(ctx, {make_perm_cycles(6, {{1, 2, 3, 4, 5, 6}})}, "C6", true);
  CHECK(odd_core(*g).order() == 3);
}

TEST_CASE("odd core: S4 -> trivial") {
  auto g = sym(4, "S4");
  CHECK(odd_core(*g).order() == 1);
}

TEST_CASE("odd core: C3 x Q8 -> C3") {
  const auto &F = gf::field(3, 1);
  // represent C3 x Q8 as permutation x matrix is awkward; use perms on 3+8 points
  auto ctx = std::make_shared<PermContext>(11);
  // Q8 acting regularly on 8 points {4..11}: right multiplication action
  auto q8 = quaternion8();
  std::vector<Element> q8elems = q8->elements();
  auto perm_of = [&](const Element &x) {
    std::vector<std::uint32_t> img(11);
    img[0] = 2;
    img[1] = 3;
    img[2] = 1;
    for (std::size_t k = 0; k < 8; ++k) {
      Element prod = q8->mul(q8elems[k], x);
      std::size_t j = std::find(q8elems.begin(), q8elems.end(), prod) - q8elems.begin();
      img[3 + k] = static_cast<std::uint32_t>(4 + j);
    }
    return make_perm(11, img);
  };
  (void)F;
  auto g = make_group(ctx, {perm_of(q8->generators()[0]), perm_of(q8->generators()[1])},
                      "C3xQ8", true);
  REQUIRE(g->order() == 24);
  CHECK(odd_core(*g).order() == 3);
}

TEST_CASE("odd core contains every odd-order normal subgroup (oracle)") {
  // oracle: exhaustive normal-subgroup scan on small groups
  std::vector<GroupPtr> groups{sym(4, "S4"), dihedral8(), sl2_3()};
  {
    auto ctx = std::make_shared<PermContext>(6);
    groups.push_back(make_group(ctx, {make_perm_cycles(6, {{1, 2, 3, 4, 5, 6}})}, "C6", true));
    groups.push_back(make_group(
        ctx, {make_perm_cycles(6, {{1, 2, 3}}), make_perm_cycles(6, {{4, 5}})}, "C3xC2", true));
  }
  for (auto &g : groups) {
    Subgroup core = odd_core(*g);
    for (const Subgroup &n : normal_subgroups(*g)) {
      if (n.order() % 2 == 1) {
        CAPTURE(g->descriptor());
        CHECK(core.contains_all(n));
      }
    }
    CHECK(subgroup_is_normal_in_parent(*g, core));
    CHECK(core.order() % 2 == 1);
  }
}

TEST_CASE("z_star examples") {
  CHECK(z_star(*sl2_3()).order() == 2); // <-I>
  auto ctx = std::make_shared<PermContext>(6);
  auto c6 = make_group(ctx, {make_perm_cycles(6, {{1, 2, 3, 4, 5, 6}})}, "C6", true);
  CHECK(z_star(*c6).order() == 6); // abelian
  CHECK(z_star(*sym(4, "S4")).order() == 1);
}

TEST_CASE("central quotient: SL(2,3)/<-I> has order 12") {
  auto g = sl2_3();
  const auto &F = gf::field(3, 1);
  Subgroup z = subgroup_generated(g, {make_matrix(F, 2, {2, 0, 0, 2})});
  auto q = central_quotient(*g, z);
  CHECK(q->order() == 12);
}

TEST_CASE("central quotient by the trivial subgroup is an isomorphic copy") {
  auto g = dihedral8();
  auto q = central_quotient(*g, g->trivial_subgroup());
  CHECK(q->order() == g->order());
  CHECK(groups_isomorphic(*g, *q).has_value());
}

TEST_CASE("quotient respects orders and the projection is a homomorphism") {
  auto g = sl2_3();
  const auto &F = gf::field(3, 1);
  Subgroup z = subgroup_generated(g, {make_matrix(F, 2, {2, 0, 0, 2})});
  auto q = central_quotient(*g, z);
  CHECK(q->order() * z.order() == g->order());
  const GroupContext &qc = *q->context();
  for (const Element &a : g->generators())
    for (const Element &b : g->generators())
      REQUIRE(qc.reduce(g->mul(a, b)) ==
              qc.multiply(qc.reduce(a), qc.reduce(b)));
}

TEST_CASE("central quotient rejects non-central subgroups") {
  auto g = sym(4, "S4");
  Subgroup h = subgroup_generated(g, {make_perm_cycles(4, {{1, 2}})});
  CHECK_THROWS_AS(central_quotient(*g, h), InputError);
}

TEST_CASE("group predicates") {
  // A5: perfect, simple, quasisimple
  auto ctx5 = std::make_shared<PermContext>(5);
  auto a5 = make_group(ctx5,
                       {make_perm_cycles(5, {{1, 2, 3}}), make_perm_cycles(5, {{3, 4, 5}})},
                       "A5", true);
  REQUIRE(a5->order() == 60);
  auto pa5 = group_predicates(*a5);
  CHECK(pa5.perfect);
  CHECK(pa5.simple);
  CHECK(pa5.quasisimple);

  // SL(2,5): perfect, not simple, quasisimple
  const auto &F5 = gf::field(5, 1);
  auto ctx = std::make_shared<MatrixContext>(F5, 2);
  auto sl25 = make_group(ctx,
                         {make_matrix(F5, 2, {1, 1, 0, 1}), make_matrix(F5, 2, {1, 0, 1, 1})},
                         "SL(2,5)", true);
  REQUIRE(sl25->order() == 120);
  auto p25 = group_predicates(*sl25);
  CHECK(p25.perfect);
  CHECK(!p25.simple);
  CHECK(p25.quasisimple);

  // S4: none of the three
  auto ps4 = group_predicates(*sym(4, "S4"));
  CHECK(!ps4.perfect);
  CHECK(!ps4.simple);
  CHECK(!ps4.quasisimple);
}

TEST_CASE("SL(2,5)/<-I> is simple of order 60") {
  const auto &F5 = gf::field(5, 1);
  auto ctx = std::make_shared<MatrixContext>(F5, 2);
  auto sl25 = make_group(ctx,
                         {make_matrix(F5, 2, {1, 1, 0, 1}), make_matrix(F5, 2, {1, 0, 1, 1})},
                         "SL(2,5)", true);
  Subgroup z = subgroup_generated(sl25, {make_matrix(F5, 2, {4, 0, 0, 4})});
  auto q = central_quotient(*sl25, z);
  CHECK(q->order() == 60);
  CHECK(group_predicates(*q).simple);
}

TEST_CASE("subgroup conjugator agrees with brute force on S4") {
  auto g = sym(4, "S4");
  Subgroup a = subgroup_generated(g, {make_perm_cycles(4, {{1, 2}})});
  Subgroup b = subgroup_generated(g, {make_perm_cycles(4, {{3, 4}})});
  Subgroup c = subgroup_generated(g, {make_perm_cycles(4, {{1, 2}, {3, 4}})});
  auto w = subgroup_conjugator(*g, a, b);
  REQUIRE(w.has_value());
  CHECK(a.conjugated(*w).set_equals(b));
  CHECK(!subgroup_conjugator(*g, a, c).has_value()); // different classes
}

TEST_CASE("derived subgroup of S4 is A4") {
  auto g = sym(4, "S4");
  CHECK(derived_subgroup(*g).order() == 12);
}

TEST_CASE("E8 subgroups of central quotients contain images of involutions") {
  // for small G with cyclic central Z: every E8 subgroup of G/Z has an
  // involution that is the image of an involution of G
  std::vector<std::pair<GroupPtr, std::vector<Element>>> cases;
  {
    // C4 x C2 x C2 x C2, Z generated by the square of the C4 part
    auto ctx = std::make_shared<PermContext>(10);
    auto g = make_group(ctx,
                        {make_perm_cycles(10, {{1, 2, 3, 4}}), make_perm_cycles(10, {{5, 6}}),
                         make_perm_cycles(10, {{7, 8}}), make_perm_cycles(10, {{9, 10}})},
                        "C4xE8", true);
    cases.emplace_back(g, std::vector<Element>{make_perm_cycles(10, {{1, 3}, {2, 4}})});
  }
  {
    // D8 x C2 x C2, Z the center of the dihedral factor
    auto ctx = std::make_shared<PermContext>(8);
    auto g = make_group(ctx,
                        {make_perm_cycles(8, {{1, 2, 3, 4}}), make_perm_cycles(8, {{1, 3}}),
                         make_perm_cycles(8, {{5, 6}}), make_perm_cycles(8, {{7, 8}})},
                        "D8xC2xC2", true);
    cases.emplace_back(g, std::vector<Element>{make_perm_cycles(8, {{1, 3}, {2, 4}})});
  }
  for (auto &[g, zgens] : cases) {
    Subgroup z = subgroup_generated(g, zgens);
    GroupPtr q = central_quotient(*g, z);
    Subgroup qwhole = q->whole_as_subgroup();
    const GroupContext &qc = *q->context();
    int e8s = 0;
    for (const Subgroup &e8 : elementary_abelian_subgroups(qwhole, 3)) {
      if (e8.order() != 8) continue;
      ++e8s;
      bool found = false;
      for (const Element &v : e8.elems) {
        if (v == qc.identity()) continue;
        // an involution of G in the preimage coset of v
        for (const Element &x : g->elements())
          if (qc.reduce(x) == v && g->mul(x, x) == g->identity() &&
              !(x == g->identity())) {
            found = true;
            break;
          }
        if (found) break;
      }
      CAPTURE(g->descriptor());
      REQUIRE(found);
    }
    CHECK(e8s > 0);
  }
}

TEST_CASE("odd_generated: O^2(SL(2,3)) is the whole group") {
  // the normal closure of the order-3 elements is all of SL(2,3); the
  // intersection with a Sylow 2-subgroup is Q8
  auto g = sl2_3();
  Subgroup o2 = odd_generated(*g);
  CHECK(o2.order() == 24);
  auto s4 = [&] {
    auto ctx = std::make_shared<PermContext>(4);
    return make_group(ctx, {make_perm_cycles(4, {{1, 2}}), make_perm_cycles(4, {{1, 2, 3, 4}})},
                      "S4", true);
  }();
  CHECK(odd_generated(*s4).order() == 12); // A4
}
