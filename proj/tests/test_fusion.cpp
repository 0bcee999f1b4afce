#include "doctest.h"

#include <algorithm>
#include <set>

#include "twofusion/classical.hpp"
#include "twofusion/fusion.hpp"

using namespace twofusion;
using namespace twofusion::grp;
using namespace twofusion::fusion;
using classical::GroupSpec;

namespace {

FusionPtr fusion_of(const std::string &spec_text) {
  GroupPtr g = classical::make_group(GroupSpec::parse(spec_text));
  g->enumerate();
  return build_fusion(g);
}

std::multiset<std::size_t> involution_class_sizes(const FusionData &f) {
  std::multiset<std::size_t> sizes;
  for (const auto &c : f.involution_classes().classes) sizes.insert(c.size());
  return sizes;
}

GroupPtr sl2_3() {
  GroupPtr g = classical::make_group(GroupSpec::parse("SL(2,3)"));
  g->enumerate();
  return g;
}

} // namespace

TEST_CASE("F_S(S) on Q8: every hom set is inner-induced") {
  // ambient = S itself
  GroupPtr sl23 = sl2_3();
  Subgroup q8 = sylow_2_subgroup(sl23);
  REQUIRE(q8.order() == 8);
  auto holder = make_group(sl23->context(), q8.canonical_generators(), "Q8", true, 32);
  FusionPtr f = build_fusion(holder);
  CHECK(f->is_nilpotent());
  // Aut_F(Q8) = Inn(Q8), order 4
  std::uint16_t whole = f->whole_subgroup();
  CHECK(f->hom_set(whole, whole).maps.size() == 4);
}

TEST_CASE("F(PSL(2,7)) over D8: all five involutions fused") {
  FusionPtr f = fusion_of("PSL(2,7)");
  CHECK(f->sylow_order() == 8);
  CHECK(involution_class_sizes(*f) == std::multiset<std::size_t>{5});
}

TEST_CASE("F(SL(2,3)): Aut_F(Q8) measured by brute force") {
  GroupPtr g = sl2_3();
  FusionPtr f = build_fusion(g);
  REQUIRE(f->sylow_order() == 8);
  std::uint16_t whole = f->whole_subgroup();
  const MorphismSet &aut = f->hom_set(whole, whole);
  // independent oracle: distinct conjugation graphs over all of G
  std::set<std::vector<std::uint16_t>> graphs;
  for (const Element &x : g->elements()) {
    bool maps_in = true;
    std::vector<std::uint16_t> graph;
    for (const Element &e : f->sylow_elements()) {
      Element img = g->conj(e, x);
      try {
        graph.push_back(f->element_index(img));
      } catch (const InputError &) {
        maps_in = false;
        break;
      }
    }
    if (maps_in) graphs.insert(graph);
  }
  CHECK(graphs.size() == 12); // |N_G(S) : C_G(S)| = 24/2
  CHECK(aut.maps.size() == graphs.size());
  // the order-3 automorphism is present
  bool has_order3 = false;
  for (const Morphism &m : aut.maps) {
    // compose the permutation-on-indices with itself
    const auto &dom = f->subgroups()[whole];
    std::vector<std::uint16_t> p(dom.size());
    for (std::size_t k = 0; k < dom.size(); ++k)
      p[k] = static_cast<std::uint16_t>(
          std::lower_bound(dom.begin(), dom.end(), m.images[k]) - dom.begin());
    std::vector<std::uint16_t> p2(dom.size()), p3(dom.size());
    for (std::size_t k = 0; k < dom.size(); ++k) p2[k] = p[p[k]];
    for (std::size_t k = 0; k < dom.size(); ++k) p3[k] = p[p2[k]];
    bool id3 = true, id1 = true;
    for (std::size_t k = 0; k < dom.size(); ++k) {
      if (p3[k] != k) id3 = false;
      if (p[k] != k) id1 = false;
    }
    if (id3 && !id1) has_order3 = true;
  }
  CHECK(has_order3);
  CHECK(!f->is_nilpotent());
}

TEST_CASE("hom sets: trivial domain has exactly one map") {
  FusionPtr f = fusion_of("SL(2,3)");
  std::uint16_t triv = f->trivial_subgroup();
  CHECK(f->hom_set(triv, triv).maps.size() == 1);
  CHECK(f->hom_set(triv, f->whole_subgroup()).maps.size() == 1);
}

TEST_CASE("hom set counting against the double-loop oracle") {
  // |Hom_F(<x>, S)| equals the number of distinct restrictions c_g|<x> with
  // x^g in S, for every cyclic subgroup; oracle loops over all of G
  for (const char *spec : {"SL(2,3)", "PSL(2,7)", "Alt(6)"}) {
    FusionPtr f = fusion_of(spec);
    GroupPtr g = f->ambient();
    std::uint16_t whole = f->whole_subgroup();
    std::set<std::uint16_t> done;
    for (std::uint16_t i = 0; i < f->sylow_order(); ++i) {
      std::uint16_t c = f->cyclic_subgroup_of(i);
      if (!done.insert(c).second) continue;
      const auto &dom = f->subgroups()[c];
      std::set<std::vector<std::uint16_t>> oracle;
      for (const Element &x : g->elements()) {
        std::vector<std::uint16_t> graph;
        bool ok = true;
        for (auto di : dom) {
          Element img = g->conj(f->sylow_elements()[di], x);
          auto found = g->index_of(img);
          REQUIRE(found.has_value());
          try {
            graph.push_back(f->element_index(img));
          } catch (const InputError &) {
            ok = false;
            break;
          }
        }
        if (ok) oracle.insert(graph);
      }
      CAPTURE(spec);
      REQUIRE(f->hom_set(c, whole).maps.size() == oracle.size());
    }
  }
}

TEST_CASE("hom sets match the full double-loop oracle on every pair") {
  // oracle: for each subgroup pair (P,Q), collect the graphs of c_g|_P over
  // every g in G with P^g inside Q
  for (const char *spec : {"SL(2,3)", "PSL(2,7)", "SU(2,3)", "PSL(2,5)"}) {
    FusionPtr f = fusion_of(spec);
    GroupPtr g = f->ambient();
    const auto &subs = f->subgroups();
    for (std::uint16_t p = 0; p < subs.size(); ++p) {
      const auto &dom = subs[p];
      for (std::uint16_t q = 0; q < subs.size(); ++q) {
        std::vector<bool> in_q(f->sylow_order(), false);
        for (auto i : subs[q]) in_q[i] = true;
        std::set<std::vector<std::uint16_t>> oracle;
        for (const Element &x : g->elements()) {
          std::vector<std::uint16_t> graph;
          graph.reserve(dom.size());
          bool ok = true;
          for (auto di : dom) {
            Element img = g->conj(f->sylow_elements()[di], x);
            std::uint16_t idx;
            try {
              idx = f->element_index(img);
            } catch (const InputError &) {
              ok = false;
              break;
            }
            if (!in_q[idx]) {
              ok = false;
              break;
            }
            graph.push_back(idx);
          }
          if (ok) oracle.insert(graph);
        }
        std::set<std::vector<std::uint16_t>> computed;
        for (const Morphism &m : f->hom_set(p, q).maps) computed.insert(m.images);
        CAPTURE(spec);
        CAPTURE(p);
        CAPTURE(q);
        REQUIRE(computed == oracle);
      }
    }
  }
}

TEST_CASE("morphism realization: stored witnesses reproduce every map") {
  for (const char *spec : {"SL(2,3)", "PSL(2,7)", "M11"}) {
    FusionPtr f = fusion_of(spec);
    const auto &ctx = *f->ctx();
    for (std::uint16_t p = 0; p < f->subgroups().size(); ++p) {
      const auto &dom = f->subgroups()[p];
      for (const Morphism &m : f->hom_set(p, f->whole_subgroup()).maps)
        for (std::size_t k = 0; k < dom.size(); ++k) {
          Element img = ctx.conjugate(f->sylow_elements()[dom[k]], m.witness);
          REQUIRE(img == f->sylow_elements()[m.images[k]]);
        }
    }
  }
}

TEST_CASE("Alperin consistency: fusion classes equal ambient conjugacy on S") {
  for (const char *spec : {"SL(2,3)", "PSL(2,7)", "Alt(6)", "Sym(5)"}) {
    FusionPtr f = fusion_of(spec);
    GroupPtr g = f->ambient();
    for (std::uint16_t i = 0; i < f->sylow_order(); ++i)
      for (std::uint16_t j = 0; j < f->sylow_order(); ++j) {
        bool same_f = f->element_class(i) == f->element_class(j);
        bool same_g = g->class_of(f->sylow_elements()[i]) ==
                      g->class_of(f->sylow_elements()[j]);
        REQUIRE(same_f == same_g);
      }
  }
}

TEST_CASE("strongly closed subgroups") {
  FusionPtr fsl = fusion_of("SL(2,3)");
  // <-I> is central, hence strongly closed
  const auto &F3 = gf::field(3, 1);
  Element minus_i = make_matrix(F3, 2, {2, 0, 0, 2});
  SIndexSet a{fsl->element_index(fsl->ctx()->identity()), fsl->element_index(minus_i)};
  std::sort(a.begin(), a.end());
  CHECK(fsl->is_strongly_closed(a));
  // the whole Sylow group is always strongly closed
  CHECK(fsl->is_strongly_closed(fsl->subgroups()[fsl->whole_subgroup()]));
  // in PSL(2,7), no single involution generates a strongly closed subgroup
  FusionPtr fp = fusion_of("PSL(2,7)");
  for (const auto &c : fp->involution_classes().classes)
    for (auto i : c) {
      SIndexSet cyc = fp->subgroups()[fp->cyclic_subgroup_of(i)];
      CHECK(!fp->is_strongly_closed(cyc));
    }
}

TEST_CASE("focal and hyperfocal subgroups") {
  FusionPtr f = fusion_of("SL(2,3)");
  // SL(2,3)' = Q8 = O^2(SL(2,3)) cap S
  CHECK(f->focal_subgroup().size() == 8);
  CHECK(f->hyperfocal_subgroup().size() == 8);

  // no fusion on an abelian Sylow group realized by S itself
  auto c4c2 = [] {
    auto ctx = std::make_shared<PermContext>(6);
    return make_group(ctx,
                      {make_perm_cycles(6, {{1, 2, 3, 4}}), make_perm_cycles(6, {{5, 6}})},
                      "C4xC2", true);
  }();
  FusionPtr fs = build_fusion(c4c2);
  CHECK(fs->focal_subgroup().size() == 1);

  FusionPtr fp = fusion_of("PSL(2,7)");
  CHECK(fp->focal_subgroup().size() == fp->sylow_order()); // simple group
}

TEST_CASE("fusion center examples") {
  FusionPtr f5 = fusion_of("SL(2,5)");
  SIndexSet z = f5->fusion_center();
  REQUIRE(z.size() == 2); // <-I>
  FusionPtr f33 = fusion_of("SL(3,3)");
  CHECK(f33->fusion_center().size() == 1); // (3, 3-1) = 1... center of S only
  FusionPtr fs = fusion_of("SL(2,3)");
  CHECK(fs->fusion_center().size() == 2);
}

TEST_CASE("factor system: modulo S gives the one-object system") {
  FusionPtr f = fusion_of("SL(2,3)");
  FusionPtr q = f->factor_system(f->subgroups()[f->whole_subgroup()]);
  CHECK(q->sylow_order() == 1);
  CHECK(q->subgroups().size() == 1);
}

TEST_CASE("factor system: modulo the trivial subgroup changes nothing") {
  FusionPtr f = fusion_of("SL(2,3)");
  FusionPtr q = f->factor_system(f->subgroups()[f->trivial_subgroup()]);
  CHECK(q->sylow_order() == f->sylow_order());
  auto iso = is_isomorphic(*f, *q);
  CHECK(iso.result == IsoResult::Yes);
}

TEST_CASE("factor system: F(SL(2,5)) mod <-I> is F(PSL(2,5))") {
  FusionPtr f = fusion_of("SL(2,5)");
  const auto &F5 = gf::field(5, 1);
  Element minus_i = make_matrix(F5, 2, {4, 0, 0, 4});
  SIndexSet z{f->element_index(f->ctx()->identity()), f->element_index(minus_i)};
  std::sort(z.begin(), z.end());
  FusionPtr fq = f->factor_system(z);
  FusionPtr fp = fusion_of("PSL(2,5)");
  auto iso = is_isomorphic(*fq, *fp);
  CHECK(iso.result == IsoResult::Yes);
}

TEST_CASE("factor system rejects non-normal subgroups of S") {
  FusionPtr f = fusion_of("Sym(4)");
  // a non-normal C2 inside the dihedral Sylow group
  bool threw = false;
  for (std::uint16_t p = 0; p < f->subgroups().size(); ++p) {
    if (f->subgroups()[p].size() != 2) continue;
    try {
      f->factor_system(f->subgroups()[p]);
    } catch (const InputError &) {
      threw = true;
    }
  }
  CHECK(threw);
}

TEST_CASE("factor systems against central quotients (canonical isomorphism)") {
  // F_S(G)/(S cap N) is isomorphic to the fusion system of G/N
  GroupPtr sl25 = classical::make_group(GroupSpec::parse("SL(2,5)"));
  sl25->enumerate();
  FusionPtr f = build_fusion(sl25);
  const auto &F5 = gf::field(5, 1);
  Subgroup zsub = subgroup_generated(sl25, {make_matrix(F5, 2, {4, 0, 0, 4})});
  GroupPtr psl = central_quotient(*sl25, zsub, "PSL(2,5)-from-quotient");
  FusionPtr fq = build_fusion(psl);
  SIndexSet zidx = f->index_set_of(zsub.elems);
  FusionPtr ffac = f->factor_system(zidx);
  auto iso = is_isomorphic(*ffac, *fq);
  CHECK(iso.result == IsoResult::Yes);
}

TEST_CASE("factor-system morphisms are realized by their reduced witnesses") {
  FusionPtr f = fusion_of("SL(2,5)");
  const auto &F5 = gf::field(5, 1);
  Element minus_i = make_matrix(F5, 2, {4, 0, 0, 4});
  SIndexSet z{f->element_index(f->ctx()->identity()), f->element_index(minus_i)};
  std::sort(z.begin(), z.end());
  FusionPtr fq = f->factor_system(z);
  const auto &qctx = *fq->ctx();
  int checked = 0;
  for (std::uint16_t p = 0; p < fq->subgroups().size(); ++p) {
    const auto &dom = fq->subgroups()[p];
    for (const Morphism &m : fq->hom_set(p, fq->whole_subgroup()).maps)
      for (std::size_t k = 0; k < dom.size(); ++k) {
        Element img = qctx.conjugate(fq->sylow_elements()[dom[k]], m.witness);
        REQUIRE(img == fq->sylow_elements()[m.images[k]]);
        ++checked;
      }
  }
  CHECK(checked > 0);
}

TEST_CASE("nilpotency detection") {
  FusionPtr fs = fusion_of("SL(2,3)");
  CHECK(!fs->is_nilpotent());
  auto d8 = [] {
    auto ctx = std::make_shared<PermContext>(4);
    return make_group(ctx, {make_perm_cycles(4, {{1, 2, 3, 4}}), make_perm_cycles(4, {{1, 3}})},
                      "D8", true);
  }();
  FusionPtr fd = build_fusion(d8);
  CHECK(fd->is_nilpotent());
}

TEST_CASE("negative control: F(PSL(2,9)) vs nilpotent D8 fusion") {
  FusionPtr f1 = fusion_of("PSL(2,9)");
  auto d8 = [] {
    auto ctx = std::make_shared<PermContext>(4);
    return make_group(ctx, {make_perm_cycles(4, {{1, 2, 3, 4}}), make_perm_cycles(4, {{1, 3}})},
                      "D8", true);
  }();
  FusionPtr f2 = build_fusion(d8);
  auto iso = is_isomorphic(*f1, *f2);
  CHECK(iso.result == IsoResult::No);
}

TEST_CASE("flagship: F(Alt(7)) isomorphic to F(PSL(2,9))") {
  FusionPtr fa = fusion_of("Alt(7)");
  FusionPtr fp = fusion_of("PSL(2,9)");
  auto iso = is_isomorphic(*fa, *fp);
  REQUIRE(iso.result == IsoResult::Yes);
  CHECK(verify_certificate(*fa, *fp, *iso.certificate));
  // serialization round-trip re-verifies
  std::string js = certificate_to_json(*fa, *fp, *iso.certificate);
  IsoCertificate back = certificate_from_json(*fa, js);
  CHECK(verify_certificate(*fa, *fp, back));
}

TEST_CASE("isomorphism is reflexive and symmetric on a battery") {
  std::vector<std::string> specs{"SL(2,3)", "PSL(2,7)", "PSL(2,9)"};
  std::vector<FusionPtr> fs;
  for (const auto &s : specs) fs.push_back(fusion_of(s));
  for (auto &f : fs) {
    auto self = is_isomorphic(*f, *f);
    REQUIRE(self.result == IsoResult::Yes);
  }
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) {
      auto ab = is_isomorphic(*fs[i], *fs[j]);
      auto ba = is_isomorphic(*fs[j], *fs[i]);
      CHECK((ab.result == IsoResult::Yes) == (ba.result == IsoResult::Yes));
    }
}

TEST_CASE("strongly closed subgroups when S = Q8 x B") {
  // G = SL(2,3) x B with B a 2-group: A = Q8 x 1 and 1 x B are strongly
  // closed, Aut_F(S) has an element of order 3 on A and identity on B;
  // every strongly closed subgroup must contain or centralize A
  const auto &F3 = gf::field(3, 1);
  // represent SL(2,3) x C4 on permutations: regular action of SL(2,3) is
  // degree 24; cheaper: matrices block-embedded in GL(4,3)
  auto ctx = std::make_shared<MatrixContext>(F3, 4);
  auto embed = [&](const std::vector<std::uint32_t> &m2, bool top) {
    std::vector<std::uint32_t> m(16, 0);
    m[0] = m[5] = m[10] = m[15] = 1;
    if (top) {
      m[0] = m2[0];
      m[1] = m2[1];
      m[4] = m2[2];
      m[5] = m2[3];
    } else {
      m[10] = m2[0];
      m[11] = m2[1];
      m[14] = m2[2];
      m[15] = m2[3];
    }
    return make_matrix(F3, 4, m);
  };
  // SL(2,3) top, C4 = <[[0,1],[-1,0]]> bottom
  auto g = make_group(ctx,
                      {embed({1, 1, 0, 1}, true), embed({1, 0, 1, 1}, true),
                       embed({0, 1, 2, 0}, false)},
                      "SL(2,3)xC4", true);
  REQUIRE(g->order() == 96);
  FusionPtr f = build_fusion(g);
  REQUIRE(f->sylow_order() == 32);

  // locate A = Q8 x 1 and B = 1 x C4 as index sets
  Subgroup q8top = subgroup_generated(g, {embed({0, 1, 2, 0}, true), embed({1, 1, 1, 2}, true)});
  REQUIRE(q8top.order() == 8);
  SIndexSet a = f->index_set_of(q8top.elems);
  Subgroup c4bot = subgroup_generated(g, {embed({0, 1, 2, 0}, false)});
  SIndexSet b = f->index_set_of(c4bot.elems);
  CHECK(f->is_strongly_closed(a));
  CHECK(f->is_strongly_closed(b));

  // every strongly F-closed subgroup contains or centralizes A
  const auto &ctx_s = *f->ctx();
  for (std::uint16_t p = 0; p < f->subgroups().size(); ++p) {
    const SIndexSet &c = f->subgroups()[p];
    if (!f->is_strongly_closed(c)) continue;
    bool contains = std::includes(c.begin(), c.end(), a.begin(), a.end());
    bool centralizes = true;
    for (auto ci : c)
      for (auto ai : a)
        if (!(ctx_s.multiply(f->sylow_elements()[ci], f->sylow_elements()[ai]) ==
              ctx_s.multiply(f->sylow_elements()[ai], f->sylow_elements()[ci])))
          centralizes = false;
    CAPTURE(p);
    REQUIRE((contains || centralizes));
  }
}

TEST_CASE("category closure: composites of cached morphisms are cached") {
  for (const char *spec : {"SL(2,3)", "PSL(2,7)"}) {
    FusionPtr f = fusion_of(spec);
    std::uint16_t whole = f->whole_subgroup();
    int composed = 0;
    for (std::uint16_t p = 0; p < f->subgroups().size() && composed < 400; ++p) {
      const auto &dom_p = f->subgroups()[p];
      for (const Morphism &alpha : f->hom_set(p, whole).maps) {
        // codomain subgroup of the morphism = its image set
        SIndexSet img = alpha.images;
        std::sort(img.begin(), img.end());
        std::uint16_t r = f->subgroup_index(img);
        for (const Morphism &beta : f->hom_set(r, whole).maps) {
          // graph of beta after alpha on dom_p
          const auto &dom_r = f->subgroups()[r];
          std::vector<std::uint16_t> comp(dom_p.size());
          for (std::size_t k = 0; k < dom_p.size(); ++k) {
            std::size_t pos =
                std::lower_bound(dom_r.begin(), dom_r.end(), alpha.images[k]) -
                dom_r.begin();
            comp[k] = beta.images[pos];
          }
          bool found = false;
          for (const Morphism &m : f->hom_set(p, whole).maps)
            if (m.images == comp) found = true;
          REQUIRE(found);
          if (++composed >= 400) break;
        }
        if (composed >= 400) break;
      }
    }
    CHECK(composed > 0);
  }
}

TEST_CASE("restriction closure: restrictions of stored morphisms are morphisms") {
  FusionPtr f = fusion_of("SL(2,3)");
  std::uint16_t whole = f->whole_subgroup();
  int checked = 0;
  for (std::uint16_t p = 0; p < f->subgroups().size(); ++p) {
    const auto &dom_p = f->subgroups()[p];
    for (const Morphism &alpha : f->hom_set(p, whole).maps) {
      for (std::uint16_t q = 0; q < f->subgroups().size(); ++q) {
        const auto &dom_q = f->subgroups()[q];
        if (q == p ||
            !std::includes(dom_p.begin(), dom_p.end(), dom_q.begin(), dom_q.end()))
          continue;
        std::vector<std::uint16_t> restricted(dom_q.size());
        for (std::size_t k = 0; k < dom_q.size(); ++k) {
          std::size_t pos =
              std::lower_bound(dom_p.begin(), dom_p.end(), dom_q[k]) - dom_p.begin();
          restricted[k] = alpha.images[pos];
        }
        bool found = false;
        for (const Morphism &m : f->hom_set(q, whole).maps)
          if (m.images == restricted) found = true;
        REQUIRE(found);
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("Hom(<i>, <j>) in F(SL(2,3)) is nonempty") {
  FusionPtr f = fusion_of("SL(2,3)");
  const auto &F3 = gf::field(3, 1);
  Element i = make_matrix(F3, 2, {0, 1, 2, 0});
  Element j = make_matrix(F3, 2, {1, 1, 1, 2});
  std::uint16_t ci = f->cyclic_subgroup_of(f->element_index(i));
  std::uint16_t cj = f->cyclic_subgroup_of(f->element_index(j));
  CHECK(!f->hom_set(ci, cj).maps.empty());
}

TEST_CASE("build_fusion rejects non-Sylow subgroups") {
  GroupPtr g = sl2_3();
  const auto &F3 = gf::field(3, 1);
  Subgroup c4 = subgroup_generated(g, {make_matrix(F3, 2, {0, 1, 2, 0})});
  CHECK_THROWS_AS(build_fusion(g, c4), InputError);
}
