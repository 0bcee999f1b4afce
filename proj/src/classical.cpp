#include "twofusion/classical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace twofusion::classical {

using gf::Fel;
using gf::FieldSpec;
using namespace grp;

// --------------------------------------------------------------------- specs

namespace {

const std::map<std::string, Family> kFamilies = {
    {"GL", Family::GL},   {"SL", Family::SL},   {"GU", Family::GU},
    {"SU", Family::SU},   {"PGL", Family::PGL}, {"PSL", Family::PSL},
    {"PGU", Family::PGU}, {"PSU", Family::PSU}, {"Alt", Family::Alt},
    {"Sym", Family::Sym}};

std::string family_name(Family f) {
  for (const auto &[k, v] : kFamilies)
    if (v == f) return k;
  return "M11";
}

unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > 0xFFFFFFFFFFFFFFFFull) throw InputError("order overflows 64 bits");
  return static_cast<unsigned long long>(p);
}

unsigned long long ipow(unsigned long long b, unsigned e) {
  unsigned long long r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

std::uint64_t gcdll(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

} // namespace

std::pair<std::uint32_t, std::uint32_t> factor_prime_power(std::uint32_t q) {
  if (q < 3) throw InputError("q must be an odd prime power > 1");
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  if (p == 2) throw InputError("even q unsupported");
  std::uint32_t f = 0, rest = q;
  while (rest > 1) {
    if (rest % p != 0) throw InputError(std::to_string(q) + " is not a prime power");
    rest /= p;
    ++f;
  }
  return {p, f};
}

GroupSpec GroupSpec::parse(const std::string &text) {
  if (text == "M11") return GroupSpec{Family::M11, 11, 0};
  auto open = text.find('(');
  if (open == std::string::npos || text.empty() || text.back() != ')')
    throw InputError("bad group spec: " + text);
  std::string fam = text.substr(0, open);
  auto it = kFamilies.find(fam);
  if (it == kFamilies.end()) throw InputError("unknown family in spec: " + text);
  std::string args = text.substr(open + 1, text.size() - open - 2);
  GroupSpec s;
  s.family = it->second;
  auto comma = args.find(',');
  auto parse_int = [&](const std::string &v) -> unsigned long {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("bad number in spec: " + text);
    return std::stoul(v);
  };
  if (s.family == Family::Alt || s.family == Family::Sym) {
    if (comma != std::string::npos) throw InputError("bad group spec: " + text);
    s.n = static_cast<int>(parse_int(args));
    if (s.n < 1 || s.n > 16) throw InputError("degree out of range: " + text);
  } else {
    if (comma == std::string::npos) throw InputError("bad group spec: " + text);
    s.n = static_cast<int>(parse_int(args.substr(0, comma)));
    s.q = static_cast<std::uint32_t>(parse_int(args.substr(comma + 1)));
    if (s.n < 1 || s.n > 12) throw InputError("dimension out of range: " + text);
    factor_prime_power(s.q); // validates odd prime power
  }
  return s;
}

std::string GroupSpec::str() const {
  if (family == Family::M11) return "M11";
  std::ostringstream os;
  os << family_name(family) << "(" << n;
  if (matrix_family()) os << "," << q;
  os << ")";
  return os.str();
}

bool GroupSpec::matrix_family() const {
  return family != Family::Alt && family != Family::Sym && family != Family::M11;
}

bool GroupSpec::unitary() const {
  return family == Family::GU || family == Family::SU || family == Family::PGU ||
         family == Family::PSU;
}

bool GroupSpec::projective() const {
  return family == Family::PGL || family == Family::PSL || family == Family::PGU ||
         family == Family::PSU;
}

unsigned long long spec_order(const GroupSpec &s) {
  const unsigned long long q = s.q;
  switch (s.family) {
    case Family::Alt: {
      unsigned long long f = 1;
      for (int i = 2; i <= s.n; ++i) f = checked_mul(f, i);
      return s.n < 3 ? 1 : f / 2;
    }
    case Family::Sym: {
      unsigned long long f = 1;
      for (int i = 2; i <= s.n; ++i) f = checked_mul(f, i);
      return f;
    }
    case Family::M11:
      return 7920;
    default:
      break;
  }
  unsigned long long order = 1;
  if (!s.unitary()) {
    unsigned long long qn = ipow(q, s.n);
    for (int i = 0; i < s.n; ++i) order = checked_mul(order, qn - ipow(q, i));
  } else {
    order = ipow(q, static_cast<unsigned>(s.n * (s.n - 1) / 2));
    for (int i = 1; i <= s.n; ++i) {
      unsigned long long term =
          i % 2 == 0 ? ipow(q, i) - 1 : ipow(q, i) + 1; // q^i - (-1)^i
      order = checked_mul(order, term);
    }
  }
  const unsigned long long det_image = s.unitary() ? q + 1 : q - 1;
  switch (s.family) {
    case Family::GL:
    case Family::GU:
      return order;
    case Family::SL:
    case Family::SU:
    case Family::PGL:
    case Family::PGU:
      return order / det_image;
    case Family::PSL:
    case Family::PSU:
      return order / det_image / gcdll(s.n, det_image);
    default:
      throw InputError("unhandled family");
  }
}

// ------------------------------------------------------------ element helpers

namespace {

const FieldSpec &matrix_field(const GroupSpec &s) {
  auto [p, f] = factor_prime_power(s.q);
  return gf::field(p, s.unitary() ? 2 * f : f);
}

Element scalar_matrix(int n, Fel lambda) {
  Element e(ElementKind::Matrix, static_cast<std::uint8_t>(n));
  for (int i = 0; i < n; ++i) e.set(i, i, static_cast<std::uint16_t>(lambda));
  return e;
}

Element embed_block(int n, const Element &a, int offset) {
  Element e = scalar_matrix(n, 1);
  for (int r = 0; r < a.n; ++r)
    for (int c = 0; c < a.n; ++c)
      e.set(offset + r, offset + c, a.at(r, c));
  return e;
}

// all of SL_2(q) by direct scan; sorted
std::vector<Element> sl2_elements(const FieldSpec &F) {
  const std::uint32_t q = F.q();
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(q) * q * q);
  for (Fel a = 0; a < q; ++a)
    for (Fel b = 0; b < q; ++b)
      for (Fel c = 0; c < q; ++c) {
        if (a != 0) {
          Fel d = F.div(F.add(1, F.mul(b, c)), a);
          out.push_back(make_matrix(F, 2, {a, b, c, d}));
        } else {
          if (b == 0 || F.mul(b, c) != F.neg(1)) continue;
          for (Fel d = 0; d < q; ++d)
            out.push_back(make_matrix(F, 2, {a, b, c, d}));
        }
      }
  std::sort(out.begin(), out.end());
  return out;
}

// all of SU_2(q) inside GL_2(q^2) with the identity hermitian form: rows
// [[a, b], [-b^q, a^q]] with a^{q+1} + b^{q+1} = 1
std::vector<Element> su2_elements(const FieldSpec &Fq2, std::uint32_t q) {
  std::vector<Element> out;
  for (Fel a = 0; a < Fq2.q(); ++a) {
    Fel na = a == 0 ? 0 : Fq2.pow(a, q + 1);
    for (Fel b = 0; b < Fq2.q(); ++b) {
      Fel nb = b == 0 ? 0 : Fq2.pow(b, q + 1);
      if (Fq2.add(na, nb) != 1) continue;
      Fel aq = a == 0 ? 0 : Fq2.pow(a, q);
      Fel bq = b == 0 ? 0 : Fq2.pow(b, q);
      out.push_back(make_matrix(Fq2, 2, {a, b, Fq2.neg(bq), aq}));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Element> canonical_gens_of_list(grp::ContextPtr ctx,
                                            const std::vector<Element> &sorted_elems) {
  auto holder = grp::make_group(ctx, {}, "tmp");
  Subgroup s;
  s.parent = holder;
  s.elems = sorted_elems;
  return s.canonical_generators();
}

struct Sl2Cache {
  std::vector<Element> elems; // sorted
  std::vector<Element> gens;
};

const Sl2Cache &sl2_cache(std::uint32_t q, bool unitary) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, bool>, Sl2Cache> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(q, unitary);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto [p, f] = factor_prime_power(q);
  Sl2Cache c;
  if (unitary) {
    const FieldSpec &F = gf::field(p, 2 * f);
    c.elems = su2_elements(F, q);
    c.gens = canonical_gens_of_list(std::make_shared<MatrixContext>(F, 2), c.elems);
  } else {
    const FieldSpec &F = gf::field(p, f);
    c.elems = sl2_elements(F);
    c.gens = canonical_gens_of_list(std::make_shared<MatrixContext>(F, 2), c.elems);
  }
  return cache.emplace(key, std::move(c)).first->second;
}

Fel unitary_circle_generator(const FieldSpec &Fq2, std::uint32_t q) {
  // an element of order q+1 in GF(q^2)^*
  return Fq2.pow(Fq2.generator(), (static_cast<long long>(Fq2.q()) - 1) / (q + 1));
}

std::vector<Element> scalar_center(const GroupSpec &s) {
  const FieldSpec &F = matrix_field(s);
  const std::uint32_t q = s.q;
  std::vector<Element> zs;
  bool det_one = s.family == Family::PSL || s.family == Family::PSU;
  if (!s.unitary()) {
    Fel g = F.generator();
    if (det_one) {
      std::uint32_t d = static_cast<std::uint32_t>(gcdll(s.n, q - 1));
      for (std::uint32_t k = 0; k < d; ++k)
        zs.push_back(scalar_matrix(s.n, F.pow(g, static_cast<long long>(k) * ((q - 1) / d))));
    } else {
      for (std::uint32_t k = 0; k < q - 1; ++k)
        zs.push_back(scalar_matrix(s.n, F.pow(g, k)));
    }
  } else {
    Fel nu = unitary_circle_generator(F, q);
    if (det_one) {
      std::uint32_t d = static_cast<std::uint32_t>(gcdll(s.n, q + 1));
      for (std::uint32_t k = 0; k < d; ++k)
        zs.push_back(scalar_matrix(s.n, F.pow(nu, static_cast<long long>(k) * ((q + 1) / d))));
    } else {
      for (std::uint32_t k = 0; k < q + 1; ++k)
        zs.push_back(scalar_matrix(s.n, F.pow(nu, k)));
    }
  }
  std::sort(zs.begin(), zs.end());
  return zs;
}

std::vector<Element> matrix_generators(const GroupSpec &s) {
  const FieldSpec &F = matrix_field(s);
  const int n = s.n;
  std::vector<Element> gens;
  const bool uni = s.unitary();
  const bool has_det_torus = s.family == Family::GL || s.family == Family::PGL ||
                             s.family == Family::GU || s.family == Family::PGU;
  if (n == 1) {
    if (has_det_torus) {
      Fel t = uni ? unitary_circle_generator(F, s.q) : F.generator();
      gens.push_back(scalar_matrix(1, t));
    }
    return gens;
  }
  const auto &c2 = sl2_cache(s.q, uni);
  for (int i = 0; i + 1 < n; ++i)
    for (const Element &g : c2.gens) gens.push_back(embed_block(n, g, i));
  if (has_det_torus) {
    Fel t = uni ? unitary_circle_generator(F, s.q) : F.generator();
    Element d = scalar_matrix(n, 1);
    d.set(0, 0, static_cast<std::uint16_t>(t));
    gens.push_back(d);
  }
  return gens;
}

} // namespace

GroupPtr make_group(const GroupSpec &s) {
  switch (s.family) {
    case Family::Alt: {
      int deg = std::max(s.n, 3);
      auto ctx = std::make_shared<PermContext>(static_cast<std::uint8_t>(deg));
      std::vector<Element> gens;
      if (s.n >= 3) {
        gens.push_back(make_perm_cycles(deg, {{1, 2, 3}}));
        if (s.n > 3) {
          std::vector<std::uint32_t> cyc;
          if (s.n % 2 == 1)
            for (int i = 1; i <= s.n; ++i) cyc.push_back(i);
          else
            for (int i = 2; i <= s.n; ++i) cyc.push_back(i);
          gens.push_back(make_perm_cycles(deg, {cyc}));
        }
      }
      return grp::make_group(ctx, gens, s.str());
    }
    case Family::Sym: {
      int deg = std::max(s.n, 2);
      auto ctx = std::make_shared<PermContext>(static_cast<std::uint8_t>(deg));
      std::vector<Element> gens;
      if (s.n >= 2) {
        gens.push_back(make_perm_cycles(deg, {{1, 2}}));
        if (s.n > 2) {
          std::vector<std::uint32_t> cyc;
          for (int i = 1; i <= s.n; ++i) cyc.push_back(i);
          gens.push_back(make_perm_cycles(deg, {cyc}));
        }
      }
      return grp::make_group(ctx, gens, s.str());
    }
    case Family::M11: {
      auto ctx = std::make_shared<PermContext>(11);
      std::vector<Element> gens{
          make_perm_cycles(11, {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}}),
          make_perm_cycles(11, {{3, 7, 11, 8}, {4, 10, 5, 6}}),
      };
      return grp::make_group(ctx, gens, "M11");
    }
    default:
      break;
  }
  const FieldSpec &F = matrix_field(s);
  auto ctx = std::make_shared<MatrixContext>(F, static_cast<std::uint8_t>(s.n));
  std::vector<Element> gens = matrix_generators(s);
  for (const Element &g : gens)
    if (!verify_membership(s, g))
      throw ConsistencyError("generator fails membership for " + s.str());
  if (!s.projective()) return grp::make_group(ctx, gens, s.str());
  auto qctx = std::make_shared<QuotientContext>(ctx, scalar_center(s));
  std::vector<Element> qgens;
  for (const Element &g : gens) qgens.push_back(qctx->reduce(g));
  return grp::make_group(qctx, qgens, s.str());
}

bool verify_membership(const GroupSpec &s, const Element &e) {
  if (!s.matrix_family()) {
    if (e.kind != ElementKind::Permutation) return false;
    if (s.family == Family::Sym) return true;
    int transpositions = 0;
    std::vector<bool> seen(e.n + 1, false);
    for (int i = 1; i <= e.n; ++i) {
      if (seen[i]) continue;
      int len = 0, j = i;
      while (!seen[j]) {
        seen[j] = true;
        j = e.image(j);
        ++len;
      }
      transpositions += len - 1;
    }
    return transpositions % 2 == 0;
  }
  if (e.kind != ElementKind::Matrix || e.n != s.n) return false;
  const FieldSpec &F = matrix_field(s);
  Fel det = matrix_determinant(F, e);
  if (det == 0) return false;
  bool det_one = s.family == Family::SL || s.family == Family::PSL ||
                 s.family == Family::SU || s.family == Family::PSU;
  if (det_one && det != 1) return false;
  if (s.unitary()) {
    const int n = s.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Fel sum = 0;
        for (int k = 0; k < n; ++k) {
          Fel x = e.at(i, k);
          Fel xq = x == 0 ? 0 : F.pow(x, s.q);
          sum = F.add(sum, F.mul(xq, e.at(j, k)));
        }
        if (sum != (i == j ? 1u : 0u)) return false;
      }
  }
  return true;
}

// ------------------------------------------------------------------- Sylow 2

Subgroup sylow2_of_enumerated(GroupPtr g) { return grp::sylow_2_subgroup(g); }

namespace {

// base-case Sylow 2-subgroup generators of GL_2^eps(q), arranged to contain
// the diagonal 2-torus
std::vector<Element> sylow2_base2_gens(int eps, std::uint32_t q) {
  GroupSpec g2spec{eps > 0 ? Family::GL : Family::GU, 2, q};
  const FieldSpec &F = matrix_field(g2spec);
  Fel sigma;
  if (eps > 0) {
    sigma = F.two_element_generator();
  } else {
    Fel nu = unitary_circle_generator(F, q);
    std::uint32_t odd = q + 1;
    while (odd % 2 == 0) odd /= 2;
    sigma = F.pow(nu, odd); // generates the 2-part of the circle subgroup
  }
  auto diag = [&](Fel a, Fel b) {
    Element e(ElementKind::Matrix, 2);
    e.set(0, 0, static_cast<std::uint16_t>(a));
    e.set(1, 1, static_cast<std::uint16_t>(b));
    return e;
  };
  Element swap(ElementKind::Matrix, 2);
  swap.set(0, 1, 1);
  swap.set(1, 0, 1);

  const bool wreathed_case = (eps > 0) ? (q % 4 == 1) : (q % 4 == 3);
  if (wreathed_case) return {diag(sigma, 1), diag(1, sigma), swap};

  // semidihedral case: take a Sylow 2-subgroup of the enumerated GL_2^eps(q),
  // conjugate it over the diagonal 2-torus, and read off the semidihedral pair
  GroupPtr g2 = make_group(g2spec);
  g2->enumerate(4000000);
  Subgroup s = sylow2_of_enumerated(g2);
  std::vector<Element> torus;
  {
    std::vector<Fel> twos{1};
    Fel x = sigma;
    while (x != 1) {
      twos.push_back(x);
      x = F.mul(x, sigma);
    }
    for (Fel a : twos)
      for (Fel b : twos) torus.push_back(diag(a, b));
  }
  auto contains_torus = [&](const Subgroup &w) {
    for (const Element &d : torus)
      if (!w.contains(d)) return false;
    return true;
  };
  if (!contains_torus(s)) {
    bool moved = false;
    for (const Element &h : g2->elements()) {
      bool ok = true;
      for (const Element &d : torus)
        if (!s.contains(g2->conj(d, h))) {
          ok = false;
          break;
        }
      if (ok) {
        s = s.conjugated(g2->inv(h));
        moved = true;
        break;
      }
    }
    if (!moved) throw ConsistencyError("diagonal 2-torus not conjugable into Sylow");
  }
  TwoGroupType rec = recognize_2group(s);
  if (rec.family != TwoGroupFamily::Semidihedral)
    throw ConsistencyError("expected a semidihedral Sylow in GL_2^eps(q)");
  std::vector<Element> gens = rec.witnesses;
  // keep the torus generators explicit so the closure contains the torus
  gens.push_back(diag(sigma, 1));
  gens.push_back(diag(1, sigma));
  return gens;
}

std::vector<Element> double_block_gens(int half, const std::vector<Element> &gens_half) {
  const int n = 2 * half;
  std::vector<Element> out;
  for (const Element &g : gens_half) {
    out.push_back(embed_block(n, g, 0));
    out.push_back(embed_block(n, g, half));
  }
  Element swap(ElementKind::Matrix, static_cast<std::uint8_t>(n));
  for (int i = 0; i < half; ++i) {
    swap.set(i, half + i, 1);
    swap.set(half + i, i, 1);
  }
  out.push_back(swap);
  return out;
}

} // namespace

Subgroup sylow2(const GroupSpec &spec) {
  if (!spec.matrix_family()) {
    GroupPtr g = make_group(spec);
    g->enumerate();
    return sylow2_of_enumerated(g);
  }
  GroupPtr ambient = make_group(spec);
  const FieldSpec &F = matrix_field(spec);
  const int eps = spec.epsilon();
  const int n = spec.n;

  std::vector<std::vector<Element>> power_gens;
  {
    Fel sigma;
    if (eps > 0) {
      sigma = F.two_element_generator();
    } else {
      Fel nu = unitary_circle_generator(F, spec.q);
      std::uint32_t odd = spec.q + 1;
      while (odd % 2 == 0) odd /= 2;
      sigma = F.pow(nu, odd);
    }
    power_gens.push_back({scalar_matrix(1, sigma)});
  }
  int max_r = 0;
  while ((1 << (max_r + 1)) <= n) ++max_r;
  for (int r = 1; r <= max_r; ++r)
    power_gens.push_back(r == 1 ? sylow2_base2_gens(eps, spec.q)
                                : double_block_gens(1 << (r - 1), power_gens[r - 1]));

  std::vector<int> rs;
  for (int r = 0; (1 << r) <= n; ++r)
    if (n & (1 << r)) rs.push_back(r);
  std::vector<Element> gens;
  int offset = 0;
  for (int r : rs) {
    for (const Element &g : power_gens[r]) gens.push_back(embed_block(n, g, offset));
    offset += 1 << r;
  }

  GroupSpec ambient_gl{eps > 0 ? Family::GL : Family::GU, n, spec.q};
  for (const Element &g : gens)
    if (!verify_membership(ambient_gl, g))
      throw ConsistencyError("sylow generator fails membership");

  Subgroup w;
  {
    auto mctx = std::make_shared<MatrixContext>(F, static_cast<std::uint8_t>(n));
    auto mholder = grp::make_group(mctx, {}, "tmp-matrix");
    w = subgroup_generated(mholder, gens, 1u << 16);
  }

  bool det_one = spec.family == Family::SL || spec.family == Family::PSL ||
                 spec.family == Family::SU || spec.family == Family::PSU;
  if (det_one) {
    std::vector<Element> kept;
    for (const Element &e : w.elems)
      if (matrix_determinant(F, e) == 1) kept.push_back(e);
    w.elems = std::move(kept);
  }
  if (spec.projective()) {
    const GroupContext &qc = *ambient->context();
    std::vector<Element> reduced;
    for (const Element &e : w.elems) reduced.push_back(qc.reduce(e));
    std::sort(reduced.begin(), reduced.end());
    reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
    w.elems = std::move(reduced);
  }
  w.parent = ambient;

  unsigned long long expect = static_cast<unsigned long long>(
      gf::two_part(static_cast<long long>(spec_order(spec))));
  if (w.order() != expect)
    throw ConsistencyError("sylow order mismatch for " + spec.str() + ": got " +
                           std::to_string(w.order()) + ", expected " +
                           std::to_string(expect));
  return w;
}

Subgroup diagonal_two_torus(int n, std::uint32_t q, int epsilon) {
  if (n < 2) throw InputError("diagonal_two_torus needs n >= 2");
  GroupSpec spec{epsilon > 0 ? Family::SL : Family::SU, n, q};
  GroupPtr ambient = make_group(spec);
  const FieldSpec &F = matrix_field(spec);
  std::vector<Element> elems;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) % 2 != 0) continue; // determinant 1
    Element e(ElementKind::Matrix, static_cast<std::uint8_t>(n));
    for (int i = 0; i < n; ++i)
      e.set(i, i, static_cast<std::uint16_t>((mask >> i) & 1 ? F.neg(1) : 1));
    elems.push_back(std::move(e));
  }
  Subgroup s;
  s.parent = ambient;
  s.elems = std::move(elems);
  std::sort(s.elems.begin(), s.elems.end());
  if (s.order() != (1ull << (n - 1)))
    throw ConsistencyError("diagonal torus order mismatch");
  return s;
}

// ----------------------------------------------------------------- involutions

std::vector<InvolutionRep> involution_reps(int n, std::uint32_t q) {
  if (n < 2) throw InputError("involution_reps needs n >= 2");
  GroupSpec spec{Family::PSL, n, q};
  GroupPtr psl = make_group(spec);
  const FieldSpec &F = matrix_field(spec);
  const GroupContext &qc = *psl->context();

  std::uint32_t d = static_cast<std::uint32_t>(gcdll(n, q - 1));
  Fel rho = F.pow(F.generator(), (q - 1) / d); // fixed element of order (n, q-1)
  bool rho_square = F.is_square(rho);
  Fel mu = rho_square ? F.sqrt(rho) : 0;

  std::vector<InvolutionRep> reps;
  auto push_diag = [&](int i, Fel pos, Fel neg) {
    Element e(ElementKind::Matrix, static_cast<std::uint8_t>(n));
    for (int r = 0; r < n - i; ++r) e.set(r, r, static_cast<std::uint16_t>(pos));
    for (int r = n - i; r < n; ++r) e.set(r, r, static_cast<std::uint16_t>(neg));
    InvolutionRep rep;
    rep.label = "t" + std::to_string(i);
    rep.element = qc.reduce(e);
    rep.i = i;
    rep.rho = rho;
    rep.mu = mu;
    reps.push_back(std::move(rep));
  };

  if (n % 2 == 1) {
    for (int i = 2; i < n; i += 2) push_diag(i, 1, F.neg(1));
  } else if (rho_square) {
    for (int i = 1; i <= n / 2; ++i) {
      if (i % 2 == 0)
        push_diag(i, 1, F.neg(1));
      else
        push_diag(i, mu, F.neg(mu));
    }
  } else {
    for (int i = 2; i <= n / 2; i += 2) push_diag(i, 1, F.neg(1));
    Element wt(ElementKind::Matrix, static_cast<std::uint8_t>(n));
    const int h = n / 2;
    for (int r = 0; r < h; ++r) {
      wt.set(r, h + r, 1);
      wt.set(h + r, r, static_cast<std::uint16_t>(rho));
    }
    if (matrix_determinant(F, wt) == 1) {
      InvolutionRep rep;
      rep.label = "w";
      rep.element = qc.reduce(wt);
      rep.rho = rho;
      reps.push_back(std::move(rep));
    }
  }
  for (const auto &r : reps)
    if (qc.element_order(r.element) != 2)
      throw ConsistencyError("involution representative has wrong order");
  return reps;
}

namespace {

int null_dim(const FieldSpec &F, const Element &m) {
  const int n = m.n;
  std::vector<std::vector<Fel>> a(n, std::vector<Fel>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    Fel ip = F.inv(a[rank][col]);
    for (int j = 0; j < n; ++j) a[rank][j] = F.mul(a[rank][j], ip);
    for (int r = 0; r < n; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      Fel f = a[r][col];
      for (int j = 0; j < n; ++j) a[r][j] = F.sub(a[r][j], F.mul(f, a[rank][j]));
    }
    ++rank;
  }
  return n - rank;
}

} // namespace

std::string match_involution_class(const GroupSpec &spec, const Element &x) {
  if (spec.family != Family::PSL)
    throw InputError("match_involution_class expects a PSL spec");
  const FieldSpec &F = matrix_field(spec);
  const int n = spec.n;
  GroupPtr psl = make_group(spec);
  const GroupContext &qc = *psl->context();
  if (qc.reduce(x) == qc.identity() || !(qc.multiply(x, x) == qc.identity()))
    throw InputError("not an involution of the projective group");

  MatrixContext mctx(F, static_cast<std::uint8_t>(n));
  Element sq = mctx.multiply(x, x);
  Fel lambda = sq.at(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sq.at(i, j) != (i == j ? lambda : 0u))
        throw ConsistencyError("involution lift squares to a non-scalar");

  if (F.is_square(lambda)) {
    Fel mu = F.sqrt(lambda);
    Element x_minus_mu = x, x_plus_mu = x;
    for (int i = 0; i < n; ++i) {
      x_minus_mu.set(i, i, static_cast<std::uint16_t>(F.sub(x.at(i, i), mu)));
      x_plus_mu.set(i, i, static_cast<std::uint16_t>(F.add(x.at(i, i), mu)));
    }
    int d_plus = null_dim(F, x_minus_mu);
    int d_minus = null_dim(F, x_plus_mu);
    if (d_plus + d_minus != n)
      throw ConsistencyError("eigenvalue multiplicities do not fill the space");
    int i = std::min(d_plus, d_minus);
    if (i == 0) throw ConsistencyError("central element reached involution matching");
    return "t" + std::to_string(i);
  }
  return "w";
}

std::vector<std::pair<Fel, int>> eigenvalues_in_field(const FieldSpec &F,
                                                      const Element &m) {
  if (m.kind != ElementKind::Matrix) throw InputError("matrix expected");
  const int n = m.n;
  using Poly = std::vector<Fel>;
  auto poly_add = [&](const Poly &a, const Poly &b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    return r;
  };
  auto poly_scale = [&](const Poly &a, Fel c) {
    Poly r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
    return r;
  };
  auto poly_mul_linear = [&](const Poly &a, Fel c0, Fel c1) {
    Poly r(a.size() + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      r[i] = F.add(r[i], F.mul(a[i], c0));
      r[i + 1] = F.add(r[i + 1], F.mul(a[i], c1));
    }
    return r;
  };
  // det(xI - M), expanding along rows with memoization on used-column masks
  std::map<std::uint32_t, Poly> memo;
  std::function<Poly(std::uint32_t)> det = [&](std::uint32_t used) -> Poly {
    int row = __builtin_popcount(used);
    if (row == n) return Poly{1};
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    Poly acc{0};
    int pos = 0;
    for (int col = 0; col < n; ++col) {
      if (used & (1u << col)) continue;
      Poly sub = det(used | (1u << col));
      Poly term = (row == col) ? poly_mul_linear(sub, F.neg(m.at(row, col)), 1)
                               : poly_scale(sub, F.neg(m.at(row, col)));
      if (pos % 2 == 1) term = poly_scale(term, F.neg(1));
      acc = poly_add(acc, term);
      ++pos;
    }
    memo.emplace(used, acc);
    return acc;
  };
  Poly charpoly = det(0);

  std::vector<std::pair<Fel, int>> roots;
  for (Fel lam = 0; lam < F.q(); ++lam) {
    Poly p = charpoly;
    int mult = 0;
    for (;;) {
      Fel v = 0;
      for (std::size_t i = p.size(); i-- > 0;) v = F.add(F.mul(v, lam), p[i]);
      if (v != 0 || p.size() <= 1) break;
      Poly qout(p.size() - 1, 0);
      Fel carry = 0;
      for (std::size_t i = p.size() - 1; i-- > 0;) {
        carry = F.add(p[i + 1], F.mul(lam, carry));
        qout[i] = carry;
      }
      p = qout;
      ++mult;
    }
    if (mult > 0) roots.emplace_back(lam, mult);
  }
  return roots;
}

bool goldschmidt_test(int n, std::uint32_t q, int epsilon) {
  (void)epsilon;
  if (n < 2) throw InputError("goldschmidt_test needs n >= 2");
  if (n == 2 && q == 3) throw InputError("(2,3) excluded: PSL_2(3) is not simple");
  factor_prime_power(q);
  return n == 2 && (q % 8 == 3 || q % 8 == 5);
}

// ------------------------------------------------------------------ generation

GenerationData generation_subgroups(int n, std::uint32_t q, int epsilon) {
  if (n < 3) throw InputError("generation_subgroups needs n >= 3");
  GroupSpec spec{epsilon > 0 ? Family::SL : Family::SU, n, q};
  GroupPtr ambient = make_group(spec);
  const FieldSpec &F = matrix_field(spec);
  const auto &c2 = sl2_cache(q, epsilon < 0);

  GenerationData data;
  data.ambient = ambient;
  for (int i = 0; i + 1 < n; ++i) {
    Subgroup u;
    u.parent = ambient;
    for (const Element &g : c2.elems) u.elems.push_back(embed_block(n, g, i));
    std::sort(u.elems.begin(), u.elems.end());
    data.blocks.push_back(std::move(u));
  }
  for (int i = 0; i + 2 < n; ++i) {
    // permutation matrix: x^m has entries x[pi(r)][pi(c)] with pi the 3-cycle
    // i -> i+2 -> i+1 -> i, carrying block {i,i+1} onto {i+1,i+2}
    std::vector<int> pi(n);
    for (int r = 0; r < n; ++r) pi[r] = r;
    pi[i] = i + 2;
    pi[i + 1] = i;
    pi[i + 2] = i + 1;
    Element m(ElementKind::Matrix, static_cast<std::uint8_t>(n));
    for (int col = 0; col < n; ++col) m.set(pi[col], col, 1);
    if (matrix_determinant(F, m) != 1)
      throw ConsistencyError("monomial conjugator must have determinant 1");
    const GroupContext &c = *ambient->context();
    for (const Element &u : data.blocks[i].elems)
      if (!data.blocks[i + 1].contains(c.conjugate(u, m)))
        throw ConsistencyError("monomial conjugator fails U_i^{m_i} = U_{i+1}");
    data.conjugators.push_back(std::move(m));
  }
  return data;
}

Subgroup sylow_a10_explicit() {
  GroupPtr a10 = make_group(GroupSpec{Family::Alt, 10, 0});
  std::vector<Element> gens{
      make_perm_cycles(10, {{1, 2, 3, 4}, {9, 10}}),
      make_perm_cycles(10, {{1, 2}, {3, 4}}),
      make_perm_cycles(10, {{5, 6, 7, 8}, {9, 10}}),
      make_perm_cycles(10, {{5, 6}, {7, 8}}),
      make_perm_cycles(10, {{1, 5}, {2, 6}, {3, 7}, {4, 8}}),
  };
  for (const Element &g : gens)
    if (!verify_membership(GroupSpec{Family::Alt, 10, 0}, g))
      throw ConsistencyError("Sylow generator is an odd permutation");
  return subgroup_generated(a10, gens, 1u << 12);
}

std::vector<int> cycle_type(const Element &perm) {
  if (perm.kind != ElementKind::Permutation) throw InputError("permutation expected");
  std::vector<bool> seen(perm.n + 1, false);
  std::vector<int> type;
  for (int i = 1; i <= perm.n; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = perm.image(j);
      ++len;
    }
    if (len >= 2) type.push_back(len);
  }
  std::sort(type.begin(), type.end());
  return type;
}

} // namespace twofusion::classical
