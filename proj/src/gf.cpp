#include "twofusion/gf.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace twofusion::gf {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense coefficient vectors over GF(p), constant term first.
using Poly = std::vector<std::uint32_t>;

Poly poly_mod(Poly a, const Poly &m, std::uint32_t p) {
  // m is monic of degree deg; reduce a modulo m.
  const std::size_t deg = m.size() - 1;
  while (a.size() > deg) {
    std::uint32_t lead = a.back();
    std::size_t shift = a.size() - 1 - deg;
    if (lead != 0) {
      for (std::size_t i = 0; i <= deg; ++i) {
        std::uint64_t t = static_cast<std::uint64_t>(lead) * m[i] % p;
        std::uint32_t &c = a[shift + i];
        c = static_cast<std::uint32_t>((c + p - t) % p);
      }
    }
    a.pop_back();
  }
  return a;
}

Poly poly_mulmod(const Poly &a, const Poly &b, const Poly &m, std::uint32_t p) {
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
  }
  return poly_mod(std::move(prod), m, p);
}

bool poly_is_zero(const Poly &a) {
  for (auto c : a)
    if (c) return false;
  return true;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool poly_irreducible(const Poly &m, std::uint32_t p) {
  const std::size_t deg = m.size() - 1;
  if (deg == 1) return true;
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    // iterate monic divisors of degree d by their non-leading coefficients
    std::vector<std::uint32_t> c(d, 0);
    for (;;) {
      Poly div(d + 1);
      for (std::size_t i = 0; i < d; ++i) div[i] = c[i];
      div[d] = 1;
      if (poly_is_zero(poly_mod(m, div, p))) return false;
      std::size_t i = 0;
      while (i < d && ++c[i] == p) c[i++] = 0;
      if (i == d) break;
    }
  }
  return true;
}

std::uint32_t encode(const Poly &a, std::uint32_t p, std::uint32_t f) {
  std::uint32_t v = 0;
  for (std::size_t i = f; i-- > 0;) v = v * p + (i < a.size() ? a[i] : 0);
  return v;
}

Poly decode(std::uint32_t v, std::uint32_t p, std::uint32_t f) {
  Poly a(f);
  for (std::uint32_t i = 0; i < f; ++i) {
    a[i] = v % p;
    v /= p;
  }
  return a;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> fs;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      fs.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

} // namespace

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t f) : p_(p), f_(f) {
  if (p == 2) throw InputError("even characteristic unsupported");
  if (!is_prime(p)) throw InputError("field characteristic must be prime, got " + std::to_string(p));
  if (f < 1) throw InputError("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < f; ++i) {
    q *= p;
    if (q > (1u << 20))
      throw InputError("field size cap exceeded: p^f must be <= 2^20");
  }
  q_ = static_cast<std::uint32_t>(q);

  // lexicographically least monic irreducible of degree f
  modulus_.assign(f, 0);
  if (f == 1) {
    modulus_ = {0}; // x itself; arithmetic is plain mod p
  } else {
    bool found = false;
    std::vector<std::uint32_t> c(f, 0);
    for (;;) {
      Poly m(f + 1);
      for (std::size_t i = 0; i < f; ++i) m[i] = c[i];
      m[f] = 1;
      if (poly_irreducible(m, p)) {
        modulus_ = c;
        found = true;
        break;
      }
      std::size_t i = 0;
      while (i < f && ++c[i] == p) c[i++] = 0;
      if (i == f) break;
    }
    if (!found) throw ConsistencyError("no irreducible modulus found");
  }

  // find the least generator of the multiplicative group, then fill tables
  Poly m(f + 1);
  for (std::size_t i = 0; i < f; ++i) m[i] = modulus_[i];
  m[f] = 1;
  auto mull = [&](std::uint32_t a, std::uint32_t b) {
    if (f == 1) return static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(a) * b % p);
    return encode(poly_mulmod(decode(a, p, f), decode(b, p, f), m, p), p, f);
  };
  auto powl = [&](std::uint32_t a, std::uint32_t e) {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = mull(r, a);
      a = mull(a, a);
      e >>= 1;
    }
    return r;
  };
  const std::uint32_t n = q_ - 1;
  auto pf = prime_factors(n);
  gen_ = 0;
  for (std::uint32_t x = 2; x < q_; ++x) {
    bool ok = true;
    for (auto r : pf)
      if (powl(x, n / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      gen_ = x;
      break;
    }
  }
  if (gen_ == 0 && q_ > 2) throw ConsistencyError("no multiplicative generator found");
  if (q_ == 2) gen_ = 1;

  log_.assign(q_, 0);
  antilog_.assign(n, 0);
  std::uint32_t x = 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    antilog_[k] = x;
    log_[x] = k;
    x = mull(x, gen_);
  }
  if (x != 1) throw ConsistencyError("multiplicative group order mismatch");
}

Fel FieldSpec::add(Fel a, Fel b) const {
  if (f_ == 1) {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Fel r = 0, mul = 1;
  for (std::uint32_t i = 0; i < f_; ++i) {
    std::uint32_t da = a % p_, db = b % p_;
    std::uint32_t s = da + db;
    if (s >= p_) s -= p_;
    r += s * mul;
    mul *= p_;
    a /= p_;
    b /= p_;
  }
  return r;
}

Fel FieldSpec::neg(Fel a) const {
  if (f_ == 1) return a == 0 ? 0 : p_ - a;
  Fel r = 0, mul = 1;
  for (std::uint32_t i = 0; i < f_; ++i) {
    std::uint32_t d = a % p_;
    r += (d == 0 ? 0 : p_ - d) * mul;
    mul *= p_;
    a /= p_;
  }
  return r;
}

Fel FieldSpec::inv(Fel a) const {
  if (a == 0) throw InputError("division by zero in GF(" + std::to_string(q_) + ")");
  return antilog_[idx_mod(q_ - 1 - log_[a])];
}

Fel FieldSpec::pow(Fel a, long long e) const {
  if (a == 0) {
    if (e <= 0) throw InputError("0 raised to non-positive power");
    return 0;
  }
  long long n = q_ - 1;
  long long k = (static_cast<long long>(log_[a]) * (e % n)) % n;
  if (k < 0) k += n;
  return antilog_[static_cast<std::uint32_t>(k)];
}

std::uint32_t FieldSpec::log(Fel a) const {
  if (a == 0) throw InputError("log of zero");
  return log_[a];
}

std::uint32_t FieldSpec::element_order(Fel a) const {
  if (a == 0) throw InputError("order of zero");
  std::uint32_t n = q_ - 1;
  std::uint32_t k = log_[a];
  // order = n / gcd(n, k)
  std::uint32_t x = n, y = k;
  while (y) {
    std::uint32_t t = x % y;
    x = y;
    y = t;
  }
  return n / x;
}

bool FieldSpec::is_square(Fel a) const {
  if (a == 0) return true;
  return log_[a] % 2 == 0;
}

Fel FieldSpec::sqrt(Fel a) const {
  if (a == 0) return 0;
  if (log_[a] % 2 != 0) throw InputError("element is not a square");
  Fel r1 = antilog_[log_[a] / 2];
  Fel r2 = neg(r1);
  return r1 < r2 ? r1 : r2;
}

Fel FieldSpec::two_element_generator() const {
  std::uint32_t n = q_ - 1;
  std::uint32_t odd = n;
  while (odd % 2 == 0) odd /= 2;
  return antilog_[idx_mod(odd % n)];
}

const FieldSpec &field(std::uint32_t p, std::uint32_t f) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FieldSpec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, f);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<FieldSpec>(p, f)).first;
  return *it->second;
}

Fel frobenius(Fel x, const FieldSpec &fq2) {
  if (fq2.f() % 2 != 0)
    throw InputError("frobenius requires a quadratic extension (even degree)");
  std::uint32_t q = 1;
  for (std::uint32_t i = 0; i < fq2.f() / 2; ++i) q *= fq2.p();
  return fq2.pow(x, q);
}

long long two_part(long long n) {
  if (n == 0) throw InputError("two_part of zero");
  if (n < 0) n = -n;
  long long t = 1;
  while (n % 2 == 0) {
    n /= 2;
    t *= 2;
  }
  return t;
}

bool tilde_related(long long a, long long b) {
  if (a % 2 == 0 || b % 2 == 0)
    throw InputError("tilde relation requires odd arguments");
  if (a == 1 || a == -1 || b == 1 || b == -1)
    throw InputError("tilde relation requires |a|, |b| > 1");
  return two_part(a - 1) == two_part(b - 1) && two_part(a + 1) == two_part(b + 1);
}

} // namespace twofusion::gf
