#include "twofusion/element.hpp"

#include <algorithm>
#include <sstream>

namespace twofusion::grp {

std::string Element::str() const {
  std::ostringstream os;
  if (kind == ElementKind::Permutation) {
    os << "[";
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i) os << " ";
      os << data[i];
    }
    os << "]";
  } else {
    os << "[";
    for (std::size_t r = 0; r < n; ++r) {
      if (r) os << "; ";
      for (std::size_t c = 0; c < n; ++c) {
        if (c) os << " ";
        os << at(r, c);
      }
    }
    os << "]";
  }
  return os.str();
}

std::uint64_t GroupContext::element_order(const Element &a) const {
  Element id = identity();
  Element x = a;
  std::uint64_t k = 1;
  while (!(x == id)) {
    x = multiply(x, a);
    ++k;
    if (k > 100000000ull) throw ConsistencyError("element order runaway");
  }
  return k;
}

Element MatrixContext::identity() const {
  Element e(ElementKind::Matrix, n_);
  for (std::size_t i = 0; i < n_; ++i) e.set(i, i, 1);
  return e;
}

Element MatrixContext::multiply(const Element &a, const Element &b) const {
  const gf::FieldSpec &F = *field_;
  Element c(ElementKind::Matrix, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      gf::Fel aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        gf::Fel b_kj = b.at(k, j);
        if (b_kj == 0) continue;
        c.set(i, j, static_cast<std::uint16_t>(
                        F.add(c.at(i, j), F.mul(aik, b_kj))));
      }
    }
  return c;
}

Element MatrixContext::inverse(const Element &a) const {
  const gf::FieldSpec &F = *field_;
  // Gauss-Jordan on [a | I]
  std::vector<std::vector<gf::Fel>> m(n_, std::vector<gf::Fel>(2 * n_, 0));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m[i][j] = a.at(i, j);
    m[i][n_ + i] = 1;
  }
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t piv = col;
    while (piv < n_ && m[piv][col] == 0) ++piv;
    if (piv == n_) throw InputError("matrix not invertible");
    std::swap(m[piv], m[col]);
    gf::Fel ip = F.inv(m[col][col]);
    for (std::size_t j = 0; j < 2 * n_; ++j) m[col][j] = F.mul(m[col][j], ip);
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == col || m[r][col] == 0) continue;
      gf::Fel f = m[r][col];
      for (std::size_t j = 0; j < 2 * n_; ++j)
        m[r][j] = F.sub(m[r][j], F.mul(f, m[col][j]));
    }
  }
  Element inv(ElementKind::Matrix, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      inv.set(i, j, static_cast<std::uint16_t>(m[i][n_ + j]));
  return inv;
}

std::string MatrixContext::describe() const {
  std::ostringstream os;
  os << "matrix(" << int(n_) << ", GF(" << field_->q() << "))";
  return os.str();
}

Element PermContext::identity() const {
  Element e(ElementKind::Permutation, degree_);
  for (std::size_t i = 0; i < degree_; ++i) e.data[i] = static_cast<std::uint16_t>(i + 1);
  return e;
}

Element PermContext::multiply(const Element &a, const Element &b) const {
  // right action: (a*b)(i) = b(a(i))
  Element c(ElementKind::Permutation, degree_);
  for (std::size_t i = 0; i < degree_; ++i)
    c.data[i] = b.data[a.data[i] - 1];
  return c;
}

Element PermContext::inverse(const Element &a) const {
  Element c(ElementKind::Permutation, degree_);
  for (std::size_t i = 0; i < degree_; ++i)
    c.data[a.data[i] - 1] = static_cast<std::uint16_t>(i + 1);
  return c;
}

std::string PermContext::describe() const {
  return "perm(" + std::to_string(int(degree_)) + ")";
}

QuotientContext::QuotientContext(ContextPtr base, std::vector<Element> normal_elements)
    : base_(std::move(base)), normal_(std::move(normal_elements)) {
  if (normal_.empty()) throw InputError("quotient by empty subgroup");
}

Element QuotientContext::reduce(const Element &a) const {
  Element best = base_->multiply(a, normal_[0]);
  for (std::size_t i = 1; i < normal_.size(); ++i) {
    Element cand = base_->multiply(a, normal_[i]);
    if (cand < best) best = cand;
  }
  return best;
}

Element QuotientContext::identity() const { return reduce(base_->identity()); }

Element QuotientContext::multiply(const Element &a, const Element &b) const {
  return reduce(base_->multiply(a, b));
}

Element QuotientContext::inverse(const Element &a) const {
  return reduce(base_->inverse(a));
}

std::string QuotientContext::describe() const {
  return base_->describe() + " mod subgroup(" + std::to_string(normal_.size()) + ")";
}

Element make_matrix(const gf::FieldSpec &field, std::uint8_t n,
                    const std::vector<std::uint32_t> &rowmajor) {
  if (rowmajor.size() != std::size_t(n) * n)
    throw InputError("matrix entry count mismatch");
  Element e(ElementKind::Matrix, n);
  for (std::size_t i = 0; i < rowmajor.size(); ++i) {
    if (rowmajor[i] >= field.q()) throw InputError("field index out of range");
    e.data[i] = static_cast<std::uint16_t>(rowmajor[i]);
  }
  return e;
}

Element make_perm(std::uint8_t degree, const std::vector<std::uint32_t> &images) {
  if (images.size() != degree) throw InputError("permutation degree mismatch");
  std::vector<bool> seen(degree + 1, false);
  Element e(ElementKind::Permutation, degree);
  for (std::size_t i = 0; i < degree; ++i) {
    if (images[i] < 1 || images[i] > degree || seen[images[i]])
      throw InputError("not a bijection on {1..degree}");
    seen[images[i]] = true;
    e.data[i] = static_cast<std::uint16_t>(images[i]);
  }
  return e;
}

Element make_perm_cycles(std::uint8_t degree,
                         const std::vector<std::vector<std::uint32_t>> &cycles) {
  std::vector<std::uint32_t> images(degree);
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<std::uint32_t>(i + 1);
  for (const auto &cy : cycles) {
    for (std::size_t i = 0; i < cy.size(); ++i) {
      std::uint32_t from = cy[i];
      std::uint32_t to = cy[(i + 1) % cy.size()];
      if (from < 1 || from > degree) throw InputError("cycle point out of range");
      images[from - 1] = to;
    }
  }
  return make_perm(degree, images);
}

gf::Fel matrix_determinant(const gf::FieldSpec &F, const Element &m) {
  std::uint8_t n = m.n;
  std::vector<std::vector<gf::Fel>> a(n, std::vector<gf::Fel>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  gf::Fel det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = F.neg(det);
    }
    det = F.mul(det, a[col][col]);
    gf::Fel ip = F.inv(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      gf::Fel f = F.mul(a[r][col], ip);
      for (std::size_t j = col; j < n; ++j)
        a[r][j] = F.sub(a[r][j], F.mul(f, a[col][j]));
    }
  }
  return det;
}

bool matrix_invertible(const gf::FieldSpec &F, const Element &m) {
  return matrix_determinant(F, m) != 0;
}

} // namespace twofusion::grp
