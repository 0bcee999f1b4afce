#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "twofusion/errors.hpp"
#include "twofusion/gf.hpp"

namespace twofusion::grp {

// Entry storage with a small inline buffer; element payloads never grow
// after construction.
class EntryVec {
public:
  static constexpr std::size_t kInline = 16;

  EntryVec() : size_(0), heap_(nullptr) {}
  explicit EntryVec(std::size_t n) : size_(n), heap_(nullptr) {
    if (n > kInline) heap_ = new std::uint16_t[n];
    std::memset(data(), 0, n * sizeof(std::uint16_t));
  }
  EntryVec(const EntryVec &o) : size_(o.size_), heap_(nullptr) {
    if (size_ > kInline) heap_ = new std::uint16_t[size_];
    std::memcpy(data(), o.data(), size_ * sizeof(std::uint16_t));
  }
  EntryVec(EntryVec &&o) noexcept : size_(o.size_), heap_(o.heap_) {
    std::memcpy(inline_, o.inline_, sizeof(inline_));
    o.heap_ = nullptr;
    o.size_ = 0;
  }
  EntryVec &operator=(const EntryVec &o) {
    if (this == &o) return *this;
    if (size_ > kInline) delete[] heap_;
    size_ = o.size_;
    heap_ = nullptr;
    if (size_ > kInline) heap_ = new std::uint16_t[size_];
    std::memcpy(data(), o.data(), size_ * sizeof(std::uint16_t));
    return *this;
  }
  EntryVec &operator=(EntryVec &&o) noexcept {
    if (this == &o) return *this;
    if (size_ > kInline) delete[] heap_;
    size_ = o.size_;
    heap_ = o.heap_;
    std::memcpy(inline_, o.inline_, sizeof(inline_));
    o.heap_ = nullptr;
    o.size_ = 0;
    return *this;
  }
  ~EntryVec() {
    if (size_ > kInline) delete[] heap_;
  }

  std::size_t size() const { return size_; }
  std::uint16_t *data() { return size_ > kInline ? heap_ : inline_; }
  const std::uint16_t *data() const { return size_ > kInline ? heap_ : inline_; }
  std::uint16_t &operator[](std::size_t i) { return data()[i]; }
  std::uint16_t operator[](std::size_t i) const { return data()[i]; }

  bool operator==(const EntryVec &o) const {
    return size_ == o.size_ &&
           std::memcmp(data(), o.data(), size_ * sizeof(std::uint16_t)) == 0;
  }
  bool operator<(const EntryVec &o) const {
    if (size_ != o.size_) return size_ < o.size_;
    for (std::size_t i = 0; i < size_; ++i)
      if (data()[i] != o.data()[i]) return data()[i] < o.data()[i];
    return false;
  }

private:
  std::uint32_t size_;
  std::uint16_t *heap_;
  std::uint16_t inline_[kInline];
};

enum class ElementKind : std::uint8_t { Matrix = 0, Permutation = 1 };

// A group element: an invertible n-by-n matrix over a finite field stored
// row-major as field indices, or a permutation of {1..degree} stored as its
// image sequence. Equality and the canonical order are structural on this
// encoding. Group structure (including coset reduction in quotients) lives in
// GroupContext, not here.
struct Element {
  ElementKind kind = ElementKind::Permutation;
  std::uint8_t n = 0; // dimension or degree
  EntryVec data;

  Element() = default;
  Element(ElementKind k, std::uint8_t dim) : kind(k), n(dim), data(k == ElementKind::Matrix ? std::size_t(dim) * dim : dim) {}

  std::uint16_t at(std::size_t r, std::size_t c) const { return data[r * n + c]; }
  void set(std::size_t r, std::size_t c, std::uint16_t v) { data[r * n + c] = v; }
  // 1-based image of a 1-based point
  std::uint16_t image(std::size_t i) const { return data[i - 1]; }

  bool operator==(const Element &o) const {
    return kind == o.kind && n == o.n && data == o.data;
  }
  bool operator!=(const Element &o) const { return !(*this == o); }
  bool operator<(const Element &o) const {
    if (kind != o.kind) return kind < o.kind;
    if (n != o.n) return n < o.n;
    return data < o.data;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull ^ (std::uint64_t(n) << 8) ^ std::uint64_t(kind);
    const std::uint16_t *d = data.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      h ^= d[i];
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string str() const;
};

// Multiplication oracle for a family of elements of one shape. Plain matrix
// and permutation contexts are stateless; a quotient context reduces every
// product to the canonical (least) representative of its coset.
class GroupContext {
public:
  virtual ~GroupContext() = default;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element &a, const Element &b) const = 0;
  virtual Element inverse(const Element &a) const = 0;
  // Canonicalize: identity map except in quotient contexts.
  virtual Element reduce(const Element &a) const { return a; }
  virtual bool accepts(const Element &a) const = 0;
  virtual std::string describe() const = 0;

  Element conjugate(const Element &x, const Element &g) const {
    return multiply(multiply(inverse(g), x), g);
  }
  Element commutator(const Element &a, const Element &b) const {
    return multiply(inverse(multiply(b, a)), multiply(a, b));
  }
  std::uint64_t element_order(const Element &a) const;
  bool is_identity(const Element &a) const { return a == identity(); }
};

using ContextPtr = std::shared_ptr<const GroupContext>;

class MatrixContext : public GroupContext {
public:
  MatrixContext(const gf::FieldSpec &field, std::uint8_t n) : field_(&field), n_(n) {
    if (field.q() > 65535) throw InputError("matrix field too large for 16-bit entries");
  }
  Element identity() const override;
  Element multiply(const Element &a, const Element &b) const override;
  Element inverse(const Element &a) const override;
  bool accepts(const Element &a) const override {
    return a.kind == ElementKind::Matrix && a.n == n_;
  }
  std::string describe() const override;

  const gf::FieldSpec &field() const { return *field_; }
  std::uint8_t dim() const { return n_; }

private:
  const gf::FieldSpec *field_;
  std::uint8_t n_;
};

class PermContext : public GroupContext {
public:
  explicit PermContext(std::uint8_t degree) : degree_(degree) {}
  Element identity() const override;
  Element multiply(const Element &a, const Element &b) const override;
  Element inverse(const Element &a) const override;
  bool accepts(const Element &a) const override {
    return a.kind == ElementKind::Permutation && a.n == degree_;
  }
  std::string describe() const override;

  std::uint8_t degree() const { return degree_; }

private:
  std::uint8_t degree_;
};

// Quotient modulo a finite normal subgroup given by its element list (in base
// coordinates). Elements are canonical coset representatives: the least
// element of the coset in the base encoding order.
class QuotientContext : public GroupContext {
public:
  QuotientContext(ContextPtr base, std::vector<Element> normal_elements);
  Element identity() const override;
  Element multiply(const Element &a, const Element &b) const override;
  Element inverse(const Element &a) const override;
  Element reduce(const Element &a) const override;
  bool accepts(const Element &a) const override { return base_->accepts(a); }
  std::string describe() const override;

  const ContextPtr &base() const { return base_; }
  const std::vector<Element> &normal_subgroup() const { return normal_; }

private:
  ContextPtr base_;
  std::vector<Element> normal_;
};

// Convenience constructors for elements.
Element make_matrix(const gf::FieldSpec &field, std::uint8_t n,
                    const std::vector<std::uint32_t> &rowmajor);
Element make_perm(std::uint8_t degree, const std::vector<std::uint32_t> &images);
// Permutation from disjoint cycles of 1-based points.
Element make_perm_cycles(std::uint8_t degree,
                         const std::vector<std::vector<std::uint32_t>> &cycles);

// Matrix helpers over the context's field.
gf::Fel matrix_determinant(const gf::FieldSpec &field, const Element &m);
bool matrix_invertible(const gf::FieldSpec &field, const Element &m);

} // namespace twofusion::grp
