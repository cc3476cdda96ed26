#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace recog {

using symbol_t = std::uint8_t;

// Prime field GF(r). Composite orders are rejected at construction;
// extension fields are out of scope. Symbols are stored as bytes, which
// caps the supported order at 251.
class FieldSpec {
 public:
  explicit FieldSpec(std::uint32_t order);
  std::uint32_t order() const { return order_; }
  bool operator==(const FieldSpec&) const = default;

 private:
  std::uint32_t order_;
};

inline symbol_t gf_add(symbol_t a, symbol_t b, FieldSpec spec) {
  std::uint32_t s = std::uint32_t{a} + b;
  if (s >= spec.order()) s -= spec.order();
  return static_cast<symbol_t>(s);
}

inline symbol_t gf_sub(symbol_t a, symbol_t b, FieldSpec spec) {
  return a >= b ? static_cast<symbol_t>(a - b)
                : static_cast<symbol_t>(a + spec.order() - b);
}

inline symbol_t gf_neg(symbol_t a, FieldSpec spec) {
  return a == 0 ? symbol_t{0} : static_cast<symbol_t>(spec.order() - a);
}

inline symbol_t gf_mul(symbol_t a, symbol_t b, FieldSpec spec) {
  return static_cast<symbol_t>(std::uint32_t{a} * b % spec.order());
}

// Multiplicative inverse; throws std::domain_error for a == 0.
symbol_t gf_inv(symbol_t a, FieldSpec spec);

// Immutable vector of residues in [0, r).
class FieldVector {
 public:
  FieldVector(FieldSpec spec, std::vector<symbol_t> elems);
  static FieldVector zeros(FieldSpec spec, std::size_t n);

  FieldSpec spec() const { return spec_; }
  std::size_t size() const { return elems_.size(); }
  symbol_t operator[](std::size_t i) const { return elems_[i]; }
  std::span<const symbol_t> elems() const { return elems_; }
  FieldVector prefix(std::size_t k) const;

  bool operator==(const FieldVector&) const = default;

 private:
  FieldSpec spec_;
  std::vector<symbol_t> elems_;
};

FieldVector vec_add(const FieldVector& u, const FieldVector& v);
FieldVector vec_sub(const FieldVector& u, const FieldVector& v);

struct MatrixEntry {
  std::uint32_t row;
  std::uint32_t col;
  symbol_t value;  // nonzero

  bool operator==(const MatrixEntry&) const = default;
};

// Sparse GF(r) matrix, row-compressed and immutable after construction.
// Entries must be unique (row, col) pairs with values in [1, r).
class SparseMatrix {
 public:
  SparseMatrix(FieldSpec spec, std::uint32_t rows, std::uint32_t cols,
               std::vector<MatrixEntry> entries);

  // [I_k 0]: rows k, the k x k identity followed by zero columns.
  static SparseMatrix identity_prefix(FieldSpec spec, std::uint32_t rows,
                                      std::uint32_t cols);

  FieldSpec spec() const { return spec_; }
  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::size_t nonzeros() const { return entries_.size(); }

  // Sorted by (row, col); row r occupies [row_offsets()[r], row_offsets()[r+1]).
  std::span<const MatrixEntry> entries() const { return entries_; }
  std::span<const std::uint32_t> row_offsets() const { return row_offsets_; }
  std::span<const MatrixEntry> row(std::uint32_t r) const {
    return std::span<const MatrixEntry>(entries_).subspan(
        row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]);
  }

  FieldVector multiply(const FieldVector& v) const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  FieldSpec spec_;
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<MatrixEntry> entries_;
  std::vector<std::uint32_t> row_offsets_;
};

FieldVector mat_vec_mul(const SparseMatrix& m, const FieldVector& v);

// ---- packed GF(2) path ----
//
// Bit-packed vectors and the matching matrix-vector product. Semantics are
// identical to the generic path over GF(2); unit tests compare the two.
// Unused bits past size() are kept zero.

class PackedBits {
 public:
  explicit PackedBits(std::size_t n);
  static PackedBits from_vector(const FieldVector& v);  // requires order 2
  FieldVector to_vector() const;

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool bit) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (bit)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }
  std::size_t popcount() const;

  bool operator==(const PackedBits&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

PackedBits mat_vec_mul_packed(const SparseMatrix& m, const PackedBits& v);

// Weight of the first nbits of a word span / of the xor of two word spans.
std::size_t packed_prefix_popcount(std::span<const std::uint64_t> words,
                                   std::size_t nbits);
std::size_t packed_prefix_xor_popcount(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b,
                                       std::size_t nbits);

}  // namespace recog
