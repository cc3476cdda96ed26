#include "recog/field.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace recog {

namespace {

bool is_prime(std::uint32_t r) {
  if (r < 2) return false;
  for (std::uint32_t d = 2; d * d <= r; ++d)
    if (r % d == 0) return false;
  return true;
}

}  // namespace

FieldSpec::FieldSpec(std::uint32_t order) : order_(order) {
  if (!is_prime(order))
    throw std::invalid_argument("field order " + std::to_string(order) +
                                " is not prime");
  if (order > 251)
    throw std::invalid_argument("field order " + std::to_string(order) +
                                " exceeds byte-symbol limit 251");
}

symbol_t gf_inv(symbol_t a, FieldSpec spec) {
  if (a == 0) throw std::domain_error("0 has no multiplicative inverse");
  // extended Euclid on (a, r)
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = spec.order(), new_r = a;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += spec.order();
  return static_cast<symbol_t>(t);
}

FieldVector::FieldVector(FieldSpec spec, std::vector<symbol_t> elems)
    : spec_(spec), elems_(std::move(elems)) {
  for (symbol_t e : elems_)
    if (e >= spec_.order())
      throw std::invalid_argument("vector element " + std::to_string(e) +
                                  " out of range for GF(" +
                                  std::to_string(spec_.order()) + ")");
}

FieldVector FieldVector::zeros(FieldSpec spec, std::size_t n) {
  return FieldVector(spec, std::vector<symbol_t>(n, 0));
}

FieldVector FieldVector::prefix(std::size_t k) const {
  if (k > elems_.size())
    throw std::invalid_argument("prefix length exceeds vector length");
  return FieldVector(spec_,
                     std::vector<symbol_t>(elems_.begin(), elems_.begin() + k));
}

namespace {

void check_same_shape(const FieldVector& u, const FieldVector& v) {
  if (u.spec() != v.spec())
    throw std::invalid_argument("field mismatch in vector operation");
  if (u.size() != v.size())
    throw std::invalid_argument("length mismatch in vector operation");
}

}  // namespace

FieldVector vec_add(const FieldVector& u, const FieldVector& v) {
  check_same_shape(u, v);
  std::vector<symbol_t> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = gf_add(u[i], v[i], u.spec());
  return FieldVector(u.spec(), std::move(out));
}

FieldVector vec_sub(const FieldVector& u, const FieldVector& v) {
  check_same_shape(u, v);
  std::vector<symbol_t> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = gf_sub(u[i], v[i], u.spec());
  return FieldVector(u.spec(), std::move(out));
}

SparseMatrix::SparseMatrix(FieldSpec spec, std::uint32_t rows,
                           std::uint32_t cols,
                           std::vector<MatrixEntry> entries)
    : spec_(spec), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const MatrixEntry& a, const MatrixEntry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const MatrixEntry& e = entries_[i];
    if (e.row >= rows_ || e.col >= cols_)
      throw std::invalid_argument("matrix entry out of bounds");
    if (e.value == 0 || e.value >= spec_.order())
      throw std::invalid_argument("matrix entry value out of range");
    if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col)
      throw std::invalid_argument("duplicate matrix entry at (" +
                                  std::to_string(e.row) + ", " +
                                  std::to_string(e.col) + ")");
  }
  row_offsets_.assign(rows_ + 1, 0);
  for (const MatrixEntry& e : entries_) ++row_offsets_[e.row + 1];
  for (std::uint32_t r = 0; r < rows_; ++r)
    row_offsets_[r + 1] += row_offsets_[r];
}

SparseMatrix SparseMatrix::identity_prefix(FieldSpec spec, std::uint32_t rows,
                                           std::uint32_t cols) {
  if (rows > cols)
    throw std::invalid_argument("identity prefix needs rows <= cols");
  std::vector<MatrixEntry> entries;
  entries.reserve(rows);
  for (std::uint32_t i = 0; i < rows; ++i) entries.push_back({i, i, 1});
  return SparseMatrix(spec, rows, cols, std::move(entries));
}

FieldVector SparseMatrix::multiply(const FieldVector& v) const {
  if (v.spec() != spec_)
    throw std::invalid_argument("field mismatch in matrix-vector product");
  if (v.size() != cols_)
    throw std::invalid_argument("dimension mismatch: matrix cols " +
                                std::to_string(cols_) + " vs vector length " +
                                std::to_string(v.size()));
  std::vector<symbol_t> out(rows_, 0);
  const std::uint32_t r = spec_.order();
  if (r == 2) {
    for (const MatrixEntry& e : entries_) out[e.row] ^= v[e.col];
  } else {
    for (const MatrixEntry& e : entries_) {
      const std::uint32_t acc =
          out[e.row] + std::uint32_t{e.value} * v[e.col] % r;
      out[e.row] = static_cast<symbol_t>(acc >= r ? acc - r : acc);
    }
  }
  return FieldVector(spec_, std::move(out));
}

FieldVector mat_vec_mul(const SparseMatrix& m, const FieldVector& v) {
  return m.multiply(v);
}

PackedBits::PackedBits(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

PackedBits PackedBits::from_vector(const FieldVector& v) {
  if (v.spec().order() != 2)
    throw std::invalid_argument("packed bits require GF(2)");
  PackedBits out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) out.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  return out;
}

FieldVector PackedBits::to_vector() const {
  std::vector<symbol_t> elems(n_);
  for (std::size_t i = 0; i < n_; ++i)
    elems[i] = static_cast<symbol_t>(get(i));
  return FieldVector(FieldSpec(2), std::move(elems));
}

std::size_t PackedBits::popcount() const {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

PackedBits mat_vec_mul_packed(const SparseMatrix& m, const PackedBits& v) {
  if (m.spec().order() != 2)
    throw std::invalid_argument("packed product requires GF(2)");
  if (v.size() != m.cols())
    throw std::invalid_argument("dimension mismatch in packed product");
  PackedBits out(m.rows());
  auto w = out.words();
  const auto vin = v.words();
  for (const MatrixEntry& e : m.entries()) {
    const std::uint64_t bit = (vin[e.col >> 6] >> (e.col & 63)) & 1u;
    w[e.row >> 6] ^= bit << (e.row & 63);
  }
  return out;
}

std::size_t packed_prefix_popcount(std::span<const std::uint64_t> words,
                                   std::size_t nbits) {
  std::size_t c = 0;
  const std::size_t full = nbits / 64;
  for (std::size_t i = 0; i < full; ++i)
    c += static_cast<std::size_t>(std::popcount(words[i]));
  const std::size_t rem = nbits & 63;
  if (rem)
    c += static_cast<std::size_t>(
        std::popcount(words[full] & ((std::uint64_t{1} << rem) - 1)));
  return c;
}

std::size_t packed_prefix_xor_popcount(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b,
                                       std::size_t nbits) {
  std::size_t c = 0;
  const std::size_t full = nbits / 64;
  for (std::size_t i = 0; i < full; ++i)
    c += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  const std::size_t rem = nbits & 63;
  if (rem)
    c += static_cast<std::size_t>(std::popcount(
        (a[full] ^ b[full]) & ((std::uint64_t{1} << rem) - 1)));
  return c;
}

}  // namespace recog
