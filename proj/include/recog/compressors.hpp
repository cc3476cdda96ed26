#pragma once

#include <filesystem>
#include <iosfwd>

#include "recog/field.hpp"

namespace recog {

enum class ConstructionTag { truncation, ldpc_extended, explicit_pair };

// Memory compressor H (rows nR_m) and sensory compressor G (rows nR_s) over
// the same n columns. Rates are the realized ones (rows / n).
struct CompressorPair {
  SparseMatrix memory;   // H
  SparseMatrix sensory;  // G
  double rm;
  double rs;
  ConstructionTag tag;

  std::size_t n() const { return memory.cols(); }
  std::size_t n_min() const {
    return std::min<std::size_t>(memory.rows(), sensory.rows());
  }
};

// H = [I 0], G = [I 0]: keep the first round(n*rm) / round(n*rs) symbols.
CompressorPair truncation_pair(std::size_t n, double rm, double rs,
                               FieldSpec spec);

struct LdpcEnsembleSpec {
  std::size_t n;
  int dv;  // nonzeros per column
  int dc;  // nonzeros per row
  FieldSpec spec;
  std::uint64_t seed;
};

struct LdpcSample {
  SparseMatrix matrix;
  int residual_four_cycles;  // left after bounded re-permutation
};

// (dv, dc)-regular matrix from a seeded random edge permutation. Parallel
// edges are repaired by swaps; 4-cycles are attacked by re-permuting a
// bounded number of times and the best draw is kept.
LdpcSample sample_ldpc(const LdpcEnsembleSpec& spec);

// G = [H^T ...]^T: the top block of G is H itself, extra rows up to
// round(n*rs) are freshly sampled rows of the same row degree. Requires
// rs >= realized rate of H.
CompressorPair extend_to_sensory(const SparseMatrix& h, double rs,
                                 std::uint64_t seed);

inline FieldVector compress(const SparseMatrix& m, const FieldVector& v) {
  return m.multiply(v);
}

// alist interchange format; GF(r > 2) variants carry an order token on the
// first line and (index, value) pairs in the adjacency lists.
void write_alist(const SparseMatrix& m, std::ostream& os);
void write_alist(const SparseMatrix& m, const std::filesystem::path& path);
SparseMatrix read_alist(std::istream& is);
SparseMatrix read_alist(const std::filesystem::path& path);

}  // namespace recog
