#pragma once

#include <optional>

#include "recog/field.hpp"
#include "recog/noise.hpp"
#include "recog/prob.hpp"

namespace recog {

struct BpConfig {
  int max_iterations = 50;
  double damping = 0.0;  // [0, 1), fraction of the previous message kept
  bool early_exit = true;
};

// Result of one noise-estimation call. A missing estimate is the failure
// symbol; a returned estimate always satisfies H z = syndrome.
struct DecodeOutcome {
  std::optional<FieldVector> estimate;
  int iterations = 0;
  bool syndrome_satisfied = false;
  bool ambiguous = false;  // ML oracle only: optimum not unique

  bool failed() const { return !estimate.has_value(); }
};

// Sum-product decoding on the Tanner graph of H with check constraints
// offset by a target syndrome. Iteration 0 is the symbolwise hard decision
// on the channel prior alone. GF(2) runs in the log-likelihood-ratio
// domain; larger fields carry full r-ary probability messages.
//
// One instance holds the graph and scratch buffers; decode() may be called
// repeatedly. Distinct instances can run concurrently on the same H.
class BpDecoder {
 public:
  BpDecoder(const SparseMatrix& h, Pmf channel, BpConfig config = {});

  DecodeOutcome decode(const FieldVector& syndrome);
  // GF(2) only: soft per-variable priors (natural-log LLR of bit = 0).
  DecodeOutcome decode(const FieldVector& syndrome,
                       std::span<const double> prior_llrs);

 private:
  DecodeOutcome decode_binary(const FieldVector& syndrome,
                              std::span<const double> prior_llrs);
  DecodeOutcome decode_generic(const FieldVector& syndrome);
  bool syndrome_matches(const std::vector<symbol_t>& z,
                        const FieldVector& syndrome) const;

  const SparseMatrix& h_;
  Pmf channel_;
  BpConfig config_;

  // graph layout: edge arrays indexed per entry of h (row-major order)
  std::vector<std::uint32_t> edge_var_;
  std::vector<std::uint32_t> edge_check_;
  std::vector<symbol_t> edge_coeff_;
  std::vector<std::vector<std::uint32_t>> var_edges_;
  std::vector<std::vector<std::uint32_t>> check_edges_;

  // scratch
  std::vector<double> msg_vc_;
  std::vector<double> msg_cv_;
  std::vector<symbol_t> hard_;
};

DecodeOutcome bp_syndrome_decode(const SparseMatrix& h,
                                 const FieldVector& syndrome,
                                 const Pmf& channel, const BpConfig& config = {});

// Solution set of H z = syndrome: a particular solution plus a basis of the
// null space (empty basis means a unique solution).
struct CosetSystem {
  bool consistent = false;
  FieldVector particular;
  std::vector<FieldVector> basis;
};

CosetSystem coset_system(const SparseMatrix& h, const FieldVector& syndrome);

std::size_t matrix_rank(const SparseMatrix& m);

// Exhaustive maximum-likelihood reference: walks the whole coset and keeps
// the estimate with the largest exact noise likelihood. Ties break toward
// the lexicographically smallest vector and are flagged. Throws when the
// coset has more than max_candidates members.
DecodeOutcome ml_syndrome_decode(const SparseMatrix& h,
                                 const FieldVector& syndrome,
                                 const NoiseModel& noise,
                                 std::uint64_t max_candidates = 1u << 24);

}  // namespace recog
