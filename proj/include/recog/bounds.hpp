#pragma once

#include "recog/prob.hpp"

namespace recog {

// A rate bound value; `floored` marks a formally negative bound reported
// as zero (no positive pattern rate is achievable by that route).
struct BoundValue {
  double value;
  bool floored;
};

// Largest asymptotically safe pattern rate for the truncation recognizer:
// min(rm, rs) * (H(qx * qz) - H(qz)), reported at the epsilon = 0 boundary.
double truncation_bound(double rm, double rs, const Pmf& qx, const Pmf& qz);

// Binary LDPC design bound: min(rm, rs) - H2(q), floored at zero.
BoundValue ldpc_bound(double rm, double rs, double q);

// General linear-code bound: min(rm, rs) - rz, floored at zero.
BoundValue syndrome_bound(double rm, double rs, double rz);

// Least upper bound on the pattern rate when only the noise mass at zero is
// known: the entropy-maximizing noise spreads the remaining mass evenly,
// giving rate * (log2 r + (1-q) log2(1-q) + q log2(q / (r-1))).
struct WorstCaseNoiseBound {
  double value;
  Pmf maximizer;
};

WorstCaseNoiseBound worst_case_noise_bound(FieldSpec spec, double q,
                                           double rate);

double binary_entropy(double q);

}  // namespace recog
