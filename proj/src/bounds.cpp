#include "recog/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recog {

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("binary entropy needs q in [0, 1]");
  double h = 0.0;
  if (q > 0.0) h -= q * std::log2(q);
  if (q < 1.0) h -= (1.0 - q) * std::log2(1.0 - q);
  return h;
}

double truncation_bound(double rm, double rs, const Pmf& qx, const Pmf& qz) {
  return std::min(rm, rs) * (entropy(convolve(qx, qz)) - entropy(qz));
}

namespace {

BoundValue floored(double v) { return v < 0.0 ? BoundValue{0.0, true} : BoundValue{v, false}; }

}  // namespace

BoundValue ldpc_bound(double rm, double rs, double q) {
  return floored(std::min(rm, rs) - binary_entropy(q));
}

BoundValue syndrome_bound(double rm, double rs, double rz) {
  if (rz < 0.0) throw std::invalid_argument("entropy rate must be >= 0");
  return floored(std::min(rm, rs) - rz);
}

WorstCaseNoiseBound worst_case_noise_bound(FieldSpec spec, double q,
                                           double rate) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("worst-case bound needs q in (0, 1)");
  const double r = spec.order();
  const double value =
      rate * (std::log2(r) + (1.0 - q) * std::log2(1.0 - q) +
              q * std::log2(q / (r - 1.0)));
  return WorstCaseNoiseBound{value, Pmf::uniform_error(spec, q)};
}

}  // namespace recog
