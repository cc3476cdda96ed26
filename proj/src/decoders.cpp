#include "recog/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "recog/errors.hpp"

namespace recog {

namespace {

constexpr double kLlrClamp = 40.0;
// keeps atanh finite; tanh products are clamped into (-1, 1)
constexpr double kTanhClamp = 1.0 - 1e-15;

double prior_llr(const Pmf& channel) {
  const double p0 = channel[0], p1 = channel[1];
  if (p1 == 0.0) return kLlrClamp;
  if (p0 == 0.0) return -kLlrClamp;
  return std::clamp(std::log(p0 / p1), -kLlrClamp, kLlrClamp);
}

}  // namespace

BpDecoder::BpDecoder(const SparseMatrix& h, Pmf channel, BpConfig config)
    : h_(h), channel_(std::move(channel)), config_(config) {
  if (channel_.spec() != h_.spec())
    throw std::invalid_argument("channel pmf field does not match H");
  if (config_.max_iterations < 0)
    throw std::invalid_argument("max_iterations must be >= 0");
  if (!(config_.damping >= 0.0 && config_.damping < 1.0))
    throw std::invalid_argument("damping must be in [0, 1)");

  const auto entries = h_.entries();
  edge_var_.reserve(entries.size());
  edge_check_.reserve(entries.size());
  edge_coeff_.reserve(entries.size());
  var_edges_.resize(h_.cols());
  check_edges_.resize(h_.rows());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    edge_var_.push_back(entries[e].col);
    edge_check_.push_back(entries[e].row);
    edge_coeff_.push_back(entries[e].value);
    var_edges_[entries[e].col].push_back(static_cast<std::uint32_t>(e));
    check_edges_[entries[e].row].push_back(static_cast<std::uint32_t>(e));
  }
  hard_.resize(h_.cols());
}

bool BpDecoder::syndrome_matches(const std::vector<symbol_t>& z,
                                 const FieldVector& syndrome) const {
  const FieldSpec spec = h_.spec();
  const std::uint32_t r = spec.order();
  std::vector<symbol_t> acc(h_.rows(), 0);
  if (r == 2) {
    for (std::size_t e = 0; e < edge_var_.size(); ++e)
      acc[edge_check_[e]] ^= z[edge_var_[e]];
  } else {
    for (std::size_t e = 0; e < edge_var_.size(); ++e)
      acc[edge_check_[e]] = gf_add(
          acc[edge_check_[e]], gf_mul(edge_coeff_[e], z[edge_var_[e]], spec),
          spec);
  }
  for (std::uint32_t c = 0; c < h_.rows(); ++c)
    if (acc[c] != syndrome[c]) return false;
  return true;
}

DecodeOutcome BpDecoder::decode(const FieldVector& syndrome) {
  if (syndrome.spec() != h_.spec())
    throw std::invalid_argument("syndrome field does not match H");
  if (syndrome.size() != h_.rows())
    throw std::invalid_argument("syndrome length " +
                                std::to_string(syndrome.size()) +
                                " does not match H rows " +
                                std::to_string(h_.rows()));
  return h_.spec().order() == 2 ? decode_binary(syndrome, {})
                                : decode_generic(syndrome);
}

DecodeOutcome BpDecoder::decode(const FieldVector& syndrome,
                                std::span<const double> prior_llrs) {
  if (h_.spec().order() != 2)
    throw std::invalid_argument("per-variable priors are GF(2) only");
  if (prior_llrs.size() != h_.cols())
    throw std::invalid_argument("prior length does not match H columns");
  if (syndrome.size() != h_.rows())
    throw std::invalid_argument("syndrome length does not match H rows");
  return decode_binary(syndrome, prior_llrs);
}

DecodeOutcome BpDecoder::decode_binary(const FieldVector& syndrome,
                                       std::span<const double> prior_llrs) {
  const std::size_t edges = edge_var_.size();
  const double shared_l0 = prior_llr(channel_);
  auto l0_of = [&](std::uint32_t v) {
    return prior_llrs.empty()
               ? shared_l0
               : std::clamp(prior_llrs[v], -kLlrClamp, kLlrClamp);
  };

  // iteration 0: channel hard decision
  for (std::uint32_t v = 0; v < h_.cols(); ++v)
    hard_[v] = l0_of(v) < 0.0 ? 1 : 0;
  if (syndrome_matches(hard_, syndrome))
    return DecodeOutcome{FieldVector(h_.spec(), hard_), 0, true, false};
  if (config_.max_iterations == 0) return DecodeOutcome{{}, 0, false, false};

  msg_vc_.resize(edges);
  for (std::size_t e = 0; e < edges; ++e) msg_vc_[e] = l0_of(edge_var_[e]);
  msg_cv_.assign(edges, 0.0);
  std::vector<double> tanh_buf;
  std::vector<double> posterior(h_.cols());

  for (int iter = 1; iter <= config_.max_iterations; ++iter) {
    // check nodes: extrinsic LLR via leave-one-out tanh products, sign
    // flipped when the target syndrome bit is 1
    for (std::uint32_t c = 0; c < h_.rows(); ++c) {
      const auto& ce = check_edges_[c];
      tanh_buf.resize(ce.size());
      for (std::size_t k = 0; k < ce.size(); ++k)
        tanh_buf[k] = std::tanh(0.5 * msg_vc_[ce[k]]);
      const double sign = syndrome[c] ? -1.0 : 1.0;
      for (std::size_t k = 0; k < ce.size(); ++k) {
        double prod = 1.0;
        for (std::size_t j = 0; j < ce.size(); ++j)
          if (j != k) prod *= tanh_buf[j];
        prod = std::clamp(prod, -kTanhClamp, kTanhClamp);
        const double fresh = sign * 2.0 * std::atanh(prod);
        msg_cv_[ce[k]] = config_.damping * msg_cv_[ce[k]] +
                         (1.0 - config_.damping) * fresh;
      }
    }
    // variable nodes
    for (std::uint32_t v = 0; v < h_.cols(); ++v) {
      double total = l0_of(v);
      for (std::uint32_t e : var_edges_[v]) total += msg_cv_[e];
      posterior[v] = total;
      for (std::uint32_t e : var_edges_[v])
        msg_vc_[e] = std::clamp(total - msg_cv_[e], -kLlrClamp, kLlrClamp);
      hard_[v] = posterior[v] < 0.0 ? 1 : 0;
    }
    const bool last = iter == config_.max_iterations;
    if (config_.early_exit || last) {
      if (syndrome_matches(hard_, syndrome))
        return DecodeOutcome{FieldVector(h_.spec(), hard_), iter, true, false};
      if (last) return DecodeOutcome{{}, iter, false, false};
    }
  }
  return DecodeOutcome{{}, config_.max_iterations, false, false};
}

DecodeOutcome BpDecoder::decode_generic(const FieldVector& syndrome) {
  const FieldSpec spec = h_.spec();
  const std::uint32_t r = spec.order();
  const std::size_t edges = edge_var_.size();

  std::vector<double> prior(r);
  for (std::uint32_t k = 0; k < r; ++k)
    prior[k] = channel_[static_cast<symbol_t>(k)];

  // iteration 0: symbolwise most probable value
  const symbol_t hard0 = static_cast<symbol_t>(
      std::max_element(prior.begin(), prior.end()) - prior.begin());
  std::fill(hard_.begin(), hard_.end(), hard0);
  if (syndrome_matches(hard_, syndrome))
    return DecodeOutcome{FieldVector(spec, hard_), 0, true, false};
  if (config_.max_iterations == 0) return DecodeOutcome{{}, 0, false, false};

  // probability-domain messages, one r-vector per edge
  std::vector<double> vc(edges * r), cv(edges * r, 1.0 / r);
  for (std::size_t e = 0; e < edges; ++e)
    std::copy(prior.begin(), prior.end(), vc.begin() + e * r);

  auto conv = [&](const double* a, const double* b, double* out) {
    for (std::uint32_t k = 0; k < r; ++k) out[k] = 0.0;
    for (std::uint32_t i = 0; i < r; ++i)
      for (std::uint32_t j = 0; j < r; ++j)
        out[gf_add(static_cast<symbol_t>(i), static_cast<symbol_t>(j), spec)] +=
            a[i] * b[j];
  };
  auto normalize = [&](double* m) {
    double s = 0.0;
    for (std::uint32_t k = 0; k < r; ++k) s += m[k];
    if (s <= 0.0) {
      for (std::uint32_t k = 0; k < r; ++k) m[k] = 1.0 / r;
    } else {
      for (std::uint32_t k = 0; k < r; ++k) m[k] /= s;
    }
  };

  std::vector<double> posterior(h_.cols() * r);
  std::vector<double> fwd, bwd, loo(r), fresh(r);

  for (int iter = 1; iter <= config_.max_iterations; ++iter) {
    for (std::uint32_t c = 0; c < h_.rows(); ++c) {
      const auto& ce = check_edges_[c];
      const std::size_t d = ce.size();
      // distributions of coeff * value per edge, then prefix/suffix
      // convolutions for leave-one-out sums
      fwd.assign((d + 1) * r, 0.0);
      bwd.assign((d + 1) * r, 0.0);
      std::vector<double> w(d * r);
      for (std::size_t k = 0; k < d; ++k) {
        const symbol_t coeff = edge_coeff_[ce[k]];
        const double* m = &vc[std::size_t{ce[k]} * r];
        for (std::uint32_t z = 0; z < r; ++z)
          w[k * r + gf_mul(coeff, static_cast<symbol_t>(z), spec)] += m[z];
      }
      fwd[0] = 1.0;
      for (std::size_t k = 0; k < d; ++k)
        conv(&fwd[k * r], &w[k * r], &fwd[(k + 1) * r]);
      bwd[d * r] = 1.0;
      for (std::size_t k = d; k > 0; --k)
        conv(&bwd[k * r], &w[(k - 1) * r], &bwd[(k - 1) * r]);
      for (std::size_t k = 0; k < d; ++k) {
        conv(&fwd[k * r], &bwd[(k + 1) * r], loo.data());
        // coeff * z_v must equal s_c minus the sum of the other terms
        const symbol_t coeff = edge_coeff_[ce[k]];
        for (std::uint32_t z = 0; z < r; ++z) {
          const symbol_t other = gf_sub(
              syndrome[c], gf_mul(coeff, static_cast<symbol_t>(z), spec), spec);
          fresh[z] = loo[other];
        }
        normalize(fresh.data());
        double* out = &cv[std::size_t{ce[k]} * r];
        for (std::uint32_t z = 0; z < r; ++z)
          out[z] = config_.damping * out[z] +
                   (1.0 - config_.damping) * fresh[z];
        normalize(out);
      }
    }
    for (std::uint32_t v = 0; v < h_.cols(); ++v) {
      double* post = &posterior[std::size_t{v} * r];
      for (std::uint32_t k = 0; k < r; ++k) post[k] = prior[k];
      for (std::uint32_t e : var_edges_[v])
        for (std::uint32_t k = 0; k < r; ++k) post[k] *= cv[std::size_t{e} * r + k];
      normalize(post);
      for (std::uint32_t e : var_edges_[v]) {
        double* m = &vc[std::size_t{e} * r];
        const double* in = &cv[std::size_t{e} * r];
        for (std::uint32_t k = 0; k < r; ++k)
          m[k] = in[k] > 0.0 ? post[k] / in[k] : prior[k];
        normalize(m);
      }
      hard_[v] = static_cast<symbol_t>(
          std::max_element(post, post + r) - post);
    }
    const bool last = iter == config_.max_iterations;
    if (config_.early_exit || last) {
      if (syndrome_matches(hard_, syndrome))
        return DecodeOutcome{FieldVector(spec, hard_), iter, true, false};
      if (last) return DecodeOutcome{{}, iter, false, false};
    }
  }
  return DecodeOutcome{{}, config_.max_iterations, false, false};
}

DecodeOutcome bp_syndrome_decode(const SparseMatrix& h,
                                 const FieldVector& syndrome,
                                 const Pmf& channel, const BpConfig& config) {
  BpDecoder decoder(h, channel, config);
  return decoder.decode(syndrome);
}

CosetSystem coset_system(const SparseMatrix& h, const FieldVector& syndrome) {
  if (syndrome.size() != h.rows())
    throw std::invalid_argument("syndrome length does not match H rows");
  if (syndrome.spec() != h.spec())
    throw std::invalid_argument("syndrome field does not match H");
  const FieldSpec spec = h.spec();
  const std::uint32_t rows = h.rows(), cols = h.cols();

  // dense augmented matrix [A | s], reduced to RREF
  std::vector<symbol_t> a(static_cast<std::size_t>(rows) * (cols + 1), 0);
  auto at = [&](std::uint32_t r, std::uint32_t c) -> symbol_t& {
    return a[static_cast<std::size_t>(r) * (cols + 1) + c];
  };
  for (const MatrixEntry& e : h.entries()) at(e.row, e.col) = e.value;
  for (std::uint32_t r = 0; r < rows; ++r) at(r, cols) = syndrome[r];

  std::vector<std::int64_t> pivot_row_of_col(cols, -1);
  std::uint32_t pivot_row = 0;
  for (std::uint32_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::uint32_t pr = pivot_row;
    while (pr < rows && at(pr, c) == 0) ++pr;
    if (pr == rows) continue;
    for (std::uint32_t k = c; k <= cols; ++k)
      std::swap(at(pivot_row, k), at(pr, k));
    const symbol_t inv = gf_inv(at(pivot_row, c), spec);
    for (std::uint32_t k = c; k <= cols; ++k)
      at(pivot_row, k) = gf_mul(at(pivot_row, k), inv, spec);
    for (std::uint32_t r = 0; r < rows; ++r) {
      if (r == pivot_row) continue;
      const symbol_t f = at(r, c);
      if (f == 0) continue;
      for (std::uint32_t k = c; k <= cols; ++k)
        at(r, k) = gf_sub(at(r, k), gf_mul(f, at(pivot_row, k), spec), spec);
    }
    pivot_row_of_col[c] = pivot_row;
    ++pivot_row;
  }

  CosetSystem out{false, FieldVector::zeros(spec, cols), {}};
  for (std::uint32_t r = pivot_row; r < rows; ++r)
    if (at(r, cols) != 0) return out;  // 0 = nonzero: inconsistent
  out.consistent = true;

  std::vector<symbol_t> particular(cols, 0);
  for (std::uint32_t c = 0; c < cols; ++c)
    if (pivot_row_of_col[c] >= 0)
      particular[c] = at(static_cast<std::uint32_t>(pivot_row_of_col[c]), cols);
  out.particular = FieldVector(spec, std::move(particular));

  for (std::uint32_t f = 0; f < cols; ++f) {
    if (pivot_row_of_col[f] >= 0) continue;
    std::vector<symbol_t> basis(cols, 0);
    basis[f] = 1;
    for (std::uint32_t c = 0; c < cols; ++c)
      if (pivot_row_of_col[c] >= 0)
        basis[c] = gf_neg(
            at(static_cast<std::uint32_t>(pivot_row_of_col[c]), f), spec);
    out.basis.push_back(FieldVector(spec, std::move(basis)));
  }
  return out;
}

std::size_t matrix_rank(const SparseMatrix& m) {
  const CosetSystem sys =
      coset_system(m, FieldVector::zeros(m.spec(), m.rows()));
  return m.cols() - sys.basis.size();
}

DecodeOutcome ml_syndrome_decode(const SparseMatrix& h,
                                 const FieldVector& syndrome,
                                 const NoiseModel& noise,
                                 std::uint64_t max_candidates) {
  if (noise.spec() != h.spec())
    throw std::invalid_argument("noise field does not match H");
  const CosetSystem sys = coset_system(h, syndrome);
  if (!sys.consistent) return DecodeOutcome{{}, 0, false, false};

  const FieldSpec spec = h.spec();
  const std::uint32_t r = spec.order();
  const std::size_t k = sys.basis.size();

  double candidates = 1.0;
  for (std::size_t i = 0; i < k; ++i) candidates *= r;
  if (candidates > static_cast<double>(max_candidates))
    throw ResourceError("coset of " + std::to_string(candidates) +
                        " members is too large to enumerate");

  std::vector<symbol_t> z(sys.particular.elems().begin(),
                          sys.particular.elems().end());
  std::vector<std::uint32_t> digits(k, 0);

  // near-exact ties (same-histogram sequences land bit-identical for i.i.d.
  // scoring; a small tolerance covers the rest)
  const double tie_tol = 1e-9;

  std::optional<std::vector<symbol_t>> best;
  double best_ll = 0.0;
  bool ambiguous = false;

  for (;;) {
    const double ll = noise.log_likelihood(FieldVector(spec, z));
    if (!best) {
      best = z;
      best_ll = ll;
    } else if (ll > best_ll + tie_tol) {
      best = z;
      best_ll = ll;
      ambiguous = false;
    } else if (ll >= best_ll - tie_tol && z != *best) {
      ambiguous = true;
      if (std::lexicographical_compare(z.begin(), z.end(), best->begin(),
                                       best->end())) {
        best = z;
        best_ll = std::max(best_ll, ll);
      }
    }
    // odometer over the free coordinates; adding a basis vector r times
    // returns to the start, so wrapping needs no subtraction
    std::size_t i = 0;
    for (; i < k; ++i) {
      const FieldVector& b = sys.basis[i];
      for (std::size_t t = 0; t < z.size(); ++t)
        z[t] = gf_add(z[t], b[t], spec);
      if (++digits[i] < r) break;
      digits[i] = 0;
    }
    if (i == k) break;
  }
  return DecodeOutcome{FieldVector(spec, std::move(*best)), 0, true, ambiguous};
}

}  // namespace recog
