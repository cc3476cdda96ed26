#include "recog/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "recog/rng.hpp"

namespace recog {

namespace {

std::uint32_t rounded_rows(std::size_t n, double rate, const char* which) {
  if (!(rate > 0.0 && rate <= 1.0))
    throw std::invalid_argument(std::string(which) +
                                " rate must be in (0, 1]");
  const auto rows = static_cast<std::uint32_t>(
      std::llround(rate * static_cast<double>(n)));
  if (rows < 1)
    throw std::invalid_argument(std::string(which) +
                                " rate rounds to zero rows");
  return rows;
}

}  // namespace

CompressorPair truncation_pair(std::size_t n, double rm, double rs,
                               FieldSpec spec) {
  const std::uint32_t mrows = rounded_rows(n, rm, "memory");
  const std::uint32_t srows = rounded_rows(n, rs, "sensory");
  auto cols = static_cast<std::uint32_t>(n);
  return CompressorPair{
      SparseMatrix::identity_prefix(spec, mrows, cols),
      SparseMatrix::identity_prefix(spec, srows, cols),
      static_cast<double>(mrows) / static_cast<double>(n),
      static_cast<double>(srows) / static_cast<double>(n),
      ConstructionTag::truncation};
}

namespace {

struct EdgeAssignment {
  // edge k attaches column k / dv to the check slot perm[k]; the check slot
  // p belongs to row p / dc.
  std::vector<std::uint32_t> perm;
};

// Count length-4 cycles: pairs of rows sharing two or more columns.
int count_four_cycles(std::size_t n, int dv, int dc,
                      const EdgeAssignment& edges) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> row_pair_hits;
  for (std::size_t col = 0; col < n; ++col) {
    std::uint32_t rows[16];
    for (int k = 0; k < dv; ++k)
      rows[k] = edges.perm[col * dv + k] / static_cast<std::uint32_t>(dc);
    std::sort(rows, rows + dv);
    for (int a = 0; a < dv; ++a)
      for (int b = a + 1; b < dv; ++b)
        ++row_pair_hits[{rows[a], rows[b]}];
  }
  int cycles = 0;
  for (const auto& [pair, hits] : row_pair_hits)
    cycles += hits * (hits - 1) / 2;
  return cycles;
}

// Draw a permutation and repair parallel edges by random swaps. Returns
// nullopt when the repair loop does not converge.
std::optional<EdgeAssignment> draw_assignment(std::size_t n, int dv, int dc,
                                              RngStream& rng) {
  const std::size_t edge_count = n * static_cast<std::size_t>(dv);
  EdgeAssignment edges;
  edges.perm.resize(edge_count);
  for (std::size_t k = 0; k < edge_count; ++k)
    edges.perm[k] = static_cast<std::uint32_t>(k);
  for (std::size_t k = edge_count - 1; k > 0; --k)
    std::swap(edges.perm[k], edges.perm[rng.next_below(k + 1)]);

  auto cell = [&](std::size_t k) {
    const std::uint64_t row = edges.perm[k] / static_cast<std::uint32_t>(dc);
    const std::uint64_t col = k / static_cast<std::size_t>(dv);
    return (row << 32) | col;
  };

  for (int pass = 0; pass < 200; ++pass) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edge_count * 2);
    bool clean = true;
    for (std::size_t k = 0; k < edge_count; ++k) {
      if (!seen.insert(cell(k)).second) {
        clean = false;
        const std::size_t other = rng.next_below(edge_count);
        std::swap(edges.perm[k], edges.perm[other]);
      }
    }
    if (clean) return edges;
  }
  return std::nullopt;
}

SparseMatrix assignment_to_matrix(const LdpcEnsembleSpec& spec,
                                  const EdgeAssignment& edges,
                                  RngStream& value_rng) {
  std::vector<MatrixEntry> entries;
  entries.reserve(edges.perm.size());
  for (std::size_t k = 0; k < edges.perm.size(); ++k) {
    const auto row = edges.perm[k] / static_cast<std::uint32_t>(spec.dc);
    const auto col = static_cast<std::uint32_t>(k / spec.dv);
    symbol_t value = 1;
    if (spec.spec.order() > 2)
      value = static_cast<symbol_t>(
          1 + value_rng.next_below(spec.spec.order() - 1));
    entries.push_back({row, col, value});
  }
  const auto rows = static_cast<std::uint32_t>(
      edges.perm.size() / static_cast<std::size_t>(spec.dc));
  return SparseMatrix(spec.spec, rows, static_cast<std::uint32_t>(spec.n),
                      std::move(entries));
}

}  // namespace

LdpcSample sample_ldpc(const LdpcEnsembleSpec& spec) {
  if (spec.dv < 1 || spec.dc < 1)
    throw std::invalid_argument("degrees must be positive");
  if (spec.dv > spec.dc)
    throw std::invalid_argument("column degree above row degree does not compress");
  if (spec.dv > 16) throw std::invalid_argument("column degree above 16");
  if ((spec.n * static_cast<std::size_t>(spec.dv)) %
          static_cast<std::size_t>(spec.dc) !=
      0)
    throw std::invalid_argument("n * dv must be divisible by dc");
  const std::size_t rows = spec.n * spec.dv / spec.dc;
  if (rows < 1) throw std::invalid_argument("degree sequence yields no rows");

  std::optional<EdgeAssignment> best;
  int best_cycles = 0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    RngStream rng(spec.seed, "ldpc-perm", static_cast<std::uint64_t>(attempt));
    std::optional<EdgeAssignment> candidate =
        draw_assignment(spec.n, spec.dv, spec.dc, rng);
    if (!candidate) continue;
    const int cycles = count_four_cycles(spec.n, spec.dv, spec.dc, *candidate);
    if (!best || cycles < best_cycles) {
      best = std::move(candidate);
      best_cycles = cycles;
    }
    if (best_cycles == 0) break;
  }
  if (!best)
    throw std::runtime_error("could not sample a parallel-edge-free matrix");

  RngStream value_rng(spec.seed, "ldpc-values", 0);
  return LdpcSample{assignment_to_matrix(spec, *best, value_rng), best_cycles};
}

CompressorPair extend_to_sensory(const SparseMatrix& h, double rs,
                                 std::uint64_t seed) {
  const std::size_t n = h.cols();
  const std::uint32_t srows = rounded_rows(n, rs, "sensory");
  if (srows < h.rows())
    throw std::invalid_argument(
        "sensory rate below memory rate; swap the compressor roles");

  std::vector<MatrixEntry> entries(h.entries().begin(), h.entries().end());
  if (srows > h.rows()) {
    // fresh rows with the same row degree as H
    std::size_t row_degree = 0;
    for (std::uint32_t r = 0; r < h.rows(); ++r)
      row_degree = std::max(row_degree, h.row(r).size());
    if (row_degree == 0 || row_degree > n)
      throw std::invalid_argument("cannot derive a row degree from H");
    RngStream rng(seed, "sensory-rows", 0);
    for (std::uint32_t r = h.rows(); r < srows; ++r) {
      std::set<std::uint32_t> cols;
      while (cols.size() < row_degree)
        cols.insert(static_cast<std::uint32_t>(rng.next_below(n)));
      for (std::uint32_t c : cols) {
        symbol_t value = 1;
        if (h.spec().order() > 2)
          value = static_cast<symbol_t>(1 + rng.next_below(h.spec().order() - 1));
        entries.push_back({r, c, value});
      }
    }
  }
  SparseMatrix g(h.spec(), srows, static_cast<std::uint32_t>(n),
                 std::move(entries));
  return CompressorPair{h, std::move(g),
                        static_cast<double>(h.rows()) / static_cast<double>(n),
                        static_cast<double>(srows) / static_cast<double>(n),
                        ConstructionTag::ldpc_extended};
}

void write_alist(const SparseMatrix& m, std::ostream& os) {
  const std::uint32_t n = m.cols();
  const std::uint32_t rows = m.rows();
  const bool binary = m.spec().order() == 2;

  std::vector<std::vector<std::pair<std::uint32_t, symbol_t>>> by_col(n);
  std::vector<std::vector<std::pair<std::uint32_t, symbol_t>>> by_row(rows);
  for (const MatrixEntry& e : m.entries()) {
    by_col[e.col].push_back({e.row, e.value});
    by_row[e.row].push_back({e.col, e.value});
  }
  std::size_t max_col = 0, max_row = 0;
  for (const auto& c : by_col) max_col = std::max(max_col, c.size());
  for (const auto& r : by_row) max_row = std::max(max_row, r.size());

  os << n << ' ' << rows;
  if (!binary) os << ' ' << m.spec().order();
  os << '\n' << max_col << ' ' << max_row << '\n';
  for (std::uint32_t c = 0; c < n; ++c)
    os << by_col[c].size() << (c + 1 < n ? ' ' : '\n');
  for (std::uint32_t r = 0; r < rows; ++r)
    os << by_row[r].size() << (r + 1 < rows ? ' ' : '\n');

  auto emit = [&](const std::vector<std::pair<std::uint32_t, symbol_t>>& list,
                  std::size_t width) {
    std::size_t printed = 0;
    for (const auto& [idx, val] : list) {
      if (printed) os << ' ';
      os << (idx + 1);
      if (!binary) os << ' ' << static_cast<int>(val);
      ++printed;
    }
    for (; printed < width; ++printed) {
      if (printed) os << ' ';
      os << 0;
      if (!binary) os << ' ' << 0;
    }
    os << '\n';
  };
  for (std::uint32_t c = 0; c < n; ++c) emit(by_col[c], max_col);
  for (std::uint32_t r = 0; r < rows; ++r) emit(by_row[r], max_row);
}

void write_alist(const SparseMatrix& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_alist(m, os);
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

SparseMatrix read_alist(std::istream& is) {
  std::string first_line;
  if (!std::getline(is, first_line))
    throw std::runtime_error("empty alist stream");
  std::istringstream header(first_line);
  std::uint32_t n = 0, rows = 0, order = 2;
  if (!(header >> n >> rows)) throw std::runtime_error("bad alist header");
  header >> order;  // optional field order
  const bool binary = order == 2;

  std::size_t max_col = 0, max_row = 0;
  if (!(is >> max_col >> max_row))
    throw std::runtime_error("bad alist degree line");
  std::vector<std::size_t> col_deg(n), row_deg(rows);
  for (auto& d : col_deg)
    if (!(is >> d)) throw std::runtime_error("bad alist column degrees");
  for (auto& d : row_deg)
    if (!(is >> d)) throw std::runtime_error("bad alist row degrees");

  const FieldSpec spec(order);
  std::vector<MatrixEntry> entries;
  for (std::uint32_t c = 0; c < n; ++c) {
    for (std::size_t k = 0; k < max_col; ++k) {
      std::uint32_t idx = 0;
      int val = 1;
      if (!(is >> idx)) throw std::runtime_error("truncated alist column list");
      if (!binary && !(is >> val))
        throw std::runtime_error("truncated alist value");
      if (idx == 0) continue;  // padding
      entries.push_back(
          {idx - 1, c, static_cast<symbol_t>(binary ? 1 : val)});
    }
  }
  // the row lists restate the same entries; consume and ignore them
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < max_row; ++k) {
      std::uint32_t idx = 0;
      int val = 1;
      if (!(is >> idx)) throw std::runtime_error("truncated alist row list");
      if (!binary && !(is >> val))
        throw std::runtime_error("truncated alist value");
      (void)val;
    }
  }
  return SparseMatrix(spec, rows, n, std::move(entries));
}

SparseMatrix read_alist(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_alist(is);
}

}  // namespace recog
