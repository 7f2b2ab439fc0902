#include "sylkit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sylkit/dense_io.hpp"
#include "sylkit/rng.hpp"

namespace sylkit::sparse {

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols,
                           std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != n_rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != values_.size() || col_idx_.size() != values_.size())
    throw DimensionMismatch("SparseMatrix: inconsistent CSR arrays");
  for (std::size_t i = 0; i < n_rows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i])
      throw DimensionMismatch("SparseMatrix: row_ptr decreases at row " + std::to_string(i));
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= n_cols_)
        throw DimensionMismatch("SparseMatrix: column index out of range in row " +
                                std::to_string(i));
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1])
        throw DimensionMismatch("SparseMatrix: row " + std::to_string(i) +
                                " is not in canonical order");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                         std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row >= n_rows || t.col >= n_cols)
      throw DimensionMismatch("from_triplets: entry (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") out of range");
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> rp(n_rows + 1, 0), ci;
  std::vector<double> vals;
  ci.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && t.row == entries[k - 1].row && t.col == entries[k - 1].col) {
      vals.back() += t.value;
      continue;
    }
    ci.push_back(t.col);
    vals.push_back(t.value);
    ++rp[t.row + 1];
  }
  for (std::size_t i = 0; i < n_rows; ++i) rp[i + 1] += rp[i];
  return SparseMatrix(n_rows, n_cols, std::move(rp), std::move(ci), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> rp(n + 1), ci(n);
  for (std::size_t i = 0; i <= n; ++i) rp[i] = i;
  for (std::size_t i = 0; i < n; ++i) ci[i] = i;
  return SparseMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const DenseMat& m) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) t.push_back({i, j, m(i, j)});
  return from_triplets(m.rows(), m.cols(), std::move(t));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto b = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto e = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

DenseMat SparseMatrix::to_dense() const {
  DenseMat d(n_rows_, n_cols_);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
  return d;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<std::size_t> rp(n_cols_ + 1, 0), ci(nnz());
  std::vector<double> vals(nnz());
  for (std::size_t c : col_idx_) ++rp[c + 1];
  for (std::size_t j = 0; j < n_cols_; ++j) rp[j + 1] += rp[j];
  std::vector<std::size_t> next(rp.begin(), rp.end() - 1);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::size_t q = next[col_idx_[p]]++;
      ci[q] = i;
      vals[q] = values_[p];
    }
  return SparseMatrix(n_cols_, n_rows_, std::move(rp), std::move(ci), std::move(vals));
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void spmv_block(const SparseMatrix& m, const BlockVec& x, bool transpose, BlockVec& out) {
  const std::size_t in_dim = transpose ? m.n_rows() : m.n_cols();
  const std::size_t out_dim = transpose ? m.n_cols() : m.n_rows();
  if (x.rows() != in_dim)
    throw DimensionMismatch("spmv_block: operand has " + std::to_string(x.rows()) +
                            " rows, expected " + std::to_string(in_dim));
  if (out.rows() != out_dim || out.cols() != x.cols())
    throw DimensionMismatch("spmv_block: output block has the wrong shape");
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_idx();
  const auto& va = m.values();
  const std::size_t r = x.cols();
  if (!transpose) {
    for (std::size_t c = 0; c < r; ++c) {
      const double* xc = x.data() + c * in_dim;
      double* oc = out.data() + c * out_dim;
      for (std::size_t i = 0; i < out_dim; ++i) {
        double s = 0.0;
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * xc[ci[p]];
        oc[i] = s;
      }
    }
  } else {
    out.fill(0.0);
    for (std::size_t c = 0; c < r; ++c) {
      const double* xc = x.data() + c * in_dim;
      double* oc = out.data() + c * out_dim;
      for (std::size_t i = 0; i < in_dim; ++i) {
        const double xi = xc[i];
        if (xi == 0.0) continue;
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) oc[ci[p]] += va[p] * xi;
      }
    }
  }
}

BlockVec spmv_block(const SparseMatrix& m, const BlockVec& x, bool transpose) {
  BlockVec out(transpose ? m.n_cols() : m.n_rows(), x.cols());
  spmv_block(m, x, transpose, out);
  return out;
}

// ---------------------------------------------------------------------------
// Convection-diffusion generators

std::array<double, 3> ConvectionField::eval(double x, double y, double z) const {
  switch (kind) {
    case Kind::Constant:
      return w;
    case Kind::Example61A:
      return {1.0, 1.0, 0.0};
    case Kind::Example61B:
      return {3.0 * y * (1.0 - x * x), -2.0 * x * (1.0 - y * y), 0.0};
    case Kind::Example63A:
      return {x * std::sin(x), y * std::cos(y), std::exp(z * z - 1.0)};
    case Kind::Example63B:
      return {(1.0 - x * x) * y * z, 1.0, std::exp(z)};
  }
  return w;
}

std::string ConvectionField::name() const {
  switch (kind) {
    case Kind::Example61A: return "example61_A";
    case Kind::Example61B: return "example61_B";
    case Kind::Example63A: return "example63_A";
    case Kind::Example63B: return "example63_B";
    case Kind::Constant: break;
  }
  std::string s = "constant:" + la::format_double(w[0]) + "," + la::format_double(w[1]);
  if (dims != 2) s += "," + la::format_double(w[2]);
  return s;
}

ConvectionField parse_field(const std::string& spec) {
  ConvectionField f;
  if (spec == "example61_A") {
    f.kind = ConvectionField::Kind::Example61A;
    f.dims = 2;
  } else if (spec == "example61_B") {
    f.kind = ConvectionField::Kind::Example61B;
    f.dims = 2;
  } else if (spec == "example63_A") {
    f.kind = ConvectionField::Kind::Example63A;
    f.dims = 3;
  } else if (spec == "example63_B") {
    f.kind = ConvectionField::Kind::Example63B;
    f.dims = 3;
  } else if (spec == "zero") {
    f.dims = 0;
  } else if (spec.rfind("constant:", 0) == 0) {
    std::vector<double> comps;
    std::stringstream ss(spec.substr(9));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t pos = 0;
        comps.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InvalidField("bad constant field component '" + item + "'");
      }
    }
    if (comps.size() != 2 && comps.size() != 3)
      throw InvalidField("constant field needs 2 or 3 components: '" + spec + "'");
    for (std::size_t i = 0; i < comps.size(); ++i) f.w[i] = comps[i];
    f.dims = comps.size();
  } else {
    throw InvalidField("unknown convection field '" + spec + "'");
  }
  return f;
}

namespace {

SparseMatrix convdiff(std::size_t dim, std::size_t grid, double nu,
                      const ConvectionField& field) {
  if (grid < 3) throw InvalidField("grid must be at least 3, got " + std::to_string(grid));
  if (field.dims != 0 && field.dims != dim)
    throw InvalidField("field " + field.name() + " is not defined in " + std::to_string(dim) +
                       " dimensions");
  if (!(nu > 0.0)) throw InvalidField("viscosity must be positive");
  const double h = 1.0 / static_cast<double>(grid + 1);
  const double diff = nu / (h * h);
  const std::size_t n = dim == 2 ? grid * grid : grid * grid * grid;
  const std::size_t stride[3] = {1, grid, grid * grid};

  std::vector<std::size_t> rp(n + 1, 0), ci;
  std::vector<double> vals;
  ci.reserve(n * (2 * dim + 1));
  vals.reserve(n * (2 * dim + 1));
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t idx[3] = {p % grid, (p / grid) % grid, dim == 3 ? p / (grid * grid) : 0};
    const double x = (idx[0] + 1) * h, y = (idx[1] + 1) * h;
    const double z = dim == 3 ? (idx[2] + 1) * h : 0.0;
    const auto w = field.eval(x, y, z);
    // gather (column, value) in increasing column order
    std::pair<std::size_t, double> row[7];
    std::size_t cnt = 0;
    for (std::size_t c = dim; c-- > 0;)
      if (idx[c] > 0) row[cnt++] = {p - stride[c], diff + w[c] / (2.0 * h)};
    row[cnt++] = {p, -2.0 * static_cast<double>(dim) * diff};
    for (std::size_t c = 0; c < dim; ++c)
      if (idx[c] + 1 < grid) row[cnt++] = {p + stride[c], diff - w[c] / (2.0 * h)};
    for (std::size_t k = 0; k < cnt; ++k) {
      ci.push_back(row[k].first);
      vals.push_back(row[k].second);
    }
    rp[p + 1] = ci.size();
  }
  return SparseMatrix(n, n, std::move(rp), std::move(ci), std::move(vals));
}

}  // namespace

SparseMatrix gen_convdiff_2d(std::size_t grid, double nu, const ConvectionField& field) {
  return convdiff(2, grid, nu, field);
}

SparseMatrix gen_convdiff_3d(std::size_t grid, double nu, const ConvectionField& field) {
  return convdiff(3, grid, nu, field);
}

SparseMatrix gen_toeplitz_ex41(std::size_t n) {
  if (n < 3) throw DimensionMismatch("gen_toeplitz_ex41: n must be at least 3");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, -3.0});
    if (i + 1 < n) {
      t.push_back({i + 1, i, 1.0});
      t.push_back({i, i + 1, -1.0});
    }
    if (i + 2 < n) {
      t.push_back({i + 2, i, 0.5});
      t.push_back({i, i + 2, -1.0});
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

DenseMat gen_rhs(std::size_t n, std::size_t r, std::uint64_t seed) {
  if (n == 0 || r == 0) throw DimensionMismatch("gen_rhs: empty block");
  Rng rng(seed);
  DenseMat c = rng.normal_matrix(n, r);
  c *= 1.0 / la::frobenius_norm(c);
  return c;
}

HhatInstance gen_hhat_ex45(std::size_t d, std::uint64_t seed) {
  if (d < 4) throw DimensionMismatch("gen_hhat_ex45: d must be at least 4");
  Rng rng(seed);
  std::vector<double> first_row(d, 0.0);
  first_row[0] = -4.0;
  first_row[1] = 0.5;
  first_row[2] = 0.5;
  for (std::size_t k = 3; k < d; ++k) first_row[k] = rng.normal() / 20.0;
  HhatInstance out;
  out.Hhat = DenseMat(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) {
      if (i == j + 1)
        out.Hhat(i, j) = 2.0;
      else if (j >= i)
        out.Hhat(i, j) = first_row[j - i];
    }
  out.hhat.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double weight = 20.0 - 19.0 * static_cast<double>(i) / static_cast<double>(d - 1);
    out.hhat[i] = weight * rng.normal();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix Market coordinate format

SparseMatrix read_matrix_market(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ParseError("empty input", 1);
  ++lineno;
  bool symmetric = false;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    std::transform(symmetry.begin(), symmetry.end(), symmetry.begin(), ::tolower);
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
      throw ParseError("expected '%%MatrixMarket matrix coordinate' header", lineno);
    if (field != "real" && field != "integer" && field != "double")
      throw ParseError("unsupported field '" + field + "'", lineno);
    if (symmetry == "symmetric")
      symmetric = true;
    else if (symmetry != "general")
      throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  }
  std::size_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  std::vector<Triplet> t;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::istringstream ls(line);
    if (!have_size) {
      if (!(ls >> rows >> cols >> nnz)) throw ParseError("bad size line", lineno);
      have_size = true;
      t.reserve(symmetric ? 2 * nnz : nnz);
      continue;
    }
    long long i, j;
    double v;
    if (!(ls >> i >> j >> v)) throw ParseError("bad entry", lineno);
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols)
      throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") out of range for " + std::to_string(rows) + "x" +
                           std::to_string(cols),
                       lineno);
    if (t.size() >= (symmetric ? 2 * nnz : nnz)) throw ParseError("more entries than declared", lineno);
    t.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v});
    if (symmetric && i != j)
      t.push_back({static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1), v});
  }
  if (!have_size) throw ParseError("missing size line", lineno);
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  return read_matrix_market(is);
}

void write_matrix_market(const SparseMatrix& m, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    for (std::size_t p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p)
      os << i + 1 << ' ' << m.col_idx()[p] + 1 << ' ' << la::format_double(m.values()[p])
         << '\n';
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  write_matrix_market(m, os);
}

}  // namespace sylkit::sparse
