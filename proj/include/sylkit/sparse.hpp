#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sylkit/dense.hpp"

namespace sylkit::sparse {

using la::DenseMat;

/// A dense n x r block of column vectors (basis blocks, right-hand sides).
using BlockVec = la::DenseMat;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix in canonical form: column indices strictly
/// increasing within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Validates the arrays; throws DimensionMismatch on inconsistent input.
  SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Duplicates are summed, explicit zeros are kept.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const DenseMat& m);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Entry lookup by binary search; zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  DenseMat to_dense() const;
  SparseMatrix transposed() const;
  double frobenius_norm() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// out = M X, or M^T X when `transpose` is set. `out` must already have the
/// right shape; it is overwritten.
void spmv_block(const SparseMatrix& m, const BlockVec& x, bool transpose, BlockVec& out);
BlockVec spmv_block(const SparseMatrix& m, const BlockVec& x, bool transpose = false);

// ---------------------------------------------------------------------------
// Generators

/// Convection field of -nu Lap u + w . grad u. Named fields are the benchmark
/// ones; Constant carries its components.
struct ConvectionField {
  enum class Kind { Constant, Example61A, Example61B, Example63A, Example63B };
  Kind kind = Kind::Constant;
  std::array<double, 3> w{0.0, 0.0, 0.0};
  std::size_t dims = 0;  // 0: any; else the dimension the field is defined for

  std::array<double, 3> eval(double x, double y, double z) const;
  std::string name() const;
};

/// Parses "example61_A", "example61_B", "example63_A", "example63_B",
/// "zero", or "constant:w1,w2[,w3]". Throws InvalidField.
ConvectionField parse_field(const std::string& spec);

/// Returns -L_h on the interior grid of the unit square, h = 1/(grid+1),
/// x index fastest.
SparseMatrix gen_convdiff_2d(std::size_t grid, double nu, const ConvectionField& field);
SparseMatrix gen_convdiff_3d(std::size_t grid, double nu, const ConvectionField& field);

/// Banded Toeplitz: -3 on the diagonal, 1 and 0.5 on the first two
/// subdiagonals, -1 on the first two superdiagonals.
SparseMatrix gen_toeplitz_ex41(std::size_t n);

struct HhatInstance {
  DenseMat Hhat;
  std::vector<double> hhat;
};

/// Toeplitz Hhat with first column [-4, 2, 0, ...] and first row
/// [-4, 1/2, 1/2, g_3/20, ..., g_{d-1}/20]; hhat_i = w_i * eta_i with weights
/// descending linearly from 20 to 1. g and eta are standard normal draws.
HhatInstance gen_hhat_ex45(std::size_t d, std::uint64_t seed);

/// n x r block of standard normal entries scaled to unit Frobenius norm.
DenseMat gen_rhs(std::size_t n, std::size_t r, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Matrix Market coordinate IO

SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const SparseMatrix& m, std::ostream& os);
void write_matrix_market(const SparseMatrix& m, const std::string& path);

}  // namespace sylkit::sparse
