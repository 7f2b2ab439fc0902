#pragma once

#include <cstddef>
#include <vector>

#include "sylkit/dense.hpp"

namespace sylkit::la {

struct QR {
  DenseMat Q;
  DenseMat R;
};

/// Householder QR with nonnegative diagonal in R. Thin: Q is m x min(m,n),
/// R is min(m,n) x n. Otherwise Q is m x m and R is m x n.
QR householder_qr(const DenseMat& m, bool thin = true);

/// R factor only (same convention as householder_qr, thin).
DenseMat qr_r(const DenseMat& m);

struct SchurDecomposition {
  CDenseMat Q;
  CDenseMat R;
  std::size_t dim = 0;

  std::vector<cplx> eigenvalues() const;
};

/// M = Q R Q^* with R upper triangular. Throws NonConvergence.
SchurDecomposition complex_schur(const CDenseMat& m);
SchurDecomposition complex_schur(const DenseMat& m);

/// Moves the eigenvalues flagged in `select` to the leading positions,
/// keeping the relative order within each group.
void reorder_schur(SchurDecomposition& s, const std::vector<bool>& select);

std::vector<cplx> eigenvalues(const DenseMat& m);
std::vector<cplx> eigenvalues(const CDenseMat& m);

struct HermitianEig {
  std::vector<double> values;  // ascending
  CDenseMat vectors;
};

struct SymmetricEig {
  std::vector<double> values;  // ascending
  DenseMat vectors;
};

HermitianEig hermitian_eig(const CDenseMat& m);
SymmetricEig hermitian_eig(const DenseMat& m);

/// Eigenvalues only, ascending, in real arithmetic.
std::vector<double> symmetric_eigenvalues(const DenseMat& m);

/// Rightmost point of the field of values: largest eigenvalue of (M+M^*)/2.
double numerical_abscissa(const DenseMat& m);
double numerical_abscissa(const CDenseMat& m);

struct SVD {
  DenseMat U;                  // m x min(m,n)
  std::vector<double> sigma;   // nonincreasing
  DenseMat V;                  // n x min(m,n)
};

/// One-sided Jacobi SVD.
SVD svd(const DenseMat& m);

double norm2(const DenseMat& m);

/// Solves H Y + Y G^T = C by complex Schur factorization of both coefficients.
/// Throws SingularOperator when the spectra of H and -G nearly meet.
DenseMat solve_sylvester_dense(const DenseMat& h, const DenseMat& g,
                               const DenseMat& c);
CDenseMat solve_sylvester_dense(const CDenseMat& h, const CDenseMat& g,
                                const CDenseMat& c);

/// Gaussian elimination with partial pivoting. Throws SingularOperator on an
/// exactly zero pivot.
DenseMat lu_solve(DenseMat a, DenseMat b);
DenseMat inverse(const DenseMat& a);

}  // namespace sylkit::la
