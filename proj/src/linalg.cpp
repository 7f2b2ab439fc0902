#include "sylkit/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

namespace sylkit::la {

namespace {

constexpr double kEps = DBL_EPSILON;

// Real Householder reflector for x: H x = alpha e_1, H = I - beta v v^T.
struct Reflector {
  std::vector<double> v;
  double beta = 0.0;
  double alpha = 0.0;
};

Reflector make_reflector(const double* x, std::size_t len) {
  Reflector h;
  h.v.assign(x, x + len);
  double scale = 0.0;
  for (std::size_t i = 0; i < len; ++i) scale = std::max(scale, std::abs(x[i]));
  if (scale == 0.0) return h;
  double ss = 0.0;
  for (std::size_t i = 0; i < len; ++i) ss += (x[i] / scale) * (x[i] / scale);
  const double norm = scale * std::sqrt(ss);
  const double x0 = x[0];
  h.alpha = x0 >= 0.0 ? -norm : norm;
  h.v[0] = x0 - h.alpha;
  h.beta = 1.0 / (norm * (norm + std::abs(x0)));
  return h;
}

// Applies H = I - beta v v^T to rows [r0, r0+len) of columns [c0, c1) of a.
void apply_reflector_left(DenseMat& a, const Reflector& h, std::size_t r0,
                          std::size_t c0, std::size_t c1) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.v.size();
  for (std::size_t j = c0; j < c1; ++j) {
    double* col = a.data() + j * a.rows() + r0;
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += h.v[i] * col[i];
    s *= h.beta;
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < len; ++i) col[i] -= s * h.v[i];
  }
}

// Complex reflector: H x = alpha e_1 with H = I - beta v v^*, beta real.
struct CReflector {
  std::vector<cplx> v;
  double beta = 0.0;
  cplx alpha{};
};

CReflector make_creflector(const cplx* x, std::size_t stride, std::size_t len) {
  CReflector h;
  h.v.resize(len);
  double scale = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    h.v[i] = x[i * stride];
    scale = std::max(scale, std::abs(h.v[i]));
  }
  if (scale == 0.0) return h;
  double ss = 0.0;
  for (std::size_t i = 0; i < len; ++i) ss += std::norm(h.v[i] / scale);
  const double norm = scale * std::sqrt(ss);
  const double a0 = std::abs(h.v[0]);
  const cplx phase = a0 == 0.0 ? cplx{1.0} : h.v[0] / a0;
  h.alpha = -phase * norm;
  h.v[0] -= h.alpha;
  h.beta = 1.0 / (norm * (norm + a0));
  return h;
}

// a(r0.., c0..c1) <- H a
void capply_left(CDenseMat& a, const CReflector& h, std::size_t r0,
                 std::size_t c0, std::size_t c1) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.v.size();
  for (std::size_t j = c0; j < c1; ++j) {
    cplx* col = a.data() + j * a.rows() + r0;
    cplx s{};
    for (std::size_t i = 0; i < len; ++i) s += std::conj(h.v[i]) * col[i];
    s *= h.beta;
    for (std::size_t i = 0; i < len; ++i) col[i] -= s * h.v[i];
  }
}

// a(r0..r1, c0..) <- a H
void capply_right(CDenseMat& a, const CReflector& h, std::size_t r0,
                  std::size_t r1, std::size_t c0) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.v.size();
  std::vector<cplx> s(r1 - r0, cplx{});
  for (std::size_t k = 0; k < len; ++k) {
    const cplx* col = a.data() + (c0 + k) * a.rows();
    for (std::size_t i = r0; i < r1; ++i) s[i - r0] += col[i] * h.v[k];
  }
  for (std::size_t k = 0; k < len; ++k) {
    cplx* col = a.data() + (c0 + k) * a.rows();
    const cplx vk = std::conj(h.v[k]) * h.beta;
    for (std::size_t i = r0; i < r1; ++i) col[i] -= s[i - r0] * vk;
  }
}

// Givens rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s{};
};

Givens make_givens(cplx a, cplx b) {
  Givens g;
  if (b == cplx{}) return g;
  const double aa = std::abs(a);
  const double ab = std::abs(b);
  if (aa == 0.0) {
    g.c = 0.0;
    g.s = std::conj(b) / ab;
    return g;
  }
  const double nrm = std::hypot(aa, ab);
  g.c = aa / nrm;
  g.s = (a / aa) * std::conj(b) / nrm;
  return g;
}

// rows p, q <- G [row p; row q] for columns [c0, c1)
void rot_rows(CDenseMat& m, const Givens& g, std::size_t p, std::size_t q,
              std::size_t c0, std::size_t c1) {
  // Real arithmetic keeps the compiler away from the checked complex multiply.
  const double c = g.c, sr = g.s.real(), si = g.s.imag();
  double* d = reinterpret_cast<double*>(m.data());
  const std::size_t ld = 2 * m.rows();
  for (std::size_t j = c0; j < c1; ++j) {
    double* x = d + j * ld + 2 * p;
    double* y = d + j * ld + 2 * q;
    const double xr = x[0], xi = x[1], yr = y[0], yi = y[1];
    x[0] = c * xr + sr * yr - si * yi;
    x[1] = c * xi + sr * yi + si * yr;
    y[0] = c * yr - sr * xr - si * xi;
    y[1] = c * yi - sr * xi + si * xr;
  }
}

// columns p, q <- [col p, col q] G^* for rows [r0, r1)
void rot_cols(CDenseMat& m, const Givens& g, std::size_t p, std::size_t q,
              std::size_t r0, std::size_t r1) {
  const double c = g.c, sr = g.s.real(), si = g.s.imag();
  double* cp = reinterpret_cast<double*>(m.data() + p * m.rows());
  double* cq = reinterpret_cast<double*>(m.data() + q * m.rows());
  for (std::size_t i = r0; i < r1; ++i) {
    const double xr = cp[2 * i], xi = cp[2 * i + 1], yr = cq[2 * i], yi = cq[2 * i + 1];
    cp[2 * i] = c * xr + sr * yr + si * yi;
    cp[2 * i + 1] = c * xi + sr * yi - si * yr;
    cq[2 * i] = c * yr - sr * xr + si * xi;
    cq[2 * i + 1] = c * yi - sr * xi - si * xr;
  }
}

// Reduces h to upper Hessenberg form in place, accumulating q.
void hessenberg(CDenseMat& h, CDenseMat& q) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    CReflector r = make_creflector(&h(k + 1, k), 1, len);
    if (r.beta == 0.0) continue;
    capply_left(h, r, k + 1, k, n);
    capply_right(h, r, 0, n, k + 1);
    capply_right(q, r, 0, n, k + 1);
    h(k + 1, k) = r.alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = cplx{};
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// QR

QR householder_qr(const DenseMat& m, bool thin) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t kmax = std::min(rows, cols);
  DenseMat r = m;
  std::vector<Reflector> refl;
  refl.reserve(kmax);
  for (std::size_t k = 0; k < kmax; ++k) {
    Reflector h = make_reflector(&r(k, k), rows - k);
    if (h.beta != 0.0) {
      apply_reflector_left(r, h, k, k + 1, cols);
      r(k, k) = h.alpha;
      for (std::size_t i = k + 1; i < rows; ++i) r(i, k) = 0.0;
    }
    refl.push_back(std::move(h));
  }
  const std::size_t qcols = thin ? kmax : rows;
  DenseMat q(rows, qcols);
  for (std::size_t j = 0; j < qcols; ++j) q(j, j) = 1.0;
  for (std::size_t kk = kmax; kk-- > 0;)
    apply_reflector_left(q, refl[kk], kk, 0, qcols);

  const std::size_t rrows = thin ? kmax : rows;
  DenseMat rout = r.block(0, 0, rrows, cols);
  for (std::size_t i = 0; i < kmax; ++i) {
    if (rout(i, i) < 0.0) {
      for (std::size_t j = i; j < cols; ++j) rout(i, j) = -rout(i, j);
      for (std::size_t p = 0; p < rows; ++p) q(p, i) = -q(p, i);
    }
  }
  return {std::move(q), std::move(rout)};
}

DenseMat qr_r(const DenseMat& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t kmax = std::min(rows, cols);
  DenseMat r = m;
  for (std::size_t k = 0; k < kmax; ++k) {
    Reflector h = make_reflector(&r(k, k), rows - k);
    if (h.beta == 0.0) continue;
    apply_reflector_left(r, h, k, k + 1, cols);
    r(k, k) = h.alpha;
  }
  DenseMat out(kmax, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i <= std::min(j, kmax - 1) && i < kmax; ++i)
      out(i, j) = r(i, j);
  for (std::size_t i = 0; i < kmax; ++i)
    if (out(i, i) < 0.0)
      for (std::size_t j = i; j < cols; ++j) out(i, j) = -out(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Complex Schur

std::vector<cplx> SchurDecomposition::eigenvalues() const {
  std::vector<cplx> ev(R.rows());
  for (std::size_t i = 0; i < R.rows(); ++i) ev[i] = R(i, i);
  return ev;
}

SchurDecomposition complex_schur(const CDenseMat& m) {
  if (!m.is_square()) throw DimensionMismatch("complex_schur: matrix is not square");
  const std::size_t n = m.rows();
  SchurDecomposition out;
  out.dim = n;
  out.R = m;
  out.Q = CDenseMat::identity(n);
  if (n == 0) return out;
  CDenseMat& h = out.R;
  CDenseMat& z = out.Q;
  hessenberg(h, z);

  const double anorm = std::max(frobenius_norm(h), DBL_MIN);
  const std::size_t cap = 30 * n;
  std::size_t hi = n - 1;
  std::size_t iter = 0;
  while (hi > 0) {
    std::size_t l = hi;
    for (; l > 0; --l) {
      double tst = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (tst == 0.0) tst = anorm;
      if (std::abs(h(l, l - 1)) <= kEps * tst) {
        h(l, l - 1) = cplx{};
        break;
      }
    }
    if (l == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (++iter > cap)
      throw NonConvergence("complex_schur: no convergence after " +
                           std::to_string(cap) + " sweeps at index " +
                           std::to_string(hi));

    cplx mu;
    if (iter % 10 == 0) {
      // exceptional shift to break cycles
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
      const cplx c = h(hi, hi - 1), d = h(hi, hi);
      const cplx half = 0.5 * (a - d);
      const cplx disc = std::sqrt(half * half + b * c);
      const cplx m1 = 0.5 * (a + d) + disc;
      const cplx m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }

    for (std::size_t k = l; k <= hi; ++k) h(k, k) -= mu;
    std::vector<Givens> rots(hi - l);
    for (std::size_t k = l; k < hi; ++k) {
      Givens g = make_givens(h(k, k), h(k + 1, k));
      rot_rows(h, g, k, k + 1, k, n);
      h(k + 1, k) = cplx{};
      rots[k - l] = g;
    }
    for (std::size_t k = l; k < hi; ++k) {
      const Givens& g = rots[k - l];
      rot_cols(h, g, k, k + 1, 0, std::min(k + 2, hi + 1));
      rot_cols(z, g, k, k + 1, 0, n);
    }
    for (std::size_t k = l; k <= hi; ++k) h(k, k) += mu;
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) h(i, j) = cplx{};
  return out;
}

SchurDecomposition complex_schur(const DenseMat& m) {
  return complex_schur(to_complex(m));
}

void reorder_schur(SchurDecomposition& s, const std::vector<bool>& select) {
  const std::size_t n = s.R.rows();
  if (select.size() != n) throw DimensionMismatch("reorder_schur: selection length");
  std::vector<bool> sel = select;
  std::size_t dest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sel[i]) continue;
    for (std::size_t k = i; k > dest; --k) {
      // swap diagonal entries k-1 and k
      const std::size_t p = k - 1, q = k;
      const cplx a = s.R(p, p), b = s.R(q, q);
      Givens g = make_givens(s.R(p, q), b - a);
      rot_rows(s.R, g, p, q, p, n);
      rot_cols(s.R, g, p, q, 0, q + 1);
      rot_cols(s.Q, g, p, q, 0, n);
      s.R(q, p) = cplx{};
      std::swap(sel[p], sel[q]);
    }
    ++dest;
  }
}

std::vector<cplx> eigenvalues(const DenseMat& m) { return complex_schur(m).eigenvalues(); }
std::vector<cplx> eigenvalues(const CDenseMat& m) { return complex_schur(m).eigenvalues(); }

// ---------------------------------------------------------------------------
// Hermitian eigensolver: Householder tridiagonalization, then implicit QL.

namespace {

// Symmetric tridiagonal QL with implicit shifts. d: diagonal, e[i]: entry
// coupling i-1 and i (e[0] unused). z accumulates the rotations.
void tql2(std::vector<double>& d, std::vector<double>& e, DenseMat& z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0, tst1 = 0.0;
  const std::size_t cap = 30 * n;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m > l) {
      std::size_t iter = 0;
      do {
        if (++iter > cap)
          throw NonConvergence("hermitian_eig: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (z.empty()) continue;
          double* zi = z.data() + i * n;
          double* zi1 = z.data() + (i + 1) * n;
          for (std::size_t k = 0; k < n; ++k) {
            h = zi1[k];
            zi1[k] = s * zi[k] + c * h;
            zi[k] = c * zi[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

HermitianEig hermitian_eig(const CDenseMat& m) {
  if (!m.is_square()) throw DimensionMismatch("hermitian_eig: matrix is not square");
  const std::size_t n = m.rows();
  const double mn = frobenius_norm(m);
  CDenseMat a = m - adjoint(m);
  if (frobenius_norm(a) > 1e-12 * mn)
    throw NotHermitian("hermitian_eig: ||M - M^*||_F = " +
                       std::to_string(frobenius_norm(a)) + " exceeds tolerance");
  a = m + adjoint(m);
  a *= cplx{0.5};

  CDenseMat q = CDenseMat::identity(n);
  hessenberg(a, q);  // Hermitian input gives a tridiagonal result

  std::vector<double> d(n), e(n, 0.0);
  std::vector<cplx> phase(n, cplx{1.0});
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx sub = a(i + 1, i);
    const double mag = std::abs(sub);
    e[i + 1] = mag;
    phase[i + 1] = mag == 0.0 ? phase[i] : phase[i] * sub / mag;
  }
  DenseMat z = DenseMat::identity(n);
  tql2(d, e, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

  // vectors = Q * diag(phase) * Z
  CDenseMat qd = q;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) qd(i, j) *= phase[j];
  HermitianEig out;
  out.values.resize(n);
  out.vectors = CDenseMat(n, n);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    out.values[jj] = d[j];
    for (std::size_t k = 0; k < n; ++k) {
      const double zkj = z(k, j);
      if (zkj == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, jj) += qd(i, k) * zkj;
    }
  }
  return out;
}

SymmetricEig hermitian_eig(const DenseMat& m) {
  HermitianEig h = hermitian_eig(to_complex(m));
  return {std::move(h.values), real_part(h.vectors)};
}

double numerical_abscissa(const CDenseMat& m) {
  CDenseMat s = m + adjoint(m);
  s *= cplx{0.5};
  return hermitian_eig(s).values.back();
}

std::vector<double> symmetric_eigenvalues(const DenseMat& m) {
  if (!m.is_square()) throw DimensionMismatch("symmetric_eigenvalues: matrix is not square");
  const std::size_t n = m.rows();
  if (frobenius_norm(m - transpose(m)) > 1e-12 * frobenius_norm(m))
    throw NotHermitian("symmetric_eigenvalues: matrix is not symmetric");
  DenseMat a = m;
  // Householder tridiagonalization with symmetric rank-2 updates, lower part
  std::vector<double> p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    Reflector h = make_reflector(&a(k + 1, k), len);
    if (h.beta == 0.0) continue;
    const double* v = h.v.data();
    // p = beta * A22 v
    for (std::size_t i = 0; i < len; ++i) p[i] = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const double* col = a.data() + (k + 1 + j) * n + k + 1;
      const double vj = v[j];
      for (std::size_t i = 0; i < len; ++i) p[i] += col[i] * vj;
    }
    double pv = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      p[i] *= h.beta;
      pv += p[i] * v[i];
    }
    const double half = 0.5 * h.beta * pv;
    for (std::size_t i = 0; i < len; ++i) w[i] = p[i] - half * v[i];
    for (std::size_t j = 0; j < len; ++j) {
      double* col = a.data() + (k + 1 + j) * n + k + 1;
      const double vj = v[j], wj = w[j];
      for (std::size_t i = 0; i < len; ++i) col[i] -= v[i] * wj + w[i] * vj;
    }
    a(k + 1, k) = h.alpha;
  }
  std::vector<double> d(n), e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 1; i < n; ++i) e[i] = a(i, i - 1);
  DenseMat none;
  tql2(d, e, none);
  std::sort(d.begin(), d.end());
  return d;
}

double numerical_abscissa(const DenseMat& m) {
  DenseMat s = m + transpose(m);
  s *= 0.5;
  return symmetric_eigenvalues(s).back();
}

// ---------------------------------------------------------------------------
// SVD

namespace {

SVD svd_tall(const DenseMat& m) {
  const std::size_t rows = m.rows(), n = m.cols();
  DenseMat a = m;
  DenseMat v = DenseMat::identity(n);
  const std::size_t max_sweeps = 60;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* ap = a.data() + p * rows;
        double* aq = a.data() + q * rows;
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += ap[i] * ap[i];
          beta += aq[i] * aq[i];
          gamma += ap[i] * aq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double x = ap[i], y = aq[i];
          ap[i] = c * x - s * y;
          aq[i] = s * x + c * y;
        }
        double* vp = v.data() + p * n;
        double* vq = v.data() + q * n;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (double x : a.col(j)) ss += x * x;
    sig[j] = std::sqrt(ss);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });

  SVD out;
  out.sigma.resize(n);
  out.U = DenseMat(rows, n);
  out.V = DenseMat(n, n);
  std::vector<bool> filled(n, false);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    out.sigma[jj] = sig[j];
    std::copy(v.col(j).begin(), v.col(j).end(), out.V.col(jj).begin());
    if (sig[j] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) out.U(i, jj) = a(i, j) / sig[j];
      filled[jj] = true;
    }
  }
  // complete U where sigma vanished, by Gram-Schmidt on unit vectors
  std::size_t cand = 0;
  for (std::size_t jj = 0; jj < n; ++jj) {
    if (filled[jj]) continue;
    while (cand < rows) {
      std::vector<double> w(rows, 0.0);
      w[cand++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < n; ++k) {
          if (!filled[k]) continue;
          double dot = 0.0;
          for (std::size_t i = 0; i < rows; ++i) dot += out.U(i, k) * w[i];
          for (std::size_t i = 0; i < rows; ++i) w[i] -= dot * out.U(i, k);
        }
      double nrm = 0.0;
      for (double x : w) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) out.U(i, jj) = w[i] / nrm;
        filled[jj] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SVD svd(const DenseMat& m) {
  if (m.rows() >= m.cols()) return svd_tall(m);
  SVD t = svd_tall(transpose(m));
  return {std::move(t.V), std::move(t.sigma), std::move(t.U)};
}

double norm2(const DenseMat& m) {
  if (m.empty()) return 0.0;
  return svd(m).sigma.front();
}

// ---------------------------------------------------------------------------
// Dense Sylvester

namespace {

// Solves R_H Yt + Yt R_G^T = Ct with both R upper triangular.
CDenseMat triangular_sylvester(const CDenseMat& rh, const CDenseMat& rg,
                               CDenseMat ct, double scale) {
  const std::size_t m = rh.rows(), p = rg.rows();
  const double tiny = 1e-14 * scale;
  for (std::size_t j = p; j-- > 0;) {
    cplx* y = ct.data() + j * m;
    for (std::size_t k = j + 1; k < p; ++k) {
      const cplx gjk = rg(j, k);
      if (gjk == cplx{}) continue;
      const cplx* yk = ct.data() + k * m;
      for (std::size_t i = 0; i < m; ++i) y[i] -= gjk * yk[i];
    }
    const cplx sjj = rg(j, j);
    for (std::size_t i = m; i-- > 0;) {
      const cplx piv = rh(i, i) + sjj;
      if (std::abs(piv) < tiny)
        throw SingularOperator(
            "solve_sylvester_dense: |r_ii + s_jj| = " + std::to_string(std::abs(piv)) +
                " at (" + std::to_string(i) + ", " + std::to_string(j) + ")",
            i, j);
      y[i] /= piv;
      const cplx yi = y[i];
      for (std::size_t k = 0; k < i; ++k) y[k] -= rh(k, i) * yi;
    }
  }
  return ct;
}

}  // namespace

CDenseMat solve_sylvester_dense(const CDenseMat& h, const CDenseMat& g,
                                const CDenseMat& c) {
  if (!h.is_square() || !g.is_square() || c.rows() != h.rows() ||
      c.cols() != g.rows())
    throw DimensionMismatch("solve_sylvester_dense: H " + std::to_string(h.rows()) +
                            "x" + std::to_string(h.cols()) + ", G " +
                            std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                            ", C " + std::to_string(c.rows()) + "x" +
                            std::to_string(c.cols()));
  if (c.empty()) return CDenseMat(c.rows(), c.cols());
  const SchurDecomposition sh = complex_schur(h);
  const SchurDecomposition sg = complex_schur(g);
  const CDenseMat qg_conj = conjugate(sg.Q);
  // Ct = Q_H^* C conj(Q_G)
  CDenseMat ct = mul(adjoint_mul(sh.Q, c), qg_conj);
  const double scale = frobenius_norm(h) + frobenius_norm(g);
  CDenseMat yt = triangular_sylvester(sh.R, sg.R, std::move(ct), scale);
  // Y = Q_H Yt Q_G^T
  return mul(mul(sh.Q, yt), transpose(sg.Q));
}

DenseMat solve_sylvester_dense(const DenseMat& h, const DenseMat& g,
                               const DenseMat& c) {
  return real_part(solve_sylvester_dense(to_complex(h), to_complex(g), to_complex(c)));
}

// ---------------------------------------------------------------------------
// LU

DenseMat lu_solve(DenseMat a, DenseMat b) {
  const std::size_t n = a.rows();
  if (!a.is_square() || b.rows() != n) throw DimensionMismatch("lu_solve: shapes");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), piv = i;
    if (best == 0.0) throw SingularOperator("lu_solve: zero pivot", k, k);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const double akj = a(k, j);
      if (akj == 0.0) continue;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= a(i, k) * akj;
    }
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      for (std::size_t i = k + 1; i < n; ++i) b(i, j) -= a(i, k) * bkj;
    }
  }
  return solve_upper(a, std::move(b));
}

DenseMat inverse(const DenseMat& a) { return lu_solve(a, DenseMat::identity(a.rows())); }

}  // namespace sylkit::la
