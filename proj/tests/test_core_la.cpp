#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "sylkit/dense_io.hpp"
#include "sylkit/linalg.hpp"
#include "sylkit/rng.hpp"

using namespace sylkit;
using namespace sylkit::la;

namespace {

CDenseMat random_complex(Rng& rng, std::size_t n, std::size_t m) {
  CDenseMat a(n, m);
  for (auto& v : a.storage()) v = cplx(rng.normal(), rng.normal());
  return a;
}

// Greedy nearest matching of two eigenvalue lists; returns worst relative gap.
double match_eigs(std::vector<cplx> a, std::vector<cplx> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const cplx& x : a) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(x - b[j]) < bd) bd = std::abs(x - b[j]), best = j;
    used[best] = true;
    worst = std::max(worst, bd / std::max(1.0, std::abs(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("qr: identity and Pythagorean column") {
  auto [q, r] = householder_qr(DenseMat::identity(3));
  CHECK(max_abs(q - DenseMat::identity(3)) == 0.0);
  CHECK(max_abs(r - DenseMat::identity(3)) == 0.0);

  DenseMat c(2, 1);
  c(0, 0) = 3;
  c(1, 0) = 4;
  auto f = householder_qr(c);
  CHECK(f.Q(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(f.Q(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(f.R(0, 0) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("qr: random reconstruction, thin and full, 20 seeds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const DenseMat m = rng.normal_matrix(20, 5);
    auto [q, r] = householder_qr(m);
    CHECK(q.rows() == 20);
    CHECK(q.cols() == 5);
    CHECK(frobenius_norm(oracle::naive_mul(q, r) - m) <= 1e-12 * frobenius_norm(m));
    CHECK(orthogonality_error(q) <= 1e-13 * 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(r(i, i) >= 0.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(r(i, j) == 0.0);
    }
    auto full = householder_qr(m, false);
    CHECK(full.Q.cols() == 20);
    CHECK(orthogonality_error(full.Q) <= 1e-13 * 20);
    CHECK(frobenius_norm(mul(full.Q, full.R) - m) <= 1e-12 * frobenius_norm(m));
    // R-only path agrees with the full factorization
    CHECK(max_abs(qr_r(m) - r) <= 1e-13 * max_abs(r));
  }
}

TEST_CASE("qr: rank deficiency gives a small diagonal, not an error") {
  Rng rng(3);
  DenseMat m = rng.normal_matrix(10, 3);
  for (std::size_t i = 0; i < 10; ++i) m(i, 2) = m(i, 0) + m(i, 1);
  auto [q, r] = householder_qr(m);
  CHECK(r(2, 2) <= 1e-13 * frobenius_norm(m));
  CHECK(frobenius_norm(mul(q, r) - m) <= 1e-12 * frobenius_norm(m));
}

TEST_CASE("schur: triangular and rotation cases") {
  DenseMat d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = 3;
  auto s = complex_schur(d);
  auto ev = s.eigenvalues();
  std::vector<double> re;
  for (auto v : ev) re.push_back(v.real());
  std::sort(re.begin(), re.end());
  CHECK(re == std::vector<double>{1, 2, 3});
  for (const cplx& v : s.Q.storage()) {
    const double a = std::abs(v);
    CHECK((a == doctest::Approx(0.0) || a == doctest::Approx(1.0)));
  }

  DenseMat rot(2, 2);
  rot(0, 1) = -1;
  rot(1, 0) = 1;
  auto sr = complex_schur(rot);
  CHECK(match_eigs(sr.eigenvalues(), {cplx(0, 1), cplx(0, -1)}) <= 1e-14);
  CHECK(sr.R(1, 0) == cplx{});
}

TEST_CASE("schur: random 30x30 eigenvalues against Eigen") {
  Rng rng(30);
  const DenseMat m = rng.normal_matrix(30, 30);
  auto s = complex_schur(m);
  Eigen::MatrixXd em(30, 30);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) em(i, j) = m(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(em, false);
  std::vector<cplx> ref;
  for (int i = 0; i < 30; ++i) ref.push_back(es.eigenvalues()[i]);
  CHECK(match_eigs(s.eigenvalues(), ref) <= 1e-8);
}

TEST_CASE("schur: invariants on 20 random real and complex instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    const std::size_t n = 5 + seed * 3;
    CDenseMat a = seed % 2 ? random_complex(rng, n, n) : to_complex(rng.normal_matrix(n, n));
    auto s = complex_schur(a);
    CHECK(orthogonality_error(s.Q) <= 1e-12 * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j + 1; i < n; ++i) CHECK(s.R(i, j) == cplx{});
    const CDenseMat back = mul_adjoint(mul(s.Q, s.R), s.Q);
    CHECK(frobenius_norm(back - a) <= 1e-10 * frobenius_norm(a));
  }
}

TEST_CASE("schur: reordering preserves spectrum and factorization") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(500 + seed);
    const std::size_t n = 12;
    const DenseMat a = rng.normal_matrix(n, n);
    auto s = complex_schur(a);
    const auto before = s.eigenvalues();
    std::vector<bool> sel(n);
    for (std::size_t i = 0; i < n; ++i) sel[i] = before[i].real() > 0.0;
    reorder_schur(s, sel);
    const auto after = s.eigenvalues();
    CHECK(match_eigs(before, after) <= 1e-10);
    const auto npos = std::count(sel.begin(), sel.end(), true);
    for (std::size_t i = 0; i < n; ++i)
      CHECK((after[i].real() > 0.0) == (static_cast<long>(i) < npos));
    CHECK(orthogonality_error(s.Q) <= 1e-12 * n);
    const CDenseMat back = mul_adjoint(mul(s.Q, s.R), s.Q);
    CHECK(frobenius_norm(back - to_complex(a)) <= 1e-10 * frobenius_norm(a));
  }
}

TEST_CASE("hermitian_eig: small known spectra") {
  DenseMat d(2, 2);
  d(0, 0) = 5;
  d(1, 1) = -2;
  auto e = hermitian_eig(d);
  CHECK(e.values[0] == doctest::Approx(-2.0));
  CHECK(e.values[1] == doctest::Approx(5.0));

  DenseMat x(2, 2);
  x(0, 1) = x(1, 0) = 1;
  auto ex = hermitian_eig(x);
  CHECK(ex.values[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(ex.values[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hermitian_eig: tridiagonal Toeplitz closed form") {
  const std::size_t n = 10;
  DenseMat t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = -2;
    if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = 1;
  }
  auto e = hermitian_eig(t);
  std::vector<double> ref;
  for (std::size_t k = 1; k <= n; ++k)
    ref.push_back(2.0 * std::cos(k * std::numbers::pi / (n + 1)) - 2.0);
  std::sort(ref.begin(), ref.end());
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - ref[i]) <= 1e-12);
}

TEST_CASE("hermitian_eig: residual and unitarity on 20 instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(900 + seed);
    const std::size_t n = 4 + 4 * seed;
    CDenseMat a = random_complex(rng, n, n);
    a = a + adjoint(a);
    auto e = hermitian_eig(a);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    CHECK(orthogonality_error(e.vectors) <= 1e-12 * n);
    CDenseMat lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = e.values[i];
    const double nrm = frobenius_norm(a);
    CHECK(frobenius_norm(mul(a, e.vectors) - mul(e.vectors, lam)) <= 1e-10 * nrm);
  }
}

TEST_CASE("hermitian_eig: rejects non-Hermitian input") {
  DenseMat a(2, 2);
  a(0, 1) = 1;
  CHECK_THROWS_AS(hermitian_eig(a), NotHermitian);
}

TEST_CASE("numerical abscissa of a normal matrix is its largest real eigenvalue") {
  DenseMat a(2, 2);
  a(0, 0) = -1;
  a(1, 1) = 1;
  CHECK(numerical_abscissa(a) == doctest::Approx(1.0));
}

TEST_CASE("svd: zero and rank-one") {
  auto z = svd(DenseMat(4, 3));
  for (double s : z.sigma) CHECK(s == 0.0);
  CHECK(orthogonality_error(z.U) <= 1e-14);

  DenseMat u(5, 1), v(4, 1);
  u(0, 0) = 2;
  v(1, 0) = 3;
  auto r1 = svd(mul_adjoint(u, v));
  CHECK(r1.sigma[0] == doctest::Approx(6.0));
  for (std::size_t i = 1; i < r1.sigma.size(); ++i) CHECK(r1.sigma[i] == 0.0);
  CHECK(orthogonality_error(r1.U) <= 1e-14);
}

TEST_CASE("svd: singular values against Gram eigenvalues") {
  Rng rng(15);
  const DenseMat m = rng.normal_matrix(15, 7);
  auto s = svd(m);
  auto g = hermitian_eig(adjoint_mul(m, m));
  for (std::size_t i = 0; i < 7; ++i)
    CHECK(std::abs(s.sigma[i] - std::sqrt(g.values[6 - i])) <= 1e-10 * s.sigma[0]);
}

TEST_CASE("svd: reconstruction on 20 tall and wide instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(1200 + seed);
    const std::size_t r = 3 + seed, c = seed % 2 ? 2 + seed / 2 : 5 + 2 * seed;
    const DenseMat m = rng.normal_matrix(r, c);
    auto s = svd(m);
    CHECK(std::is_sorted(s.sigma.rbegin(), s.sigma.rend()));
    DenseMat us = s.U;
    for (std::size_t j = 0; j < s.sigma.size(); ++j)
      for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= s.sigma[j];
    CHECK(frobenius_norm(mul_adjoint(us, s.V) - m) <= 1e-12 * frobenius_norm(m));
    CHECK(orthogonality_error(s.U) <= 1e-12 * s.sigma.size());
    CHECK(orthogonality_error(s.V) <= 1e-12 * s.sigma.size());
  }
}

TEST_CASE("sylvester: scalar and diagonal cases") {
  DenseMat h(1, 1, -1.0), g(1, 1, -1.0), c(1, 1, 4.0);
  CHECK(solve_sylvester_dense(h, g, c)(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));

  DenseMat hd(3, 3), gd(2, 2), cd(3, 2);
  for (std::size_t i = 0; i < 3; ++i) hd(i, i) = -1.0 - i;
  for (std::size_t j = 0; j < 2; ++j) gd(j, j) = -0.5 - 2.0 * j;
  for (std::size_t k = 0; k < 6; ++k) cd.data()[k] = 1.0 + k;
  auto y = solve_sylvester_dense(hd, gd, cd);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(y(i, j) == doctest::Approx(cd(i, j) / (hd(i, i) + gd(j, j))).epsilon(1e-14));
}

TEST_CASE("sylvester: random stable 7x5 against Kronecker elimination") {
  Rng rng(75);
  DenseMat h = rng.normal_matrix(7, 7) - 6.0 * DenseMat::identity(7);
  DenseMat g = rng.normal_matrix(5, 5) - 6.0 * DenseMat::identity(5);
  DenseMat c = rng.normal_matrix(7, 5);
  auto y = solve_sylvester_dense(h, g, c);
  auto ref = oracle::kron_sylvester(h, g, c);
  CHECK(oracle::rel_diff(y, ref) <= 1e-10);
  const double res = frobenius_norm(mul(h, y) + mul_adjoint(y, g) - c);
  CHECK(res <= 1e-10 * (frobenius_norm(h) + frobenius_norm(g)) * frobenius_norm(y) +
                   1e-10 * frobenius_norm(c));
}

TEST_CASE("sylvester: Kronecker agreement on all shapes with m*p <= 100") {
  std::uint64_t seed = 0;
  for (std::size_t m = 1; m <= 10; ++m)
    for (std::size_t p = 1; m * p <= 100 && p <= 10; p += 3) {
      Rng rng(2000 + seed++);
      DenseMat h = rng.normal_matrix(m, m), g = rng.normal_matrix(p, p);
      for (std::size_t i = 0; i < m; ++i) h(i, i) -= 4.0;
      for (std::size_t i = 0; i < p; ++i) g(i, i) -= 4.0;
      const DenseMat c = rng.normal_matrix(m, p);
      CHECK(oracle::rel_diff(solve_sylvester_dense(h, g, c), oracle::kron_sylvester(h, g, c)) <=
            1e-10);
    }
}

TEST_CASE("sylvester: complex coefficients") {
  Rng rng(77);
  CDenseMat h = random_complex(rng, 6, 6), g = random_complex(rng, 4, 4);
  for (std::size_t i = 0; i < 6; ++i) h(i, i) -= 5.0;
  for (std::size_t i = 0; i < 4; ++i) g(i, i) -= 5.0;
  CDenseMat c = random_complex(rng, 6, 4);
  auto y = solve_sylvester_dense(h, g, c);
  CHECK(frobenius_norm(mul(h, y) + mul(y, transpose(g)) - c) <= 1e-12 * frobenius_norm(c));
}

TEST_CASE("sylvester: overlapping spectra raise SingularOperator with the pair") {
  DenseMat h(2, 2), g(1, 1), c(2, 1, 1.0);
  h(0, 0) = -1;
  h(1, 1) = 2;
  g(0, 0) = -2;
  try {
    solve_sylvester_dense(h, g, c);
    FAIL("expected SingularOperator");
  } catch (const SingularOperator& e) {
    CHECK(e.col() == 0);
    CHECK(e.code() == ErrorCode::SingularOperator);
  }
}

TEST_CASE("lu: solve and inverse") {
  Rng rng(8);
  const DenseMat a = rng.normal_matrix(9, 9);
  const DenseMat inv = inverse(a);
  CHECK(max_abs(mul(a, inv) - DenseMat::identity(9)) <= 1e-12 * norm1(a) * norm1(inv));
}

TEST_CASE("dense io: Matrix Market array and CSV round trips") {
  Rng rng(9);
  const DenseMat m = rng.normal_matrix(4, 3);
  std::stringstream ss;
  write_matrix_market_array(m, ss);
  CHECK(read_matrix_market_array(ss) == m);

  std::stringstream cs;
  write_csv(m, cs);
  CHECK(cs.str().substr(0, 4) == "4,3\n");
  CHECK(read_csv(cs) == m);

  std::stringstream bad("2,2\n1,2\n3,x\n");
  try {
    read_csv(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
