#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "problems.hpp"
#include "sylkit/analysis.hpp"
#include "sylkit/errors.hpp"
#include "sylkit/linalg.hpp"
#include "sylkit/rng.hpp"

using namespace sylkit;
using namespace sylkit::analysis;
using la::cplx;
using la::DenseMat;

namespace {

DenseMat random_dense(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.normal_matrix(n, n);
}

Eigen::MatrixXd to_eigen(const DenseMat& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) e(i, j) = m(i, j);
  return e;
}

double eigen_abscissa(const DenseMat& m) {
  const Eigen::MatrixXd a = to_eigen(m);
  const Eigen::MatrixXd s = 0.5 * (a + a.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().maxCoeff();
}

double max_real_eig(const la::CDenseMat& m) {
  double out = -1e300;
  for (const cplx& l : la::eigenvalues(m)) out = std::max(out, l.real());
  return out;
}

constexpr std::uint64_t kEx45Seed = 219;

}  // namespace

// ---------------------------------------------------------------------------
// Field of values boundary

TEST_CASE("fov: Hermitian diag(-1, 1) degenerates to the real segment") {
  DenseMat M(2, 2);
  M(0, 0) = -1.0;
  M(1, 1) = 1.0;
  const FovBoundary f = fov_boundary(M);
  CHECK(f.points.size() == kDefaultAngles);
  CHECK(f.alpha == doctest::Approx(1.0).epsilon(1e-14));
  for (const cplx& z : f.points) {
    CHECK(std::abs(z.imag()) <= 1e-14);
    CHECK(z.real() >= -1.0 - 1e-14);
    CHECK(z.real() <= 1.0 + 1e-14);
  }
}

TEST_CASE("fov: 2x2 Jordan block gives the disc of radius one half") {
  DenseMat M(2, 2);
  M(0, 1) = 1.0;
  const FovBoundary f = fov_boundary(M);
  for (const cplx& z : f.points) CHECK(std::abs(std::abs(z) - 0.5) <= 1e-8);
  CHECK(f.alpha == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fov: alpha matches the symmetric-part eigenvalue oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DenseMat M = random_dense(5 + seed, seed);
    const FovBoundary f = fov_boundary(M);
    CHECK(std::abs(f.alpha - eigen_abscissa(M)) <= 1e-8 * (1.0 + std::abs(f.alpha)));
  }
}

TEST_CASE("fov: boundary points respect every supporting half-plane") {
  const DenseMat M = random_dense(12, 77);
  const Eigen::MatrixXcd a = to_eigen(M).cast<std::complex<double>>();
  const FovBoundary f = fov_boundary(M, 64);
  for (int k = 0; k < 37; ++k) {
    const double phi = 0.17 * k;
    const std::complex<double> w = std::polar(1.0, phi);
    const Eigen::MatrixXcd h = 0.5 * (w * a + std::conj(w) * a.adjoint());
    const double support = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues().maxCoeff();
    for (const cplx& z : f.points) CHECK((w * z).real() <= support + 1e-10);
  }
}

TEST_CASE("fov: rejects too few angles and non-square input") {
  CHECK_THROWS_AS(fov_boundary(DenseMat::identity(3), 4), Error);
  CHECK_THROWS_AS(fov_boundary(DenseMat(2, 3)), DimensionMismatch);
}

TEST_CASE("fov: distance to a sampled disc") {
  DenseMat M(2, 2);
  M(0, 1) = 1.0;
  const FovBoundary f = fov_boundary(M);
  CHECK(distance_to_fov(f, {0.1, 0.2}) == 0.0);
  CHECK(distance_to_fov(f, {2.5, 0.0}) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(distance_to_fov(f, {0.0, -1.5}) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("fov: sketched projection of the Toeplitz example moves alpha by O(|A|)") {
  const SparseMatrix A = sparse::gen_toeplitz_ex41(30);
  const DenseMat V = toeplitz_krylov_basis(A, 5);
  CHECK(la::orthogonality_error(V) <= 1e-13);
  double best = 0.0, norm_A = 0.0, alpha_plain = 0.0;
  std::uint64_t best_seed = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto S = sketch::SketchOperator::gaussian(30, 10, seed);
    const SketchFovGap g = sketch_fov_gap(A, V, S, 64);
    norm_A = g.norm_A;
    alpha_plain = g.alpha_plain;
    if (g.alpha_sketched - g.alpha_plain > best) {
      best = g.alpha_sketched - g.alpha_plain;
      best_seed = seed;
    }
  }
  MESSAGE("largest alpha shift " << best << " at seed " << best_seed << ", |A|_2 = " << norm_A);
  CHECK(alpha_plain < 0.0);
  CHECK(best >= 0.5 * norm_A);
  // frozen reproduction values
  CHECK(best_seed == 38);
  CHECK(best == doctest::Approx(3.347).epsilon(1e-3));
}

// ---------------------------------------------------------------------------
// Effective field of values

TEST_CASE("effective fov: zero perturbation keeps every Schur vector") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DenseMat H = random_dense(8, seed);
    const EffectiveFovResult e = effective_fov(H, std::vector<double>(8, 0.0));
    CHECK(e.dropped == 0);
    CHECK(e.kept == 8);
    // compressed matrix is unitarily similar to H, so W(compressed) = W(H)
    CHECK(eigen_abscissa(H) == doctest::Approx(la::numerical_abscissa(e.compressed)).epsilon(1e-10));
    const FovBoundary f = fov_boundary(e.compressed, 64);
    for (const cplx& l : la::eigenvalues(H)) CHECK(distance_to_fov(f, l) <= 1e-8);
  }
}

TEST_CASE("effective fov: unitary basis, exhaustive partition, monotone in the threshold") {
  const auto inst = sparse::gen_hhat_ex45(40, 5);
  std::size_t prev_kept = 41;
  for (double thr : {0.0, 1e-14, 1e-10, 1e-6, 1e-3, 0.1, 0.5, 1.0}) {
    const EffectiveFovResult e = effective_fov(inst.Hhat, inst.hhat, thr);
    CHECK(e.kept + e.dropped == 40);
    CHECK(e.kept <= prev_kept);
    prev_kept = e.kept;
    CHECK(la::orthogonality_error(e.Q) <= 1e-12);
    CHECK(e.Q1.cols() == e.kept);
    if (thr >= 1.0) CHECK(e.kept == 0);
    for (std::size_t i = 0; i < e.dropped; ++i) CHECK(e.eigenvector_first[i] <= thr);
    for (std::size_t i = e.dropped; i < 40; ++i) CHECK(e.eigenvector_first[i] > thr);
  }
}

TEST_CASE("effective fov: dropped Schur vectors have tiny first entries after reordering") {
  const auto inst = sparse::gen_hhat_ex45(100, kEx45Seed);
  const EffectiveFovResult e = effective_fov(inst.Hhat, inst.hhat);
  REQUIRE(e.dropped > 0);
  for (std::size_t i = 0; i < e.dropped; ++i) CHECK(e.first_row_magnitudes[i] <= 1e-10);
  CHECK(e.threshold == doctest::Approx(default_drop_threshold(inst.Hhat, inst.hhat)));
}

TEST_CASE("effective fov: seed sweep finds the recorded instance") {
  CHECK(find_ex45_seed(100, 215, 10) == kEx45Seed);
  CHECK_FALSE(find_ex45_seed(100, 0, 3).has_value());
}

TEST_CASE("effective fov: right-half-plane spectrum sits outside the effective field") {
  const auto inst = sparse::gen_hhat_ex45(100, kEx45Seed);
  const DenseMat M = perturbed_matrix(inst.Hhat, inst.hhat);
  CHECK(eigen_abscissa(inst.Hhat) < 0.0);
  CHECK(eigen_abscissa(M) > 0.0);

  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(to_eigen(M), false).eigenvalues();
  CHECK(ev.real().maxCoeff() > 0.0);

  const EffectiveFovResult e = effective_fov(inst.Hhat, inst.hhat);
  CHECK(max_real_eig(e.compressed) < 0.0);
  for (std::size_t i = 0; i < e.dropped; ++i) MESSAGE("dropped eigenvalue " << e.eigenvalues[i]);
}

TEST_CASE("effective fov: reduced Lyapunov solution is Hermitian PSD and solves the kept block") {
  const auto inst = sparse::gen_hhat_ex45(100, kEx45Seed);
  const EffectiveFovResult e = effective_fov(inst.Hhat, inst.hhat);
  const double beta = 1.3;
  const la::CDenseMat Y = effective_lyapunov_solution(e, beta);
  const double ny = la::frobenius_norm(Y);
  REQUIRE(ny > 0.0);
  CHECK(la::frobenius_norm(Y - la::adjoint(Y)) <= 1e-12 * ny);

  Eigen::MatrixXcd ye(100, 100);
  for (std::size_t j = 0; j < 100; ++j)
    for (std::size_t i = 0; i < 100; ++i) ye(i, j) = 0.5 * (Y(i, j) + std::conj(Y(j, i)));
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(ye).eigenvalues().minCoeff();
  CHECK(min_eig >= -1e-10 * ny);

  // Q1^* (M Y + Y M^* + e1 beta^2 e1^*) Q1 vanishes
  const la::CDenseMat Mc = la::to_complex(perturbed_matrix(inst.Hhat, inst.hhat));
  la::CDenseMat R = la::mul(Mc, Y);
  R += la::mul_adjoint(Y, Mc);
  R(0, 0) += beta * beta;
  const la::CDenseMat red = la::adjoint_mul(e.Q1, la::mul(R, e.Q1));
  CHECK(la::frobenius_norm(red) <= 1e-10 * (beta * beta + la::frobenius_norm(Mc) * ny));
  // Y lives in the range of Q1
  const la::CDenseMat Q0 = e.Q.block(0, 0, 100, e.dropped);
  CHECK(la::frobenius_norm(la::adjoint_mul(Q0, Y)) <= 1e-12 * ny);
}

// ---------------------------------------------------------------------------
// Schur vector decay

TEST_CASE("spearman: hand-computed values") {
  CHECK(*spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(*spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(*spearman({1, 2, 2, 3}, {1, 3, 2, 4}) == doctest::Approx(4.5 / std::sqrt(22.5)));
  CHECK_FALSE(spearman({1, 1, 1}, {1, 2, 3}).has_value());
}

TEST_CASE("decay: symmetric Hhat without perturbation has all eigenvalues on W(Hhat)") {
  DenseMat H = random_dense(10, 3);
  H = H + la::transpose(H);
  const DecayProfile p = schur_decay_profile(H, std::vector<double>(10, 0.0));
  for (const DecayPoint& q : p.points) CHECK(q.distance <= 1e-8 * la::frobenius_norm(H));
}

TEST_CASE("decay: eigenvalues far from W(Hhat) have negligible first entries") {
  const auto inst = sparse::gen_hhat_ex45(100, kEx45Seed);
  const DecayProfile p = schur_decay_profile(inst.Hhat, inst.hhat);
  REQUIRE(p.points.size() == 100);
  for (std::size_t i = 1; i < p.points.size(); ++i)
    CHECK(p.points[i - 1].distance <= p.points[i].distance);
  int far = 0;
  for (const DecayPoint& q : p.points)
    if (q.distance > 0.5) {
      ++far;
      CHECK(q.first_entry < 1e-12);
    }
  CHECK(far >= 1);
  REQUIRE(p.spearman.has_value());
  CHECK(*p.spearman < 0.0);
}

TEST_CASE("decay: larger perturbations push eigenvalues out and shrink first entries") {
  const auto inst = sparse::gen_hhat_ex45(60, 11);
  double prev_dist = -1.0, prev_first = 2.0;
  for (double scale : {0.25, 1.0, 4.0, 16.0, 64.0}) {
    std::vector<double> h = inst.hhat;
    for (double& v : h) v *= scale;
    const DecayProfile p = schur_decay_profile(inst.Hhat, h, 128);
    const DecayPoint& far = p.points.back();
    MESSAGE("scale " << scale << ": max distance " << far.distance << ", first entry "
                     << far.first_entry);
    CHECK(far.distance > prev_dist);
    CHECK(far.first_entry < prev_first);
    prev_dist = far.distance;
    prev_first = far.first_entry;
  }
}

// ---------------------------------------------------------------------------
// Ellipse bound

TEST_CASE("ellipse: sketching constant at the usual and at the exact embedding quality") {
  CHECK(2.0 * eta_epsilon(1.0 / std::sqrt(2.0)) == doctest::Approx(19.45).epsilon(0.01 / 19.45));
  CHECK(2.0 * eta_epsilon(0.0) == 8.0);
  CHECK_THROWS_AS(eta_epsilon(1.0), InvalidGeometry);
  CHECK_THROWS_AS(eta_epsilon(-0.1), InvalidGeometry);
}

TEST_CASE("ellipse: disc simplification") {
  const Ellipse disc{5.0, 2.0, 2.0};
  const double alpha = -1.0, eps = 0.3;
  const double gap = disc.c - alpha;
  const double rho2 = gap / disc.a1;
  for (std::size_t d : {0u, 1u, 7u, 20u}) {
    const double expect = 2.0 * eta_epsilon(eps) / gap * rho2 / (rho2 - 1.0) *
                          std::pow(rho2, -static_cast<double>(d));
    CHECK(ellipse_bound(d, alpha, disc, eps) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("ellipse: general formula by hand") {
  const Ellipse e{4.0, 3.0, 1.0};
  const double alpha = -0.5;
  const double delta = std::sqrt(8.0), gap = 4.5;
  const double root = std::sqrt(gap * gap - delta * delta);
  const double rho2 = (gap + root) / 4.0;
  const double expect = 8.0 / root * rho2 / (rho2 - 1.0) * std::pow(rho2, -3.0);
  CHECK(ellipse_bound(3, alpha, e, 0.0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("ellipse: decreasing in d, increasing in eps") {
  const Ellipse e{10.0, 6.0, 2.0};
  for (double eps : {0.0, 0.2, 0.5, 0.9}) {
    for (std::size_t d = 0; d < 40; ++d)
      CHECK(ellipse_bound(d + 1, -0.3, e, eps) < ellipse_bound(d, -0.3, e, eps));
  }
  for (std::size_t d : {1u, 10u, 30u}) {
    double prev = 0.0;
    for (double eps = 0.0; eps < 0.99; eps += 0.05) {
      const double b = ellipse_bound(d, -0.3, e, eps);
      CHECK(b > prev);
      prev = b;
    }
  }
}

TEST_CASE("ellipse: invalid geometry") {
  CHECK_THROWS_AS(ellipse_bound(3, -0.1, {1.0, 2.0, 0.5}, 0.1), InvalidGeometry);  // crosses axis
  CHECK_THROWS_AS(ellipse_bound(3, -0.1, {5.0, 1.0, 2.0}, 0.1), InvalidGeometry);  // a1 < a2
  CHECK_THROWS_AS(ellipse_bound(3, 4.0, {5.0, 3.0, 0.1}, 0.1), InvalidGeometry);   // gap < delta
  CHECK_THROWS_AS(ellipse_bound(3, -0.1, {5.0, 3.0, 1.0}, 1.0), InvalidGeometry);
}

TEST_CASE("ellipse: bounding ellipse of sampled ellipse points") {
  std::vector<cplx> pts;
  for (int k = 0; k < 400; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 400.0;
    pts.push_back({-7.0 + 3.0 * std::cos(t), 1.2 * std::sin(t)});
  }
  const Ellipse e = bounding_ellipse(pts, 0.0);
  CHECK(e.c == doctest::Approx(7.0).epsilon(1e-3));
  CHECK(e.a1 == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(e.a2 == doctest::Approx(1.2).epsilon(1e-3));

  const Ellipse g = bounding_ellipse(pts);
  CHECK(g.a1 == doctest::Approx(1.01 * e.a1));
  CHECK(g.a2 == doctest::Approx(1.01 * e.a2));
  CHECK(-g.c + g.a1 == doctest::Approx(-e.c + e.a1));
}

TEST_CASE("ellipse: bounding ellipse contains the points and has a1 >= a2") {
  Rng rng(9);
  std::vector<cplx> pts;
  for (int k = 0; k < 200; ++k) pts.push_back({-5.0 + rng.normal(), 3.0 * rng.normal()});
  const Ellipse e = bounding_ellipse(pts);
  CHECK(e.a1 >= e.a2);
  for (const cplx& z : pts) {
    const double u = (z.real() + e.c) / e.a1, v = z.imag() / e.a2;
    CHECK(u * u + v * v <= 1.0 + 1e-12);
  }
}

TEST_CASE("ellipse: closed-form Laplacian solution satisfies the Lyapunov equation") {
  const SparseMatrix A = problems::laplacian_1d(40);
  const DenseMat c = sparse::gen_rhs(40, 1, 1);
  const DenseMat X = problems::laplacian_lyapunov_exact(c);
  const DenseMat Ad = A.to_dense();
  DenseMat R = oracle::naive_mul(Ad, X);
  R += oracle::naive_mul(X, Ad);
  R += oracle::naive_mul(c, la::transpose(c));
  CHECK(la::frobenius_norm(R) <= 1e-10 * la::frobenius_norm(X));
}

TEST_CASE("ellipse: sketched Laplacian error stays below the bound") {
  for (auto [kind, s] : {std::pair{sketch::SketchKind::SRDCT, std::size_t{90}},
                         std::pair{sketch::SketchKind::Gaussian, std::size_t{90}}}) {
    const problems::EllipseSweep sw = problems::laplacian_ellipse_sweep(100, kind, s, 3);
    MESSAGE(sketch::to_string(kind) << ": checked " << sw.checked << ", skipped " << sw.skipped
                                    << ", worst error/bound " << sw.worst_ratio);
    CHECK(sw.checked + sw.skipped == 26);
    CHECK(sw.checked >= 5);
    CHECK(sw.violated == 0);
  }
}

// ---------------------------------------------------------------------------
// Distance to the full projection

TEST_CASE("distance bound: Kronecker inverse against an independent elimination") {
  const DenseMat H = random_dense(4, 1) - DenseMat::identity(4) * 6.0;
  const DenseMat G = random_dense(3, 2) - DenseMat::identity(3) * 6.0;
  const DenseMat Linv = kronecker_sum_inverse(H, G);
  Rng rng(4);
  const DenseMat C = rng.normal_matrix(4, 3);
  const DenseMat Y = oracle::kron_sylvester(H, G, C);
  DenseMat y(12, 1);
  for (std::size_t i = 0; i < 12; ++i) y(i, 0) = C.data()[i];
  const DenseMat v = la::mul(Linv, y);
  for (std::size_t i = 0; i < 12; ++i) CHECK(v(i, 0) == doctest::Approx(Y.data()[i]).epsilon(1e-12));
}

TEST_CASE("distance bound: exact sketch with full orthogonalization gives zero") {
  const SparseMatrix A = sparse::gen_convdiff_2d(15, 0.1, sparse::parse_field("example61_A"));
  const SparseMatrix B = sparse::gen_convdiff_2d(15, 0.1, sparse::parse_field("example61_B"));
  for (std::size_t r : {1u, 2u}) {
    krylov::SolverConfig cfg;
    cfg.k = krylov::kFull;
    cfg.sketch = sketch::SketchKind::Exact;
    const DistanceBound b = distance_to_full_bound(A, B, sparse::gen_rhs(225, r, 1),
                                                   sparse::gen_rhs(225, r, 2), 10, cfg);
    CHECK(b.lhs <= 1e-10);
    CHECK(b.rhs <= 1e-10);
    CHECK(b.identity_residual <= 1e-10);
  }
}

TEST_CASE("distance bound: truncated Gaussian-sketched run stays within the bound") {
  const SparseMatrix A = sparse::gen_convdiff_2d(15, 0.1, sparse::parse_field("example61_A"));
  const SparseMatrix B = sparse::gen_convdiff_2d(15, 0.1, sparse::parse_field("example61_B"));
  for (std::size_t r : {1u, 2u}) {
    krylov::SolverConfig cfg;
    cfg.k = 3;
    cfg.s = 100;
    cfg.sketch = sketch::SketchKind::Gaussian;
    cfg.seed = 7;
    for (std::size_t d : {5u, 10u, 15u}) {
      const DistanceBound b = distance_to_full_bound(A, B, sparse::gen_rhs(225, r, 1),
                                                     sparse::gen_rhs(225, r, 2), d, cfg);
      CHECK(b.lhs > 0.0);
      CHECK(b.lhs <= b.rhs + 1e-8);
      CHECK(b.identity_residual <= 1e-10);
      CHECK(b.rhs_tilde > 0.0);
    }
  }
}

TEST_CASE("distance bound: large problems need retained bases") {
  const SparseMatrix A = sparse::gen_convdiff_2d(50, 0.1, sparse::parse_field("zero"));
  krylov::SolverConfig cfg;
  try {
    distance_to_full_bound(A, A, sparse::gen_rhs(2500, 1, 1), sparse::gen_rhs(2500, 1, 2), 5, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RequiresVerification);
  }
}

// ---------------------------------------------------------------------------
// Tensorized embedding

TEST_CASE("tensor embedding: exact sketches preserve the norm") {
  Rng rng(1);
  const DenseMat U = la::householder_qr(rng.normal_matrix(50, 4)).Q;
  const DenseMat V = la::householder_qr(rng.normal_matrix(40, 3)).Q;
  const DenseMat Z = rng.normal_matrix(4, 3);
  const TensorEmbedding t = tensor_embedding_check(sketch::SketchOperator::exact(50),
                                                   sketch::SketchOperator::exact(40), U, V, Z);
  CHECK(t.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t.eps <= 1e-14);
  CHECK(t.sandwich_holds);
}

TEST_CASE("tensor embedding: rank-one Z reduces to the vector case") {
  Rng rng(2);
  const DenseMat U = la::householder_qr(rng.normal_matrix(60, 5)).Q;
  const DenseMat V = la::householder_qr(rng.normal_matrix(60, 5)).Q;
  DenseMat Z(5, 5);
  Z(0, 0) = 1.0;
  const auto SU = sketch::SketchOperator::gaussian(60, 30, 3);
  const auto SV = sketch::SketchOperator::gaussian(60, 30, 4);
  const TensorEmbedding t = tensor_embedding_check(SU, SV, U, V, Z);
  const DenseMat su = oracle::naive_mul(SU.to_dense(), U.block(0, 0, 60, 1));
  const DenseMat sv = oracle::naive_mul(SV.to_dense(), V.block(0, 0, 60, 1));
  CHECK(t.ratio == doctest::Approx(la::frobenius_norm(su) * la::frobenius_norm(sv)).epsilon(1e-12));
  CHECK(t.eps_tilde == doctest::Approx(t.eps * (2.0 + t.eps)));
}

TEST_CASE("tensor embedding: Gaussian Monte Carlo sandwich") {
  const std::size_t n = 200, d = 5, s = 16 * (d + 1);
  int holds = 0, qualifying = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(1000 + seed);
    const DenseMat U = la::householder_qr(rng.normal_matrix(n, d)).Q;
    const DenseMat V = la::householder_qr(rng.normal_matrix(n, d)).Q;
    const DenseMat Z = rng.normal_matrix(d, d);
    const TensorEmbedding t =
        tensor_embedding_check(sketch::SketchOperator::gaussian(n, s, 2 * seed),
                               sketch::SketchOperator::gaussian(n, s, 2 * seed + 1), U, V, Z);
    if (t.eps_tilde < 1.0) ++qualifying;
    if (t.sandwich_holds) ++holds;
  }
  MESSAGE("sandwich holds for " << holds << "/100 seeds, eps_tilde < 1 for " << qualifying);
  CHECK(holds >= 95);
}

TEST_CASE("tensor embedding: non-orthonormal basis is rejected") {
  Rng rng(5);
  const DenseMat U = rng.normal_matrix(30, 3);
  const auto S = sketch::SketchOperator::gaussian(30, 20, 1);
  CHECK_THROWS_AS(tensor_embedding_check(S, S, U, U, DenseMat::identity(3)), NotOrthonormal);
}
