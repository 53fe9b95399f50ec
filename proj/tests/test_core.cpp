#include <gtest/gtest.h>

#include "mcic/cones.hpp"
#include "mcic/matcore.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace mcic;
using testutil::expect_matrix_near;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(HermitianSplit, PinnedExample) {
  Matrix a = mat2(1, 2, 0, 1);
  HermitianSplit s = hermitian_split(a);
  expect_matrix_near(s.P, mat2(1, 1, 1, 1), 1e-15, "P");
  expect_matrix_near(s.H, mat2(0, Complex(0, -1), Complex(0, 1), 0), 1e-15,
                     "H");
  expect_matrix_near(s.P + Complex(0, 1) * s.H, a, 1e-15, "reconstruction");
}

TEST(HermitianSplit, PartsAreHermitianOnRandomInput) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = gaussian_matrix(5, 5, rng);
    HermitianSplit s = hermitian_split(a);
    EXPECT_TRUE(is_hermitian(s.P));
    EXPECT_TRUE(is_hermitian(s.H));
    expect_matrix_near(s.P + Complex(0, 1) * s.H, a, 1e-14);
  }
}

TEST(Definiteness, FiveWayClassification) {
  auto diag = [](double x, double y) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = x;
    m(1, 1) = y;
    return m;
  };
  EXPECT_EQ(definiteness(diag(2, 1)).kind, Definiteness::PositiveDefinite);
  EXPECT_EQ(definiteness(diag(2, 1e-15)).kind,
            Definiteness::PositiveSemidefiniteSingular);
  EXPECT_EQ(definiteness(diag(2, -1)).kind, Definiteness::Indefinite);
  EXPECT_EQ(definiteness(diag(-2, -1)).kind, Definiteness::NegativeDefinite);
  EXPECT_EQ(definiteness(diag(-2, -1e-15)).kind,
            Definiteness::NegativeSemidefiniteSingular);
  EXPECT_EQ(definiteness(Matrix::Zero(3, 3)).kind,
            Definiteness::PositiveSemidefiniteSingular);
}

TEST(Definiteness, ToleranceIsRelative) {
  // 1e-6 is large in absolute terms of tol*1 but small against norm 1e4.
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1e4;
  m(1, 1) = 1e-6;
  EXPECT_EQ(definiteness(m).kind, Definiteness::PositiveSemidefiniteSingular);
  m(1, 1) = 1e-4;
  EXPECT_EQ(definiteness(m).kind, Definiteness::PositiveDefinite);
}

TEST(Definiteness, MatchesSylvesterOracle) {
  Rng rng(23);
  int pd_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Matrix h = gaussian_hermitian(4, rng);
    DefinitenessVerdict v = definiteness(h);
    bool pd = oracle::sylvester_positive_definite(h);
    if (std::abs(v.min_eig) > 1e-6) {
      EXPECT_EQ(is_pd(v), pd) << "trial " << trial;
    }
    pd_seen += pd ? 1 : 0;
  }
  // Gaussian Hermitian draws are mostly indefinite; make sure both branches
  // actually ran.
  EXPECT_LT(pd_seen, 60);
}

TEST(Definiteness, EigenvalueRangeMatches2x2Oracle) {
  Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix h = gaussian_hermitian(2, rng);
    DefinitenessVerdict v = definiteness(h);
    auto eigs = oracle::herm_eigs_2x2(h);
    EXPECT_NEAR(v.min_eig, eigs[0], 1e-12);
    EXPECT_NEAR(v.max_eig, eigs[1], 1e-12);
  }
}

TEST(Definiteness, RejectsNonHermitian) {
  EXPECT_THROW(definiteness(mat2(0, 1, 0, 0)), Error);
}

TEST(SmallestSingularValue, Verdicts) {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = 1e-12;
  EXPECT_TRUE(smallest_singular_value(s).singular);
  s(1, 1) = 1e-3;
  EXPECT_FALSE(smallest_singular_value(s).singular);
  EXPECT_TRUE(smallest_singular_value(mat2(1, 1, 1, 1)).singular);
  EXPECT_TRUE(smallest_singular_value(Matrix::Zero(2, 2)).singular);
}

TEST(SpectralNorm, FrozenValue) {
  EXPECT_NEAR(spectral_norm(mat2(3, 0, 4, 0)), 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(spectral_norm(Matrix::Zero(0, 0)), 0.0);
}

TEST(SignMatrix, FrozenNonNormalExample) {
  // [[0,4],[1,0]] has eigenpairs (2, (2,1)) and (-2, (-2,1)).
  Matrix a = mat2(0, 4, 1, 0);
  Matrix e = sign_matrix(a);
  expect_matrix_near(e, mat2(0, 2, 0.5, 0), 1e-12, "sign");
}

TEST(SignMatrix, DiagonalAndTriangular) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -2;
  d(1, 1) = 3;
  expect_matrix_near(sign_matrix(d), mat2(-1, 0, 0, 1), 1e-12);

  // Block-triangular with nu = 2 eigenvalues in the left half-plane: E has
  // eigenvalue -1 with multiplicity nu and +1 with multiplicity n - nu.
  Matrix t = Matrix::Zero(3, 3);
  t << -3, 1, 2, 0, -1, 5, 0, 0, 2;
  Matrix e = sign_matrix(t);
  Eigendecomposition ed = eigen_decompose(e);
  std::vector<double> re;
  for (int i = 0; i < 3; ++i) re.push_back(ed.values(i).real());
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-9);
  EXPECT_NEAR(re[1], -1.0, 1e-9);
  EXPECT_NEAR(re[2], 1.0, 1e-9);
}

TEST(SignMatrix, DefectiveInputTakesNewtonPath) {
  // Jordan block: a single eigenvector, so the spectral route is hopeless.
  Matrix j = mat2(-1, 1, 0, -1);
  SignMatrixResult r = sign_matrix_full(j);
  EXPECT_TRUE(r.used_newton);
  expect_matrix_near(r.E, -Matrix::Identity(2, 2), 1e-10, "sign of Jordan");
}

TEST(SignMatrix, NewtonAgreesWithSpectralRoute) {
  Rng rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + int(rng.integer(5));
    Matrix a = gaussian_matrix(n, n, rng);
    double margin = spectral_norm(a) * 1e-3;
    Eigendecomposition d = eigen_decompose(a);
    bool near_axis = false;
    for (int i = 0; i < n; ++i) {
      near_axis = near_axis || std::abs(d.values(i).real()) < margin;
    }
    if (near_axis) continue;
    Matrix spectral = sign_matrix(a);
    SignMatrixOptions force_newton;
    force_newton.condition_limit = 0.0;
    SignMatrixResult newton = sign_matrix_full(a, force_newton);
    EXPECT_TRUE(newton.used_newton);
    EXPECT_LE(testutil::rel_error(newton.E, spectral), 1e-9) << "trial "
                                                             << trial;
  }
}

TEST(SignMatrix, AxiomsOnRandomInput) {
  Rng rng(41);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + int(rng.integer(7));
    Matrix a = gaussian_matrix(n, n, rng);
    Eigendecomposition d = eigen_decompose(a);
    double margin = std::max(1.0, spectral_norm(a)) * 1e-4;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      ok = ok && std::abs(d.values(i).real()) > margin;
    }
    if (!ok) continue;
    ++checked;
    Matrix e = sign_matrix(a);
    Matrix id = Matrix::Identity(n, n);
    EXPECT_LE(testutil::rel_error(e * e, id), 1e-8);
    EXPECT_LE((e * a - a * e).norm(), 1e-8 * std::max(1.0, (e * a).norm()));
    Eigendecomposition prod = eigen_decompose((a * e).eval());
    for (int i = 0; i < n; ++i) {
      EXPECT_GT(prod.values(i).real(), 0.0);
    }
  }
  EXPECT_GE(checked, 30);
}

TEST(SignMatrix, RejectsAxisEigenvalues) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = Complex(0, 1);
  a(1, 1) = 1.0;
  EXPECT_THROW(sign_matrix(a), Error);
  EXPECT_THROW(sign_matrix(mat2(0, -1, 1, 0)), Error);  // eigenvalues +-i
}

TEST(MatrixExponential, FrozenValues) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  Matrix want = Matrix::Zero(2, 2);
  want(0, 0) = std::exp(1.0);
  want(1, 1) = std::exp(-1.0);
  expect_matrix_near(matrix_exponential(d), want, 1e-13);

  expect_matrix_near(matrix_exponential(mat2(0, 1, 0, 0)), mat2(1, 1, 0, 1),
                     1e-15, "nilpotent");

  double th = 0.3;
  Matrix rot = mat2(0, -th, th, 0);
  expect_matrix_near(
      matrix_exponential(rot),
      mat2(std::cos(th), -std::sin(th), std::sin(th), std::cos(th)), 1e-14,
      "rotation");
}

TEST(MatrixExponential, MatchesTaylorOracle) {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + int(rng.integer(5));
    Matrix a = gaussian_matrix(n, n, rng);
    Matrix got = matrix_exponential(a);
    Matrix want = oracle::taylor_expm(a);
    EXPECT_LE(testutil::rel_error(got, want), 1e-10) << "trial " << trial;
  }
}

TEST(MatrixExponential, TimeScaling) {
  Rng rng(47);
  Matrix a = gaussian_matrix(3, 3, rng);
  expect_matrix_near(matrix_exponential(a, 0.25),
                     oracle::taylor_expm((0.25 * a).eval()), 1e-11);
  expect_matrix_near(matrix_exponential(a, 0.0), Matrix::Identity(3, 3),
                     1e-15);
}

TEST(RandomIsometry, IsometryAndDeterminism) {
  Matrix u1 = random_isometry(3, 4, 123);
  Matrix u2 = random_isometry(3, 4, 123);
  Matrix u3 = random_isometry(3, 4, 124);
  ASSERT_EQ(u1.rows(), 12);
  ASSERT_EQ(u1.cols(), 4);
  expect_matrix_near(u1.adjoint() * u1, Matrix::Identity(4, 4), 1e-12,
                     "gram");
  expect_matrix_near(u1, u2, 0.0, "same seed must be byte-identical");
  EXPECT_GT((u1 - u3).norm(), 1e-3);
}

TEST(Rng, DeterministicAndInRange) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.raw(), b.raw());
  }
  Rng c(9);
  for (int i = 0; i < 200; ++i) {
    double v = c.log_uniform(1e-2, 1e2);
    EXPECT_GE(v, 1e-2);
    EXPECT_LE(v, 1e2);
  }
}

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

TEST(ConeMembership, PinnedBoundaryExample) {
  Matrix a = mat2(1, 2, 0, 1);
  LiMembership m = membership_L_I(a);
  EXPECT_FALSE(m.membership.in_open);
  EXPECT_TRUE(m.membership.in_closed);
  EXPECT_NEAR(m.membership.min_eig, 0.0, 1e-12);
  expect_matrix_near(m.membership.certificate, mat2(2, 2, 2, 2), 1e-14);
  expect_matrix_near(m.split.P, mat2(1, 1, 1, 1), 1e-15);
}

TEST(ConeMembership, IdentityAndRotations) {
  Matrix id = Matrix::Identity(2, 2);
  EXPECT_TRUE(membership_L_I(id).membership.in_open);
  // Purely skew direction: certificate is exactly zero.
  Matrix ii = Complex(0, 1) * id;
  LiMembership skew = membership_L_I(ii);
  EXPECT_FALSE(skew.membership.in_open);
  EXPECT_TRUE(skew.membership.in_closed);
  LiMembership neg = membership_L_I((-id).eval());
  EXPECT_FALSE(neg.membership.in_open);
  EXPECT_FALSE(neg.membership.in_closed);
}

TEST(ConeMembership, IndefiniteWeight) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1;
  h(1, 1) = -1;
  Matrix a = h;  // HA + A*H = 2I
  ConeMembership m = membership_L_H(a, h);
  EXPECT_TRUE(m.in_open);
  expect_matrix_near(m.certificate, 2.0 * Matrix::Identity(2, 2), 1e-14);
}

TEST(ConeMembership, WeightContainsItselfScaled) {
  // H itself is in the open cone iff H^2 is definite, i.e. always for
  // non-singular Hermitian H.
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix h = gaussian_hermitian(4, rng);
    if (smallest_singular_value(h).singular) continue;
    EXPECT_TRUE(membership_L_H(h, h).in_open);
  }
}

TEST(ConeMembership, RejectsSingularOrSkewWeight) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1;  // singular Hermitian
  EXPECT_THROW(membership_L_H(Matrix::Identity(2, 2), h), Error);
  EXPECT_THROW(membership_L_H(Matrix::Identity(2, 2), mat2(0, 1, -1, 0)),
               Error);
}

TEST(ConeMembership, UnitaryCovariance) {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3;
    Matrix h = gaussian_hermitian(n, rng);
    if (smallest_singular_value(h).singular) continue;
    Matrix a = oracle::random_cone_member(h, rng);
    Matrix u = haar_isometry(n, n, rng);
    ConeMembership direct = membership_L_H(a, h);
    ConeMembership rotated =
        membership_L_H((u.adjoint() * a * u).eval(), (u.adjoint() * h * u).eval());
    EXPECT_TRUE(direct.in_open);
    EXPECT_EQ(direct.in_open, rotated.in_open);
    EXPECT_NEAR(direct.min_eig, rotated.min_eig,
                1e-8 * std::max(1.0, std::abs(direct.min_eig)));
  }
}

TEST(ConeAxioms, ScaleSumInverseStayInCone) {
  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + int(rng.integer(4));
    Matrix h = gaussian_hermitian(n, rng);
    if (smallest_singular_value(h).singular) continue;
    Matrix a = oracle::random_cone_member(h, rng);
    Matrix b = oracle::random_cone_member(h, rng);
    double c = rng.log_uniform(1e-2, 1e2);
    EXPECT_TRUE(membership_L_H((c * a).eval(), h).in_open);
    EXPECT_TRUE(membership_L_H((a + b).eval(), h).in_open);
    // Open members are non-singular, and inversion stays inside.
    SingularityVerdict sv = smallest_singular_value(a);
    EXPECT_FALSE(sv.singular);
    EXPECT_TRUE(membership_L_H(a.inverse().eval(), h).in_open);
  }
}

TEST(ConeAxioms, ClosedIntersectionWithNegativeIsSkew) {
  // A in closure(L_I) and closure(L_{-I}) forces A + A* = 0.
  Rng rng(67);
  Matrix id = Matrix::Identity(3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix k = gaussian_hermitian(3, rng);
    Matrix skew = Complex(0, 1) * k;
    ConeMembership pos = membership_L_H(skew, id);
    ConeMembership neg = membership_L_H(skew, (-id).eval());
    EXPECT_TRUE(pos.in_closed && neg.in_closed);
    // And conversely a member of both closures has zero Hermitian part.
    Matrix a = gaussian_matrix(3, 3, rng);
    if (membership_L_H(a, id).in_closed &&
        membership_L_H(a, (-id).eval()).in_closed) {
      EXPECT_LE(hermitian_part_exact(a).norm(), 1e-9);
    }
  }
}

TEST(MaximalityWitness, FrozenExample) {
  Matrix b = -Matrix::Identity(2, 2);
  MaximalityWitness w = maximality_witness(b);
  EXPECT_NEAR(w.alpha, 2.0, 1e-14);
  expect_matrix_near(w.A, Matrix::Identity(2, 2), 1e-14);
  EXPECT_TRUE(w.sum_singularity.singular);
  EXPECT_LE(w.sum_singularity.sigma_min, 1e-14);
}

TEST(MaximalityWitness, PropertyOnRandomOutsiders) {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + int(rng.integer(7));
    Matrix b = gaussian_matrix(n, n, rng);
    DefinitenessVerdict v = definiteness(hermitian_part_exact(2.0 * b));
    double shift = 0.0;
    if (v.min_eig > -0.1) shift = 0.5 * (v.min_eig + 0.1 + rng.uniform(0, 1));
    b -= shift * Matrix::Identity(n, n);
    MaximalityWitness w = maximality_witness(b);
    EXPECT_GE(w.alpha, 0.1 - 1e-9);
    EXPECT_TRUE(membership_L_I(w.A).membership.in_open);
    EXPECT_LE(w.sum_singularity.sigma_min,
              1e-8 * std::max(1.0, w.sum_singularity.sigma_max));
  }
}

TEST(MaximalityWitness, RejectsInsiders) {
  EXPECT_THROW(maximality_witness(Matrix::Identity(2, 2)), Error);
  // Boundary: zero Hermitian part is inside the closure.
  EXPECT_THROW(maximality_witness(mat2(0, 1, -1, 0)), Error);
}

TEST(MatrixConvexCombine, ScaledIdentityCounterexamplePattern) {
  // diag(c1, c2 I_{n-1}) from scaled identities: the crux of why matrix
  // convexity needs the full isometry structure.
  int n = 3;
  double c1 = 2.5, c2 = 0.5;
  std::vector<Matrix> blocks = {c1 * Matrix::Identity(n, n),
                                c2 * Matrix::Identity(n, n)};
  Matrix upsilon = Matrix::Zero(2 * n, n);
  upsilon(0, 0) = 1.0;                       // v1 = e1 e1^T
  upsilon.block(n + 1, 1, n - 1, n - 1) =    // v2 = diag(0, I_{n-1})
      Matrix::Identity(n - 1, n - 1);
  Matrix got = matrix_convex_combine(blocks, upsilon);
  Matrix want = c2 * Matrix::Identity(n, n);
  want(0, 0) = c1;
  expect_matrix_near(got, want, 1e-14);
}

TEST(MatrixConvexCombine, PreservesPositiveDefiniteness) {
  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + int(rng.integer(3));
    int k = 2 + int(rng.integer(2));
    std::vector<Matrix> blocks;
    for (int j = 0; j < k; ++j) {
      Matrix g = gaussian_matrix(n, n, rng);
      blocks.push_back(g * g.adjoint() + 0.3 * Matrix::Identity(n, n));
    }
    Matrix upsilon = haar_isometry(k * n, n, rng);
    Matrix out = matrix_convex_combine(blocks, upsilon);
    EXPECT_TRUE(is_pd(definiteness(out)));
  }
}

TEST(MatrixConvexCombine, PreservesRightHalfPlane) {
  Rng rng(79);
  Matrix id3 = Matrix::Identity(3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Matrix> blocks;
    for (int j = 0; j < 2; ++j) {
      blocks.push_back(oracle::random_cone_member(id3, rng));
    }
    Matrix upsilon = haar_isometry(6, 3, rng);
    Matrix out = matrix_convex_combine(blocks, upsilon);
    EXPECT_TRUE(membership_L_I(out).membership.in_open);
  }
}

TEST(MatrixConvexCombine, FullRankConeMode) {
  Rng rng(83);
  std::vector<Matrix> blocks = {Matrix::Identity(2, 2),
                                3.0 * Matrix::Identity(2, 2)};
  Matrix upsilon = 2.0 * haar_isometry(4, 2, rng);  // Gram = 4I, not isometry
  EXPECT_THROW(matrix_convex_combine(blocks, upsilon, CombineMode::Isometry),
               Error);
  Matrix out =
      matrix_convex_combine(blocks, upsilon, CombineMode::FullRank);
  EXPECT_TRUE(is_pd(definiteness(out)));
}

TEST(ThetaCombination, DegenerateT) {
  ThetaCombination r = singular_theta_combination(Complex(0, 0));
  EXPECT_DOUBLE_EQ(r.theta_plus, 0.5);
  EXPECT_DOUBLE_EQ(r.theta_minus, 0.5);
  expect_matrix_near(r.M_plus, Matrix::Zero(2, 2), 1e-15);
  expect_matrix_near(r.U, mat2(0, 1, -1, 0), 0.0);
}

TEST(ThetaCombination, FrozenThetaForT2) {
  ThetaCombination r = singular_theta_combination(Complex(2, 0));
  EXPECT_NEAR(r.theta_plus, 0.8535533905932737, 1e-15);
  EXPECT_NEAR(r.theta_minus, 0.14644660940672624, 1e-15);
  EXPECT_LE(std::abs(r.M_plus.determinant()), 1e-14);
  EXPECT_LE(std::abs(r.M_minus.determinant()), 1e-14);
}

TEST(ThetaCombination, DeterminantVanishesAndCombinationIsSingular) {
  Rng rng(89);
  for (int trial = 0; trial < 50; ++trial) {
    Complex t(rng.uniform(-10, 10), rng.uniform(-10, 10));
    ThetaCombination r = singular_theta_combination(t);
    double scale = 1.0 + std::norm(t);
    EXPECT_LE(std::abs(r.M_plus.determinant()), 1e-12 * scale);
    EXPECT_LE(std::abs(r.M_minus.determinant()), 1e-12 * scale);
    // U is unitary and the underlying convex combination of X and U*XU is
    // singular at both roots as well.
    expect_matrix_near(r.U.adjoint() * r.U, Matrix::Identity(2, 2), 1e-14);
    Matrix x = mat2(-1, t, 0, 1);
    Matrix conj = r.U.adjoint() * x * r.U;
    for (double theta : {r.theta_plus, r.theta_minus}) {
      Matrix comb = theta * x + (1.0 - theta) * conj;
      EXPECT_LE(std::abs(comb.determinant()), 1e-12 * scale);
    }
  }
}

TEST(StructuredIsometry, IdentityBlocksActTrivially) {
  std::vector<Matrix> bn = {Matrix::Identity(2, 2)};
  std::vector<Matrix> bm = {Matrix::Identity(1, 1)};
  StructuredIsometry iso = structured_isometry(bn, bm);
  expect_matrix_near(iso.assembled, Matrix::Identity(3, 3), 1e-15);
  Rng rng(97);
  Matrix r = gaussian_matrix(3, 3, rng);
  expect_matrix_near(nm_matrix_convex_combine({r}, iso), r, 1e-14);
}

TEST(StructuredIsometry, TwoTermInterleavingKeepsBlockCertificates) {
  Rng rng(101);
  int n = 2, m = 2, k = 2;
  double w = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> bn, bm;
  for (int j = 0; j < k; ++j) {
    bn.push_back(w * haar_isometry(n, n, rng));
    bm.push_back(w * haar_isometry(m, m, rng));
  }
  StructuredIsometry iso = structured_isometry(bn, bm);
  Matrix gram = iso.assembled.adjoint() * iso.assembled;
  expect_matrix_near(gram, Matrix::Identity(n + m, n + m), 1e-12);

  // The structured combination commutes with J = diag(-I_n, I_m), so
  // J R + R* J >= 0 survives term-wise.
  Matrix j = Matrix::Identity(n + m, n + m);
  j.topLeftCorner(n, n) *= -1.0;
  std::vector<Matrix> rs;
  for (int idx = 0; idx < k; ++idx) {
    Matrix g = gaussian_matrix(n + m, n + m, rng);
    Matrix q = g * g.adjoint() + 0.2 * Matrix::Identity(n + m, n + m);
    // Solve J R + R* J = Q by R = J Q / 2 + J K with K skew-Hermitian.
    Matrix skew = Complex(0, 1) * gaussian_hermitian(n + m, rng);
    rs.push_back(j * (0.5 * q + skew));
    Matrix cert = hermitian_part_exact(j * rs.back() + rs.back().adjoint() * j);
    ASSERT_TRUE(is_pd(definiteness(cert)));
  }
  Matrix combined = nm_matrix_convex_combine(rs, iso);
  Matrix cert =
      hermitian_part_exact(j * combined + combined.adjoint() * j);
  EXPECT_TRUE(is_psd(definiteness(cert)));
}

TEST(StructuredIsometry, RejectsMismatchedOrDeficientBlocks) {
  std::vector<Matrix> bn = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  std::vector<Matrix> bm = {Matrix::Identity(1, 1)};
  EXPECT_THROW(structured_isometry(bn, bm), Error);
  bm.push_back(Matrix::Identity(1, 1));
  // Gram = 2I: not an isometry, but full-rank mode accepts it.
  EXPECT_THROW(structured_isometry(bn, bm, CombineMode::Isometry), Error);
  EXPECT_NO_THROW(structured_isometry(bn, bm, CombineMode::FullRank));
}

TEST(SpectralNormBall, MembershipAndNonInvertibility) {
  BallMembership in = spectral_norm_ball_membership(
      0.5 * Matrix::Identity(2, 2), 1.0);
  EXPECT_TRUE(in.inside);
  EXPECT_NEAR(in.norm, 0.5, 1e-12);
  BallMembership out = spectral_norm_ball_membership(
      2.0 * Matrix::Identity(2, 2), 1.0);
  EXPECT_FALSE(out.inside);

  // The ball is convex but not inverse-closed: 0.5 I is a member whose
  // inverse 2 I is not.
  Matrix a = 0.5 * Matrix::Identity(2, 2);
  EXPECT_TRUE(spectral_norm_ball_membership(a, 1.0).inside);
  EXPECT_FALSE(spectral_norm_ball_membership(a.inverse().eval(), 1.0).inside);

  // Midpoints of members stay inside.
  Rng rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = gaussian_matrix(3, 3, rng);
    Matrix y = gaussian_matrix(3, 3, rng);
    x /= std::max(1.0, spectral_norm(x));
    y /= std::max(1.0, spectral_norm(y));
    EXPECT_TRUE(
        spectral_norm_ball_membership((0.5 * (x + y)).eval(), 1.0).inside);
  }
}

}  // namespace
