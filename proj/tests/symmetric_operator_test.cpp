#include "trs/errors.hpp"
#include "trs/kernels.hpp"
#include "trs/symmetric_operator.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

using namespace trs;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (auto& e : m.reshaped()) e = g(rng);
  return 0.5 * (m + m.transpose());
}

SymmetricOperator random_sparse(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::bernoulli_distribution keep(0.05);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, g(rng)});
    for (std::size_t j = 0; j < i; ++j)
      if (keep(rng)) t.push_back({i, j, g(rng)});
  }
  return SymmetricOperator::sparse(n, t);
}

}  // namespace

TEST(Apply, DiagonalIdentityPermutation) {
  EXPECT_EQ(SymmetricOperator::diagonal(vec({-13, 13})).apply(vec({1, 1})), vec({-13, 13}));
  EXPECT_EQ(SymmetricOperator::scaled_identity(3, 1.0).apply(vec({2, 0, -1})), vec({2, 0, -1}));
  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  EXPECT_EQ(SymmetricOperator::dense(p).apply(vec({3, 4})), vec({4, 3}));
}

TEST(Apply, DimensionMismatchThrows) {
  EXPECT_THROW(SymmetricOperator::diagonal(vec({1, 2})).apply(vec({1, 2, 3})), InputError);
}

TEST(Apply, SparseMirrorsLowerTriangle) {
  const auto op = SymmetricOperator::sparse(2, {{1, 0, 1.0}});
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_EQ(op.to_dense(), expected);
  EXPECT_EQ(op.nonzeros(), 2u);
}

TEST(Apply, SparseRejectsBadTriplets) {
  EXPECT_THROW(SymmetricOperator::sparse(2, {{0, 1, 1.0}}), InputError);
  EXPECT_THROW(SymmetricOperator::sparse(2, {{2, 0, 1.0}}), InputError);
  EXPECT_THROW(SymmetricOperator::sparse(2, {{1, 0, 1.0}, {1, 0, 2.0}}), InputError);
}

TEST(Apply, DenseRejectsAsymmetry) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(SymmetricOperator::dense(m), InputError);
}

TEST(Apply, SymmetryProperty) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto dense = SymmetricOperator::dense(random_symmetric(30, seed));
    const auto sparse = random_sparse(40, seed);
    for (const SymmetricOperator* op : {&dense, &sparse}) {
      Vector u(op->dim()), v(op->dim());
      for (auto& e : u) e = g(rng);
      for (auto& e : v) e = g(rng);
      const double h = op->to_dense().norm();
      EXPECT_NEAR(u.dot(op->apply(v)), v.dot(op->apply(u)), 1e-12 * u.norm() * v.norm() * h);
    }
  }
}

TEST(Kernels, ParallelMatchesSerialBitwise) {
  const std::size_t n = 700;  // above the parallel row threshold
  const auto dense = SymmetricOperator::dense(random_symmetric(n, 1));
  const auto sparse = random_sparse(n, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Vector v(n);
  for (auto& e : v) e = g(rng);
  EXPECT_EQ(dense.apply(v), dense.apply_serial(v));
  EXPECT_EQ(sparse.apply(v), sparse.apply_serial(v));
  Vector into;
  sparse.apply_into(v, into);
  EXPECT_EQ(into, sparse.apply_serial(v));
}

TEST(Kernels, DenseAndSparseAgree) {
  const auto sparse = random_sparse(120, 9);
  const auto dense = SymmetricOperator::dense(sparse.to_dense());
  Vector v = Vector::LinSpaced(120, -1.0, 1.0);
  EXPECT_LE((dense.apply(v) - sparse.apply(v)).norm(), 1e-13 * (1.0 + v.norm()));
}

TEST(SpectralNorm, KnownSpectra) {
  const double a = estimate_spectral_norm(SymmetricOperator::diagonal(vec({-13, 13})), 1e-5);
  EXPECT_GE(a, 13.0);
  EXPECT_LE(a, 13.0013 * (1.0 + 1e-9));
  const double b = estimate_spectral_norm(SymmetricOperator::diagonal(vec({27, 53})), 1e-5);
  EXPECT_GE(b, 53.0);
  EXPECT_LE(b, 53.0053 * (1.0 + 1e-9));
  EXPECT_EQ(estimate_spectral_norm(SymmetricOperator::scaled_identity(2, 0.0)), 0.0);
}

TEST(SpectralNorm, ZeroDimensionThrows) {
  EXPECT_THROW(estimate_spectral_norm(SymmetricOperator::diagonal(Vector(0))), InputError);
}

TEST(SpectralNorm, DominatesTrueNorm) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto op = SymmetricOperator::dense(random_symmetric(12, seed));
    const double exact = eigendecompose(op).norm();
    EXPECT_GE(estimate_spectral_norm(op, 1e-6, 10000, seed), exact) << "seed " << seed;
  }
}

TEST(Eigendecompose, SmallExamples) {
  EXPECT_EQ(eigendecompose(SymmetricOperator::diagonal(vec({13, -13}))).eigenvalues, vec({-13, 13}));
  EXPECT_EQ(eigendecompose(SymmetricOperator::diagonal(vec({-2, 1}))).eigenvalues, vec({-2, 1}));
  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  const Spectrum s = eigendecompose(SymmetricOperator::dense(p));
  EXPECT_NEAR(s.eigenvalues(0), -1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors.col(0).dot(vec({1, -1}) / std::sqrt(2.0))), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors.col(1).dot(vec({1, 1}) / std::sqrt(2.0))), 1.0, 1e-15);
}

TEST(Eigendecompose, Reconstruction) {
  for (std::size_t n : {1, 5, 20, 50}) {
    const Matrix h = random_symmetric(n, n);
    const Spectrum s = eigendecompose(SymmetricOperator::dense(h));
    const Matrix back = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    EXPECT_LE((h - back).norm(), 1e-9 * (1.0 + h.norm()));
  }
}

TEST(Eigendecompose, DenseLimitFromEnvironment) {
  ::setenv("TRS_DENSE_LIMIT", "3", 1);
  EXPECT_EQ(dense_limit(), 3u);
  EXPECT_THROW(eigendecompose(SymmetricOperator::scaled_identity(4, 1.0)), CapabilityError);
  EXPECT_NO_THROW(eigendecompose(SymmetricOperator::scaled_identity(3, 1.0)));
  ::unsetenv("TRS_DENSE_LIMIT");
  EXPECT_EQ(dense_limit(), kDefaultDenseLimit);
}

TEST(Eigendecompose, CachedSpectrumIsSharedAndShifted) {
  const auto op = SymmetricOperator::diagonal(vec({-2, 1, 4}));
  const auto copy = op;
  EXPECT_FALSE(copy.has_spectrum());
  op.spectrum();
  EXPECT_TRUE(copy.has_spectrum());
  EXPECT_EQ(op.norm_bound(), 4.0);
  const auto shifted = op.shifted(2.0);
  EXPECT_TRUE(shifted.has_spectrum());
  EXPECT_EQ(shifted.spectrum().eigenvalues, vec({0, 3, 6}));
  EXPECT_EQ(shifted.apply(vec({1, 1, 1})), vec({0, 3, 6}));
  EXPECT_EQ(op.trace(), 3.0);
}

TEST(Pinv, Examples) {
  const Spectrum s = eigendecompose(SymmetricOperator::diagonal(vec({-2, 1})));
  const PinvResult a = pinv_apply(s, 2.0, vec({0, 0.5}));
  EXPECT_TRUE(a.in_range);
  EXPECT_NEAR((a.x - vec({0, 1.0 / 6.0})).norm(), 0.0, 1e-15);
  const PinvResult b = pinv_apply(s, 2.0, vec({1, 0}));
  EXPECT_FALSE(b.in_range);
  EXPECT_EQ(b.x.norm(), 0.0);
  const Spectrum id = eigendecompose(SymmetricOperator::scaled_identity(2, 1.0));
  const PinvResult c = pinv_apply(id, 0.0, vec({3, 4}));
  EXPECT_TRUE(c.in_range);
  EXPECT_NEAR((c.x - vec({3, 4})).norm(), 0.0, 1e-14);
}

TEST(Pinv, ConsistencyProperty) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Matrix h = random_symmetric(6, seed);
    const Spectrum s = eigendecompose(SymmetricOperator::dense(h));
    const double shift = g(rng);
    Vector v(6);
    for (auto& e : v) e = g(rng);
    const PinvResult r = pinv_apply(s, shift, v);
    ASSERT_TRUE(r.in_range);
    EXPECT_LE(((h + shift * Matrix::Identity(6, 6)) * r.x - v).norm(), 1e-8 * v.norm());
  }
}
