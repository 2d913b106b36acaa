#include "trs/generators.hpp"

#include "trs/errors.hpp"
#include "trs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace trs {

InstanceKind parse_instance_kind(std::string_view name) {
  if (name == "example1") return InstanceKind::Example1;
  if (name == "example2") return InstanceKind::Example2;
  if (name == "example3") return InstanceKind::Example3;
  if (name == "easy") return InstanceKind::Easy;
  if (name == "hard2") return InstanceKind::Hard2;
  if (name == "ill") return InstanceKind::Ill;
  if (name == "convex") return InstanceKind::Convex;
  if (name == "scalar") return InstanceKind::Scalar;
  if (name == "sphere") return InstanceKind::Sphere;
  throw InputError("unknown instance kind '" + std::string(name) + "'");
}

std::string_view to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Example1: return "example1";
    case InstanceKind::Example2: return "example2";
    case InstanceKind::Example3: return "example3";
    case InstanceKind::Easy: return "easy";
    case InstanceKind::Hard2: return "hard2";
    case InstanceKind::Ill: return "ill";
    case InstanceKind::Convex: return "convex";
    case InstanceKind::Scalar: return "scalar";
    case InstanceKind::Sphere: return "sphere";
  }
  return "?";
}

TrsProblem example1() {
  return TrsProblem(SymmetricOperator::diagonal(Vector{{-13.0, 13.0}}),
                    Vector{{-250.0 / 169.0, 3456.0 / 169.0}});
}

TrsProblem example2(double tau) {
  return TrsProblem(SymmetricOperator::diagonal(Vector{{13.0, -13.0 + 2.0 * tau}}),
                    Vector{{4.0, -2.0 * tau * std::sqrt(165.0) / 13.0}});
}

TrseProblem example3() {
  return TrseProblem(SymmetricOperator::diagonal(Vector{{27.0, 53.0}}), Vector{{-4.0, 9.0}});
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vector gaussian(std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& e : v) e = normal_(rng_);
    return v;
  }

  /// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
  /// sign of R's diagonal folded into Q).
  Matrix orthogonal(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    Matrix g(m, m);
    for (Eigen::Index j = 0; j < m; ++j) g.col(j) = gaussian(n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j)
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
  }

  /// Sorted eigenvalues in [lo, hi].
  Vector eigenvalues(std::size_t n, double lo, double hi) {
    Vector d(static_cast<Eigen::Index>(n));
    for (auto& e : d) e = uniform(lo, hi);
    std::sort(d.begin(), d.end());
    return d;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

SymmetricOperator random_operator(Sampler& s, const Vector& eigenvalues) {
  const Matrix q = s.orthogonal(static_cast<std::size_t>(eigenvalues.size()));
  const Matrix h = q * eigenvalues.asDiagonal() * q.transpose();
  return SymmetricOperator::dense(0.5 * (h + h.transpose()));
}

/// Random c orthogonal to the computed lambda_1 eigenvector with
/// ||(H - lambda_1 I)^+ c|| equal to `target`.
Vector range_vector(Sampler& s, const SymmetricOperator& op, double target) {
  const Spectrum& spec = op.spectrum();
  Vector coeff = s.gaussian(op.dim());
  coeff(0) = 0.0;
  Vector c = spec.eigenvectors * coeff;
  c -= spec.eigenvectors.col(0).dot(c) * spec.eigenvectors.col(0);
  const double r = pinv_apply(spec, -spec.lambda_min(), c).x.norm();
  return c * (target / r);
}

void expect(bool ok, InstanceKind kind, std::uint64_t seed) {
  if (!ok)
    throw SolverAnomaly("generated " + std::string(to_string(kind)) + " instance (seed " +
                        std::to_string(seed) + ") failed oracle verification");
}

}  // namespace

AnyProblem generate(InstanceKind kind, std::size_t n, std::uint64_t seed, double tau) {
  switch (kind) {
    case InstanceKind::Example1: return example1();
    case InstanceKind::Example2: return example2(tau);
    case InstanceKind::Example3: return example3();
    default: break;
  }
  const bool needs_two = kind == InstanceKind::Hard2 || kind == InstanceKind::Ill ||
                         kind == InstanceKind::Sphere;
  if (n < (needs_two ? 2u : 1u))
    throw InputError("dimension too small for " + std::string(to_string(kind)) + " instances");

  Sampler s(seed);
  switch (kind) {
    case InstanceKind::Easy: {
      SymmetricOperator op = random_operator(s, s.eigenvalues(n, -5.0, 5.0));
      const Spectrum& spec = op.spectrum();
      Vector coeff = s.gaussian(n);
      // Keep a visible component on the bottom eigenvector.
      if (std::abs(coeff(0)) < 0.1 * coeff.norm()) coeff(0) = coeff(0) < 0 ? -coeff.norm() : coeff.norm();
      Vector c = spec.eigenvectors * coeff * s.uniform(0.5, 3.0) / coeff.norm();
      TrsProblem p(std::move(op), std::move(c));
      expect(classify_case(p).kind == CaseKind::Easy, kind, seed);
      return p;
    }
    case InstanceKind::Hard2:
    case InstanceKind::Ill: {
      Vector d = s.eigenvalues(n, -5.0, 5.0);
      d(0) = std::min(d(0), d(1) - 0.5);
      if (d(0) >= 0.0) d(0) = -s.uniform(0.5, 2.0);
      SymmetricOperator op = random_operator(s, d);
      const double target = kind == InstanceKind::Ill ? 1.0 : s.uniform(0.2, 0.8);
      Vector c = range_vector(s, op, target);
      TrsProblem p(std::move(op), std::move(c));
      const CaseLabel label = classify_case(p);
      expect(label.kind == (kind == InstanceKind::Ill ? CaseKind::Ill : CaseKind::HardII), kind, seed);
      return p;
    }
    case InstanceKind::Convex: {
      SymmetricOperator op = random_operator(s, s.eigenvalues(n, 0.5, 5.0));
      const Spectrum& spec = op.spectrum();
      Vector c = s.gaussian(n);
      c *= s.uniform(0.2, 0.8) / pinv_apply(spec, 0.0, c).x.norm();
      TrsProblem p(std::move(op), std::move(c));
      const CaseLabel label = classify_case(p);
      expect(label.interior && p.op.spectrum().lambda_min() > 0.0, kind, seed);
      return p;
    }
    case InstanceKind::Scalar: {
      const double l = s.uniform(1.0, 5.0);
      Vector c = s.gaussian(n);
      return TrseProblem(SymmetricOperator::scaled_identity(n, l), std::move(c));
    }
    case InstanceKind::Sphere: {
      SymmetricOperator op = random_operator(s, s.eigenvalues(n, -5.0, 5.0));
      Vector c = s.gaussian(n) * s.uniform(0.5, 3.0);
      TrseProblem p(std::move(op), std::move(c));
      const Spectrum& spec = p.op.spectrum();
      expect(spec.lambda_max() - spec.lambda_min() > 1e-6, kind, seed);
      return p;
    }
    default: break;
  }
  throw InputError("unhandled instance kind");
}

}  // namespace trs
