// Reference global solver built on the dense eigendecomposition and the
// secular equation. It shares no code with the projected-gradient solvers and
// is what every iterative result is checked against.
#pragma once

#include "trs/problem.hpp"

#include <string_view>
#include <vector>

namespace trs {

enum class CaseKind { Easy, HardI, HardII, Ill };

std::string_view to_string(CaseKind k);

struct CaseLabel {
  CaseKind kind = CaseKind::Easy;
  /// Global solution strictly inside the ball (ball problems only).
  bool interior = false;
};

struct OracleSettings {
  /// Eigenvalues within this relative distance are one pole of phi.
  double cluster_rel_tol = 1e-10;
  /// c is "orthogonal" to an eigenspace when its component there is at most
  /// this fraction of ||c||; also the null-mode drop tolerance.
  double hard_case_tol = kDefaultDropTol;
};

/// phi(lambda) = sum_j w_j / (d_j + lambda)^2 - 1 over distinct eigenvalues
/// d_j with weights w_j = ||P_j c||^2.
class SecularFunction {
 public:
  struct Group {
    double eigenvalue = 0.0;
    double weight = 0.0;
    /// Index of the first eigenvector of this group in the spectrum.
    Eigen::Index first = 0;
    Eigen::Index size = 0;
    /// Component of c on the eigenspace is non-negligible (a true pole).
    bool active = false;
  };

  SecularFunction(const Spectrum& spectrum, const Vector& c, OracleSettings settings = {});

  /// +infinity exactly at an active pole.
  double operator()(double lambda) const;
  double derivative(double lambda) const;

  const std::vector<Group>& groups() const { return groups_; }
  const Spectrum& spectrum() const { return *spectrum_; }
  double c_norm() const { return c_norm_; }

  /// x(lambda) = -(H + lambda I)^+ c, null modes dropped.
  Vector point(double lambda) const;

 private:
  const Spectrum* spectrum_;
  Vector c_;
  Vector projections_;
  double c_norm_ = 0.0;
  OracleSettings settings_;
  std::vector<Group> groups_;
};

struct ReferenceSolution {
  Vector x;
  KktPoint kkt;
  double objective = 0.0;
  /// Ball problems only; sphere solutions report Easy/HardI/HardII by the
  /// same multiplier rules with interior = false.
  CaseLabel label;
  /// The multiplier came from a root of phi (rather than a hard-case or
  /// interior branch); secular_value is phi at that root.
  bool root_branch = false;
  double secular_value = 0.0;
  /// lambda >= -lambda_1 - tol and stationarity <= tol (1 + ||c||).
  bool certified = false;
};

/// Global minimizer of q over the unit ball.
ReferenceSolution solve_trs_reference(const TrsProblem& p, double tol = 1e-12,
                                      OracleSettings settings = {});

/// Global minimizer of q over the unit sphere.
ReferenceSolution solve_trse_reference(const TrseProblem& p, double tol = 1e-12,
                                       OracleSettings settings = {});

/// Dimension cap for exhaustive KKT enumeration.
inline constexpr std::size_t kEnumerationLimit = 6;

/// All KKT points: the interior candidate (ball), up to two roots of phi per
/// interval between consecutive poles plus one on each outer interval, and
/// one representative per completion sign of each hard-case family.
/// Throws CapabilityError above kEnumerationLimit.
std::vector<KktPoint> enumerate_kkt(const AnyProblem& p, double tol = 1e-8,
                                    OracleSettings settings = {});

CaseLabel classify_case(const TrsProblem& p, double tol = 1e-8, OracleSettings settings = {});

/// KKT residuals within tolerance and lambda >= -lambda_1 - tol (ball:
/// also lambda >= -tol). Residual thresholds are scaled by the data:
/// stationarity tol (1 + ||H|| + ||c||), feasibility tol, complementarity
/// tol (1 + |lambda|).
bool check_global(const AnyProblem& p, const Vector& x, double lambda, double tol);

enum class StationaryKind { Global, LocalNonGlobal, Saddle };

std::string_view to_string(StationaryKind k);

/// Second-order screen of a KKT point: Global by the multiplier test,
/// LocalNonGlobal when the Hessian of the Lagrangian is positive definite on
/// the tangent space (margin tol (1 + ||H||)), otherwise Saddle.
StationaryKind classify_stationary(const AnyProblem& p, const KktPoint& point, double tol = 1e-8);

}  // namespace trs
