// Instance generators: the worked examples and random instances of each
// case. Random instances are built from a Haar-random orthogonal basis and
// checked against the oracle's classification before being returned.
#pragma once

#include "trs/problem.hpp"

#include <cstdint>
#include <string_view>

namespace trs {

enum class InstanceKind {
  Example1,  // ball, easy case with a degenerate saddle
  Example2,  // ball, parameterised by tau; near-tie between global and local
  Example3,  // sphere, has a local non-global minimizer
  Easy,
  Hard2,
  Ill,
  Convex,    // H positive definite, interior solution
  Scalar,    // sphere, H = L I
  Sphere,    // sphere, random non-scalar H
};

InstanceKind parse_instance_kind(std::string_view name);
std::string_view to_string(InstanceKind k);

/// H = diag(-13, 13), c = (-250/169, 3456/169).
TrsProblem example1();
/// H = diag(13, -13 + 2 tau), c = (4, -2 tau sqrt(165) / 13); the additive
/// constant tau * 165 / 169 of the original objective is dropped.
TrsProblem example2(double tau);
/// H = diag(27, 53), c = (-4, 9), sphere.
TrseProblem example3();

/// `n` is ignored for the example kinds; `tau` only affects Example2.
/// Throws InputError for n < 1 (n < 2 for Hard2 / Ill / Sphere) and
/// SolverAnomaly if the oracle disagrees with the requested case.
AnyProblem generate(InstanceKind kind, std::size_t n, std::uint64_t seed, double tau = 0.0);

}  // namespace trs
