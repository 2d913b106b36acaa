// Text problem files.
//
//   # comment lines start with '#'
//   TRS <n> BALL|SPHERE
//   DENSE                      or   SPARSE <nnz>
//   <n rows of n reals>             <nnz lines: row col value, row >= col>
//   C
//   <n reals>
//
// Reals are written with 17 significant digits so parse(serialize(p))
// reproduces every stored double exactly.
#pragma once

#include "trs/problem.hpp"

#include <string>
#include <string_view>

namespace trs {

AnyProblem parse_problem(std::string_view text);
std::string serialize_problem(const AnyProblem& p);

AnyProblem read_problem_file(const std::string& path);
void write_problem_file(const std::string& path, const AnyProblem& p);

/// Shortest round-trippable rendering ("%.17g").
std::string format_real(double v);

}  // namespace trs
