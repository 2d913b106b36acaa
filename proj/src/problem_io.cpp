#include "trs/problem_io.hpp"

#include "trs/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace trs {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::size_t number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string tok; words >> tok;) line.tokens.push_back(tok);
    if (line.tokens.empty() || line.tokens.front().front() == '#') continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

double parse_real(const std::string& tok, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError(line, "expected a real number, got '" + tok + "'");
  return v;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "expected a non-negative integer, got '" + tok + "'");
  return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

AnyProblem parse_problem(std::string_view text) {
  const auto lines = tokenize(text);
  std::size_t at = 0;
  auto next = [&](const char* what) -> const Line& {
    if (at >= lines.size()) {
      const std::size_t last = lines.empty() ? 0 : lines.back().number;
      throw ParseError(last, std::string("unexpected end of input, expected ") + what);
    }
    return lines[at++];
  };

  const Line& header = next("header");
  if (header.tokens.size() != 3 || header.tokens[0] != "TRS")
    throw ParseError(header.number, "header must be 'TRS <n> BALL|SPHERE'");
  const std::size_t n = parse_index(header.tokens[1], header.number);
  if (n == 0) throw ParseError(header.number, "dimension must be positive");
  Constraint constraint;
  if (header.tokens[2] == "BALL") {
    constraint = Constraint::Ball;
  } else if (header.tokens[2] == "SPHERE") {
    constraint = Constraint::Sphere;
  } else {
    throw ParseError(header.number, "constraint must be BALL or SPHERE");
  }

  const Line& kind = next("DENSE or SPARSE");
  std::optional<SymmetricOperator> op;
  if (kind.tokens[0] == "DENSE" && kind.tokens.size() == 1) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const Line& row = next("matrix row");
      if (row.tokens.size() != n)
        throw ParseError(row.number, "matrix row has " + std::to_string(row.tokens.size()) +
                                         " entries, expected " + std::to_string(n));
      for (std::size_t j = 0; j < n; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            parse_real(row.tokens[j], row.number);
    }
    try {
      op = SymmetricOperator::dense(m);
    } catch (const InputError& e) {
      throw ParseError(kind.number, e.what());
    }
  } else if (kind.tokens[0] == "SPARSE" && kind.tokens.size() == 2) {
    const std::size_t nnz = parse_index(kind.tokens[1], kind.number);
    std::vector<Triplet> lower;
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t k = 0; k < nnz; ++k) {
      const Line& t = next("sparse triplet");
      if (t.tokens.size() != 3) throw ParseError(t.number, "triplet must be '<row> <col> <value>'");
      Triplet tr{parse_index(t.tokens[0], t.number), parse_index(t.tokens[1], t.number),
                 parse_real(t.tokens[2], t.number)};
      if (tr.row >= n || tr.col >= n) throw ParseError(t.number, "triplet index out of range");
      if (tr.row < tr.col) throw ParseError(t.number, "triplet must satisfy row >= col");
      for (const auto& s : seen)
        if (s.first == tr.row && s.second == tr.col)
          throw ParseError(t.number, "duplicate triplet");
      seen.emplace_back(tr.row, tr.col);
      lower.push_back(tr);
    }
    op = SymmetricOperator::sparse(n, std::move(lower));
  } else {
    throw ParseError(kind.number, "expected 'DENSE' or 'SPARSE <nnz>'");
  }

  const Line& c_line = next("C");
  if (c_line.tokens[0] != "C") throw ParseError(c_line.number, "expected 'C'");
  std::vector<std::pair<std::string, std::size_t>> values;
  for (std::size_t k = 1; k < c_line.tokens.size(); ++k)
    values.emplace_back(c_line.tokens[k], c_line.number);
  while (at < lines.size())
    for (const auto& tok : lines[at++].tokens) values.emplace_back(tok, lines[at - 1].number);
  if (values.size() != n)
    throw ParseError(values.empty() ? c_line.number : values.back().second,
                     "vector C has " + std::to_string(values.size()) + " entries, expected " +
                         std::to_string(n));
  Vector c(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    c(static_cast<Eigen::Index>(i)) = parse_real(values[i].first, values[i].second);

  if (constraint == Constraint::Ball) return TrsProblem(std::move(*op), std::move(c));
  return TrseProblem(std::move(*op), std::move(c));
}

std::string serialize_problem(const AnyProblem& p) {
  const QuadraticData& d = data_of(p);
  const std::size_t n = d.dim();
  std::ostringstream out;
  out << "TRS " << n << ' ' << to_string(constraint_of(p)) << '\n';
  if (d.op.is_sparse()) {
    const auto lower = d.op.lower_triplets();
    out << "SPARSE " << lower.size() << '\n';
    for (const auto& t : lower) out << t.row << ' ' << t.col << ' ' << format_real(t.value) << '\n';
  } else {
    out << "DENSE\n";
    const Matrix m = d.op.to_dense();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << (j ? " " : "") << format_real(m(i, j));
      out << '\n';
    }
  }
  out << "C\n";
  for (Eigen::Index i = 0; i < d.c.size(); ++i) out << (i ? " " : "") << format_real(d.c(i));
  out << '\n';
  return out.str();
}

AnyProblem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

void write_problem_file(const std::string& path, const AnyProblem& p) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << serialize_problem(p);
}

}  // namespace trs
