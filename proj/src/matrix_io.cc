#include "rydsim/matrix_io.h"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

double parse_real(const std::string &s) {
  if (s.empty() || s == "+" || s == "-") {
    if (s.empty()) {
      throw std::invalid_argument("empty number");
    }
    return s == "-" ? -1.0 : 1.0;
  }
  const char *begin = s.c_str();
  char *end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  return v;
}

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokens_of(const std::string &line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i >= line.size()) {
      break;
    }
    Token t{"", static_cast<int>(i) + 1};
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      t.text += line[i++];
    }
    out.push_back(std::move(t));
  }
  return out;
}

Eigen::MatrixXcd build(const std::vector<std::vector<std::complex<double>>> &rows, int first_line) {
  if (rows.empty()) {
    throw ParseError(first_line, 1, "matrix has no rows");
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

std::complex<double> parse_complex(const std::string &token) {
  if (token.empty()) {
    throw std::invalid_argument("empty entry");
  }
  if (token.back() != 'i') {
    return {parse_real(token), 0.0};
  }
  const std::string body = token.substr(0, token.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    return {0.0, parse_real(body.empty() ? "+" : body)};
  }
  return {parse_real(body.substr(0, split)), parse_real(body.substr(split))};
}

std::string matrix_to_text(const Eigen::MatrixXcd &m) {
  std::string out;
  char buf[96];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const std::complex<double> z = m(i, j);
      double im = z.imag();
      std::snprintf(buf, sizeof buf, "%.17g%s%.17gi", z.real(), std::signbit(im) ? "-" : "+", std::abs(im));
      if (j) {
        out += ' ';
      }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<Eigen::MatrixXcd> matrices_from_text(const std::string &text) {
  std::vector<Eigen::MatrixXcd> out;
  std::vector<std::vector<std::complex<double>>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int first_line = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    if (line.compare(first, 3, "---") == 0) {
      out.push_back(build(rows, first_line));
      rows.clear();
      first_line = line_no + 1;
      continue;
    }
    if (rows.empty()) {
      first_line = line_no;
    }
    std::vector<std::complex<double>> row;
    for (const Token &t : tokens_of(line)) {
      try {
        row.push_back(parse_complex(t.text));
      } catch (const std::invalid_argument &) {
        throw ParseError(line_no, t.column, "cannot read complex entry '" + t.text + "'");
      }
    }
    if (!rows.empty() && row.size() != rows[0].size()) {
      throw ParseError(
          line_no, 1, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(rows[0].size()));
    }
    rows.push_back(std::move(row));
  }
  if (!rows.empty()) {
    out.push_back(build(rows, first_line));
  }
  if (out.empty()) {
    throw ParseError(line_no + 1, 1, "no matrix found");
  }
  return out;
}

Eigen::MatrixXcd matrix_from_text(const std::string &text) {
  auto all = matrices_from_text(text);
  if (all.size() != 1) {
    throw ParseError(1, 1, "expected exactly one matrix, found " + std::to_string(all.size()));
  }
  return all[0];
}

}  // namespace rydsim
