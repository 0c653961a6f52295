#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rydsim {

/// Plain-text complex matrices: one row per line, entries separated by
/// whitespace, each entry written as "a+bi" / "a-bi" (a real "a" or a pure
/// imaginary "bi" is also accepted on input). Blank lines and lines starting
/// with '#' are skipped; a line "---" separates matrices in a multi-matrix file.
std::string matrix_to_text(const Eigen::MatrixXcd &m);

/// Throws ParseError (line, column) on malformed tokens or ragged rows.
Eigen::MatrixXcd matrix_from_text(const std::string &text);

/// Splits a multi-matrix file on "---" lines; line numbers in errors refer to the whole file.
std::vector<Eigen::MatrixXcd> matrices_from_text(const std::string &text);

/// Parses one "a+bi" token; throws std::invalid_argument on failure.
std::complex<double> parse_complex(const std::string &token);

}  // namespace rydsim
