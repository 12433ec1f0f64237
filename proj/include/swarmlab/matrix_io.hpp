#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include "json.hpp"
#include <string>

namespace swarmlab {

// Dense square matrices as JSON arrays of rows, or as whitespace-delimited text
// with one row per line.  Parsers throw SchemaError on ragged or non-numeric input.
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& field = "matrix");
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);

Eigen::MatrixXd matrix_from_text(std::istream& in);
void matrix_to_text(std::ostream& out, const Eigen::MatrixXd& m);

// Dispatches on content: a leading '[' or '{' is JSON (a bare array or an
// object with a "matrix" key), anything else is text.
Eigen::MatrixXd load_matrix_file(const std::string& path);

}  // namespace swarmlab
