#include "swarmlab/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "swarmlab/errors.hpp"

namespace swarmlab {

namespace {

Eigen::MatrixXd from_rows(const std::vector<std::vector<double>>& rows, const std::string& field) {
  const auto n = rows.size();
  if (n == 0) throw SchemaError(field, "matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw SchemaError(field + "/" + std::to_string(i),
                        "row has " + std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(n));
    }
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& r = j[i];
    const std::string rf = field + "/" + std::to_string(i);
    if (!r.is_array()) throw SchemaError(rf, "expected an array of numbers");
    std::vector<double> row;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (!r[k].is_number()) throw SchemaError(rf + "/" + std::to_string(k), "expected a number");
      row.push_back(r[k].get<double>());
    }
    rows.push_back(std::move(row));
  }
  return from_rows(rows, field);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix_from_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw SchemaError("line " + std::to_string(lineno), "not a number: '" + tok + "'");
      }
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return from_rows(rows, "matrix");
}

void matrix_to_text(std::ostream& out, const Eigen::MatrixXd& m) {
  const auto flags = out.flags();
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
}

Eigen::MatrixXd load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open matrix file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(path, std::string("malformed JSON: ") + e.what());
    }
    if (j.is_object()) {
      if (!j.contains("matrix")) throw SchemaError("matrix", "missing key");
      return matrix_from_json(j["matrix"]);
    }
    return matrix_from_json(j);
  }
  std::istringstream tin(text);
  return matrix_from_text(tin);
}

}  // namespace swarmlab
