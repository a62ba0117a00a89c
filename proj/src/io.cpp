#include "qbnet/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qbnet {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw ValidationError("failed writing " + path);
}

void write_matrix_csv(const std::string& path, const RealMatrix& m,
                      const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != m.rows() || m.rows() != m.cols()) {
    throw ValidationError("label count does not match matrix shape");
  }
  std::ostringstream out;
  out << "state";
  for (const auto& label : labels) out << "," << label;
  out << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << labels[i];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << "," << format_double(m(i, j));
    out << "\n";
  }
  write_text_file(path, out.str());
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

LabeledMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw ValidationError(path + ": empty file");
  std::vector<std::string> cols = split(header, ',');
  if (cols.size() < 2) throw ValidationError(path + ": malformed header");

  LabeledMatrix out;
  out.labels.assign(cols.begin() + 1, cols.end());
  const auto dim = static_cast<Eigen::Index>(out.labels.size());
  out.matrix.resize(dim, dim);

  std::string line;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= dim) throw ValidationError(path + ": more rows than header columns");
    std::vector<std::string> parts = split(line, ',');
    if (static_cast<Eigen::Index>(parts.size()) != dim + 1) {
      throw ValidationError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(parts.size() - 1) + " entries, want " +
                            std::to_string(dim));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      size_t used = 0;
      out.matrix(row, j) = std::stod(parts[j + 1], &used);
      if (used != parts[j + 1].size()) {
        throw ValidationError(path + ": bad number \"" + parts[j + 1] + "\"");
      }
    }
    ++row;
  }
  if (row != dim) throw ValidationError(path + ": fewer rows than header columns");
  return out;
}

Complex parse_complex(const std::string& token) {
  if (token.empty()) throw ValidationError("empty complex literal");
  // Split into a real part and an optional trailing imaginary part
  // ending in i/j (sign position found by scanning past exponents).
  const bool imag_only = token.back() == 'i' || token.back() == 'j';
  std::string body = imag_only ? token.substr(0, token.size() - 1) : token;
  size_t break_at = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      break_at = k;
      break;
    }
  }
  try {
    size_t used = 0;
    if (!imag_only) {
      const double re = std::stod(body, &used);
      if (used != body.size()) throw ValidationError("");
      return Complex(re, 0.0);
    }
    if (break_at == std::string::npos) {
      std::string imag = body;
      if (imag.empty() || imag == "+" || imag == "-") imag += "1";
      const double im = std::stod(imag, &used);
      if (used != imag.size()) throw ValidationError("");
      return Complex(0.0, im);
    }
    const double re = std::stod(body.substr(0, break_at), &used);
    if (used != break_at) throw ValidationError("");
    std::string imag = body.substr(break_at);
    if (imag == "+" || imag == "-") imag += "1";
    const double im = std::stod(imag, &used);
    if (used != imag.size()) throw ValidationError("");
    return Complex(re, im);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse complex literal \"" + token + "\"");
  }
}

ComplexMatrix read_complex_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::istringstream tokens(line);
    std::vector<Complex> row;
    std::string token;
    while (tokens >> token) row.push_back(parse_complex(token));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": no matrix data");
  const size_t cols = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw ValidationError(path + ": ragged rows");
  }
  ComplexMatrix m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace qbnet
