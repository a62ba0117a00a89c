#pragma once

#include <string>
#include <vector>

#include "qbnet/types.hpp"

namespace qbnet {

// 17-significant-digit decimal formatting; round-trips doubles exactly.
std::string format_double(double v);

// CSV with one header row/column of state labels. Matrix entries are written
// with format_double, so a re-parse is bit-identical.
void write_matrix_csv(const std::string& path, const RealMatrix& m,
                      const std::vector<std::string>& labels);

struct LabeledMatrix {
  std::vector<std::string> labels;
  RealMatrix matrix;
};

LabeledMatrix read_matrix_csv(const std::string& path);

// Whitespace-separated complex entries, one matrix row per line. Accepts
// forms like "1.5", "2i", "0.5+0.25i", "1e-3-2e-4i".
ComplexMatrix read_complex_matrix(const std::string& path);

Complex parse_complex(const std::string& token);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace qbnet
