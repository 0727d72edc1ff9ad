#include "tropsvm/labels.hpp"

#include <fstream>
#include <stdexcept>

namespace tropsvm {

std::vector<ClassLabel> read_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<ClassLabel> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line == "P") {
      out.push_back(ClassLabel::P);
    } else if (line == "Q") {
      out.push_back(ClassLabel::Q);
    } else {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": labels must be 'P' or 'Q', got '" + line + "'");
    }
  }
  return out;
}

void write_labels(const std::string& path, const std::vector<ClassLabel>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (ClassLabel l : labels) out << label_char(l) << '\n';
}

}  // namespace tropsvm
