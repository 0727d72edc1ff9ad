#pragma once

#include <string>
#include <vector>

namespace tropsvm {

enum class ClassLabel { P, Q };

inline char label_char(ClassLabel l) { return l == ClassLabel::P ? 'P' : 'Q'; }

inline ClassLabel other_label(ClassLabel l) {
  return l == ClassLabel::P ? ClassLabel::Q : ClassLabel::P;
}

// One 'P' or 'Q' per line.
std::vector<ClassLabel> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<ClassLabel>& labels);

}  // namespace tropsvm
