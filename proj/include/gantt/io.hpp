#pragma once

#include <string>

namespace gantt {

/// Whole-file helpers; both throw Error(kIoError).
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace gantt
