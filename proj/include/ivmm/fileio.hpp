#pragma once

#include <string>

namespace ivmm {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Whole file as bytes. Throws Error when the file cannot be opened.
std::string read_file(const std::string &path);

/// Writes to path via a temp file plus rename, so readers never observe a
/// half-written file. Throws Error when the directory is not writable.
void write_file_atomic(const std::string &path, const std::string &content);

}  // namespace ivmm
