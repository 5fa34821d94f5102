#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef CASTBRIDGE_FIXTURE_DIR
#error "CASTBRIDGE_FIXTURE_DIR must be defined by the build"
#endif

namespace castbridge::testing {

inline std::string fixture_path(const std::string& rel) { return std::string(CASTBRIDGE_FIXTURE_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture(const std::string& rel) { return read_text(fixture_path(rel)); }

}  // namespace castbridge::testing
