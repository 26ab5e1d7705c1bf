#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "test_support.hpp"

#ifndef HAZOP_FIXTURE_DIR
#error "HAZOP_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace hazop::testing {

TempDir::TempDir() {
  std::random_device device;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = std::filesystem::temp_directory_path() /
                     ("hazop-test-" + std::to_string(device()) + std::to_string(attempt));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ignored;
  std::filesystem::remove_all(path_, ignored);
}

std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(HAZOP_FIXTURE_DIR) / name;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace hazop::testing
