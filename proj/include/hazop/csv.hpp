#pragma once

// RFC 4180 output: CRLF line ends, fields quoted when they hold a comma,
// quote, CR or LF, embedded quotes doubled.

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace hazop {

std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  void row(std::initializer_list<std::string> fields);
  void row(const std::vector<std::string>& fields);

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

}  // namespace hazop
