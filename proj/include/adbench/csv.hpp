#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace adbench::csv {

using Record = std::vector<std::string>;

/// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
/// line breaks, CRLF or LF terminators. Blank lines are skipped.
class Reader {
 public:
  explicit Reader(std::istream& in, char sep = ',') : in_(in), sep_(sep) {}

  /// Reads the next record; returns false at end of input.
  bool next(Record& out);
  /// 1-based line on which the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::vector<Record> read_all(std::istream& in);
std::vector<Record> read_file(const std::string& path);

std::string escape(std::string_view field);
void write_record(std::ostream& out, const Record& fields);

}  // namespace adbench::csv
