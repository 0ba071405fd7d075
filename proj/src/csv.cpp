#include "adbench/csv.hpp"

#include <fstream>

#include "adbench/core.hpp"

namespace adbench::csv {

bool Reader::next(Record& out) {
  out.clear();
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool any = false;
  auto* buf = in_.rdbuf();
  int c;
  while (true) {
    c = buf->sbumpc();
    if (c == std::char_traits<char>::eof()) break;
    if (!any) record_line_ = line_;
    any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (buf->sgetc() == '"') {
          buf->sbumpc();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (ch == sep_) {
      out.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\r') {
      // swallowed; the following '\n' terminates the record
    } else if (ch == '\n') {
      ++line_;
      if (out.empty() && field.empty() && !field_was_quoted) {
        any = false;  // blank line
        continue;
      }
      out.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) {
    throw ParseError("unterminated quoted field starting on line " + std::to_string(record_line_));
  }
  if (!any) return false;
  out.push_back(std::move(field));
  return true;
}

std::vector<Record> read_all(std::istream& in) {
  Reader reader(in);
  std::vector<Record> rows;
  Record rec;
  while (reader.next(rec)) rows.push_back(rec);
  return rows;
}

std::vector<Record> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_all(in);
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_record(std::ostream& out, const Record& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace adbench::csv
