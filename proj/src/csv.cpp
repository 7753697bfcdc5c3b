#include <istream>

#include "kwnet/error.hpp"
#include "kwnet/export.hpp"

namespace kwnet {

std::string csv_quote(std::string_view field) {
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CsvReader::CsvReader(std::istream& in) : in_(in) {}

bool CsvReader::next(std::vector<std::string>& fields) {
  using traits = std::istream::traits_type;
  if (!started_) {
    started_ = true;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(in_.gcount() == 3 && bom[1] == '\xBB' && bom[2] == '\xBF')) {
        throw Error("malformed byte order mark");
      }
    }
  }
  if (in_.peek() == traits::eof()) return false;

  fields.clear();
  record_line_ = line_;
  std::string field;
  bool quoted = false;      // inside a quoted section
  bool was_quoted = false;  // current field began with a quote
  for (;;) {
    const int ch = in_.get();
    if (ch == traits::eof()) {
      if (quoted) throw Error("unterminated quoted field starting on line " + std::to_string(record_line_));
      fields.push_back(std::move(field));
      return true;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\n' || (c == '\r' && in_.peek() == '\n')) {
      if (c == '\r') in_.get();
      ++line_;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
}

}  // namespace kwnet
