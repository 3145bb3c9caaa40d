#pragma once

#include <stdexcept>
#include <string>

namespace sqlp {

class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Syntax/validation failure with a source position (1-based).
class parse_error : public error {
public:
  parse_error(const std::string& msg, int line, int column)
      : error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

} // namespace sqlp
