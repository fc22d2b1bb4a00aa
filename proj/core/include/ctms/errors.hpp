#pragma once

#include "ctms/ast.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ctms {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, std::vector<std::string> expected, const std::string& msg);
  int line;
  int col;
  std::vector<std::string> expected;
};

class UnboundVariable : public std::runtime_error {
 public:
  UnboundVariable(std::string name, SrcPos pos);
  std::string name;
  SrcPos pos;
};

class UnsupportedAssertion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingInvariant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctms
