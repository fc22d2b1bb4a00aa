#pragma once

#include "ctms/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctms {

// c + Σ coef[x]·x
struct Lin {
  std::map<std::string, Int> coef;
  Int c = 0;

  Int at(const std::string& x) const {
    auto it = coef.find(x);
    return it == coef.end() ? Int(0) : it->second;
  }
  bool only(const std::set<std::string>& vars) const;
};

Lin operator+(const Lin& a, const Lin& b);
Lin operator-(const Lin& a, const Lin& b);

std::optional<Lin> linearize(const ExprPtr& e);

// comparison atoms as `lin >= 0`; equality yields two atoms
std::optional<std::vector<Lin>> linear_atoms(const ExprPtr& cmp);

// splits && chains of a pure formula (assertion-level And and expression-level &&)
void conjuncts(const AssertionPtr& a, std::vector<ExprPtr>& out, std::vector<AssertionPtr>& rest);

ExprPtr to_expr(const Lin& l);

// guard lo <= i && i <= s + c, read off as (lo, c)
struct IndexGuard {
  Int lo;
  Int c;
};
std::optional<IndexGuard> read_index_guard(const AssertionPtr& g, const std::string& i, const std::string& s);

// How an access atom varies along the guard range: Low atoms only depend on i
// and grow with it, High atoms depend on s - i only, Constant atoms on neither.
enum class AccessClass { Unsupported, Low, High, Constant };
AccessClass access_class(const ExprPtr& atom, const std::string& i, const std::string& s);

}  // namespace ctms
