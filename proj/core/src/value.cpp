#include "ctms/value.hpp"

namespace ctms {

std::string to_string(const Int& i) { return i.str(); }

std::string to_string(const HeapLoc& l) {
  return "(" + l.object.name + "," + l.index.str() + ")";
}

std::string to_string(const Value& v) {
  struct V {
    std::string operator()(const Int& i) const { return i.str(); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const HeapLoc& l) const {
      return "loc(@" + l.object.name + ", " + l.index.str() + ")";
    }
    std::string operator()(const ObjId& o) const { return "@" + o.name; }
    std::string operator()(const Unit&) const { return "()"; }
  };
  return std::visit(V{}, v);
}

std::optional<long long> to_small(const Int& i) {
  static const Int lo = std::numeric_limits<long long>::min();
  static const Int hi = std::numeric_limits<long long>::max();
  if (i < lo || i > hi) return std::nullopt;
  return i.convert_to<long long>();
}

}  // namespace ctms
