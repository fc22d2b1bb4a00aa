#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace ctms {

using Int = boost::multiprecision::cpp_int;

struct Unit {
  bool operator==(const Unit&) const { return true; }
  bool operator<(const Unit&) const { return false; }
};

struct ObjId {
  std::string name;
  bool operator==(const ObjId& o) const { return name == o.name; }
  bool operator<(const ObjId& o) const { return name < o.name; }
};

// (object, index); ordered by object first
struct HeapLoc {
  ObjId object;
  Int index;
  bool operator==(const HeapLoc& o) const { return object == o.object && index == o.index; }
  bool operator<(const HeapLoc& o) const {
    if (object.name != o.object.name) return object.name < o.object.name;
    return index < o.index;
  }
};

using Value = std::variant<Int, bool, HeapLoc, ObjId, Unit>;

inline Value int_value(long long v) { return Value{Int(v)}; }
inline Value unit_value() { return Value{Unit{}}; }

inline const Int* as_int(const Value& v) { return std::get_if<Int>(&v); }
inline const bool* as_bool(const Value& v) { return std::get_if<bool>(&v); }
inline const HeapLoc* as_loc(const Value& v) { return std::get_if<HeapLoc>(&v); }
inline const ObjId* as_obj(const Value& v) { return std::get_if<ObjId>(&v); }

// surface syntax: 3, true, loc(@a, 2), @a, ()
std::string to_string(const Value& v);
std::string to_string(const HeapLoc& l);  // (a,2)
std::string to_string(const Int& i);

std::optional<long long> to_small(const Int& i);

}  // namespace ctms
