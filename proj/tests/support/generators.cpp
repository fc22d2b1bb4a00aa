#include "generators.hpp"

#include "ctms/syntax.hpp"

namespace ctms::testing {

std::vector<Cell> grid() {
  std::vector<Cell> out;
  for (long long L = 0; L <= 3; ++L)
    for (long long R = 0; R <= 3; ++R)
      for (long long Z = -3; Z <= 3; ++Z) out.push_back({L, R, Z});
  return out;
}

namespace {

long long pick(std::mt19937_64& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

std::string idx(long long z) { return z >= 0 ? "i + " + std::to_string(z) : "i - " + std::to_string(-z); }

std::string body(std::mt19937_64& rng, bool& uses_n) {
  long long z = pick(rng, -3, 3);
  switch (pick(rng, 0, 3)) {
    case 0: return "!a[" + idx(z) + "]";
    case 1: return "!a[" + idx(z) + "] := 0";
    case 2: uses_n = true; return "!n := !n + !a[" + idx(z) + "]";
    default: return "(let x = !a[" + idx(z) + "] in !a[" + idx(pick(rng, -3, 3)) + "] := x)";
  }
}

std::string stmt(std::mt19937_64& rng, bool& uses_n, int depth) {
  long long k = depth > 0 ? pick(rng, 0, 5) : 0;
  if (k == 4) {
    auto t = stmt(rng, uses_n, depth - 1);
    auto f = stmt(rng, uses_n, depth - 1);
    return "(if s < " + std::to_string(pick(rng, 0, 6)) + " then " + t + " else " + f + ")";
  }
  if (k == 5) return "(" + stmt(rng, uses_n, depth - 1) + "; " + stmt(rng, uses_n, depth - 1) + ")";
  return "for i in [" + std::to_string(pick(rng, 0, 3)) + " : s - " + std::to_string(pick(rng, 0, 3)) + "] do " +
         body(rng, uses_n);
}

}  // namespace

std::string random_program_text(std::mt19937_64& rng) {
  bool uses_n = false;
  std::string b = stmt(rng, uses_n, 2);
  std::string pre = uses_n ? "array(a, s) * n |-> _" : "array(a, s)";
  return "requires " + pre + ";\n" + b + "\n";
}

std::vector<HeapLoc> small_universe() {
  std::vector<HeapLoc> u;
  for (int k = 0; k < 4; ++k) u.push_back({ObjId{"a"}, k});
  for (int k = 0; k < 2; ++k) u.push_back({ObjId{"b"}, k});
  return u;
}

PhysHeap random_heap(std::mt19937_64& rng, const std::vector<HeapLoc>& universe, std::size_t max_cells) {
  PhysHeap h;
  for (const auto& l : universe)
    if (h.size() < max_cells && pick(rng, 0, 1)) h[l] = int_value(pick(rng, 0, 1));
  return h;
}

AssertionPtr random_assertion(std::mt19937_64& rng, const std::vector<HeapLoc>& universe, int depth) {
  auto loc = [&] { return lit(Value{universe[pick(rng, 0, (long long)universe.size() - 1)]}); };
  long long k = depth > 0 ? pick(rng, 0, 11) : pick(rng, 0, 5);
  switch (k) {
    case 0: return a_pts(loc(), lit_int(pick(rng, 0, 1)));
    case 1:
    case 2: return a_pts_any(loc());
    case 3: return a_true();
    case 4: return pick(rng, 0, 3) ? a_pts_any(loc()) : a_false();
    case 5: return a_pure(lit(Value{pick(rng, 0, 4) > 0}));
    case 6:
    case 7: return a_star(random_assertion(rng, universe, depth - 1), random_assertion(rng, universe, depth - 1));
    case 8: return a_and(random_assertion(rng, universe, depth - 1), random_assertion(rng, universe, depth - 1));
    case 9: return a_or(random_assertion(rng, universe, depth - 1), random_assertion(rng, universe, depth - 1));
    case 10: return a_box(random_assertion(rng, universe, depth - 1));
    default: return a_not(random_assertion(rng, universe, depth - 1));
  }
}

}  // namespace ctms::testing
