#pragma once

#include <linf/linf.hpp>

namespace fx {

using namespace linf;

// x -> y, contractible
inline AlgebraPtr F1() {
  return AlgebraBuilder(2).gen("x", 0, 1).gen("y", 1, 1).d("x", {{"y", 1}}).build();
}

// e, u in degree 0, c in degree 1; du = c, Q(e.e) = c
inline AlgebraBuilder F3_builder() {
  return AlgebraBuilder(3)
      .gen("e", 0, 1)
      .gen("u", 0, 2)
      .gen("c", 1, 2)
      .d("u", {{"c", 1}})
      .bracket({"e", "e"}, {{"c", 1}});
}
inline AlgebraPtr F3() { return F3_builder().build(); }

// F3 without u: the quadratic term cannot be cancelled
inline AlgebraPtr F3obs() {
  return AlgebraBuilder(3).gen("e", 0, 1).gen("c", 1, 2).bracket({"e", "e"}, {{"c", 1}}).build();
}

// F3 plus a closed degree-0 generator of weight 2
inline AlgebraPtr F3torsor() { return F3_builder().gen("w", 0, 2).build(); }

// F3 with a degree -1 generator b, db = e; carries a nonconstant path from 0 to e - u/2
inline AlgebraPtr F3g() {
  return AlgebraBuilder(3)
      .gen("e", 0, 1)
      .gen("b", -1, 1)
      .gen("u", 0, 2)
      .gen("c", 1, 2)
      .d("b", {{"e", 1}})
      .d("u", {{"c", 1}})
      .bracket({"e", "e"}, {{"c", 1}})
      .bracket({"e", "b"}, {{"u", -1}})
      .build();
}

// bound 4, with a nonzero ternary bracket
inline AlgebraBuilder G4_builder(const Scalar& a = 1, const Scalar& b = 2) {
  return AlgebraBuilder(4)
      .gen("e", 0, 1)
      .gen("f", 0, 1)
      .gen("u", 0, 2)
      .gen("h", 1, 2)
      .gen("k", 1, 3)
      .gen("m", 2, 3)
      .d("u", {{"h", 1}})
      .d("k", {{"m", 1}})
      .bracket({"e", "f"}, {{"h", 1}})
      .bracket({"e", "u"}, {{"k", a}})
      .bracket({"f", "u"}, {{"k", b}})
      .bracket({"e", "h"}, {{"m", -a}})
      .bracket({"f", "h"}, {{"m", -b}})
      .bracket({"e", "e", "f"}, {{"k", 2 * a}})
      .bracket({"e", "f", "f"}, {{"k", 2 * b}});
}
inline AlgebraPtr G4() { return G4_builder().build(); }

inline AlgebraPtr zero_algebra(int bound = 1) { return AlgebraBuilder(bound).build(); }

}  // namespace fx
