// A short tour: build an algebra, lift an MC element, twist, and invert a
// weak equivalence up to homotopy.

#include <iostream>
#include <linf/linf.hpp>

using namespace linf;

int main() {
  // e, u in degree 0, c in degree 1; du = c and Q(e, e) = c.
  auto l = AlgebraBuilder(3)
               .gen("e", 0, 1)
               .gen("u", 0, 2)
               .gen("c", 1, 2)
               .d("u", {{"c", 1}})
               .bracket({"e", "e"}, {{"c", 1}})
               .build();
  const auto& s = *l->space;

  auto lift = lift_mc_full(*l, element_from_terms(s, {{"e", 2}}));
  std::cout << "MC lift of 2e: " << element_to_string(s, *lift.element) << "\n";

  auto twisted = twist_algebra(l, *lift.element);
  std::cout << "twisted algebra valid: " << validate_algebra(*twisted).ok() << "\n";

  // The identity is a weak equivalence; its homotopy inverse comes with certificates.
  auto inv = homotopy_inverse(identity(l));
  std::cout << "cert_right: " << verify_homotopy(inv.cert_right).ok
            << ", cert_left: " << verify_homotopy(inv.cert_left).ok << "\n";

  // A 1-simplex in sMC: the constant path on the lifted element.
  auto edge = constant_simplex(l, 1, *lift.element);
  std::cout << "face 0: " << forms_to_string(s, simplex_cdga(0), face(edge, 0).value) << "\n";
}
