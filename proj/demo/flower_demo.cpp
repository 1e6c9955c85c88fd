#include <iostream>

#include "packrig/packrig.hpp"

int main() {
  using namespace packrig;

  const CaseRecord flower = build_case("flower4");
  const RigidityVerdict verdict = is_infinitesimally_rigid(*flower.graph, *flower.packing, *flower.partition);
  std::cout << "flower4 rigid: " << (verdict.rigid ? "yes" : "no") << '\n';
  std::cout << "stress: " << format_stress(*flower.graph, *verdict.stress) << '\n';

  const RigidityVerdict swapped = is_infinitesimally_rigid(*flower.graph, *flower.packing, flower.partition->swapped());
  std::cout << "with grow and shrink exchanged: " << (swapped.rigid ? "rigid" : "flexible") << '\n';
  std::cout << "stress: " << format_stress(*flower.graph, *swapped.stress) << '\n';

  const CaseRecord ten = build_case("prestress10");
  const SecondOrderReport so = second_order_analysis(*ten.graph, *ten.packing, *ten.partition);
  std::cout << "prestress10 flex dimension: " << so.flex_dim << '\n';
  std::cout << "prestress10 prestress stable: " << (so.prestress_stable ? "yes" : "no") << '\n';
  return 0;
}
