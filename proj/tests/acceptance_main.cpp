// Runs the verification suite and prints one pass/fail line per criterion.

#include <iostream>

#include "barrierinv/acceptance.hpp"

int main() {
  const int failures = barrierinv::print_acceptance_report(std::cout);
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
