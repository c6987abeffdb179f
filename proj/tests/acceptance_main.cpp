#include <cstdio>
#include <iostream>

#include "detphase/acceptance.hpp"

int main() {
  detphase::AcceptanceOptions options;
  const auto rows = detphase::run_acceptance(options, [](const detphase::AcceptanceRow& row) {
    std::cout << detphase::format_row(row) << std::endl;
  });
  int passed = 0;
  for (const auto& row : rows)
    if (row.passed) ++passed;
  std::printf("%d/%zu criteria passed\n", passed, rows.size());
  return passed == static_cast<int>(rows.size()) ? 0 : 1;
}
