// Minimal library walkthrough: build the horizon state at a few temperatures,
// reduce to the Alice-Bob-Charlie scenario and print the coherence /
// concurrence-fill trade-off.

#include <cstdio>

#include "qhorizon/qhorizon.hpp"

int main() {
  using namespace qhorizon;

  RoofConfig roof;
  roof.restarts = 8;
  roof.max_iters = 500;

  const double alpha = 0.70710678118654752440;  // GHZ point
  std::printf("%10s %10s %10s %10s %10s\n", "T_H", "qc", "foc", "cf(UB)", "foc^2+cf");
  for (double th : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const HorizonParams p = derive_coefficients(alpha, 1.0, th);
    const MeasureReport rep = evaluate_point(p, Scenario::ABC(), roof);
    std::printf("%10.3g %10.6f %10.6f %10.6f %10.6f\n", th, rep.qc, rep.foc, rep.cf,
                rep.tradeoff);
  }
  return 0;
}
