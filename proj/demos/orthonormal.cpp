// Runs the four greedy algorithms on a small redundant dictionary in R^4 and
// prints the residual norms side by side.

#include <cmath>
#include <cstdio>
#include <vector>

#include "mpgreedy/mpgreedy.hpp"

using namespace mpgreedy;

int main() {
  double s = 1.0 / std::sqrt(2.0);
  std::vector<CoeffVector> atoms = {
      CoeffVector::unit(0), CoeffVector::unit(1), CoeffVector::unit(2), CoeffVector::unit(3),
      CoeffVector{s, s, 0.0, 0.0}, CoeffVector{0.0, s, -s, 0.0}, CoeffVector{0.5, 0.5, 0.5, 0.5},
  };
  Dictionary dict(atoms);
  CoeffVector f{1.0, 0.8, -0.3, 0.1};

  const int steps = 8;
  std::vector<GreedyTrace> traces;
  for (Algorithm a : {Algorithm::pga, Algorithm::pga_shrink, Algorithm::oga, Algorithm::rga}) {
    RunOptions ro;
    ro.algorithm = a;
    ro.steps = steps;
    ro.shrinkage = 0.5;
    ro.variation_bound = 2.5;
    traces.push_back(run(f, dict, ro));
  }

  std::printf("%4s %12s %12s %12s %12s\n", "n", "pga", "pga_shrink", "oga", "rga");
  for (int n = 0; n < steps; ++n) {
    std::printf("%4d", n + 1);
    for (const auto& tr : traces) {
      if (n < static_cast<int>(tr.steps.size())) std::printf(" %12.4e", tr.steps[static_cast<std::size_t>(n)].residual_norm);
      else std::printf(" %12s", "-");
    }
    std::printf("\n");
  }
  return 0;
}
