#pragma once

#include <vector>

namespace qeswkb {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are computed once per n and
// cached; the returned reference stays valid for the program lifetime.
const GaussRule& gauss_legendre(int n);

}  // namespace qeswkb
