#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lfhybrid/graph.hpp"

namespace lfhybrid {

/// Central-difference gradient verification in double precision.
///
/// `build` constructs a scalar-valued subgraph over the given input tensors
/// (registering each via g.leaf()) and returns the output id. Analytic
/// gradients come from one backward pass; each input coordinate is then
/// perturbed by +/- eps and the subgraph re-evaluated. Returns the max
/// relative error with denominator max(|analytic|, |numeric|, 1e-8).
inline double grad_check(const std::function<int(Graph<double>&)>& build,
                         const std::vector<Tensor<double>*>& inputs,
                         double eps = 1e-5) {
  for (Tensor<double>* t : inputs) t->zero_grad();
  std::vector<std::vector<double>> analytic;
  {
    Graph<double> g;
    const int out = build(g);
    if (g.value(out).size() != 1)
      throw std::invalid_argument("grad_check requires a scalar subgraph");
    g.backward(out);
    for (Tensor<double>* t : inputs) {
      t->ensure_grad();
      analytic.push_back(t->g);
    }
  }

  auto eval = [&]() {
    Graph<double> g;
    const int out = build(g);
    return g.value(out).v[0];
  };

  double max_rel = 0.0;
  for (size_t ti = 0; ti < inputs.size(); ++ti) {
    Tensor<double>& t = *inputs[ti];
    for (size_t i = 0; i < t.v.size(); ++i) {
      const double orig = t.v[i];
      t.v[i] = orig + eps;
      const double fp = eval();
      t.v[i] = orig - eps;
      const double fm = eval();
      t.v[i] = orig;
      const double numeric = (fp - fm) / (2.0 * eps);
      const double a = analytic[ti][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      max_rel = std::max(max_rel, std::abs(numeric - a) / denom);
    }
  }
  return max_rel;
}

}  // namespace lfhybrid
