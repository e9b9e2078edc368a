#ifndef DEGENLAB_PRESETS_HPP
#define DEGENLAB_PRESETS_HPP

#include <string>
#include <vector>

#include "degenlab/structure.hpp"

namespace dgl {

/**
 * Named closed-form functions of (x,t) used for coefficients and data in configs.
 *
 *   const c                  c
 *   linear c0 a1 .. an       c0 + sum a_k x_k
 *   pwlinear c0 a.. b..      c0 + sum a_k x_k + sum b_k |x_k - 1/2|
 *   sine amp [freq] [phase]  amp sin(pi freq (x_1+..+x_n) + phase)
 *   wave amp [freq]          amp sin(2 pi freq (x_1 - 1/2))
 *   gauss amp w [c1 .. cn]   amp exp(-|x-c|^2 / (2 w^2)), centre defaults to the box centre
 *   one_plus_norm            1 + |x|
 *
 * Vector data separate components with ';'.
 */
struct Preset {
  std::string text;
  CoefficientFn fn;
  bool zero = false;  // identically zero
};

Preset parse_preset(const std::string& text, int n);
std::vector<Preset> parse_vector_preset(const std::string& text, int n, int N);

}  // namespace dgl

#endif
