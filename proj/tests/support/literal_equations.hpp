#pragma once

// Second, independent term-by-term assembly of the long model
// equations, used only to cross-check the production path on injected
// smooth fields (double-entry bookkeeping). Kept deliberately naive;
// do not "optimize" this file.

#include "filmflow/newmodel/stack.hpp"

namespace filmflow::testsupport {

using coeffs::CoefficientTable;
using fd::Array;
using newmodel::FieldStack;
using newmodel::ModelParams;
using newmodel::StackDerivs;

struct LiteralGroup1 {
  Array r_u0[2], r_u1[2], r_u2[2], r_u3[2], r_div3;
};

LiteralGroup1 literal_group1(const FieldStack& s, const CoefficientTable& tab,
                             const ModelParams& params);

struct LiteralVertical {
  Array u3_1, u3_2, u3_3, p1_full, p1_lead, p2, p3;
};

LiteralVertical literal_vertical(const FieldStack& s,
                                 const CoefficientTable& tab,
                                 const ModelParams& params);

}  // namespace filmflow::testsupport
