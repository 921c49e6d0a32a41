#pragma once

#include <span>

namespace claimlab {

// Correctly rounded floating-point sum (Shewchuk's partials, as in Python's
// math.fsum), so the result does not depend on summation order and
// fsum(-x) == -fsum(x). Inputs must be finite.
double fsum(std::span<const double> values);

}  // namespace claimlab
