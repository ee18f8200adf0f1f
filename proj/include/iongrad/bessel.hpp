// bessel.hpp — Bessel functions of the first kind, integer order

#pragma once

namespace iongrad::bessel {

// J_m(x) for integer m (negative orders via J_{-m} = (-1)^m J_m).
// Power series at small argument, Miller downward recurrence otherwise;
// validated against reference values to 1e-12 in the tests.
double bessel_j(int m, double x);

} // namespace iongrad::bessel
