// bessel.cpp

#include "iongrad/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace iongrad::bessel {

namespace {

// Σ_k (−1)^k (x/2)^{2k+m} / (k! (k+m)!); adequate for small x where the
// alternating terms stay comparable to the result.
double series(int m, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= m; ++k) term *= h / k;
    double sum = term;
    const double h2 = -h * h;
    for (int k = 1; k < 200; ++k) {
        term *= h2 / (static_cast<double>(k) * (k + m));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

// Miller's downward recurrence normalized with J0 + 2 Σ J_{2k} = 1.
double miller(int m, double x) {
    int start = m + 20 + static_cast<int>(1.3 * x);
    if (start % 2) ++start;
    double jp = 0.0;        // J_{k+1}
    double jc = 1e-30;      // J_k (arbitrary seed)
    double norm = 0.0;
    double val = 0.0;
    for (int k = start; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) { // rescale to avoid overflow
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            val *= 1e-250;
        }
        if (k - 1 == m) val = jc;
        if ((k - 1) >= 2 && (k - 1) % 2 == 0) norm += 2.0 * jc;
    }
    norm += jc; // J_0 contribution
    return val / norm;
}

} // namespace

double bessel_j(int m, double x) {
    double sign = 1.0;
    if (m < 0) {
        m = -m;
        if (m % 2) sign = -sign;
    }
    if (x < 0) {
        x = -x;
        if (m % 2) sign = -sign;
    }
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    if (x <= 8.0 || x <= static_cast<double>(m)) return sign * series(m, x);
    return sign * miller(m, x);
}

} // namespace iongrad::bessel
