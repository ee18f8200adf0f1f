// fit.cpp

#include "iongrad/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace iongrad::experiments {

namespace {

// residual sum of squares of the best (α,β,γ) for y ≈ α + β cos(νt) + γ sin(νt)
double linear_rss(const std::vector<double>& t, const std::vector<double>& y,
                  double nu, Eigen::Vector3d* coef = nullptr) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < t.size(); ++i) {
        const Eigen::Vector3d row(1.0, std::cos(nu * t[i]), std::sin(nu * t[i]));
        m += row * row.transpose();
        b += y[i] * row;
    }
    const Eigen::Vector3d x = m.ldlt().solve(b);
    double rss = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        const double fit = x(0) + x(1) * std::cos(nu * t[i]) + x(2) * std::sin(nu * t[i]);
        rss += (y[i] - fit) * (y[i] - fit);
    }
    if (coef) *coef = x;
    return rss;
}

} // namespace

RabiFit fit_rabi(const std::vector<double>& times, const std::vector<double>& p_up) {
    const size_t n = times.size();
    if (n != p_up.size()) throw FitError("fit_rabi: length mismatch");
    if (n < 8) throw FitError("fit_rabi: need at least 8 samples");
    for (size_t i = 1; i < n; ++i)
        if (times[i] <= times[i - 1]) throw FitError("fit_rabi: times must be increasing");

    const double span = times.back() - times.front();
    const auto [lo, hi] = std::minmax_element(p_up.begin(), p_up.end());
    if (*hi - *lo < 1e-10)
        throw FitError("fit_rabi: non-oscillatory data (flat trace)");

    double dt_min = span;
    for (size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, times[i] - times[i - 1]);

    const double mean = std::accumulate(p_up.begin(), p_up.end(), 0.0) / n;
    double rss_const = 0.0;
    for (double y : p_up) rss_const += (y - mean) * (y - mean);

    // coarse grid over the frequency of the cos(2Ωt) component
    const double nu_lo = M_PI / span;        // half an oscillation across the record
    const double nu_hi = M_PI / dt_min;      // sampling limit
    const double dnu = 2.0 * M_PI / (8.0 * span);
    double best_nu = nu_lo, best_rss = std::numeric_limits<double>::infinity();
    for (double nu = nu_lo; nu <= nu_hi; nu += dnu) {
        const double rss = linear_rss(times, p_up, nu);
        if (rss < best_rss) {
            best_rss = rss;
            best_nu = nu;
        }
    }

    // local refinement by ternary search
    double a = std::max(nu_lo, best_nu - dnu), b = std::min(nu_hi, best_nu + dnu);
    for (int it = 0; it < 100; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (linear_rss(times, p_up, m1) < linear_rss(times, p_up, m2))
            b = m2;
        else
            a = m1;
    }
    const double nu = 0.5 * (a + b);
    Eigen::Vector3d coef;
    const double rss = linear_rss(times, p_up, nu, &coef);

    if (rss_const > 1e-18 && 1.0 - rss / rss_const < 0.5)
        throw FitError("fit_rabi: non-oscillatory data (no distinct spectral peak)");

    // α + β cos(2Ωt) + γ sin(2Ωt) = A sin²(Ωt+φ) + c
    RabiFit f;
    f.frequency = 0.5 * nu;
    f.amplitude = 2.0 * std::hypot(coef(1), coef(2));
    f.offset = coef(0) - 0.5 * f.amplitude;
    f.phase = 0.5 * std::atan2(coef(2), -coef(1));
    f.rms_residual = std::sqrt(rss / n);
    return f;
}

} // namespace iongrad::experiments
