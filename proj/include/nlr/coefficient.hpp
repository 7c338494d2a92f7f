#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nlr {

/// Diffusion law a(.) with its bounds and derivative. The working interval
/// is where the bound and Lipschitz checks are sampled; evaluation outside
/// it is allowed (the builders extend constantly).
struct CoefficientSpec {
    std::function<double(double)> a;
    std::function<double(double)> a_prime;
    double m = 0.0;          // inf a
    double M = 0.0;          // sup a
    double lipschitz = 0.0;  // Lipschitz constant on the working interval
    double work_lo = 0.0;
    double work_hi = 1.0;
    bool monotone_nonincreasing = false;

    /// Samples 10^3 points for the bound invariant and consecutive pairs
    /// for the Lipschitz invariant; throws on violation.
    void validate() const;

    /// Sup of |a'| over [lo, hi], sampled at 10^4 points.
    double sup_abs_derivative(double lo, double hi) const;
};

CoefficientSpec constant_coefficient(double value);

/// a(x) = sum_k c_k x^k on [lo, hi], extended constantly outside.
CoefficientSpec polynomial_coefficient(const std::vector<double>& coeffs, double lo, double hi);

/// Piecewise-linear interpolation through (x_k, y_k), constant outside.
CoefficientSpec table_coefficient(std::vector<double> xs, std::vector<double> ys);

/// Thresholds 0 = m_0 < m_1 < m_2 < m_3 of the n_1 = 3 staircase
/// construction, together with the coefficient built through them.
struct PaperExampleCoefficient {
    CoefficientSpec coeff;
    std::vector<double> thresholds;  // {0, m1, m2, m3}
};

/// Decreasing coefficient with a(m1) = a(0)/2, a(m2) = I_min/m2,
/// a(m3) = a(m2)/2, where m1 = 2 I_max / a(0), m2 = 2 m1 and
/// m3 = 2 I_max / a(m2). Monotone cubic interpolation between the control
/// points, constant tails. I = [i_min, i_max] must satisfy 0 < i_min <= i_max.
PaperExampleCoefficient paper_example_coefficient(double a0, double i_min, double i_max);

}  // namespace nlr
