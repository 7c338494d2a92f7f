#include "nlr/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace nlr {

void CoefficientSpec::validate() const {
    const int samples = 1000;
    double prev = 0.0;
    double prev_x = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = work_lo + (work_hi - work_lo) * i / (samples - 1.0);
        const double v = a(x);
        if (!(v >= m * (1.0 - 1e-12) - 1e-14) || !(v <= M * (1.0 + 1e-12) + 1e-14))
            throw std::invalid_argument("CoefficientSpec: bound violation at sampled point");
        if (!(m > 0.0)) throw std::invalid_argument("CoefficientSpec: lower bound must be positive");
        if (i > 0 && std::abs(v - prev) > lipschitz * std::abs(x - prev_x) + 1e-12)
            throw std::invalid_argument("CoefficientSpec: Lipschitz violation at sampled pair");
        prev = v;
        prev_x = x;
    }
}

double CoefficientSpec::sup_abs_derivative(double lo, double hi) const {
    const int samples = 10000;
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * i / (samples - 1.0);
        sup = std::max(sup, std::abs(a_prime(x)));
    }
    return sup;
}

CoefficientSpec constant_coefficient(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("constant_coefficient: value must be positive");
    CoefficientSpec c;
    c.a = [value](double) { return value; };
    c.a_prime = [](double) { return 0.0; };
    c.m = value;
    c.M = value;
    c.lipschitz = 0.0;
    c.work_lo = 0.0;
    c.work_hi = 1.0;
    c.monotone_nonincreasing = true;
    return c;
}

CoefficientSpec polynomial_coefficient(const std::vector<double>& coeffs, double lo, double hi) {
    if (coeffs.empty()) throw std::invalid_argument("polynomial_coefficient: no coefficients");
    auto eval = [coeffs](double x) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
        return v;
    };
    auto eval_prime = [coeffs](double x) {
        double v = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) v = v * x + coeffs[k] * static_cast<double>(k);
        return v;
    };
    CoefficientSpec c;
    c.work_lo = lo;
    c.work_hi = hi;
    c.a = [eval, lo, hi](double x) { return eval(std::clamp(x, lo, hi)); };
    c.a_prime = [eval_prime, lo, hi](double x) {
        return (x < lo || x > hi) ? 0.0 : eval_prime(x);
    };
    const int samples = 4096;
    double mn = c.a(lo), mx = c.a(lo), lip = 0.0;
    bool noninc = true;
    double prev = c.a(lo);
    for (int i = 1; i <= samples; ++i) {
        const double x = lo + (hi - lo) * i / samples;
        const double v = c.a(x);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        if (v > prev + 1e-14) noninc = false;
        lip = std::max(lip, std::abs(eval_prime(x)));
        prev = v;
    }
    if (!(mn > 0.0))
        throw std::invalid_argument("polynomial_coefficient: not positive on working interval");
    c.m = mn;
    c.M = mx;
    c.lipschitz = lip * 1.0000001 + 1e-15;
    c.monotone_nonincreasing = noninc;
    return c;
}

CoefficientSpec table_coefficient(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("table_coefficient: need matching xs/ys with >= 2 entries");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("table_coefficient: abscissae must increase");
    auto xs_p = std::make_shared<std::vector<double>>(std::move(xs));
    auto ys_p = std::make_shared<std::vector<double>>(std::move(ys));
    auto segment = [xs_p](double x) {
        const auto& v = *xs_p;
        const auto it = std::upper_bound(v.begin(), v.end(), x);
        const std::size_t hi = std::clamp<std::size_t>(it - v.begin(), 1, v.size() - 1);
        return hi;
    };
    CoefficientSpec c;
    c.a = [xs_p, ys_p, segment](double x) {
        const auto& X = *xs_p;
        const auto& Y = *ys_p;
        if (x <= X.front()) return Y.front();
        if (x >= X.back()) return Y.back();
        const std::size_t hi = segment(x);
        const double t = (x - X[hi - 1]) / (X[hi] - X[hi - 1]);
        return (1.0 - t) * Y[hi - 1] + t * Y[hi];
    };
    c.a_prime = [xs_p, ys_p, segment](double x) {
        const auto& X = *xs_p;
        const auto& Y = *ys_p;
        if (x <= X.front() || x >= X.back()) return 0.0;
        const std::size_t hi = segment(x);
        return (Y[hi] - Y[hi - 1]) / (X[hi] - X[hi - 1]);
    };
    c.work_lo = xs_p->front();
    c.work_hi = xs_p->back();
    double mn = ys_p->front(), mx = ys_p->front(), lip = 0.0;
    bool noninc = true;
    for (std::size_t i = 0; i < ys_p->size(); ++i) {
        mn = std::min(mn, (*ys_p)[i]);
        mx = std::max(mx, (*ys_p)[i]);
        if (i > 0) {
            const double slope =
                ((*ys_p)[i] - (*ys_p)[i - 1]) / ((*xs_p)[i] - (*xs_p)[i - 1]);
            lip = std::max(lip, std::abs(slope));
            if (slope > 1e-14) noninc = false;
        }
    }
    if (!(mn > 0.0)) throw std::invalid_argument("table_coefficient: values must be positive");
    c.m = mn;
    c.M = mx;
    c.lipschitz = lip + 1e-15;
    c.monotone_nonincreasing = noninc;
    return c;
}

namespace {

// Monotone cubic Hermite interpolation (Fritsch-Carlson slopes).
struct Pchip {
    std::vector<double> x, y, slope;

    Pchip(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
        const std::size_t n = x.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        slope.assign(n, 0.0);
        slope[0] = delta[0];
        slope[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                slope[i] = 0.0;
            } else {
                const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                slope[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        // Limit endpoint slopes to keep monotonicity.
        for (std::size_t e : {std::size_t{0}, n - 1}) {
            const double d = e == 0 ? delta[0] : delta[n - 2];
            if (slope[e] * d <= 0.0)
                slope[e] = 0.0;
            else if (std::abs(slope[e]) > 3.0 * std::abs(d))
                slope[e] = 3.0 * d;
        }
    }

    std::size_t segment(double xi) const {
        const auto it = std::upper_bound(x.begin(), x.end(), xi);
        return std::clamp<std::size_t>(it - x.begin(), 1, x.size() - 1) - 1;
    }

    double eval(double xi) const {
        if (xi <= x.front()) return y.front();
        if (xi >= x.back()) return y.back();
        const std::size_t i = segment(xi);
        const double hseg = x[i + 1] - x[i];
        const double t = (xi - x[i]) / hseg;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y[i] + h10 * hseg * slope[i] + h01 * y[i + 1] + h11 * hseg * slope[i + 1];
    }

    double deriv(double xi) const {
        if (xi <= x.front() || xi >= x.back()) return 0.0;
        const std::size_t i = segment(xi);
        const double hseg = x[i + 1] - x[i];
        const double t = (xi - x[i]) / hseg;
        const double d00 = 6 * t * (t - 1) / hseg;
        const double d10 = (1 - t) * (1 - 3 * t);
        const double d01 = -d00;
        const double d11 = t * (3 * t - 2);
        return d00 * y[i] + d10 * slope[i] + d01 * y[i + 1] + d11 * slope[i + 1];
    }
};

}  // namespace

PaperExampleCoefficient paper_example_coefficient(double a0, double i_min, double i_max) {
    if (!(a0 > 0.0)) throw std::invalid_argument("paper_example_coefficient: a0 must be positive");
    if (!(i_min > 0.0) || !(i_max >= i_min))
        throw std::invalid_argument("paper_example_coefficient: need 0 < i_min <= i_max");

    const double m1 = 2.0 * i_max / a0;
    const double am1 = 0.5 * a0;
    const double m2 = 2.0 * m1;
    const double am2 = i_min / m2;
    const double m3 = 2.0 * i_max / am2;
    const double am3 = 0.5 * am2;

    auto curve = std::make_shared<Pchip>(std::vector<double>{0.0, m1, m2, m3},
                                         std::vector<double>{a0, am1, am2, am3});

    PaperExampleCoefficient out;
    out.thresholds = {0.0, m1, m2, m3};
    CoefficientSpec& c = out.coeff;
    c.a = [curve](double x) { return curve->eval(x); };
    c.a_prime = [curve](double x) { return curve->deriv(x); };
    c.m = am3;
    c.M = a0;
    c.work_lo = 0.0;
    c.work_hi = m3;
    c.monotone_nonincreasing = true;
    double lip = 0.0;
    for (int i = 0; i <= 8192; ++i)
        lip = std::max(lip, std::abs(curve->deriv(m3 * i / 8192.0)));
    c.lipschitz = lip * 1.0000001 + 1e-15;
    return out;
}

}  // namespace nlr
