#include "nlr/estimates.hpp"

#include "nlr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nlr {

namespace {

void check_moser_hypotheses(int n, double p) {
    if (n < 3) throw std::invalid_argument("moser: n must be >= 3");
    if (!(p > 1.0) || !(p < static_cast<double>(n) / (n - 2)))
        throw std::invalid_argument("moser: need 1 < p < n/(n-2)");
}

}  // namespace

double moser_sigma(int n, double p, double r) {
    const double c2 = 2.0 * p - p * n + n;
    const double c3 = n * p;
    return p * (n + 2.0) / (2.0 * (r * c2 + c3));
}

double moser_theta(int n, double p) {
    const double c2 = 2.0 * p - p * n + n;
    const double c3 = n * p;
    return 1.0 - c2 / (2.0 * c2 + c3);
}

double moser_beta(int n, double p, double r) {
    return (2.0 * n * r - (n - 2.0) * (2.0 * r - 1.0) * p) / ((n + 2.0) * (2.0 * r - 1.0) * p);
}

double moser_rho(int n, double p, double r) {
    return (2.0 * n * r - (n - 2.0) * (2.0 * r - 1.0) * p) /
           (2.0 * r * (p * (n + 2.0) + n) - 2.0 * n * (2.0 * r - 1.0) * p);
}

MoserReport moser_bounds(int n, double p, double h, std::size_t k_max, double C2, double f_norm,
                         double U_h) {
    check_moser_hypotheses(n, p);
    if (!(h >= 1.0)) throw std::invalid_argument("moser_bounds: h must be >= 1");
    if (!(C2 > 0.0) || !(U_h >= 1.0))
        throw std::invalid_argument("moser_bounds: need C2 > 0 and U_h >= 1");

    MoserReport rep;
    rep.n = n;
    rep.p = p;
    rep.q = p / (p - 1.0);
    rep.h = h;
    rep.theta = moser_theta(n, p);

    double r = h;
    double U = U_h;
    rep.sigma_values.reserve(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double sigma = moser_sigma(n, p, r);
        rep.sigma_values.push_back(sigma);
        U *= std::pow(C2 * f_norm, sigma) * std::pow(r, sigma);
        rep.bound_sequence.push_back(U);
        rep.lambda1 += sigma;
        if (k >= 1) rep.lambda2 += static_cast<double>(k) * sigma;
        r *= 2.0;
    }
    rep.lambda1_limit = moser_sigma(n, p, h) / (1.0 - rep.theta);
    rep.lambda2_limit = moser_sigma(n, p, 2.0 * h) / ((1.0 - rep.theta) * (1.0 - rep.theta));
    return rep;
}

std::pair<double, Field> principal_eigenpair(const MeshPtr& mesh, double tol,
                                             std::size_t max_iter) {
    const Tridiag K1 = radial_stiffness_unit(*mesh);
    const auto mass = lumped_mass(*mesh);
    const std::size_t nfree = K1.size();

    std::vector<double> x(nfree);
    for (std::size_t i = 0; i < nfree; ++i)
        x[i] = 1.0 - mesh->nodes[i] / mesh->radius();  // positive start, boundary-compatible

    double lambda = 0.0;
    double lambda_prev = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<double> rhs(nfree);
        for (std::size_t i = 0; i < nfree; ++i) rhs[i] = mass[i] * x[i];
        x = K1.solve(rhs);
        double mx = 0.0;
        for (double v : x) mx = std::max(mx, std::abs(v));
        if (!(mx > 0.0)) throw std::runtime_error("principal_eigenpair: iteration collapsed");
        for (double& v : x) v /= mx;
        double num = K1.quadratic_form(x);
        double den = 0.0;
        for (std::size_t i = 0; i < nfree; ++i) den += mass[i] * x[i] * x[i];
        lambda = num / den;
        if (std::abs(lambda - lambda_prev) <= tol * std::max(1.0, std::abs(lambda))) break;
        lambda_prev = lambda;
    }
    return {lambda, from_free(mesh, x)};
}

ConstantsTable poincare_constants(const RadialMesh& mesh, double tol, std::size_t max_iter) {
    auto shared = std::make_shared<RadialMesh>(mesh);
    const auto [lambda, vec] = principal_eigenpair(shared, tol, max_iter);
    (void)vec;
    ConstantsTable table;
    table.lambda = lambda;
    table.C1 = 1.0 / lambda;
    table.omega_n = unit_sphere_measure(mesh.n);
    return table;
}

AbsorbingSetReport absorbing_radius(const ProblemSpec& problem, double rho0, double t0, double K) {
    if (!(rho0 > 0.0) || !(t0 > 0.0))
        throw std::invalid_argument("absorbing_radius: rho0 and t0 must be positive");
    const double m = problem.coeff.m;
    const double f2_sq = inner_l2(problem.f, problem.f);
    const ConstantsTable table = poincare_constants(*problem.mesh);
    const double mu_hi = problem.coeff.work_hi;
    const double aprime_inf = problem.coeff.sup_abs_derivative(problem.coeff.work_lo, mu_hi);

    AbsorbingSetReport rep;
    rep.t0 = t0;
    rep.rho0 = rho0;
    rep.lambda = table.lambda;
    rep.K = K;
    rep.a3 = t0 * table.lambda * f2_sq / (m * m) + rho0 * rho0 / m;
    rep.a2 = t0 / m * f2_sq;
    const double kg = K * problem.kernel.h1_norm;
    rep.a1 = (1.0 / m) * kg * kg * aprime_inf * aprime_inf * rep.a3;
    rep.radius = (rep.a3 / t0 + rep.a2) * std::exp(rep.a1);
    return rep;
}

Field random_smooth_field(const MeshPtr& mesh, Rng& rng, std::size_t modes) {
    Field u(mesh);
    const double R = mesh->radius();
    std::vector<double> amp(modes), shift(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        amp[k] = rng.uniform(-1.0, 1.0) / static_cast<double>((k + 1) * (k + 1));
        shift[k] = rng.uniform(0.0, 1.0);
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = mesh->nodes[i] / R;
        double v = 0.0;
        for (std::size_t k = 0; k < modes; ++k)
            v += amp[k] * std::sin((k + 1) * std::numbers::pi * x) *
                 std::cos(0.5 * std::numbers::pi * shift[k] * x);
        u[i] = v;
    }
    u[u.size() - 1] = 0.0;
    return u;
}

double fit_gradient_transfer_constant(const ProblemSpec& problem, std::size_t samples, Rng& rng) {
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        Field u = random_smooth_field(problem.mesh, rng);
        Field lr = eval_lr(u, problem.kernel, problem.r);
        const double num = norm_v(lr);
        const double den = problem.kernel.h1_norm * norm_v(u);
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return 1.05 * worst;
}

GronwallFactor gronwall_factor(const TimeSeries& series, const ProblemSpec& problem) {
    if (series.times.empty()) throw std::invalid_argument("gronwall_factor: empty series");
    const int n = problem.mesh->n;
    const double omega_measure = ball_volume(n, problem.mesh->radius());
    const double paper_c = std::pow(omega_measure, 1.0 / std::max(n, 3));
    const double gamma = problem.coeff.lipschitz;
    const double m = problem.coeff.m;

    GronwallFactor out;
    out.p_hat.reserve(series.energy_trace.size());
    for (const auto& er : series.energy_trace) {
        const double base = gamma * paper_c * problem.kernel.l2_norm * std::sqrt(er.v_sq);
        out.p_hat.push_back(base * base / m);
    }
    for (std::size_t i = 1; i < out.p_hat.size(); ++i)
        out.integral +=
            0.5 * (series.times[i] - series.times[i - 1]) * (out.p_hat[i] + out.p_hat[i - 1]);
    return out;
}

}  // namespace nlr
