#include "nlr/io.hpp"

#include "nlr/branch.hpp"
#include "nlr/estimates.hpp"
#include "nlr/stability.hpp"
#include "nlr/stationary.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nlr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, std::size_t line, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size())
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "': not a number: '" + tok + "'");
    return v;
}

Descriptor parse_descriptor(const std::string& value, std::size_t line, const std::string& key,
                            bool coefficient) {
    auto toks = split_ws(value);
    if (toks.empty())
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "': empty descriptor");
    Descriptor desc;
    desc.kind = toks[0];
    if (desc.kind == "table") {
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const auto colon = toks[i].find(':');
            if (colon == std::string::npos)
                throw ParseError("line " + std::to_string(line) + ": key '" + key +
                                 "': table entries are x:y pairs, got '" + toks[i] + "'");
            desc.table.emplace_back(parse_number(toks[i].substr(0, colon), line, key),
                                    parse_number(toks[i].substr(colon + 1), line, key));
        }
        if (desc.table.size() < 2)
            throw ValidationError("key '" + key + "': table needs at least two points");
    } else if (desc.kind == "constant" || desc.kind == "polynomial" ||
               desc.kind == "paper-example") {
        for (std::size_t i = 1; i < toks.size(); ++i)
            desc.params.push_back(parse_number(toks[i], line, key));
        if (desc.kind == "constant" && desc.params.size() != 1)
            throw ValidationError("key '" + key + "': constant takes exactly one value");
        if (desc.kind == "polynomial" && desc.params.empty())
            throw ValidationError("key '" + key + "': polynomial needs coefficients");
        if (desc.kind == "paper-example" &&
            (!coefficient || desc.params.size() != 3))
            throw ValidationError("key '" + key +
                                  "': paper-example is a coefficient builder taking a0 i_min i_max");
    } else {
        throw ValidationError("key '" + key + "': unknown descriptor kind '" + desc.kind + "'");
    }
    return desc;
}

double eval_field_descriptor(const Descriptor& d, double rho) {
    if (d.kind == "constant") return d.params[0];
    if (d.kind == "polynomial") {
        double v = 0.0;
        for (std::size_t k = d.params.size(); k-- > 0;) v = v * rho + d.params[k];
        return v;
    }
    // table: piecewise linear, constant outside
    if (rho <= d.table.front().first) return d.table.front().second;
    if (rho >= d.table.back().first) return d.table.back().second;
    for (std::size_t i = 1; i < d.table.size(); ++i) {
        if (rho <= d.table[i].first) {
            const auto [x0, y0] = d.table[i - 1];
            const auto [x1, y1] = d.table[i];
            return y0 + (y1 - y0) * (rho - x0) / (x1 - x0);
        }
    }
    return d.table.back().second;
}

std::string format_size(std::size_t v) { return std::to_string(v); }

}  // namespace

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

const char* version_string() { return "1.0.0"; }

std::string Descriptor::echo() const {
    std::string out = kind;
    for (double p : params) out += " " + format_value(p);
    for (const auto& [x, y] : table) out += " " + format_value(x) + ":" + format_value(y);
    return out;
}

std::map<std::string, std::string> ScenarioConfig::echo() const {
    return {
        {"n", std::to_string(n)},
        {"d", format_value(d)},
        {"N", format_size(N)},
        {"r", format_value(r)},
        {"task", task},
        {"a", a.echo()},
        {"f", f.echo()},
        {"g", g.echo()},
        {"u0", u0.echo()},
        {"tol", format_value(tol)},
        {"dt", format_value(dt)},
        {"t_end", format_value(t_end)},
        {"damping", format_value(damping)},
        {"max_iter", format_size(max_iter)},
        {"r_grid", format_size(r_grid)},
        {"store_every", format_size(store_every)},
        {"coeff_m", format_value(coeff_m)},
        {"coeff_M", format_value(coeff_M)},
        {"i_lo", format_value(i_lo)},
        {"i_hi", format_value(i_hi)},
        {"t0", format_value(t0)},
        {"rho0", format_value(rho0)},
        {"transfer_K", format_value(transfer_K)},
        {"p", format_value(p)},
        {"output_dir", output_dir},
        {"seed", std::to_string(seed)},
    };
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    bool has_r = false;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");

        auto num = [&] { return parse_number(split_ws(value).at(0), line_no, key); };
        if (key == "n") cfg.n = static_cast<int>(num());
        else if (key == "d") cfg.d = num();
        else if (key == "N") cfg.N = static_cast<std::size_t>(num());
        else if (key == "r") { cfg.r = num(); has_r = true; }
        else if (key == "task") cfg.task = value;
        else if (key == "a") cfg.a = parse_descriptor(value, line_no, key, true);
        else if (key == "f") cfg.f = parse_descriptor(value, line_no, key, false);
        else if (key == "g") cfg.g = parse_descriptor(value, line_no, key, false);
        else if (key == "u0") cfg.u0 = parse_descriptor(value, line_no, key, false);
        else if (key == "tol") cfg.tol = num();
        else if (key == "dt") cfg.dt = num();
        else if (key == "t_end") cfg.t_end = num();
        else if (key == "damping") cfg.damping = num();
        else if (key == "max_iter") cfg.max_iter = static_cast<std::size_t>(num());
        else if (key == "r_grid") cfg.r_grid = static_cast<std::size_t>(num());
        else if (key == "store_every") cfg.store_every = static_cast<std::size_t>(num());
        else if (key == "coeff_m") cfg.coeff_m = num();
        else if (key == "coeff_M") cfg.coeff_M = num();
        else if (key == "i_lo") cfg.i_lo = num();
        else if (key == "i_hi") cfg.i_hi = num();
        else if (key == "t0") cfg.t0 = num();
        else if (key == "rho0") cfg.rho0 = num();
        else if (key == "transfer_K") cfg.transfer_K = num();
        else if (key == "p") cfg.p = num();
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num());
        else
            throw ValidationError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                  "'");
    }

    if (cfg.n < 1 || cfg.n > 3)
        throw ValidationError("key 'n': unsupported dimension " + std::to_string(cfg.n));
    if (!(cfg.d > 0.0)) throw ValidationError("key 'd': diameter must be positive");
    if (cfg.N < 4) throw ValidationError("key 'N': at least 4 cells required");
    static const std::vector<std::string> tasks = {
        "stationary", "rd-enumerate", "multi-solution", "branch",
        "stability",  "integrate",    "estimates"};
    if (std::find(tasks.begin(), tasks.end(), cfg.task) == tasks.end())
        throw ValidationError("key 'task': unknown task '" + cfg.task + "'");
    if (!has_r) cfg.r = cfg.d / 2.0;
    if (cfg.r < 0.0 || cfg.r > cfg.d)
        throw ValidationError("key 'r': radius outside [0, d]");
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
        throw ValidationError("key 'dt'/'t_end': must be positive");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
        throw ValidationError("key 'damping': must lie in (0, 1]");
    if (cfg.r_grid < 2) throw ValidationError("key 'r_grid': at least 2 radii");
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

BuiltScenario build_scenario(const ScenarioConfig& config) {
    auto mesh = build_radial_mesh(config.n, config.d, config.N);
    auto sample = [&](const Descriptor& d) {
        Field out(mesh);
        for (std::size_t i = 0; i < mesh->node_count(); ++i)
            out[i] = eval_field_descriptor(d, mesh->nodes[i]);
        return out;
    };

    BuiltScenario built{mesh, sample(config.f), sample(config.g), sample(config.u0), {}, {}};
    if (config.a.kind == "constant") {
        built.coeff = constant_coefficient(config.a.params[0]);
    } else if (config.a.kind == "polynomial") {
        built.coeff = polynomial_coefficient(config.a.params, 0.0, 10.0);
    } else if (config.a.kind == "table") {
        std::vector<double> xs, ys;
        for (const auto& [x, y] : config.a.table) {
            xs.push_back(x);
            ys.push_back(y);
        }
        built.coeff = table_coefficient(std::move(xs), std::move(ys));
    } else {
        auto ex = paper_example_coefficient(config.a.params[0], config.a.params[1],
                                            config.a.params[2]);
        built.coeff = ex.coeff;
        built.thresholds = ex.thresholds;
    }
    if (config.coeff_m > 0.0) built.coeff.m = config.coeff_m;
    if (config.coeff_M > 0.0) built.coeff.M = config.coeff_M;
    built.coeff.validate();
    return built;
}

namespace {

class Emitter {
public:
    explicit Emitter(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& bytes) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << bytes;
        files_.push_back({name, digest_hex(bytes)});
    }

    const std::vector<EmittedFile>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<EmittedFile> files_;
};

std::string csv_row(const std::vector<double>& vals) {
    std::string row;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) row += ',';
        row += format_value(vals[i]);
    }
    row += '\n';
    return row;
}

std::string field_csv(const std::string& comment, const std::string& header,
                      const std::vector<std::pair<double, const Field*>>& groups) {
    std::string out = "# " + comment + "\n" + header + "\n";
    for (const auto& [tag, field] : groups)
        for (std::size_t i = 0; i < field->values.size(); ++i)
            out += csv_row({tag, static_cast<double>(i), field->mesh->nodes[i], (*field)[i]});
    return out;
}

std::string coefficient_plot_csv(const CoefficientSpec& coeff) {
    std::string out =
        "# diffusion coefficient graph: xi, a(xi), xi*a(xi)\nxi,a,xi_a\n";
    const std::size_t pts = 400;
    const double hi = coeff.work_hi;
    for (std::size_t i = 0; i <= pts; ++i) {
        const double xi = hi * static_cast<double>(i) / static_cast<double>(pts);
        out += csv_row({xi, coeff.a(xi), xi * coeff.a(xi)});
    }
    return out;
}

nlohmann::json report_json(const StabilityReport& rep) {
    return {{"min_rayleigh", rep.min_rayleigh},
            {"stable", rep.stable},
            {"lower_bound_analytic", rep.lower_bound_analytic},
            {"iterations", rep.iterations},
            {"eig_converged", rep.eig_converged}};
}

void run_task(const ScenarioConfig& cfg, Emitter& emit) {
    auto built = build_scenario(cfg);
    ProblemSpec problem(built.mesh, built.f, KernelSpec(built.g), built.coeff, cfg.r, built.u0);

    if (cfg.task == "stationary") {
        auto sol = picard_stationary(problem, built.u0, cfg.damping, cfg.tol, cfg.max_iter);
        std::string out = "# stationary solution; columns node,rho,u,lr\nnode,rho,u,lr\n";
        for (std::size_t i = 0; i < sol.u.values.size(); ++i)
            out += csv_row({static_cast<double>(i), built.mesh->nodes[i], sol.u[i],
                            sol.lr_field[i]});
        emit.write("solution.csv", out);
        emit.write("coefficient.csv", coefficient_plot_csv(built.coeff));
        nlohmann::json meta = {{"iterations", sol.iterations},
                               {"residual", sol.residual},
                               {"converged", sol.converged}};
        emit.write("solve.json", meta.dump(2) + "\n");
        if (!sol.converged) throw std::runtime_error("stationary iteration did not converge");
    } else if (cfg.task == "rd-enumerate") {
        auto en = enumerate_rd_solutions(problem);
        std::string out =
            "# bifurcation roots of mu a(mu) = c at r = d; columns "
            "index,mu,bracket_lo,bracket_hi,max_u\nindex,mu,bracket_lo,bracket_hi,max_u\n";
        for (std::size_t i = 0; i < en.roots.size(); ++i)
            out += csv_row({static_cast<double>(i), en.roots[i].mu, en.roots[i].bracket_lo,
                            en.roots[i].bracket_hi, max_abs(en.roots[i].u_d)});
        emit.write("roots.csv", out);
        emit.write("coefficient.csv", coefficient_plot_csv(built.coeff));
        nlohmann::json meta = {{"c", en.c}, {"mu_max", en.mu_max},
                               {"grid_points", en.grid_points},
                               {"root_count", en.roots.size()}};
        emit.write("enumeration.json", meta.dump(2) + "\n");
    } else if (cfg.task == "multi-solution") {
        if (built.thresholds.empty())
            throw ValidationError(
                "multi-solution task requires the paper-example coefficient");
        auto res = multi_solution_search(problem, built.thresholds, cfg.damping, cfg.tol,
                                         cfg.max_iter);
        std::vector<std::pair<double, const Field*>> groups;
        for (std::size_t k = 0; k < res.solutions.size(); ++k)
            groups.emplace_back(static_cast<double>(k), &res.solutions[k].u);
        emit.write("solutions.csv",
                   field_csv("distinct stationary solutions; columns solution,node,rho,u",
                             "solution,node,rho,u", groups));
        std::string iv =
            "# threshold interval checks; columns pair,inclusion_holds,extremum_holds,"
            "confirmed\npair,inclusion_holds,extremum_holds,confirmed\n";
        for (std::size_t k = 0; k < res.checks.size(); ++k)
            iv += csv_row({static_cast<double>(res.checks[k].pair_index),
                           res.checks[k].inclusion_holds ? 1.0 : 0.0,
                           res.checks[k].extremum_holds ? 1.0 : 0.0,
                           k < res.range_confirmed.size() && res.range_confirmed[k] ? 1.0 : 0.0});
        emit.write("intervals.csv", iv);
        emit.write("coefficient.csv", coefficient_plot_csv(built.coeff));
    } else if (cfg.task == "branch") {
        BranchOptions opts;
        opts.tol = cfg.tol;
        opts.damping = cfg.damping;
        opts.max_iter = cfg.max_iter;
        auto branch = trace_branch(problem, uniform_r_grid(cfg.d, cfg.r_grid), opts);
        std::string out =
            "# solution branch r -> u_r with stability margin; columns "
            "r,node,rho,u,min_rayleigh\nr,node,rho,u,min_rayleigh\n";
        for (const auto& entry : branch.entries) {
            double margin = std::numeric_limits<double>::quiet_NaN();
            if (entry.solution.converged)
                margin = stability_margin(entry.solution, problem).min_rayleigh;
            for (std::size_t i = 0; i < entry.solution.u.values.size(); ++i)
                out += csv_row({entry.r, static_cast<double>(i), built.mesh->nodes[i],
                                entry.solution.u[i], margin});
        }
        emit.write("branch.csv", out);
        nlohmann::json meta = {{"endpoint_r0_distance", branch.endpoint_r0_distance},
                               {"endpoint_rd_distance", branch.endpoint_rd_distance},
                               {"mu_d", branch.mu_d},
                               {"all_converged", branch.all_converged}};
        emit.write("branch.json", meta.dump(2) + "\n");
        if (!branch.all_converged)
            throw std::runtime_error("branch tracing did not converge at every radius");
    } else if (cfg.task == "stability") {
        auto sol = picard_stationary(problem, built.u0, cfg.damping, cfg.tol, cfg.max_iter);
        if (!sol.converged) throw std::runtime_error("stationary iteration did not converge");
        emit.write("stability.json", report_json(stability_margin(sol, problem)).dump(2) + "\n");
    } else if (cfg.task == "integrate") {
        IntegrateOptions opts;
        opts.monitors = {Monitor::energy};
        opts.store_every = cfg.store_every == 0 ? 1 : cfg.store_every;
        auto series = integrate(problem, cfg.t_end, cfg.dt, opts);
        std::string out = "# time series; columns t,node,rho,u\nt,node,rho,u\n";
        // Recover the step index of each stored state (stride plus forced
        // endpoints, mirroring integrate's storage rule).
        std::vector<std::size_t> stored;
        const std::size_t last = series.times.size() - 1;
        for (std::size_t s = 0; s <= last; ++s)
            if (s % opts.store_every == 0 || s == last) stored.push_back(s);
        for (std::size_t k = 0; k < series.states.size(); ++k) {
            const double t = series.times[stored[k]];
            for (std::size_t i = 0; i < series.states[k].values.size(); ++i)
                out += csv_row({t, static_cast<double>(i), built.mesh->nodes[i],
                                series.states[k][i]});
        }
        emit.write("timeseries.csv", out);
        std::string en = "# discrete energy trace; columns t,l2_sq,v_sq,dual_f_sq\n"
                         "t,l2_sq,v_sq,dual_f_sq\n";
        for (const auto& er : series.energy_trace)
            en += csv_row({er.t, er.l2_sq, er.v_sq, er.dual_f_sq});
        emit.write("energy.csv", en);
        std::string mon;
        for (const auto& ev : series.monitor_log) {
            nlohmann::json j = {{"step", ev.step},
                                {"monitor", ev.monitor},
                                {"magnitude", ev.magnitude}};
            mon += j.dump() + "\n";
        }
        emit.write("monitors.jsonl", mon);
    } else {  // estimates
        ConstantsTable table = poincare_constants(*built.mesh);
        double K = cfg.transfer_K;
        if (K <= 0.0) {
            Rng rng(cfg.seed);
            K = fit_gradient_transfer_constant(problem, 64, rng);
        }
        auto absorbing = absorbing_radius(problem, cfg.rho0, cfg.t0, K);
        auto moser = moser_bounds(cfg.n, cfg.p, 1.0, 30, 1.0, norm_l2(built.f), 1.0);
        nlohmann::json j = {
            {"a1", absorbing.a1},       {"a2", absorbing.a2},
            {"a3", absorbing.a3},       {"t0", absorbing.t0},
            {"rho0", absorbing.rho0},   {"radius", absorbing.radius},
            {"lambda", absorbing.lambda},
            {"K", absorbing.K},         {"C1", table.C1},
            {"omega_n", table.omega_n}, {"sigma", moser.sigma_values.front()},
            {"theta", moser.theta},     {"lambda1", moser.lambda1},
            {"lambda2", moser.lambda2},
        };
        emit.write("constants.json", j.dump(2) + "\n");
    }
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& config) {
    RunManifest manifest;
    manifest.config_echo = config.echo();
    manifest.version = version_string();

    std::filesystem::path outdir = config.output_dir;
    if (const char* env = std::getenv("NLR_OUTPUT_DIR")) outdir = env;
    Emitter emit(outdir);

    const auto start = std::chrono::steady_clock::now();
    try {
        run_task(config, emit);
    } catch (const std::exception& e) {
        manifest.ok = false;
        manifest.error = e.what();
    }
    manifest.wall_seconds[config.task] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.files = emit.files();

    nlohmann::json j;
    j["config"] = manifest.config_echo;
    j["version"] = manifest.version;
    // wall time excluded from the serialized manifest so that reruns are
    // byte-identical; it stays available on the returned struct.
    j["ok"] = manifest.ok;
    j["error"] = manifest.error;
    auto files = nlohmann::json::array();
    for (const auto& f : manifest.files) files.push_back({{"name", f.name}, {"digest", f.digest}});
    j["files"] = files;
    std::ofstream out(outdir / "manifest.json", std::ios::binary);
    out << j.dump(2) << "\n";
    return manifest;
}

}  // namespace nlr
