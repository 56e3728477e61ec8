#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "drm/calibration.hpp"
#include "drm/classical_bounds.hpp"
#include "drm/data_io.hpp"
#include "drm/dd_solver.hpp"
#include "drm/errors.hpp"
#include "drm/parallel.hpp"
#include "drm/primal_oracle.hpp"
#include "drm/spherical_solver.hpp"

namespace drm::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kMethodTolerance = 1e-3;

struct Globals {
    bool json = false;
    std::size_t jobs = 0;
    std::string grid;
    unsigned long long seed = 20240601ULL;
};

struct ProblemArgs {
    std::string kind;
    std::string data;
    std::optional<double> tau;
    std::optional<double> tau_quantile;
    std::optional<double> mu;
    std::optional<double> sigma;
    std::string method = "dd";
    bool sqrt = false;
};

struct DeltaArgs {
    std::optional<double> delta;
    std::optional<double> beta;
    std::optional<double> r;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& p) {
    cmd->add_option("--kind", p.kind, "LZPM, UZPM, LFPM, UFPM, LSPM or USPM")->required();
    cmd->add_option("--data", p.data, "CSV file with one numeric column")->required();
    auto* tau = cmd->add_option("--tau", p.tau, "threshold");
    auto* tq = cmd->add_option("--tau-quantile", p.tau_quantile, "threshold as a sample quantile level in [0,1]");
    tau->excludes(tq);
    cmd->add_option("--mu", p.mu, "override the sample mean");
    cmd->add_option("--sigma", p.sigma, "override the sample standard deviation");
    cmd->add_option("--method", p.method, "dd, sm or both")->check(CLI::IsMember({"dd", "sm", "both"}));
    cmd->add_flag("--sqrt", p.sqrt, "report the square root (semideviation) for second moments");
}

ProblemSpec make_problem(const ProblemArgs& a, double delta, const EmpiricalSample& sample) {
    const CostKind kind = parse_cost_kind(a.kind);
    if (a.tau.has_value() == a.tau_quantile.has_value()) throw UsageError("give exactly one of --tau / --tau-quantile");
    const double tau = a.tau ? *a.tau : quantile(sample, *a.tau_quantile);
    const MomentSpec base = sample.moments();
    const MomentSpec moments(a.mu.value_or(base.mu()), a.sigma.value_or(base.sigma()));
    return ProblemSpec(kind, tau, moments, sample, delta);
}

double resolve_delta(const DeltaArgs& d, const EmpiricalSample& sample) {
    if (d.delta.has_value() == d.beta.has_value()) throw UsageError("give exactly one of --delta / --beta");
    if (d.delta) return *d.delta;
    if (d.r && !d.beta) throw UsageError("--r needs --beta");
    const double r = d.r.value_or(support_radius(sample));
    return confidence_to_delta(sample.size(), r, *d.beta);
}

GridSpec parse_grid(const Globals& g) {
    GridSpec grid;
    grid.jobs = g.jobs;
    if (g.grid.empty()) return grid;
    const auto x = g.grid.find_first_of("xX");
    try {
        if (x == std::string::npos) throw std::invalid_argument("missing x");
        std::size_t used = 0;
        const auto t = std::stoul(g.grid.substr(0, x), &used);
        const auto p = std::stoul(g.grid.substr(x + 1));
        if (t == 0 || p == 0) throw std::invalid_argument("zero");
        grid.theta_count = t;
        grid.phi_count = p;
    } catch (const std::exception&) {
        throw UsageError("--grid expects TxP, e.g. 750x750");
    }
    return grid;
}

double report_scale(CostKind kind, bool sqrt_mode, double v) {
    if (sqrt_mode && moment_order(kind) == 2) return std::sqrt(std::max(v, 0.0));
    return v;
}

struct Evaluation {
    double bound = 0.0;
    std::optional<double> dd;
    std::optional<double> sm;
};

Evaluation evaluate(const ProblemSpec& spec, const std::string& method, const Globals& g, std::size_t sm_jobs) {
    Evaluation e;
    if (method == "dd" || method == "both") e.dd = solve_dd(spec).value;
    if (method == "sm" || method == "both") {
        GridSpec grid = parse_grid(g);
        grid.jobs = sm_jobs;
        e.sm = solve_sm(spec, grid).value;
    }
    e.bound = e.dd ? *e.dd : *e.sm;
    return e;
}

class MethodMismatch : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

void check_agreement(const Evaluation& e, const ProblemSpec& spec, std::ostream& err) {
    if (!e.dd || !e.sm) return;
    if (std::abs(*e.dd - *e.sm) > kMethodTolerance) {
        err << std::setprecision(12) << "method disagreement: dd=" << *e.dd << " sm=" << *e.sm
            << " |diff|=" << std::abs(*e.dd - *e.sm) << " kind=" << to_string(spec.kind) << " tau=" << spec.tau
            << " delta=" << spec.delta << " mu=" << spec.moments.mu() << " sigma=" << spec.moments.sigma()
            << " n=" << spec.sample.size() << '\n';
        throw MethodMismatch("dd and sm disagree beyond tolerance");
    }
}

json problem_json(const ProblemSpec& spec, const std::string& data) {
    return json{{"kind", std::string(to_string(spec.kind))},
                {"tau", spec.tau},
                {"mu", spec.moments.mu()},
                {"sigma", spec.moments.sigma()},
                {"n", spec.sample.size()},
                {"data", data}};
}

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int cmd_bound(const Globals& g, const ProblemArgs& pa, const DeltaArgs& da, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    const EmpiricalSample sample = load_series_csv(pa.data);
    const double delta = resolve_delta(da, sample);
    const ProblemSpec spec = make_problem(pa, delta, sample);
    const Evaluation e = evaluate(spec, pa.method, g, g.jobs);
    check_agreement(e, spec, err);
    const double classical = classical_bound(spec.kind, spec.moments, spec.tau);
    const double empirical = empirical_cost(spec.kind, spec.tau, spec.sample);
    const double ms = elapsed_ms(t0);

    auto scaled = [&](double v) { return report_scale(spec.kind, pa.sqrt, v); };
    if (g.json) {
        json j{{"problem", problem_json(spec, pa.data)},
               {"delta", delta},
               {"bound", scaled(e.bound)},
               {"classical", scaled(classical)},
               {"empirical", scaled(empirical)},
               {"method", pa.method},
               {"runtime_ms", ms}};
        if (e.dd) j["dd"] = scaled(*e.dd);
        if (e.sm) j["sm"] = scaled(*e.sm);
        if (pa.sqrt && moment_order(spec.kind) == 2) j["scale"] = "sqrt";
        out << j.dump() << '\n';
        return kOk;
    }
    out << std::setprecision(10);
    out << "kind       " << to_string(spec.kind) << '\n'
        << "tau        " << spec.tau << '\n'
        << "mu         " << spec.moments.mu() << '\n'
        << "sigma      " << spec.moments.sigma() << '\n'
        << "n          " << spec.sample.size() << '\n'
        << "delta      " << delta << '\n';
    if (e.dd) out << "dd         " << scaled(*e.dd) << '\n';
    if (e.sm) out << "sm         " << scaled(*e.sm) << '\n';
    out << "bound      " << scaled(e.bound) << '\n'
        << "classical  " << scaled(classical) << '\n'
        << "empirical  " << scaled(empirical) << '\n'
        << "runtime_ms " << ms << '\n';
    return kOk;
}

std::vector<double> parse_delta_grid(const std::vector<double>& list, const std::string& range) {
    std::vector<double> deltas = list;
    if (!range.empty()) {
        double lo = 0, hi = 0;
        long count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(range);
        if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1 || hi < lo) {
            throw UsageError("--delta-range expects lo:hi:count with lo <= hi and count >= 1");
        }
        for (long k = 0; k < count; ++k) {
            deltas.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
        }
    }
    if (deltas.empty()) throw UsageError("the delta grid is empty");
    std::sort(deltas.begin(), deltas.end());
    return deltas;
}

int cmd_trajectory(const Globals& g, const ProblemArgs& pa, const std::vector<double>& deltas_in,
                   const std::string& range, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    const std::vector<double> deltas = parse_delta_grid(deltas_in, range);
    const EmpiricalSample sample = load_series_csv(pa.data);
    const ProblemSpec first = make_problem(pa, deltas.front(), sample);
    const double classical = classical_bound(first.kind, first.moments, first.tau);

    struct Slot {
        std::optional<Evaluation> eval;
        std::exception_ptr error;
    };
    std::vector<Slot> slots(deltas.size());
    const std::size_t jobs = g.jobs ? g.jobs : default_jobs();
    parallel_for(deltas.size(), jobs, [&](std::size_t k) {
        try {
            const ProblemSpec spec = make_problem(pa, deltas[k], sample);
            slots[k].eval = evaluate(spec, pa.method, g, 1);
        } catch (...) {
            slots[k].error = std::current_exception();
        }
    });

    auto scaled = [&](double v) { return report_scale(first.kind, pa.sqrt, v); };
    json rows = json::array();
    if (!g.json) out << "delta,bound,classical,method\n" << std::setprecision(12);
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        if (slots[k].error) {
            if (g.json) {
                out << json{{"problem", problem_json(first, pa.data)}, {"rows", rows}, {"complete", false}}.dump()
                    << '\n';
            }
            out.flush();
            std::rethrow_exception(slots[k].error);
        }
        const Evaluation& e = *slots[k].eval;
        check_agreement(e, make_problem(pa, deltas[k], sample), err);
        if (g.json) {
            json row{{"delta", deltas[k]}, {"bound", scaled(e.bound)}, {"classical", scaled(classical)},
                     {"method", pa.method}};
            if (e.dd) row["dd"] = scaled(*e.dd);
            if (e.sm) row["sm"] = scaled(*e.sm);
            rows.push_back(row);
        } else {
            out << deltas[k] << ',' << scaled(e.bound) << ',' << scaled(classical) << ',' << pa.method << '\n';
        }
    }
    if (g.json) {
        out << json{{"problem", problem_json(first, pa.data)},
                    {"rows", rows},
                    {"complete", true},
                    {"method", pa.method},
                    {"runtime_ms", elapsed_ms(t0)}}
                   .dump()
            << '\n';
    }
    return kOk;
}

int cmd_classical(const Globals& g, const std::string& kind_text, double mu, double sigma, double tau, bool sqrt_mode,
                  std::ostream& out) {
    const CostKind kind = parse_cost_kind(kind_text);
    const double v = report_scale(kind, sqrt_mode, classical_bound(kind, MomentSpec(mu, sigma), tau));
    if (g.json) {
        out << json{{"problem", {{"kind", std::string(to_string(kind))}, {"mu", mu}, {"sigma", sigma}, {"tau", tau}}},
                    {"classical", v}}
                   .dump()
            << '\n';
    } else {
        out << std::setprecision(10) << v << '\n';
    }
    return kOk;
}

int cmd_calibrate(const Globals& g, std::optional<std::size_t> n, std::optional<double> r, std::optional<double> beta,
                  std::optional<double> delta, const std::string& data, std::ostream& out) {
    if (!data.empty()) {
        const EmpiricalSample s = load_series_csv(data);
        if (!n) n = s.size();
        if (!r) r = support_radius(s);
    }
    if (!n || !r) throw UsageError("calibrate needs --n and --r (or --data)");
    if (beta.has_value() == delta.has_value()) throw UsageError("give exactly one of --beta / --delta");
    json j{{"n", *n}, {"r", *r}};
    if (beta) {
        const double d = confidence_to_delta(*n, *r, *beta);
        j["beta"] = *beta;
        j["delta"] = d;
        if (!g.json) out << std::setprecision(10) << d << '\n';
    } else {
        const double a = delta_to_alpha(*n, *r, *delta);
        j["delta"] = *delta;
        j["alpha"] = a;
        if (!g.json) out << std::setprecision(10) << a << '\n';
    }
    if (g.json) out << j.dump() << '\n';
    return kOk;
}

int cmd_wasserstein(const Globals& g, const std::string& a, const std::string& b, std::ostream& out) {
    const double w = w2_empirical(load_series_csv(a), load_series_csv(b));
    if (g.json) out << json{{"w2", w}, {"w2_squared", w * w}}.dump() << '\n';
    else out << std::setprecision(12) << w << '\n';
    return kOk;
}

int cmd_oracle(const Globals& g, const ProblemArgs& pa, const DeltaArgs& da, std::size_t grid_points,
               std::optional<double> step, std::size_t probes, std::ostream& out) {
    const auto t0 = Clock::now();
    const EmpiricalSample sample = load_series_csv(pa.data);
    const ProblemSpec spec = make_problem(pa, resolve_delta(da, sample), sample);
    const SupportGrid grid = step ? SupportGrid::uniform(spec.sample.min() - 3.0 * spec.moments.sigma(),
                                                         spec.sample.max() + 3.0 * spec.moments.sigma(), *step)
                                  : SupportGrid::for_problem(spec, grid_points);
    const PrimalLpResult lp = primal_lp_bound(spec, grid);
    const double dual_lattice = dual_grid_oracle(spec);
    const double dd = solve_dd(spec).value;

    std::optional<double> probe_min;
    if (probes > 0) {
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double floor = xi_threshold(spec.kind);
        for (std::size_t k = 0; k < probes; ++k) {
            const double l1 = std::exp(-8.0 + 12.0 * unit(rng));
            const double l2 = (unit(rng) - 0.5) * 2.0 * std::exp(-6.0 + 10.0 * unit(rng));
            const double xi = floor + std::exp(-8.0 + 12.0 * unit(rng));
            const ExtendedReal v = dual_value(spec.kind, DualPoint{l1, l2, xi - l1}, spec);
            if (v.is_finite()) probe_min = std::min(probe_min.value_or(v.value()), v.value());
        }
    }

    const double ms = elapsed_ms(t0);
    if (g.json) {
        json j{{"problem", problem_json(spec, pa.data)},
               {"delta", spec.delta},
               {"primal_lp", lp.value},
               {"grid_size", lp.grid_size},
               {"dd", dd},
               {"dual_lattice", dual_lattice},
               {"runtime_ms", ms}};
        if (probe_min) j["probe_min"] = *probe_min;
        out << j.dump() << '\n';
        return kOk;
    }
    out << std::setprecision(10) << "primal_lp    " << lp.value << "  (grid " << lp.grid_size << ")\n"
        << "dd           " << dd << '\n'
        << "dual_lattice " << dual_lattice << '\n';
    if (probe_min) out << "probe_min    " << *probe_min << '\n';
    out << "runtime_ms   " << ms << '\n';
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Worst-case partial moments over Wasserstein balls with fixed mean and variance"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_option("--jobs", g.jobs, "worker threads (default: hardware concurrency)");
    app.add_option("--grid", g.grid, "angular grid TxP for the spherical method");
    app.add_option("--seed", g.seed, "random seed for probes");

    ProblemArgs bound_p;
    DeltaArgs bound_d;
    auto* bound = app.add_subcommand("bound", "robust bound for one delta");
    add_problem_options(bound, bound_p);
    bound->add_option("--delta", bound_d.delta, "squared-distance radius");
    bound->add_option("--beta", bound_d.beta, "confidence level; delta is calibrated");
    bound->add_option("--r", bound_d.r, "support radius used with --beta (default: max |x - mean|)");

    ProblemArgs traj_p;
    std::vector<double> traj_list;
    std::string traj_range;
    auto* traj = app.add_subcommand("trajectory", "robust bound over a delta grid");
    add_problem_options(traj, traj_p);
    traj->add_option("--deltas", traj_list, "comma-separated delta values")->delimiter(',');
    traj->add_option("--delta-range", traj_range, "lo:hi:count, evenly spaced");

    std::string cl_kind;
    double cl_mu = 0, cl_sigma = 0, cl_tau = 0;
    bool cl_sqrt = false;
    auto* classical = app.add_subcommand("classical", "moment-only bound");
    classical->add_option("--kind", cl_kind)->required();
    classical->add_option("--mu", cl_mu)->required();
    classical->add_option("--sigma", cl_sigma)->required();
    classical->add_option("--tau", cl_tau)->required();
    classical->add_flag("--sqrt", cl_sqrt);

    std::optional<std::size_t> cal_n;
    std::optional<double> cal_r, cal_beta, cal_delta;
    std::string cal_data;
    auto* calibrate = app.add_subcommand("calibrate", "confidence level <-> delta");
    calibrate->add_option("--n", cal_n, "sample size");
    calibrate->add_option("--r", cal_r, "support radius");
    calibrate->add_option("--beta", cal_beta, "confidence level");
    calibrate->add_option("--delta", cal_delta, "radius; prints the tail probability");
    calibrate->add_option("--data", cal_data, "take n and r from a series file");

    std::string w_a, w_b;
    auto* wasserstein = app.add_subcommand("wasserstein", "W2 between two equal-size samples");
    wasserstein->add_option("a", w_a)->required();
    wasserstein->add_option("b", w_b)->required();

    ProblemArgs or_p;
    DeltaArgs or_d;
    std::size_t or_points = 600;
    std::optional<double> or_step;
    std::size_t or_probes = 0;
    auto* oracle = app.add_subcommand("oracle", "primal LP and dual lattice cross-checks");
    add_problem_options(oracle, or_p);
    oracle->add_option("--delta", or_d.delta);
    oracle->add_option("--beta", or_d.beta);
    oracle->add_option("--r", or_d.r);
    oracle->add_option("--grid-points", or_points, "uniform support points");
    oracle->add_option("--step", or_step, "uniform support spacing (overrides --grid-points)");
    oracle->add_option("--probes", or_probes, "random dual evaluations (uses --seed)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    try {
        if (*bound) return cmd_bound(g, bound_p, bound_d, out, err);
        if (*traj) return cmd_trajectory(g, traj_p, traj_list, traj_range, out, err);
        if (*classical) return cmd_classical(g, cl_kind, cl_mu, cl_sigma, cl_tau, cl_sqrt, out);
        if (*calibrate) return cmd_calibrate(g, cal_n, cal_r, cal_beta, cal_delta, cal_data, out);
        if (*wasserstein) return cmd_wasserstein(g, w_a, w_b, out);
        if (*oracle) return cmd_oracle(g, or_p, or_d, or_points, or_step, or_probes, out);
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace drm::cli
