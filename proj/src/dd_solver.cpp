#include "drm/dd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "drm/closed_form.hpp"
#include "drm/errors.hpp"

namespace drm {

std::vector<BreakLine> build_breaklines(CostKind kind, double xi, const EmpiricalSample& sample, double tau) {
    const BranchProfile profile(kind, xi, tau);
    std::vector<BreakLine> lines;
    lines.reserve(sample.size() * profile.knot_count());
    // the tau-anchored knot is the one nearest xi*tau
    std::size_t anchor = 0;
    if (profile.knot_count() == 2 && kind == CostKind::UZPM) anchor = 1;
    for (std::size_t j = 0; j < profile.knot_count(); ++j) {
        const LineFamily family = j == anchor ? LineFamily::U : LineFamily::L;
        for (std::size_t k = sample.size(); k-- > 0;) {
            lines.push_back({family, k + 1, 2.0 * sample[k], -2.0 * profile.knot(j)});
        }
    }
    return lines;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;  // lambda1
    double y = 0.0;  // lambda2
};

Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Sym2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
};

// Angular wedge (lo, hi) measured counter-clockwise; full == whole plane.
struct Sector {
    bool full = false;
    double lo = 0.0;
    double hi = 0.0;

    Vec2 bisector() const {
        const double m = full ? 0.0 : 0.5 * (lo + hi);
        return {std::cos(m), std::sin(m)};
    }
    bool strictly_contains(Vec2 v) const {
        if (full) return true;
        double phi = std::atan2(v.y, v.x);
        while (phi < lo) phi += kTwoPi;
        while (phi >= lo + kTwoPi) phi -= kTwoPi;
        constexpr double tol = 1e-12;
        return phi - lo > tol && hi - phi > tol;
    }
};

struct Move {
    Vec2 to;
    double value;
    double length;
};

class PlaneWalker {
public:
    PlaneWalker(const ProblemSpec& problem, double xi)
        : profile_(problem.kind, xi, problem.tau),
          x_(problem.sample.points().begin(), problem.sample.points().end()),
          inv_n_(1.0 / static_cast<double>(x_.size())),
          lin1_(problem.delta - problem.moments.second_moment()),
          lin2_(problem.moments.mu()),
          base_(xi * problem.moments.second_moment()) {
        double sq = 0.0;
        for (double x : x_) sq += x * x;
        lin1_ -= sq * inv_n_;
    }

    double value(Vec2 p) const {
        double h = 0.0;
        for (double x : x_) h += profile_(b_of(p, x));
        return lin1_ * p.x + lin2_ * p.y + base_ + inv_n_ * h;
    }

    double magnitude(Vec2 p) const {
        return std::abs(lin1_ * p.x) + std::abs(lin2_ * p.y) + std::abs(base_) + 1.0;
    }

    std::pair<Vec2, std::size_t> best_vertex() const {
        struct Line {
            double slope, intercept;
        };
        std::vector<Line> lines;
        for (double x : x_) {
            for (std::size_t j = 0; j < profile_.knot_count(); ++j) lines.push_back({2.0 * x, -2.0 * profile_.knot(j)});
        }
        Vec2 best{0.0, lines.empty() ? 0.0 : lines.front().intercept};
        double best_value = kInf;
        std::size_t count = 0;
        auto consider = [&](Vec2 p) {
            ++count;
            const double v = value(p);
            if (v < best_value) {
                best_value = v;
                best = p;
            }
        };
        for (const Line& l : lines) consider({0.0, l.intercept});
        for (std::size_t a = 0; a < lines.size(); ++a) {
            for (std::size_t b = a + 1; b < lines.size(); ++b) {
                const double ds = lines[a].slope - lines[b].slope;
                const double scale = std::max(std::abs(lines[a].slope), std::abs(lines[b].slope));
                if (std::abs(ds) <= 1e-12 * scale || ds == 0.0) continue;
                const double l1 = (lines[b].intercept - lines[a].intercept) / ds;
                if (!(l1 > 0.0)) continue;
                consider({l1, lines[a].slope * l1 + lines[a].intercept});
            }
        }
        return {best, count};
    }

    // One move of the walk; nullopt when no region or segment decreases F.
    std::optional<Move> step(Vec2 p, double fp) const {
        const Local local = analyze(p);
        const double ftol = 1e-13 * magnitude(p) + 1e-13 * std::abs(fp);

        std::optional<Move> best;
        auto offer = [&](const Move& m) {
            if (!(m.value < fp - ftol)) return;
            if (!best || m.value < best->value - ftol ||
                (std::abs(m.value - best->value) <= ftol && m.length < best->length)) {
                best = m;
            }
        };

        for (const Sector& s : local.sectors) {
            if (auto m = region_move(p, s)) offer(*m);
        }
        if (best) return best;
        for (Vec2 r : local.rays) {
            if (auto m = ray_move(p, r)) offer(*m);
        }
        return best;
    }

private:
    struct Local {
        std::vector<Vec2> rays;
        std::vector<Sector> sectors;
    };

    static double b_of(Vec2 p, double x) { return p.x * x - 0.5 * p.y; }

    double tolerance(Vec2 p, double x, double knot) const {
        return 1e-11 * std::max({std::abs(p.x * x) + 0.5 * std::abs(p.y), std::abs(knot), 1e-300});
    }

    Local analyze(Vec2 p) const {
        std::vector<double> angles;
        for (double x : x_) {
            const double b = b_of(p, x);
            for (std::size_t j = 0; j < profile_.knot_count(); ++j) {
                if (std::abs(b - profile_.knot(j)) <= tolerance(p, x, profile_.knot(j))) {
                    const double phi = std::atan2(2.0 * x, 1.0);
                    angles.push_back(phi);
                    if (p.x > 0.0) angles.push_back(phi > 0.0 ? phi - std::numbers::pi : phi + std::numbers::pi);
                }
            }
        }
        const bool boundary = p.x <= 0.0;
        if (boundary) {
            angles.push_back(std::numbers::pi / 2);
            angles.push_back(-std::numbers::pi / 2);
        }
        std::sort(angles.begin(), angles.end());
        std::vector<double> uniq;
        for (double a : angles) {
            if (uniq.empty() || a - uniq.back() > 1e-12) uniq.push_back(a);
        }
        if (uniq.size() > 1 && uniq.front() + kTwoPi - uniq.back() <= 1e-12) uniq.pop_back();

        Local out;
        for (double a : uniq) out.rays.push_back({std::cos(a), std::sin(a)});
        if (uniq.empty()) {
            out.sectors.push_back({true, 0.0, 0.0});
            return out;
        }
        for (std::size_t k = 0; k < uniq.size(); ++k) {
            const double lo = uniq[k];
            const double hi = k + 1 < uniq.size() ? uniq[k + 1] : uniq[0] + kTwoPi;
            Sector s{false, lo, hi};
            if (boundary && s.bisector().x <= 0.0) continue;
            out.sectors.push_back(s);
        }
        return out;
    }

    // Quadratic model of F on the cell entered from p along direction w:
    // Hessian and gradient at p.
    std::pair<Sym2, Vec2> model(Vec2 p, Vec2 w) const {
        Sym2 h;
        Vec2 g{lin1_, lin2_};
        for (double x : x_) {
            const double b = b_of(p, x);
            const double rate = w.x * x - 0.5 * w.y;
            std::size_t j = profile_.locate(b);
            for (std::size_t k = 0; k < profile_.knot_count(); ++k) {
                if (std::abs(b - profile_.knot(k)) <= tolerance(p, x, profile_.knot(k))) {
                    j = rate > 0.0 ? k + 1 : k;
                    break;
                }
            }
            const Quadratic& q = profile_.branch(j);
            const double c = 2.0 * q.c2 * inv_n_;
            h.a11 += c * x * x;
            h.a12 -= 0.5 * c * x;
            h.a22 += 0.25 * c;
            const double s = q.slope(b) * inv_n_;
            g.x += s * x;
            g.y -= 0.5 * s;
        }
        return {h, g};
    }

    // Largest t with p + t v inside the current cell (first knot or boundary hit).
    std::pair<double, bool> crossing(Vec2 p, Vec2 v) const {
        double t = kInf;
        bool hits_boundary = false;
        for (double x : x_) {
            const double rate = v.x * x - 0.5 * v.y;
            if (rate == 0.0) continue;
            const double b = b_of(p, x);
            for (std::size_t j = 0; j < profile_.knot_count(); ++j) {
                const double gap = profile_.knot(j) - b;
                const double tol = tolerance(p, x, profile_.knot(j));
                if ((rate > 0.0 && gap > tol) || (rate < 0.0 && gap < -tol)) t = std::min(t, gap / rate);
            }
        }
        if (v.x < 0.0) {
            const double tb = p.x > 0.0 ? -p.x / v.x : 0.0;
            if (tb <= t) {
                t = tb;
                hits_boundary = true;
            }
        }
        return {t, hits_boundary};
    }

    std::optional<Move> advance(Vec2 p, Vec2 v, double t_model) const {
        const auto [t_cross, boundary] = crossing(p, v);
        const double t = std::min(t_model, t_cross);
        if (!(t > 0.0)) return std::nullopt;
        if (std::isinf(t)) throw InfeasibleError("dual objective is unbounded below on the plane");
        Vec2 q = p + t * v;
        if (boundary && t == t_cross) q.x = 0.0;
        if (q.x < 0.0) q.x = 0.0;
        return Move{q, value(q), t * norm(v)};
    }

    std::optional<Move> region_move(Vec2 p, const Sector& s) const {
        const auto [h, g] = model(p, s.bisector());
        const double gnorm = norm(g);
        if (gnorm == 0.0) return std::nullopt;

        // eigen-decomposition of the 2x2 Hessian
        const double half_tr = 0.5 * (h.a11 + h.a22);
        const double rad = std::hypot(0.5 * (h.a11 - h.a22), h.a12);
        const double e1 = half_tr + rad;
        const double e2 = e1 > 0.0 ? (h.a11 * h.a22 - h.a12 * h.a12) / e1 : 0.0;
        Vec2 u1 = h.a12 != 0.0 ? Vec2{e1 - h.a22, h.a12} : (h.a11 >= h.a22 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
        u1 = (1.0 / norm(u1)) * u1;
        const Vec2 u2{-u1.y, u1.x};
        const double thr = 1e-12 * std::max(e1, 0.0);

        Vec2 newton{0.0, 0.0};
        Vec2 gnull{0.0, 0.0};
        const std::pair<double, Vec2> eig[2] = {{e1, u1}, {e2, u2}};
        for (const auto& [e, u] : eig) {
            const double c = dot(u, g);
            if (e > thr && e > 0.0) newton = newton + (-c / e) * u;
            else gnull = gnull + c * u;
        }

        std::vector<Vec2> candidates;
        candidates.push_back(norm(gnull) <= 1e-12 * gnorm ? newton : -1.0 * gnull);
        candidates.push_back(-1.0 * g);

        for (const Vec2& v : candidates) {
            if (norm(v) == 0.0 || !(dot(g, v) < 0.0) || !s.strictly_contains(v)) continue;
            const double curv = dot(v, h.apply(v));
            return advance(p, v, curv > 0.0 ? -dot(g, v) / curv : kInf);
        }
        return std::nullopt;
    }

    std::optional<Move> ray_move(Vec2 p, Vec2 r) const {
        const auto [h, g] = model(p, r);
        const double d = dot(g, r);
        if (!(d < 0.0)) return std::nullopt;
        const double curv = dot(r, h.apply(r));
        return advance(p, r, curv > 0.0 ? -d / curv : kInf);
    }

    BranchProfile profile_;
    std::vector<double> x_;
    double inv_n_;
    double lin1_;
    double lin2_;
    double base_;
};

}  // namespace

PlaneResult dd_minimize_plane(const ProblemSpec& problem, double xi, const PlaneOptions& options) {
    if (!xi_feasible(problem.kind, xi)) throw CurvatureError(problem.kind, xi);
    const PlaneWalker walker(problem, xi);
    const std::size_t n = problem.sample.size();
    const std::size_t budget = options.max_traversals ? options.max_traversals : 10 * (n * n + 2 * n);

    auto [p, vertices] = walker.best_vertex();
    double fp = walker.value(p);
    std::size_t moves = 0;
    while (true) {
        const auto m = walker.step(p, fp);
        if (!m) break;
        if (moves == budget) {
            throw SolverFailure("plane walk exceeded its traversal budget", p.x, p.y, fp);
        }
        p = m->to;
        fp = m->value;
        ++moves;
    }
    return {fp, p.x, p.y, moves, vertices};
}

namespace {

struct XiSearch {
    const ProblemSpec& problem;
    const DdOptions& options;
    std::size_t evaluations = 0;
    std::size_t traversals = 0;
    std::size_t max_traversals = 0;
    double best_xi = 0.0;
    PlaneResult best{kInf};

    double operator()(double xi) {
        const PlaneResult r = dd_minimize_plane(problem, xi, options.plane);
        ++evaluations;
        traversals += r.traversals;
        max_traversals = std::max(max_traversals, r.traversals);
        if (r.value < best.value) {
            best = r;
            best_xi = xi;
        }
        return r.value;
    }
};

}  // namespace

namespace {

BoundResult solve_dd_standard(const ProblemSpec& problem, const DdOptions& options) {
    XiSearch f{problem, options};
    const double floor = xi_threshold(problem.kind) + options.xi_offset;

    // expand until the objective turns upward
    double a = floor;
    double fa = f(a);
    double h = options.initial_step;
    double b = floor + h;
    double fb = f(b);
    double lo = a;
    double hi = b;
    if (fb < fa) {
        while (true) {
            h *= 2.0;
            const double c = floor + h;
            if (c > options.xi_ceiling) {
                // a bounded convex f is flat this far out; a sizeable drop over the last doubling is divergence
                if (fa - fb > 1e-3 * (1.0 + std::abs(fb))) throw InfeasibleError("dual objective diverges as xi grows");
                lo = a;
                hi = b;
                break;
            }
            const double fc = f(c);
            if (fc >= fb) {
                lo = a;
                hi = c;
                break;
            }
            a = b;
            fa = fb;
            b = c;
            fb = fc;
        }
    }

    // golden section on [lo, hi]
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > options.xi_rel_tol * (1.0 + std::abs(0.5 * (lo + hi)))) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }

    BoundResult out;
    out.value = f.best.value;
    out.xi_star = f.best_xi;
    out.argmin = DualPoint{f.best.lambda1, f.best.lambda2, f.best_xi - f.best.lambda1};
    out.method = Method::DD;
    out.iterations = f.evaluations;
    out.traversals = f.traversals;
    out.max_plane_traversals = f.max_traversals;
    return out;
}

}  // namespace

BoundResult solve_dd(const ProblemSpec& problem, const DdOptions& options) {
    const Standardization st = standardization_for(problem);
    BoundResult r = solve_dd_standard(standardize(problem, st), options);
    r.value *= st.value_scale();
    r.argmin = st.to_original(r.argmin);
    r.xi_star = r.argmin.xi();
    return r;
}

}  // namespace drm
