#include "drm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drm/errors.hpp"

namespace drm {

namespace {

// Revised simplex on [A | slacks | artificials] with an explicit basis inverse,
// rebuilt from the original columns every `kRefactor` pivots.
class Revised {
public:
    static constexpr std::size_t kRefactor = 64;

    Revised(const LinearProgram& lp, const SimplexOptions& opt) : opt_(opt) {
        nv_ = lp.objective.size();
        m_ = lp.rows.size();
        std::size_t ns = 0;
        for (const LpRow& r : lp.rows) ns += r.sense == RowSense::LessEqual;
        slack0_ = nv_;
        art0_ = nv_ + ns;
        ncols_ = art0_ + m_;
        a_.assign(m_ * nv_, 0.0);
        b_.assign(m_, 0.0);
        slack_row_.assign(ns, 0);
        slack_sign_.assign(ns, 1.0);
        std::size_t s = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const LpRow& r = lp.rows[i];
            if (r.coeffs.size() != nv_) throw DomainError("solve_lp: row length differs from variable count");
            double scale = 0.0;
            for (double v : r.coeffs) scale = std::max(scale, std::abs(v));
            if (scale == 0.0) scale = 1.0;
            const double f = (r.rhs < 0.0 ? -1.0 : 1.0) / scale;
            for (std::size_t j = 0; j < nv_; ++j) a_[i * nv_ + j] = f * r.coeffs[j];
            b_[i] = f * r.rhs;
            if (r.sense == RowSense::LessEqual) {
                slack_row_[s] = i;
                slack_sign_[s] = f > 0.0 ? 1.0 : -1.0;
                ++s;
            }
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = art0_ + i;
        is_basic_.assign(ncols_, false);
        for (std::size_t i = 0; i < m_; ++i) is_basic_[art0_ + i] = true;
        allowed_.assign(ncols_, true);
        refactor();
    }

    // column j of the constraint matrix, scattered into out (length m)
    void column(std::size_t j, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (j < nv_) {
            for (std::size_t i = 0; i < m_; ++i) out[i] = a_[i * nv_ + j];
        } else if (j < art0_) {
            out[slack_row_[j - slack0_]] = slack_sign_[j - slack0_];
        } else {
            out[j - art0_] = 1.0;
        }
    }

    double dot_column(const std::vector<double>& y, std::size_t j) const {
        if (j < nv_) {
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) s += y[i] * a_[i * nv_ + j];
            return s;
        }
        if (j < art0_) return y[slack_row_[j - slack0_]] * slack_sign_[j - slack0_];
        return y[j - art0_];
    }

    void refactor() {
        // Gauss-Jordan on [B | I]
        std::vector<double> work(m_ * 2 * m_, 0.0);
        std::vector<double> col(m_);
        const std::size_t w = 2 * m_;
        for (std::size_t k = 0; k < m_; ++k) {
            column(basis_[k], col);
            for (std::size_t i = 0; i < m_; ++i) work[i * w + k] = col[i];
            work[k * w + m_ + k] = 1.0;
        }
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t piv = c;
            for (std::size_t i = c + 1; i < m_; ++i) {
                if (std::abs(work[i * w + c]) > std::abs(work[piv * w + c])) piv = i;
            }
            if (work[piv * w + c] == 0.0) throw SolverFailure("simplex basis became singular");
            if (piv != c) {
                for (std::size_t j = 0; j < w; ++j) std::swap(work[piv * w + j], work[c * w + j]);
            }
            const double inv = 1.0 / work[c * w + c];
            for (std::size_t j = 0; j < w; ++j) work[c * w + j] *= inv;
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == c) continue;
                const double f = work[i * w + c];
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < w; ++j) work[i * w + j] -= f * work[c * w + j];
            }
        }
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < m_; ++j) binv_[i * m_ + j] = work[i * w + m_ + j];
        }
        xb_.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m_; ++j) s += binv_[i * m_ + j] * b_[j];
            xb_[i] = s;
        }
        since_refactor_ = 0;
    }

    LpStatus optimise(const std::vector<double>& c, std::size_t& pivots) {
        std::vector<double> y(m_), u(m_), col(m_);
        while (true) {
            for (std::size_t j = 0; j < m_; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < m_; ++i) s += c[basis_[i]] * binv_[i * m_ + j];
                y[j] = s;
            }
            std::size_t enter = ncols_;
            for (std::size_t j = 0; j < ncols_; ++j) {
                if (!allowed_[j] || is_basic_[j]) continue;
                if (c[j] - dot_column(y, j) > opt_.optimality_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols_) return LpStatus::Optimal;

            column(enter, col);
            for (std::size_t i = 0; i < m_; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k < m_; ++k) s += binv_[i * m_ + k] * col[k];
                u[i] = s;
            }
            // pivots small relative to the column are rounding noise and would make the basis singular
            double umax = 0.0;
            for (double v : u) umax = std::max(umax, std::abs(v));
            const double tol = opt_.pivot_tol * std::max(1.0, umax);
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (u[i] <= tol) continue;
                const double ratio = std::max(xb_[i], 0.0) / u[i];
                const double eps = 1e-12 * std::max(1.0, ratio);
                if (leave == m_ || ratio < best - eps) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + eps && basis_[i] < basis_[leave]) {
                    leave = i;
                }
            }
            if (leave == m_) return LpStatus::Unbounded;
            if (pivots >= opt_.max_pivots) return LpStatus::IterationLimit;
            pivot(leave, enter, u, best);
            ++pivots;
        }
    }

    void pivot(std::size_t r, std::size_t enter, const std::vector<double>& u, double step) {
        for (std::size_t i = 0; i < m_; ++i) xb_[i] -= step * u[i];
        xb_[r] = step;
        const double inv = 1.0 / u[r];
        for (std::size_t j = 0; j < m_; ++j) binv_[r * m_ + j] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || u[i] == 0.0) continue;
            for (std::size_t j = 0; j < m_; ++j) binv_[i * m_ + j] -= u[i] * binv_[r * m_ + j];
        }
        is_basic_[basis_[r]] = false;
        is_basic_[enter] = true;
        basis_[r] = enter;
        if (++since_refactor_ >= kRefactor) refactor();
    }

    // swaps basic artificials for structural columns where possible
    void purge_artificials(std::size_t& pivots) {
        std::vector<double> col(m_), u(m_);
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < art0_) continue;
            for (std::size_t j = 0; j < art0_; ++j) {
                if (is_basic_[j]) continue;
                double ur = 0.0;
                column(j, col);
                for (std::size_t k = 0; k < m_; ++k) ur += binv_[r * m_ + k] * col[k];
                if (std::abs(ur) <= 1e-9) continue;
                for (std::size_t i = 0; i < m_; ++i) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < m_; ++k) s += binv_[i * m_ + k] * col[k];
                    u[i] = s;
                }
                pivot(r, j, u, xb_[r] / u[r]);
                ++pivots;
                break;
            }
        }
        refactor();
    }

    double artificial_mass() const {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= art0_) s += std::abs(xb_[i]);
        }
        return s;
    }

    std::size_t nv_ = 0, m_ = 0, slack0_ = 0, art0_ = 0, ncols_ = 0;
    std::vector<double> a_, b_;
    std::vector<std::size_t> slack_row_;
    std::vector<double> slack_sign_;
    std::vector<std::size_t> basis_;
    std::vector<bool> is_basic_, allowed_;
    std::vector<double> binv_, xb_;
    std::size_t since_refactor_ = 0;
    SimplexOptions opt_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt) {
    Revised rs(lp, opt);
    LpSolution out;

    std::vector<double> phase1(rs.ncols_, 0.0);
    for (std::size_t i = 0; i < rs.m_; ++i) phase1[rs.art0_ + i] = -1.0;
    LpStatus st = rs.optimise(phase1, out.pivots);
    if (st == LpStatus::IterationLimit) {
        out.status = st;
        return out;
    }
    rs.refactor();
    if (rs.artificial_mass() > opt.feasibility_tol) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    rs.purge_artificials(out.pivots);
    for (std::size_t j = rs.art0_; j < rs.ncols_; ++j) rs.allowed_[j] = false;

    std::vector<double> phase2(rs.ncols_, 0.0);
    std::copy(lp.objective.begin(), lp.objective.end(), phase2.begin());
    st = rs.optimise(phase2, out.pivots);
    out.status = st;
    if (st != LpStatus::Optimal) return out;
    rs.refactor();

    out.x.assign(rs.nv_, 0.0);
    for (std::size_t i = 0; i < rs.m_; ++i) {
        if (rs.basis_[i] < rs.nv_) out.x[rs.basis_[i]] = std::max(rs.xb_[i], 0.0);
    }
    double v = 0.0;
    for (std::size_t j = 0; j < rs.nv_; ++j) v += lp.objective[j] * out.x[j];
    out.value = v;
    return out;
}

}  // namespace drm
