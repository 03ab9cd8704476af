#include "prodline/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace prodline {

namespace {

// Banded LU with partial pivoting, LAPACK-style column storage.
// Stores A(i,j) at ab[j*ldab + kl + ku + i - j]; the upper band widens to
// kl+ku during factorization.
struct BandLU {
    int n = 0, kl = 0, ku = 0, ldab = 0;
    std::vector<double> ab;
    std::vector<int> ipiv;

    double& at(int i, int j) { return ab[static_cast<std::size_t>(j) * ldab + kl + ku + i - j]; }

    void init(int n_, int kl_, int ku_) {
        n = n_;
        kl = kl_;
        ku = ku_;
        ldab = 2 * kl + ku + 1;
        ab.assign(static_cast<std::size_t>(ldab) * n, 0.0);
        ipiv.assign(n, 0);
    }

    bool factor() {
        for (int j = 0; j < n; ++j) {
            const int km = std::min(kl, n - 1 - j);
            int p = 0;
            double best = std::abs(at(j + 0, j));
            for (int q = 1; q <= km; ++q) {
                const double v = std::abs(at(j + q, j));
                if (v > best) {
                    best = v;
                    p = q;
                }
            }
            ipiv[j] = j + p;
            if (best == 0.0) return false;
            const int ju = std::min(j + ku + kl, n - 1);
            if (p != 0)
                for (int col = j; col <= ju; ++col) std::swap(at(j, col), at(j + p, col));
            const double piv = at(j, j);
            for (int q = 1; q <= km; ++q) {
                const double m = at(j + q, j) / piv;
                at(j + q, j) = m;
                if (m != 0.0)
                    for (int col = j + 1; col <= ju; ++col) at(j + q, col) -= m * at(j, col);
            }
        }
        return true;
    }

    void solve(std::vector<double>& b) const {
        for (int j = 0; j < n; ++j) {
            if (ipiv[j] != j) std::swap(b[j], b[ipiv[j]]);
            const int km = std::min(kl, n - 1 - j);
            const double bj = b[j];
            if (bj != 0.0)
                for (int q = 1; q <= km; ++q)
                    b[j + q] -= ab[static_cast<std::size_t>(j) * ldab + kl + ku + q] * bj;
        }
        for (int j = n - 1; j >= 0; --j) {
            b[j] /= ab[static_cast<std::size_t>(j) * ldab + kl + ku];
            const double bj = b[j];
            const int lo = std::max(0, j - (ku + kl));
            if (bj != 0.0)
                for (int i = lo; i < j; ++i)
                    b[i] -= ab[static_cast<std::size_t>(j) * ldab + kl + ku + i - j] * bj;
        }
    }
};

// Dense LU fallback for pathological basis orderings.
struct DenseLU {
    int n = 0;
    std::vector<double> a;
    std::vector<int> ipiv;

    void init_from(const std::vector<std::vector<std::pair<int, double>>>& cols) {
        n = static_cast<int>(cols.size());
        a.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int j = 0; j < n; ++j)
            for (auto [i, v] : cols[j]) a[static_cast<std::size_t>(i) * n + j] = v;
        ipiv.assign(n, 0);
    }

    bool factor() {
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(a[static_cast<std::size_t>(k) * n + k]);
            for (int i = k + 1; i < n; ++i) {
                const double v = std::abs(a[static_cast<std::size_t>(i) * n + k]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            ipiv[k] = p;
            if (best == 0.0) return false;
            if (p != k)
                for (int j = 0; j < n; ++j)
                    std::swap(a[static_cast<std::size_t>(k) * n + j],
                              a[static_cast<std::size_t>(p) * n + j]);
            const double piv = a[static_cast<std::size_t>(k) * n + k];
            for (int i = k + 1; i < n; ++i) {
                const double m = a[static_cast<std::size_t>(i) * n + k] / piv;
                a[static_cast<std::size_t>(i) * n + k] = m;
                if (m != 0.0)
                    for (int j = k + 1; j < n; ++j)
                        a[static_cast<std::size_t>(i) * n + j] -=
                            m * a[static_cast<std::size_t>(k) * n + j];
            }
        }
        return true;
    }

    void solve(std::vector<double>& b) const {
        for (int k = 0; k < n; ++k) {
            if (ipiv[k] != k) std::swap(b[k], b[ipiv[k]]);
            for (int i = k + 1; i < n; ++i) b[i] -= a[static_cast<std::size_t>(i) * n + k] * b[k];
        }
        for (int k = n - 1; k >= 0; --k) {
            for (int j = k + 1; j < n; ++j) b[k] -= a[static_cast<std::size_t>(k) * n + j] * b[j];
            b[k] /= a[static_cast<std::size_t>(k) * n + k];
        }
    }
};

constexpr int kMaxBand = 24;

// Core system solver: factors A[T,S] (and its transpose) once per iteration.
struct CoreSolver {
    bool banded = false;
    BandLU fwd, bwd;
    DenseLU dfwd, dbwd;

    void build(const std::vector<std::vector<std::pair<int, double>>>& cols) {
        const int s = static_cast<int>(cols.size());
        int kl = 0, ku = 0;
        for (int j = 0; j < s; ++j)
            for (auto [i, v] : cols[j]) {
                (void)v;
                kl = std::max(kl, i - j);
                ku = std::max(ku, j - i);
            }
        banded = kl <= kMaxBand && ku <= kMaxBand;
        if (banded) {
            fwd.init(s, kl, ku);
            bwd.init(s, ku, kl);
            for (int j = 0; j < s; ++j)
                for (auto [i, v] : cols[j]) {
                    fwd.at(i, j) = v;
                    bwd.at(j, i) = v;
                }
            if (!fwd.factor() || !bwd.factor())
                throw Error("simplex: singular basis core");
        } else {
            std::vector<std::vector<std::pair<int, double>>> tcols(cols.size());
            for (int j = 0; j < s; ++j)
                for (auto [i, v] : cols[j]) tcols[i].push_back({j, v});
            dfwd.init_from(cols);
            dbwd.init_from(tcols);
            if (!dfwd.factor() || !dbwd.factor())
                throw Error("simplex: singular basis core (dense)");
        }
    }
    void solve(std::vector<double>& b) const { banded ? fwd.solve(b) : dfwd.solve(b); }
    void solve_transposed(std::vector<double>& b) const { banded ? bwd.solve(b) : dbwd.solve(b); }
};

}  // namespace

std::vector<double> node_weights(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    if (n < 3) throw DomainError("need at least three nodes");
    std::vector<double> rho(n, 0.0);
    rho[0] = 0.5 * (nodes[1] - nodes[0]);
    rho[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
    for (std::size_t j = 1; j + 1 < n; ++j) rho[j] = 0.5 * (nodes[j + 1] - nodes[j - 1]);
    return rho;
}

std::vector<double> second_difference(const std::vector<double>& nodes,
                                      const std::vector<double>& values) {
    const std::size_t n = nodes.size();
    if (values.size() != n) throw DomainError("second_difference: size mismatch");
    std::vector<double> d(n >= 2 ? n - 2 : 0, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double hl = nodes[k] - nodes[k - 1];
        const double hr = nodes[k + 1] - nodes[k];
        d[k - 1] = (values[k + 1] - values[k]) / hr - (values[k] - values[k - 1]) / hl;
    }
    return d;
}

std::vector<double> weights_from_sigma(const std::vector<double>& nodes,
                                       const std::vector<double>& sigma) {
    const std::size_t n = nodes.size();
    if (sigma.size() != n - 2) throw DomainError("weights_from_sigma: size mismatch");
    const std::vector<double> rho = node_weights(nodes);
    std::vector<double> g(n, 0.0);
    auto sig = [&](std::size_t j) -> double {  // sigma at interior node j (1..n-2)
        return (j >= 1 && j <= n - 2) ? sigma[j - 1] : 0.0;
    };
    g[0] = rho[0] - sig(1) / (nodes[1] - nodes[0]);
    g[n - 1] = rho[n - 1] - sig(n - 2) / (nodes[n - 1] - nodes[n - 2]);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double hl = nodes[k] - nodes[k - 1];
        const double hr = nodes[k + 1] - nodes[k];
        const double kappa =
            sig(k - 1) / hl - sig(k) * (1.0 / hl + 1.0 / hr) + sig(k + 1) / hr;
        g[k] = rho[k] - kappa;
    }
    return g;
}

SigmaLpSolution solve_sigma_lp(const SigmaLpProblem& problem) {
    const std::vector<double>& t = problem.nodes;
    const int n = static_cast<int>(t.size());
    if (n < 3) throw DomainError("sigma LP needs at least three nodes");
    const int nv = n - 2;           // sigma_1..sigma_{n-2}, var ids 1..nv
    const int rows = nv + 2;        // cap row 0, kappa rows 1..nv, cap row nv+1
    if (static_cast<int>(problem.cost.size()) != nv)
        throw DomainError("sigma LP cost size mismatch");

    std::vector<double> h(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = t[i + 1] - t[i];
        if (!(h[i] > 0.0)) throw DomainError("nodes must be strictly increasing");
    }
    const std::vector<double> rho = node_weights(t);

    std::vector<double> b(rows);
    b[0] = h[0] * rho[0];
    for (int r = 1; r <= nv; ++r) b[r] = rho[r];
    b[rows - 1] = h[n - 2] * rho[n - 1];

    // Column of sigma_j (j in 1..nv): at most four rows.
    auto sigma_col = [&](int j, std::vector<std::pair<int, double>>& out) {
        out.clear();
        if (j == 1) out.push_back({0, 1.0});
        if (j >= 2) out.push_back({j - 1, 1.0 / h[j - 1]});
        out.push_back({j, -(1.0 / h[j - 1] + 1.0 / h[j])});
        if (j + 1 <= nv) out.push_back({j + 1, 1.0 / h[j]});
        if (j == nv) out.push_back({rows - 1, 1.0});
    };
    // sigma entries of row r: pairs (j, coefficient).
    auto row_entries = [&](int r, std::vector<std::pair<int, double>>& out) {
        out.clear();
        if (r == 0) {
            out.push_back({1, 1.0});
        } else if (r == rows - 1) {
            out.push_back({nv, 1.0});
        } else {
            if (r - 1 >= 1) out.push_back({r - 1, 1.0 / h[r - 1]});
            out.push_back({r, -(1.0 / h[r - 1] + 1.0 / h[r])});
            if (r + 1 <= nv) out.push_back({r + 1, 1.0 / h[r]});
        }
    };

    double cost_scale = 1.0;
    for (double c : problem.cost) cost_scale = std::max(cost_scale, std::abs(c));
    const double tol_dual = 1e-10 * cost_scale;

    std::vector<char> sigma_basic(nv + 1, 0);  // indexed by j = 1..nv
    std::vector<char> slack_basic(rows, 1);
    std::vector<int> s_list, t_list, pos_in_s(nv + 1), pos_in_t(rows);
    std::vector<std::vector<std::pair<int, double>>> core_cols;
    std::vector<std::pair<int, double>> col, rowent;
    std::vector<double> xs, xslack(rows), y(rows), ws, wslack(rows);

    CoreSolver core;
    bool bland = false;
    int stall = 0;
    double prev_obj = 1e300;
    const int max_iters = 80 * rows + 1000;
    SigmaLpSolution sol;

    for (int iter = 0;; ++iter) {
        if (iter > max_iters) throw Error("simplex: iteration limit reached");

        s_list.clear();
        t_list.clear();
        for (int j = 1; j <= nv; ++j) {
            pos_in_s[j] = -1;
            if (sigma_basic[j]) {
                pos_in_s[j] = static_cast<int>(s_list.size());
                s_list.push_back(j);
            }
        }
        for (int r = 0; r < rows; ++r) {
            pos_in_t[r] = -1;
            if (!slack_basic[r]) {
                pos_in_t[r] = static_cast<int>(t_list.size());
                t_list.push_back(r);
            }
        }
        const int s = static_cast<int>(s_list.size());
        if (s != static_cast<int>(t_list.size())) throw Error("simplex: basis bookkeeping broken");

        // Basic solution. With no basic sigmas the basis is the identity.
        xs.assign(s, 0.0);
        if (s > 0) {
            core_cols.assign(s, {});
            for (int i = 0; i < s; ++i) {
                row_entries(t_list[i], rowent);
                for (auto [j, v] : rowent) {
                    const int p = pos_in_s[j];
                    if (p >= 0) core_cols[p].push_back({i, v});
                }
            }
            core.build(core_cols);
            for (int i = 0; i < s; ++i) xs[i] = b[t_list[i]];
            core.solve(xs);
        }
        for (int r = 0; r < rows; ++r) {
            if (!slack_basic[r]) continue;
            double v = b[r];
            row_entries(r, rowent);
            for (auto [j, coef] : rowent) {
                const int p = pos_in_s[j];
                if (p >= 0) v -= coef * xs[p];
            }
            xslack[r] = v;
        }

        double obj = 0.0;
        for (int i = 0; i < s; ++i) obj += problem.cost[s_list[i] - 1] * xs[i];
        if (obj < prev_obj - 1e-13 * cost_scale) {
            stall = 0;
        } else if (++stall > 100 && !bland) {
            bland = true;
        }
        prev_obj = obj;

        // Dual solve: y vanishes on slack-basic rows.
        std::fill(y.begin(), y.end(), 0.0);
        if (s > 0) {
            std::vector<double> yt(s);
            for (int i = 0; i < s; ++i) yt[i] = problem.cost[s_list[i] - 1];
            core.solve_transposed(yt);
            for (int i = 0; i < s; ++i) y[t_list[i]] = yt[i];
        }

        // Pricing. Variable ids: sigma_j -> j-1, slack_r -> nv + r.
        int enter_id = -1;
        double best_d = -tol_dual;
        for (int j = 1; j <= nv; ++j) {
            if (sigma_basic[j]) continue;
            sigma_col(j, col);
            double d = problem.cost[j - 1];
            for (auto [r, v] : col) d -= v * y[r];
            if (d < best_d - 0.0) {
                if (bland) {
                    enter_id = j - 1;
                    break;
                }
                best_d = d;
                enter_id = j - 1;
            }
        }
        if (enter_id < 0 || !bland) {
            for (int r = 0; r < rows && (enter_id < 0 || !bland); ++r) {
                if (slack_basic[r]) continue;
                const double d = -y[r];
                if (d < best_d) {
                    best_d = d;
                    enter_id = nv + r;
                    if (bland) break;
                }
            }
        }
        if (enter_id < 0) {
            sol.iterations = iter;
            break;  // optimal
        }

        // Entering column in original row space.
        std::vector<std::pair<int, double>> acol;
        if (enter_id < nv) {
            sigma_col(enter_id + 1, acol);
        } else {
            acol = {{enter_id - nv, 1.0}};
        }
        double colnorm = 0.0;
        for (auto [r, v] : acol) colnorm = std::max(colnorm, std::abs(v));

        ws.assign(s, 0.0);
        for (auto [r, v] : acol) {
            const int i = pos_in_t[r];
            if (i >= 0) ws[i] = v;
        }
        if (s > 0) core.solve(ws);
        for (int r = 0; r < rows; ++r) {
            if (!slack_basic[r]) continue;
            double v = 0.0;
            for (auto [rr, vv] : acol)
                if (rr == r) v = vv;
            row_entries(r, rowent);
            for (auto [j, coef] : rowent) {
                const int p = pos_in_s[j];
                if (p >= 0) v -= coef * ws[p];
            }
            wslack[r] = v;
        }

        const double tol_piv = 1e-9 * std::max(1.0, colnorm);
        int leave_id = -1;
        double best_ratio = 0.0;
        auto consider = [&](int var_id, double x, double w) {
            if (w <= tol_piv) return;
            const double ratio = std::max(x, 0.0) / w;
            if (leave_id < 0 || ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && var_id < leave_id)) {
                best_ratio = ratio;
                leave_id = var_id;
            }
        };
        for (int i = 0; i < s; ++i) consider(s_list[i] - 1, xs[i], ws[i]);
        for (int r = 0; r < rows; ++r)
            if (slack_basic[r]) consider(nv + r, xslack[r], wslack[r]);
        if (leave_id < 0)
            throw UnboundedError("sigma LP unbounded (objective bug)");

        if (enter_id < nv)
            sigma_basic[enter_id + 1] = 1;
        else
            slack_basic[enter_id - nv] = 1;
        if (leave_id < nv)
            sigma_basic[leave_id + 1] = 0;
        else
            slack_basic[leave_id - nv] = 0;
    }

    // Recover sigma, weights, objective; sanity-check feasibility.
    sol.sigma.assign(nv, 0.0);
    for (int j = 1; j <= nv; ++j) {
        if (!sigma_basic[j]) continue;
        // recompute positions from the final basis
    }
    {
        s_list.clear();
        t_list.clear();
        for (int j = 1; j <= nv; ++j)
            if (sigma_basic[j]) s_list.push_back(j);
        for (int r = 0; r < rows; ++r)
            if (!slack_basic[r]) t_list.push_back(r);
        const int s = static_cast<int>(s_list.size());
        if (s > 0) {
            for (int j = 1; j <= nv; ++j) pos_in_s[j] = -1;
            for (int i = 0; i < s; ++i) pos_in_s[s_list[i]] = i;
            core_cols.assign(s, {});
            for (int i = 0; i < s; ++i) {
                row_entries(t_list[i], rowent);
                for (auto [j, v] : rowent) {
                    const int p = pos_in_s[j];
                    if (p >= 0) core_cols[p].push_back({i, v});
                }
            }
            core.build(core_cols);
            xs.assign(s, 0.0);
            for (int i = 0; i < s; ++i) xs[i] = b[t_list[i]];
            core.solve(xs);
            for (int i = 0; i < s; ++i) sol.sigma[s_list[i] - 1] = std::max(0.0, xs[i]);
        }
    }
    sol.objective = 0.0;
    for (int j = 0; j < nv; ++j) sol.objective += problem.cost[j] * sol.sigma[j];
    sol.weights = weights_from_sigma(t, sol.sigma);
    double min_w = 0.0, sum_w = 0.0;
    for (double w : sol.weights) {
        min_w = std::min(min_w, w);
        sum_w += w;
    }
    if (min_w < -1e-7 || std::abs(sum_w - 1.0) > 1e-9)
        throw InfeasibleError("sigma LP produced an infeasible measure (min weight " +
                              std::to_string(min_w) + ", mass " + std::to_string(sum_w) + ")");
    for (double& w : sol.weights) w = std::max(0.0, w);
    return sol;
}

}  // namespace prodline
