#include <cmath>
#include <limits>
#include <vector>

#include "vslicer/errors.hpp"
#include "vslicer/polytope.hpp"

namespace vslicer {

namespace {

// Phase-one simplex (Bland's rule) for: mu >= 0, sum mu_i v_i = target.
// Returns the minimum total artificial infeasibility.
double cone_infeasibility(const std::vector<RealVec>& points, const RealVec& target) {
    const std::size_t n = points.size();
    const std::size_t m = target.size();
    const std::size_t cols = n + m + 1;  // mu, artificials, rhs
    std::vector<double> t(m * cols, 0.0);
    auto cell = [&](std::size_t r, std::size_t c) -> double& { return t[r * cols + c]; };

    for (std::size_t r = 0; r < m; ++r) {
        const double sign = target[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) cell(r, i) = sign * points[i][r];
        cell(r, n + r) = 1.0;
        cell(r, cols - 1) = sign * target[r];
    }

    std::vector<std::size_t> basic(m);
    for (std::size_t r = 0; r < m; ++r) basic[r] = n + r;

    constexpr double kPivotEps = 1e-12;
    for (int iter = 0; iter < 100000; ++iter) {
        // Reduced cost of a column: its cost minus sum over artificial-basic rows.
        std::size_t enter = cols;
        for (std::size_t c = 0; c + 1 < cols; ++c) {
            double rc = c >= n ? 1.0 : 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                if (basic[r] >= n) rc -= cell(r, c);
            }
            bool is_basic = false;
            for (std::size_t r = 0; r < m; ++r) is_basic |= basic[r] == c;
            if (!is_basic && rc < -kPivotEps) {
                enter = c;
                break;
            }
        }
        if (enter == cols) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double a = cell(r, enter);
            if (a <= kPivotEps) continue;
            const double ratio = cell(r, cols - 1) / a;
            if (ratio < best_ratio - 1e-15 || (leave < m && std::fabs(ratio - best_ratio) <= 1e-15 && basic[r] < basic[leave])) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == m) break;  // cannot happen for a bounded phase-one problem

        const double p = cell(leave, enter);
        for (std::size_t c = 0; c < cols; ++c) cell(leave, c) /= p;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = cell(r, enter);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) cell(r, c) -= f * cell(leave, c);
        }
        basic[leave] = enter;
    }
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        if (basic[r] >= n) infeasibility += cell(r, cols - 1);
    }
    return infeasibility;
}

// Rank by modified Gram-Schmidt on unit vectors.
int numeric_rank(const std::vector<RealVec>& points, int d) {
    std::vector<RealVec> q;
    for (const RealVec& p : points) {
        RealVec r = p;
        for (const RealVec& e : q) {
            const double c = dot(r, e);
            for (int k = 0; k < d; ++k) r[static_cast<std::size_t>(k)] -= c * e[static_cast<std::size_t>(k)];
        }
        const double nr = norm(r);
        if (nr > 1e-9) q.push_back(scaled(r, 1.0 / nr));
        if (static_cast<int>(q.size()) == d) break;
    }
    return static_cast<int>(q.size());
}

}  // namespace

// Bounded iff the vectors positively span R^d (Gordan), i.e. they have full
// rank and some strictly positive combination vanishes. With lambda = 1 + mu
// the latter is: -sum v_i lies in the cone of the v_i.
bool is_bounded(const HalfspaceList& list) {
    const int d = list.dim();
    // Fewer than d+1 vectors cannot positively span R^d.
    if (list.size() <= static_cast<std::size_t>(d)) return false;
    std::vector<RealVec> unit;
    unit.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) unit.push_back(scaled(list.vector(i), 1.0 / std::sqrt(list.norm_sq(i))));
    if (numeric_rank(unit, d) < d) return false;
    RealVec target(static_cast<std::size_t>(d), 0.0);
    for (const RealVec& u : unit) {
        for (int k = 0; k < d; ++k) target[static_cast<std::size_t>(k)] -= u[static_cast<std::size_t>(k)];
    }
    double scale = 1.0;
    for (double x : target) scale += std::fabs(x);
    return cone_infeasibility(unit, target) <= 1e-9 * scale;
}

}  // namespace vslicer
