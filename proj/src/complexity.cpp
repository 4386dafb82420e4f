#include "vslicer/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vslicer/errors.hpp"

namespace vslicer {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
// Open-interval margin used by the optimizers.
constexpr double kMargin = 1e-6;

void require_alpha_above_one(double alpha, const char* who) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        throw InputError(std::string(who) + ": alpha must exceed 1 (got " + std::to_string(alpha) + ")");
    }
}

}  // namespace

BoundValue BoundValue::from_base(double base) { return {base, 0.5 * std::log2(base)}; }

BoundValue volume_predictor_sphere(double alpha) {
    require_alpha_above_one(alpha, "volume_predictor_sphere");
    const double a2 = alpha * alpha;
    return BoundValue::from_base(a2 / (4.0 * a2 - 4.0));
}

double sphere_radius_r0(double alpha) { return std::sqrt(volume_predictor_sphere(alpha).base); }

BoundValue volume_predictor_ball(double alpha) {
    require_alpha_above_one(alpha, "volume_predictor_ball");
    if (alpha <= kSqrt2) return volume_predictor_sphere(alpha);
    return BoundValue::from_base(1.0 / (alpha * alpha));
}

BoundValue volume_predictor_beta_ball(double alpha, double beta) {
    if (!(beta > 0.0)) throw InputError("volume_predictor_beta_ball: beta must be positive");
    return BoundValue::from_base(beta * beta * volume_predictor_ball(alpha).base);
}

BoundValue p_lower_bound_new(double alpha) {
    if (!(alpha > 1.0 && alpha <= kSqrt2)) {
        throw InputError("p_lower_bound_new: alpha must lie in (1, sqrt(2)] (got " + std::to_string(alpha) + ")");
    }
    const double a2 = alpha * alpha;
    return BoundValue::from_base((4.0 * a2 - 4.0) / (a2 * a2));
}

namespace {

// The rational function itself; negative below alpha ~ 1.034.
double dlw_base_raw(double alpha) {
    const double a2 = alpha * alpha;
    const double a4 = a2 * a2;
    const double num = -9.0 * a4 * a4 + 64.0 * a4 * a2 - 104.0 * a4 + 64.0 * a2 - 16.0;
    const double den = 16.0 * a4 * (a2 - 1.0);
    return num / den;
}

}  // namespace

BoundValue p_lower_bound_dlw(double alpha) {
    require_alpha_above_one(alpha, "p_lower_bound_dlw");
    const double base = dlw_base_raw(alpha);
    if (!(base > 0.0)) {
        throw DomainError("p_lower_bound_dlw: base is not positive at alpha = " + std::to_string(alpha));
    }
    return BoundValue::from_base(base);
}

double crossover_alpha() {
    auto gap = [](double a) { return dlw_base_raw(a) - p_lower_bound_new(a).base; };
    double lo = 1.001;
    double hi = 1.4;
    double glo = gap(lo);
    const double ghi = gap(hi);
    if (glo * ghi > 0.0) throw DomainError("crossover_alpha: no sign change on (1.001, 1.4)");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gap(mid);
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double tradeoff_delta(double alpha) {
    require_alpha_above_one(alpha, "tradeoff_delta");
    return std::sqrt(alpha * alpha - 1.0) / alpha;
}

double tradeoff_space_base(double alpha, double u) {
    const double r = std::sqrt(alpha * alpha - 1.0);
    const double den = alpha - (alpha * alpha - 1.0) * (alpha * u * u - 2.0 * u * r + alpha);
    if (!(den > 0.0)) throw DomainError("tradeoff: space denominator is not positive");
    return alpha / den;
}

double tradeoff_time_base(double alpha, double u) {
    const double a2 = alpha * alpha;
    const double r = std::sqrt(a2 - 1.0);
    const double den = -alpha * a2 + a2 * u * r + 2.0 * alpha;
    if (!(den > 0.0)) throw DomainError("tradeoff: time denominator is not positive");
    return a2 * a2 / (4.0 * a2 - 4.0) * (alpha + u * r) / den;
}

TradeoffPoint tradeoff_point(double alpha, double u, int /*d_for_display*/) {
    if (!(alpha > 1.0 && alpha < kSqrt2)) throw InputError("tradeoff_point: alpha must lie in (1, sqrt(2))");
    const double delta = tradeoff_delta(alpha);
    if (!(u > delta && u < 1.0 / delta)) throw InputError("tradeoff_point: u must lie in (delta, 1/delta)");
    TradeoffPoint p;
    p.alpha = alpha;
    p.u = u;
    p.space_log2_per_dim = 0.5 * std::log2(tradeoff_space_base(alpha, u));
    p.time_log2_per_dim = 0.5 * std::log2(tradeoff_time_base(alpha, u));
    return p;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

namespace {

// Largest u in (delta, 1/delta) with space base <= target_base. The space base
// is increasing in u there, from alpha^2 at u = delta to +infinity.
double max_feasible_u(double alpha, double target_base) {
    const double a2 = alpha * alpha;
    const double r = std::sqrt(a2 - 1.0);
    // alpha u^2 - 2 r u + alpha = q with q = alpha (1 - 1/S) / (alpha^2 - 1)
    const double q = alpha * (1.0 - 1.0 / target_base) / (a2 - 1.0);
    const double disc = r * r - alpha * (alpha - q);
    const double u = (r + std::sqrt(std::max(0.0, disc))) / alpha;
    const double delta = r / alpha;
    return std::clamp(u, delta, 1.0 / delta);
}

struct InnerResult {
    double u;
    double time;
};

InnerResult best_u_for_alpha(double alpha, double target_base) {
    const double delta = tradeoff_delta(alpha);
    const double lo = delta + kMargin * delta;
    double hi = std::min(max_feasible_u(alpha, target_base), (1.0 / delta) * (1.0 - kMargin));
    // Guard against the closed-form root landing a rounding step past the target.
    while (hi > lo && tradeoff_space_base(alpha, hi) > target_base) hi = lo + (hi - lo) * (1.0 - 1e-12);
    if (hi <= lo) return {lo, 0.5 * std::log2(tradeoff_time_base(alpha, lo))};
    const double u = golden_section_minimize(
        [&](double x) { return tradeoff_time_base(alpha, x); }, lo, hi, 1e-10 * (hi - lo) + 1e-14);
    return {u, 0.5 * std::log2(tradeoff_time_base(alpha, u))};
}

}  // namespace

std::vector<TradeoffPoint> tradeoff_curve(const std::vector<double>& space_grid) {
    std::vector<TradeoffPoint> curve;
    curve.reserve(space_grid.size());
    for (double target : space_grid) {
        if (!(target >= 0.0)) throw InputError("tradeoff_curve: grid values must be non-negative");
        TradeoffPoint p;
        p.target_space = target;
        const double target_base = std::exp2(2.0 * target);
        // Space base at u = delta is alpha^2, so alpha <= 2^target is necessary.
        const double alpha_hi = std::min(kSqrt2 - kMargin, std::exp2(target) * (1.0 - 1e-15));
        const double alpha_lo = 1.0 + kMargin;
        if (!(alpha_hi > alpha_lo) ||
            tradeoff_space_base(alpha_lo, tradeoff_delta(alpha_lo) * (1.0 + kMargin)) > target_base) {
            p.feasible = false;
            p.space_log2_per_dim = std::numeric_limits<double>::quiet_NaN();
            p.time_log2_per_dim = std::numeric_limits<double>::quiet_NaN();
            curve.push_back(p);
            continue;
        }
        const double alpha = golden_section_minimize(
            [&](double a) { return best_u_for_alpha(a, target_base).time; }, alpha_lo, alpha_hi,
            1e-10 * (alpha_hi - alpha_lo) + 1e-14);
        const InnerResult inner = best_u_for_alpha(alpha, target_base);
        const TradeoffPoint eval = tradeoff_point(alpha, inner.u);
        p.alpha = eval.alpha;
        p.u = eval.u;
        p.space_log2_per_dim = eval.space_log2_per_dim;
        p.time_log2_per_dim = eval.time_log2_per_dim;
        curve.push_back(p);
    }
    // Lower envelope: a point feasible for a smaller budget is feasible for a larger one.
    std::vector<std::size_t> order(curve.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return curve[a].target_space < curve[b].target_space; });
    std::optional<TradeoffPoint> carry;
    for (std::size_t idx : order) {
        TradeoffPoint& p = curve[idx];
        if (!p.feasible) continue;
        if (carry && carry->time_log2_per_dim < p.time_log2_per_dim) {
            const double target = p.target_space;
            p = *carry;
            p.target_space = target;
        }
        carry = p;
    }
    return curve;
}

LowMemoryExponent low_memory_exponent(MemoryRegime regime, std::optional<double> gamma, std::optional<double> eps) {
    LowMemoryExponent out;
    if (regime == MemoryRegime::polynomial) {
        out.dlogd_coefficient = 0.5;
    } else {
        if (!gamma || !(*gamma > 0.0 && *gamma < 1.0)) {
            throw InputError("low_memory_exponent: subexponential regime needs gamma in (0, 1)");
        }
        out.dlogd_coefficient = 0.5 * (1.0 - *gamma);
    }
    if (eps) {
        if (!(*eps > 0.0)) throw InputError("low_memory_exponent: eps must be positive");
        out.small_eps_base = 1.0 / std::sqrt(8.0 * *eps);
    }
    return out;
}

}  // namespace vslicer
