#include "vslicer/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vslicer/errors.hpp"

namespace vslicer {

double dot(VecView a, VecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(VecView a) { return dot(a, a); }

double norm(VecView a) { return std::sqrt(norm_sq(a)); }

RealVec sub(VecView a, VecView b) {
    RealVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

RealVec scaled(VecView a, double c) {
    RealVec out(a.begin(), a.end());
    for (double& x : out) x *= c;
    return out;
}

void require_same_dim(VecView a, VecView b, const char* what) {
    if (a.size() != b.size()) {
        throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    }
}

bool in_halfspace(VecView x, VecView v) {
    require_same_dim(x, v, "in_halfspace");
    const double vv = norm_sq(v);
    if (vv == 0.0) throw InputError("in_halfspace: the zero vector does not define a half-space");
    return 2.0 * dot(x, v) <= vv;
}

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-12;
    constexpr int kMaxIter = 10000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ResourceError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fast for x < (a+1)/(a+b+2); use the symmetry otherwise.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double cap_ratio_exact(double alpha, int d) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("cap_ratio_exact: alpha must lie in (0, 1)");
    if (d < 1) throw InputError("cap_ratio_exact: d must be >= 1");
    return 0.5 * incomplete_beta(0.5 * (d + 1), 0.5, 1.0 - alpha * alpha);
}

double cap_ratio_log2_per_dim(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("cap_ratio_log2_per_dim: alpha must lie in (0, 1)");
    }
    return 0.5 * std::log2(1.0 - alpha * alpha);
}

CapRatio cap_ratio(double alpha, int d) {
    return {alpha, cap_ratio_exact(alpha, d), cap_ratio_log2_per_dim(alpha)};
}

double log2_unit_ball_volume(int d) {
    const double half = 0.5 * d;
    return (half * std::log(std::numbers::pi) - std::lgamma(half + 1.0)) / std::numbers::ln2;
}

}  // namespace vslicer
