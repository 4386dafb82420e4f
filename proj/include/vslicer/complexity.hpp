#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace vslicer {

/// A quantity base^{d/2}, reported per dimension: log2_per_dim = 0.5 * log2(base).
struct BoundValue {
    double base = 0.0;
    double log2_per_dim = 0.0;

    static BoundValue from_base(double base);
};

/// alpha^2 / (4 alpha^2 - 4): sphere points, n = alpha^d.
BoundValue volume_predictor_sphere(double alpha);
/// sqrt of volume_predictor_sphere(alpha).base: the radius the cell resembles.
double sphere_radius_r0(double alpha);
/// Ball points: the sphere form up to sqrt(2), 1 / alpha^2 beyond.
BoundValue volume_predictor_ball(double alpha);
/// Points from beta * B: beta^2 times the ball base.
BoundValue volume_predictor_beta_ball(double alpha, double beta);

/// (4 alpha^2 - 4) / alpha^4, for 1 < alpha <= sqrt(2).
BoundValue p_lower_bound_new(double alpha);
/// The earlier polynomial bound; DomainError where its base is not positive.
BoundValue p_lower_bound_dlw(double alpha);

/// Root of dlw - new on (1.001, 1.4), bisection to 1e-10.
double crossover_alpha();

struct TradeoffPoint {
    double alpha = 0.0;
    double u = 0.0;
    double space_log2_per_dim = 0.0;
    double time_log2_per_dim = 0.0;
    bool feasible = true;
    double target_space = 0.0;  // grid value this point was optimized for (curve only)
};

/// sqrt(alpha^2 - 1) / alpha
double tradeoff_delta(double alpha);
double tradeoff_space_base(double alpha, double u);
double tradeoff_time_base(double alpha, double u);

/// Both exponents at (alpha, u). d_for_display is accepted for symmetry with
/// the CLI and does not change the per-dimension result.
TradeoffPoint tradeoff_point(double alpha, double u, int d_for_display = 1);

/// Lower envelope of min time subject to space <= target, one point per grid value.
std::vector<TradeoffPoint> tradeoff_curve(const std::vector<double>& space_grid);

/// Minimizer of f on [lo, hi] by golden-section search to tolerance tol.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

enum class MemoryRegime { polynomial, subexponential };

struct LowMemoryExponent {
    double dlogd_coefficient = 0.0;          // leading term c in 2^{c d log2 d}
    std::optional<double> small_eps_base;    // 1/sqrt(8 eps) when eps was supplied
};

/// Leading d log2 d coefficient: 1/2 for polynomial memory, (1 - gamma)/2 for
/// 2^{Theta(d^gamma)} memory.
LowMemoryExponent low_memory_exponent(MemoryRegime regime, std::optional<double> gamma = std::nullopt,
                                      std::optional<double> eps = std::nullopt);

}  // namespace vslicer
