#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vslicer {

/// A point or direction in R^d. The ambient dimension is the vector length.
using RealVec = std::vector<double>;
using VecView = std::span<const double>;

double dot(VecView a, VecView b);
double norm_sq(VecView a);
double norm(VecView a);
RealVec sub(VecView a, VecView b);
RealVec scaled(VecView a, double c);

/// Throws InputError when the two dimensions differ.
void require_same_dim(VecView a, VecView b, const char* what);

/// ||x|| <= ||x - v||, evaluated as 2<x,v> <= <v,v>. Ties count as inside.
bool in_halfspace(VecView x, VecView v);

struct CapRatio {
    double alpha;          // height of the cap: half the norm of the defining vector
    double exact_ratio;    // vol(cap) / vol(unit ball)
    double log2_per_dim;   // 0.5 * log2(1 - alpha^2)
};

/// Regularized incomplete beta function I_x(a, b), continued fraction with
/// relative tolerance 1e-12.
double incomplete_beta(double a, double b, double x);

/// vol(cap at height alpha) / vol(B) in dimension d: 0.5 * I_{1-alpha^2}((d+1)/2, 1/2).
double cap_ratio_exact(double alpha, int d);

/// Per-dimension log2 of the asymptotic cap ratio (1 - alpha^2)^{d/2}.
double cap_ratio_log2_per_dim(double alpha);

CapRatio cap_ratio(double alpha, int d);

/// log2 of the volume of the d-dimensional unit ball.
double log2_unit_ball_volume(int d);

}  // namespace vslicer
