#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vslicer/geometry.hpp"

namespace vslicer {

/// Gram-Schmidt data of a basis: b_i = b*_i + sum_{j<i} mu(i,j) b*_j.
struct GramSchmidt {
    int dim = 0;
    std::vector<double> mu;       // dim x dim, row-major, unit diagonal
    std::vector<double> bstar;    // dim x dim, row-major
    std::vector<double> bstar_sq; // ||b*_i||^2

    double mu_at(int i, int j) const { return mu[static_cast<std::size_t>(i) * dim + j]; }
    VecView bstar_row(int i) const {
        return {bstar.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }
};

/// d linearly independent basis vectors stored as rows.
class LatticeBasis {
public:
    /// rows is d x d, row-major. Throws InputError on a non-square or
    /// numerically singular matrix.
    LatticeBasis(int dim, std::vector<double> rows);

    static LatticeBasis identity(int dim);

    int dim() const { return dim_; }
    const std::vector<double>& rows() const { return rows_; }
    VecView row(int i) const {
        return {rows_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }
    double det_abs() const { return det_abs_; }
    const GramSchmidt& gso() const { return gso_; }

    const std::optional<double>& lambda1() const { return lambda1_; }
    void set_lambda1(double value) { lambda1_ = value; }

    /// sum_i c_i b_i
    RealVec combine(std::span<const double> coeffs) const;
    RealVec combine(std::span<const long long> coeffs) const;

    /// Real coordinates c with sum_i c_i b_i = x.
    RealVec coordinates(VecView x) const;

    /// True iff x lies in the lattice: coordinates integral to `tol`.
    bool contains(VecView x, double tol = 1e-6) const;

    /// Same lattice shape, every vector multiplied by c.
    LatticeBasis scaled(double c) const;

private:
    int dim_;
    std::vector<double> rows_;
    GramSchmidt gso_;
    std::vector<double> inverse_;  // rows_^{-1}, row-major
    double det_abs_;
    std::optional<double> lambda1_;
};

GramSchmidt gram_schmidt(int dim, std::span<const double> rows);

/// LLL reduction in place with Lovasz parameter delta.
std::vector<double> lll_reduce(int dim, std::vector<double> rows, double delta = 0.99);

/// True iff rows are size-reduced (|mu| <= 1/2 + eps) and satisfy the Lovasz condition.
bool is_lll_reduced(int dim, std::span<const double> rows, double delta = 0.99, double eps = 1e-9);

/// Radius R with vol(R * B) = det: the Gaussian-heuristic radius.
double gh_radius(const LatticeBasis& basis);
double gh_radius(int dim, double det_abs);

/// Text format: first line d, then d rows of d decimal numbers.
void write_basis(std::ostream& out, const LatticeBasis& basis);
LatticeBasis read_basis(std::istream& in);
LatticeBasis read_basis_file(const std::string& path);
void write_basis_file(const std::string& path, const LatticeBasis& basis);

}  // namespace vslicer
