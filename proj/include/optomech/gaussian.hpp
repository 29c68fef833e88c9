#pragma once

#include <span>

#include <Eigen/Dense>

#include "json.hpp"

/// Continuous-variable Gaussian states over n bosonic modes.
///
/// Quadratures are ordered (x1, p1, ..., xn, pn) with [x, p] = i (hbar = 1),
/// so the vacuum covariance is I/2 and the Heisenberg bound on a single mode
/// reads V(x) V(p) >= 1/4.
///
/// Beam-splitter convention, acting identically on the x and p blocks of
/// modes (i, j) with t = sqrt(transmissivity), s = sqrt(1 - transmissivity):
///
///     | x_i' |   |  t  s | | x_i |
///     | x_j' | = | -s  t | | x_j |
///
/// i.e. the reflection into port j carries the pi phase flip. Swapping the
/// port order gives the transpose, which is the inverse transformation.
namespace optomech::gaussian {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class GaussianState {
public:
    /// Throws std::invalid_argument on size mismatch or an asymmetric covariance.
    GaussianState(Vector mean, Matrix cov);

    static GaussianState vacuum(int n_modes);

    int n_modes() const { return static_cast<int>(mean_.size() / 2); }
    const Vector& mean() const { return mean_; }
    const Matrix& cov() const { return cov_; }

    /// Reduced state on the listed modes, in the listed order.
    GaussianState marginal(std::span<const int> modes) const;

private:
    Vector mean_;
    Matrix cov_;
};

/// Block-diagonal Omega with [[0, 1], [-1, 0]] per mode.
Matrix symplectic_form(int n_modes);

/// Ascending symplectic eigenvalues of a positive semidefinite covariance.
Vector symplectic_eigenvalues(const Matrix& cov);

/// cov + (i/2) Omega >= 0, checked as all symplectic eigenvalues >= 1/2 - tol.
bool is_physical(const GaussianState& state, double tol = 1e-9);

GaussianState direct_sum(const GaussianState& a, const GaussianState& b);

/// mean -> S mean, cov -> S cov S^T.
GaussianState apply_symplectic(const GaussianState& state, const Matrix& S);

/// Single-mode squeezing along `angle`; at angle 0 the x variance is scaled by
/// e^{-2r} and the p variance by e^{+2r}.
GaussianState squeeze(const GaussianState& state, int mode, double r, double angle);

GaussianState phase_rotate(const GaussianState& state, int mode, double angle);

GaussianState beam_splitter(const GaussianState& state, int mode_i, int mode_j, double transmissivity);

/// Conditions on a homodyne record of cos(angle) x + sin(angle) p on `mode`
/// with value `outcome`, returning the state of the remaining modes. A
/// vanishing measured variance falls back to the pseudo-inverse (no update).
GaussianState homodyne_condition(const GaussianState& state, int mode, double quadrature_angle,
                                 double outcome = 0.0);

/// Two-mode EPR state from a p-squeezed (r1) and an x-squeezed (r2) vacuum
/// interfered on a balanced beam splitter.
GaussianState epr_pair(double r1, double r2);

/// Logarithmic negativity of the (mode_a, mode_b) marginal.
double log_negativity(const GaussianState& state, int mode_a, int mode_b);

struct EprReport {
    double cond_var_x;    // V(x_A | x_B)
    double cond_var_p;    // V(p_A | p_B)
    double reid_product;  // cond_var_x * cond_var_p
    bool epr_certified;   // reid_product < 1/4
    double log_negativity;
};

inline constexpr double kReidBound = 0.25;

EprReport epr_report(const GaussianState& state, int mode_a, int mode_b);

/// Two EPR pairs (A,B) and (C,D); B and C meet on a balanced beam splitter,
/// x is measured on one output and p on the other; reports on (A, D).
EprReport entanglement_swap(double r_pair1, double r_pair2);

nlohmann::json to_json(const GaussianState& state);
nlohmann::json to_json(const EprReport& report);

}  // namespace optomech::gaussian
