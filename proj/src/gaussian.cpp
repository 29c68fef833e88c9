#include "optomech/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "optomech/format.hpp"

namespace optomech::gaussian {

namespace {

void check_mode(const GaussianState& state, int mode) {
    if (mode < 0 || mode >= state.n_modes()) {
        throw std::out_of_range("mode " + std::to_string(mode) + " out of range for " +
                                std::to_string(state.n_modes()) + "-mode state");
    }
}

Eigen::Matrix2d rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix2d R;
    R << c, -s, s, c;
    return R;
}

GaussianState apply_local(const GaussianState& state, int mode, const Eigen::Matrix2d& S) {
    check_mode(state, mode);
    Matrix full = Matrix::Identity(state.cov().rows(), state.cov().cols());
    full.block<2, 2>(2 * mode, 2 * mode) = S;
    return apply_symplectic(state, full);
}

}  // namespace

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (mean_.size() == 0 || mean_.size() % 2 != 0) throw std::invalid_argument("mean must have even length 2n");
    if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
        throw std::invalid_argument("covariance must be 2n x 2n");
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("covariance must be symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

GaussianState GaussianState::vacuum(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("vacuum needs at least one mode");
    return {Vector::Zero(2 * n_modes), 0.5 * Matrix::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState GaussianState::marginal(std::span<const int> modes) const {
    std::vector<int> idx;
    for (int m : modes) {
        check_mode(*this, m);
        idx.push_back(2 * m);
        idx.push_back(2 * m + 1);
    }
    const auto k = static_cast<Eigen::Index>(idx.size());
    Vector mean(k);
    Matrix cov(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        mean(a) = mean_(idx[a]);
        for (Eigen::Index b = 0; b < k; ++b) cov(a, b) = cov_(idx[a], idx[b]);
    }
    return {mean, cov};
}

Matrix symplectic_form(int n_modes) {
    Matrix J = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        J(2 * k, 2 * k + 1) = 1.0;
        J(2 * k + 1, 2 * k) = -1.0;
    }
    return J;
}

Vector symplectic_eigenvalues(const Matrix& cov) {
    // sqrt(V) J sqrt(V) is antisymmetric with eigenvalues +-i nu_k, so its
    // Gram matrix has each nu_k^2 twice.
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    const Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    const Matrix K = root * symplectic_form(static_cast<int>(cov.rows() / 2)) * root;
    Eigen::SelfAdjointEigenSolver<Matrix> gram(K.transpose() * K, Eigen::EigenvaluesOnly);
    const Vector nu2 = gram.eigenvalues();
    Vector nu(cov.rows() / 2);
    for (Eigen::Index k = 0; k < nu.size(); ++k) {
        nu(k) = std::sqrt(std::max(0.0, 0.5 * (nu2(2 * k) + nu2(2 * k + 1))));
    }
    return nu;
}

bool is_physical(const GaussianState& state, double tol) {
    return symplectic_eigenvalues(state.cov()).minCoeff() >= 0.5 - tol;
}

GaussianState direct_sum(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean().size();
    const auto nb = b.mean().size();
    Vector mean(na + nb);
    mean << a.mean(), b.mean();
    Matrix cov = Matrix::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return {mean, cov};
}

GaussianState apply_symplectic(const GaussianState& state, const Matrix& S) {
    if (S.rows() != state.cov().rows() || S.cols() != state.cov().cols()) {
        throw std::invalid_argument("symplectic matrix size mismatch");
    }
    Matrix cov = S * state.cov() * S.transpose();
    return {S * state.mean(), 0.5 * (cov + cov.transpose())};
}

GaussianState squeeze(const GaussianState& state, int mode, double r, double angle) {
    const Eigen::Matrix2d R = rotation(angle);
    const Eigen::Matrix2d S = R * Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal() * R.transpose();
    return apply_local(state, mode, S);
}

GaussianState phase_rotate(const GaussianState& state, int mode, double angle) {
    return apply_local(state, mode, rotation(angle));
}

GaussianState beam_splitter(const GaussianState& state, int mode_i, int mode_j, double transmissivity) {
    check_mode(state, mode_i);
    check_mode(state, mode_j);
    if (mode_i == mode_j) throw std::invalid_argument("beam splitter needs two distinct modes");
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::invalid_argument("transmissivity must lie in [0, 1]");
    }
    const double t = std::sqrt(transmissivity);
    const double s = std::sqrt(1.0 - transmissivity);
    Matrix S = Matrix::Identity(state.cov().rows(), state.cov().cols());
    for (int q = 0; q < 2; ++q) {
        const int i = 2 * mode_i + q;
        const int j = 2 * mode_j + q;
        S(i, i) = t;
        S(i, j) = s;
        S(j, i) = -s;
        S(j, j) = t;
    }
    return apply_symplectic(state, S);
}

GaussianState homodyne_condition(const GaussianState& state, int mode, double quadrature_angle, double outcome) {
    check_mode(state, mode);
    if (state.n_modes() < 2) throw std::invalid_argument("homodyne conditioning needs at least two modes");

    std::vector<int> rest;
    for (int k = 0; k < state.n_modes(); ++k) {
        if (k != mode) rest.push_back(k);
    }
    const GaussianState remaining = state.marginal(rest);
    const Eigen::Vector2d u(std::cos(quadrature_angle), std::sin(quadrature_angle));

    const auto n_rest = static_cast<Eigen::Index>(2 * rest.size());
    // Cross-covariance between the remaining quadratures and the measured one.
    Vector cross(n_rest);
    for (Eigen::Index a = 0; a < n_rest; ++a) {
        const int src = 2 * rest[static_cast<std::size_t>(a / 2)] + static_cast<int>(a % 2);
        cross(a) = state.cov()(src, 2 * mode) * u(0) + state.cov()(src, 2 * mode + 1) * u(1);
    }
    const Eigen::Matrix2d local = state.cov().block<2, 2>(2 * mode, 2 * mode);
    const double measured_var = u.dot(local * u);
    const double measured_mean = u(0) * state.mean()(2 * mode) + u(1) * state.mean()(2 * mode + 1);

    const double scale = std::max(1.0, state.cov().diagonal().maxCoeff());
    if (!(measured_var > 1e-300 * scale)) return remaining;  // pseudo-inverse of a zero variance

    Vector mean = remaining.mean() + cross * ((outcome - measured_mean) / measured_var);
    Matrix cov = remaining.cov() - cross * cross.transpose() / measured_var;
    return {mean, 0.5 * (cov + cov.transpose())};
}

GaussianState epr_pair(double r1, double r2) {
    if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw std::invalid_argument("squeeze parameters must be non-negative");
    GaussianState s = GaussianState::vacuum(2);
    s = squeeze(s, 0, r1, std::numbers::pi / 2);
    s = squeeze(s, 1, r2, 0.0);
    return beam_splitter(s, 0, 1, 0.5);
}

double log_negativity(const GaussianState& state, int mode_a, int mode_b) {
    if (mode_a == mode_b) throw std::invalid_argument("log negativity needs two distinct modes");
    const int modes[] = {mode_a, mode_b};
    Matrix cov = state.marginal(modes).cov();
    // Partial transpose on B: p_B -> -p_B.
    cov.row(3) *= -1.0;
    cov.col(3) *= -1.0;
    const Vector nu = symplectic_eigenvalues(cov);
    // Values within round-off of the vacuum bound count as separable.
    constexpr double kFloor = 1e-12;
    double en = 0.0;
    for (Eigen::Index k = 0; k < nu.size(); ++k) {
        if (2.0 * nu(k) < 1.0 - kFloor) en -= std::log(2.0 * nu(k));
    }
    return en;
}

EprReport epr_report(const GaussianState& state, int mode_a, int mode_b) {
    check_mode(state, mode_a);
    check_mode(state, mode_b);
    if (mode_a == mode_b) throw std::invalid_argument("EPR report needs two distinct modes");
    const int modes[] = {mode_a, mode_b};
    const GaussianState pair = state.marginal(modes);

    EprReport r{};
    r.cond_var_x = homodyne_condition(pair, 1, 0.0).cov()(0, 0);
    r.cond_var_p = homodyne_condition(pair, 1, std::numbers::pi / 2).cov()(1, 1);
    r.reid_product = r.cond_var_x * r.cond_var_p;
    r.epr_certified = r.reid_product < kReidBound;
    r.log_negativity = log_negativity(pair, 0, 1);
    return r;
}

EprReport entanglement_swap(double r_pair1, double r_pair2) {
    // Modes: 0 = A, 1 = B, 2 = C, 3 = D.
    GaussianState s = direct_sum(epr_pair(r_pair1, r_pair1), epr_pair(r_pair2, r_pair2));
    s = beam_splitter(s, 1, 2, 0.5);
    s = homodyne_condition(s, 1, 0.0);                // x on B' -> modes A, C', D
    s = homodyne_condition(s, 1, std::numbers::pi / 2);  // p on C' -> modes A, D
    return epr_report(s, 0, 1);
}

nlohmann::json to_json(const GaussianState& state) {
    nlohmann::json mean = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.mean().size(); ++i) mean.push_back(sig9(state.mean()(i)));
    nlohmann::json cov = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.cov().rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < state.cov().cols(); ++j) row.push_back(sig9(state.cov()(i, j)));
        cov.push_back(std::move(row));
    }
    return {{"n_modes", state.n_modes()}, {"mean", mean}, {"cov", cov}};
}

nlohmann::json to_json(const EprReport& report) {
    return {
        {"cond_var_x", sig9(report.cond_var_x)},
        {"cond_var_p", sig9(report.cond_var_p)},
        {"reid_product", sig9(report.reid_product)},
        {"epr_certified", report.epr_certified},
        {"log_negativity", sig9(report.log_negativity)},
    };
}

}  // namespace optomech::gaussian
