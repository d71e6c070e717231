#include "helmres/system_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "helmres/errors.hpp"

namespace helmres {

ResonatorSystem build_system(const SystemConfig& cfg) {
    if (!(cfg.h > 0)) throw ParameterError("h must be positive");
    if (!(cfg.epsilon > 0)) throw ParameterError("epsilon must be positive");
    if (!(cfg.eps_max > 0)) throw ParameterError("eps_max must be positive");
    if (cfg.epsilon >= cfg.eps_max) throw ParameterError("epsilon must be below eps_max");
    if (!(cfg.capacity > 0)) throw ParameterError("capacity must be positive");
    if (cfg.centers.empty()) throw ParameterError("at least one resonator center is required");
    for (std::size_t i = 0; i < cfg.centers.size(); ++i) {
        if (!cfg.centers[i].allFinite()) throw ParameterError("non-finite resonator center");
        for (std::size_t j = 0; j < i; ++j)
            if ((cfg.centers[i] - cfg.centers[j]).norm() <= 2 * cfg.epsilon)
                throw GeometryError("resonators " + std::to_string(j) + " and " + std::to_string(i) +
                                    " overlap (distance <= 2 epsilon)");
    }
    ResonatorSystem s;
    s.h = cfg.h;
    s.epsilon = cfg.epsilon;
    s.centers = cfg.centers;
    s.alpha0 = cfg.alpha0;
    s.alpha1 = cd(cfg.re_alpha1, 1.0 / (2.0 * std::numbers::pi));
    s.capacity = cfg.capacity;
    s.cavity_volume = std::numbers::pi * cfg.h;
    s.eps_max = cfg.eps_max;
    return s;
}

ResonatorSystem with_epsilon(const ResonatorSystem& s, double eps) {
    SystemConfig c;
    c.h = s.h;
    c.epsilon = eps;
    c.centers = s.centers;
    c.alpha0 = s.alpha0;
    c.re_alpha1 = s.alpha1.real();
    c.capacity = s.capacity;
    c.eps_max = s.eps_max;
    return build_system(c);
}

SpectralData interaction_matrices(const ResonatorSystem& s, double gap_rel) {
    const int M = s.M();
    if (M < 1) throw ParameterError("empty resonator system");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    SpectralData d;
    d.T = Eigen::MatrixXd::Zero(M, M);
    d.S = Eigen::MatrixXcd::Constant(M, M, cd(0.0, 1.0 / two_pi));
    for (int i = 0; i < M; ++i) {
        d.S(i, i) += s.alpha1.real();
        for (int j = 0; j < M; ++j)
            if (i != j) d.T(i, j) = 1.0 / (two_pi * (s.centers[i] - s.centers[j]).norm());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.T);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of T failed");
    d.betas = es.eigenvalues();
    d.Y = es.eigenvectors();
    for (int j = 0; j < M; ++j) {
        Eigen::Index k;
        d.Y.col(j).cwiseAbs().maxCoeff(&k);
        if (d.Y(k, j) < 0) d.Y.col(j) *= -1.0;
    }
    d.min_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < M; ++j) d.min_gap = std::min(d.min_gap, d.betas(j + 1) - d.betas(j));
    const double scale = d.betas.cwiseAbs().maxCoeff();
    d.degenerate = M > 1 && d.min_gap <= gap_rel * scale;
    return d;
}

double bessel_j1_prime_zero() {
    auto dj1 = [](double x) { return 0.5 * (std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(2.0, x)); };
    double a = 1.0, b = 2.5;  // dj1(a) > 0 > dj1(b)
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b);
        (dj1(m) > 0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

double neumann_k1(double h) {
    if (!(h > 0)) throw ParameterError("h must be positive");
    static const double j11 = bessel_j1_prime_zero();
    return std::min(j11, std::numbers::pi / h);
}

}  // namespace helmres
