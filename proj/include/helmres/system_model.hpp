#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace helmres {

using cd = std::complex<double>;
using Vec2 = Eigen::Vector2d;

struct SystemConfig {
    double h = 1.0;
    double epsilon = 1e-2;
    std::vector<Vec2> centers{Vec2::Zero()};
    double alpha0 = 0.0;
    double re_alpha1 = 0.0;
    double capacity = 2.0;  // c of the unit aperture; 2 for the disk
    double eps_max = 5e-2;
};

struct ResonatorSystem {
    double h = 1.0;
    double epsilon = 1e-2;
    std::vector<Vec2> centers;
    double alpha0 = 0.0;
    cd alpha1;
    double capacity = 2.0;
    double cavity_volume = 0.0;  // |D| = pi h for the unit-radius cylinder
    double eps_max = 5e-2;

    int M() const { return static_cast<int>(centers.size()); }
};

ResonatorSystem build_system(const SystemConfig& cfg);
ResonatorSystem with_epsilon(const ResonatorSystem& s, double eps);

struct SpectralData {
    Eigen::MatrixXd T;
    Eigen::MatrixXcd S;
    Eigen::VectorXd betas;  // ascending
    Eigen::MatrixXd Y;      // columns are the eigenvectors
    double min_gap = 0.0;   // +inf for M = 1
    bool degenerate = false;
};

// gap_rel: eigenvalue gaps below gap_rel * max|beta| flag a degeneracy
SpectralData interaction_matrices(const ResonatorSystem& s, double gap_rel = 1e-6);

// first positive zero of J1'
double bessel_j1_prime_zero();
// first nonzero Neumann eigenvalue of the unit-radius cylinder of height h
double neumann_k1(double h);

}  // namespace helmres
