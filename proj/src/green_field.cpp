#include "helmres/green_field.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "helmres/errors.hpp"

namespace helmres {
namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void check_field_point(const Vec3& x, const ResonatorSystem& s) {
    if (!(x.z() > 0)) throw GeometryError("field point must lie in the upper half space (x3 > 0)");
    for (int j = 0; j < s.M(); ++j)
        if ((x - center3(s, j)).norm() <= s.epsilon) throw GeometryError("field point inside an aperture");
}

Vec3 center3(const ResonatorSystem& s, int j) { return Vec3(s.centers[j].x(), s.centers[j].y(), 0.0); }

cd gex(const Vec3& x, const Vec3& y, cd k) {
    const double r = (x - y).norm();
    if (r < 1e-12) throw GeometryError("Green function evaluated at coincident points");
    return std::exp(cd(0, 1) * k * r) / (two_pi * r);
}

Eigen::VectorXcd green_vector(const Vec3& x, cd k, const ResonatorSystem& s) {
    Eigen::VectorXcd g(s.M());
    for (int j = 0; j < s.M(); ++j) g(j) = gex(x, center3(s, j), k);
    return g;
}

cd zeta(int j, const Vec3& x, const Vec3& x0, cd k, const SpectralData& spec, const ResonatorSystem& s) {
    if (j < 0 || j >= s.M()) throw ParameterError("mode index out of range");
    const Eigen::VectorXcd y = spec.Y.col(j).cast<cd>();
    const cd a = green_vector(x, k, s).transpose() * y;
    const cd b = y.transpose() * green_vector(x0, k, s);
    return a * b;
}

G4Model robustness_g4(int M, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, two_pi);
    G4Model g;
    for (int j = 0; j < M; ++j) {
        g.C1.push_back(std::polar(eps * eps, ph(rng)));
        g.C2.push_back(std::polar(eps * eps, ph(rng)));
    }
    return g;
}

double im_g1(const Vec3& x, const Vec3& x0, double k) {
    const double r = (x - x0).norm();
    if (r * std::abs(k) < 1e-8) return k / two_pi * (1.0 - (k * r) * (k * r) / 6.0);
    return std::sin(k * r) / (two_pi * r);
}

GreenParts perturbed_green(const Vec3& x, const Vec3& x0, double k, const ResonatorSystem& s,
                           const SpectralData& spec, const std::vector<Resonance>& res, ZetaMode zm,
                           const G4Model& g4) {
    GreenParts p = green_corrections(x, x0, k, s, spec, res, zm, g4);
    p.g1 = gex(x, x0, k);
    p.total += p.g1;
    return p;
}

GreenParts green_corrections(const Vec3& x, const Vec3& x0, double k, const ResonatorSystem& s,
                             const SpectralData& spec, const std::vector<Resonance>& res, ZetaMode zm,
                             const G4Model& g4) {
    const double e = s.epsilon, c = s.capacity;
    GreenParts p;
    const Eigen::VectorXcd gx = green_vector(x, k, s), g0 = green_vector(x0, k, s);
    for (int j = 0; j < s.M(); ++j) p.g2 += gx(j) * g0(j);
    p.g2 *= -e * c;
    const double pref = std::pow(c * e, 1.5) / std::sqrt(s.cavity_volume);
    const bool frozen = zm == ZetaMode::frozen_at_0;
    Eigen::VectorXcd fx = gx, f0 = g0;
    if (frozen) {
        fx = green_vector(x, 0.0, s);
        f0 = green_vector(x0, 0.0, s);
    }
    for (int j = 0; j < s.M(); ++j) {
        const Eigen::VectorXcd y = spec.Y.col(j).cast<cd>();
        const cd zj = cd(fx.transpose() * y) * cd(y.transpose() * f0);
        const cd k1 = find_resonance(res, j, 1).value, k2 = find_resonance(res, j, 2).value;
        p.g3 -= (1.0 / (k - k2) - 1.0 / (k - k1)) * pref * zj;
        if (g4.active()) p.g4 += g4.C2.at(j) / (k - k2) + g4.C1.at(j) / (k - k1);
        for (cd kr : {k1, k2})
            if (std::abs(k - kr.real()) < 10 * std::abs(kr.imag())) p.near_pole = true;
    }
    p.total = p.g2 + p.g3 + p.g4;
    return p;
}

double im_green_fixed_frequency(const Vec3& x, const Vec3& x0, const ResonatorSystem& s, const SpectralData& spec) {
    const auto taus = tau_coefficients(spec, s);
    const double e = s.epsilon, c = s.capacity;
    const double k = taus.at(0).tau1 * std::sqrt(e);
    const double r = (x - x0).norm();
    double val = r > 0 ? std::sin(k * r) / (two_pi * r) : k / two_pi;
    double sum = 0;
    for (int j = 0; j < s.M(); ++j) {
        if (taus[j].tau3 == 0.0)
            throw DegenerateModeError("tau3 vanishes for mode " + std::to_string(j) + " (alpha0 + beta_j = 0)", j);
        sum += taus[j].tau4.imag() / (taus[j].tau3 * taus[j].tau3) * zeta(j, x, x0, 0.0, spec, s).real();
    }
    return val + std::pow(c, 1.5) / std::sqrt(s.cavity_volume) * std::sqrt(e) * sum;
}

}  // namespace helmres
