#pragma once
#include <cstdint>
#include <vector>

#include "helmres/resonance_engine.hpp"

namespace helmres {

using Vec3 = Eigen::Vector3d;

// x3 > 0 and outside every aperture
void check_field_point(const Vec3& x, const ResonatorSystem& s);
Vec3 center3(const ResonatorSystem& s, int j);

// e^{ik|x-y|} / (2 pi |x-y|)
cd gex(const Vec3& x, const Vec3& y, cd k);
Eigen::VectorXcd green_vector(const Vec3& x, cd k, const ResonatorSystem& s);
cd zeta(int j, const Vec3& x, const Vec3& x0, cd k, const SpectralData& spec, const ResonatorSystem& s);

enum class ZetaMode { at_k, frozen_at_0 };

// O(eps^2) residual modeled as sum_j C2_j/(k - k_{j,2}) + C1_j/(k - k_{j,1}); empty means zero
struct G4Model {
    std::vector<cd> C1, C2;
    bool active() const { return !C1.empty(); }
};

// |C| = eps^2 with phases drawn from a seeded generator
G4Model robustness_g4(int M, double eps, std::uint64_t seed);

struct GreenParts {
    cd g1, g2, g3, g4, total;
    bool near_pole = false;
};

// Im of the free-space part; finite at x = x0 where it tends to k / (2 pi)
double im_g1(const Vec3& x, const Vec3& x0, double k);

// g2, g3, g4 only (g1 = 0): usable at x = x0
GreenParts green_corrections(const Vec3& x, const Vec3& x0, double k, const ResonatorSystem& s,
                             const SpectralData& spec, const std::vector<Resonance>& res,
                             ZetaMode zm = ZetaMode::at_k, const G4Model& g4 = {});

GreenParts perturbed_green(const Vec3& x, const Vec3& x0, double k, const ResonatorSystem& s,
                           const SpectralData& spec, const std::vector<Resonance>& res,
                           ZetaMode zm = ZetaMode::at_k, const G4Model& g4 = {});

// two-term estimate of Im G at k = tau1 sqrt(eps); refuses modes with tau3 = 0
double im_green_fixed_frequency(const Vec3& x, const Vec3& x0, const ResonatorSystem& s, const SpectralData& spec);

}  // namespace helmres
