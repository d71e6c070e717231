#pragma once
#include <vector>

#include "helmres/system_model.hpp"

namespace helmres {

struct Tau {
    double tau1 = 0, tau3 = 0;
    cd tau4;
};

struct Resonance {
    cd value;
    int branch = 1;  // 1: Re k > 0, 2: Re k < 0
    int mode = 0;    // 0-based index j into the eigenpairs of T
    double tau1 = 0, tau3 = 0;
    cd tau4;
};

struct CharacteristicVector {
    int mode = 0;
    int branch = 1;
    Eigen::VectorXcd vector;
};

std::vector<Tau> tau_coefficients(const SpectralData& spec, const ResonatorSystem& s);

// 2M values ordered (mode 0, branch 1), (mode 0, branch 2), (mode 1, branch 1), ...
// Throws WindowError when a value leaves |k| <= k1/2 and check_window is set.
std::vector<Resonance> resonances_asymptotic(const ResonatorSystem& s, const SpectralData& spec,
                                             bool check_window = true);
const Resonance& find_resonance(const std::vector<Resonance>& rs, int mode, int branch);

std::vector<CharacteristicVector> characteristic_vectors(const ResonatorSystem& s, const SpectralData& spec);

// Roots of k = +-F(k) with F truncated after the first-order interaction blocks.
// Branch-1 roots first (M of them), then branch-2 roots.
std::vector<cd> resonances_oracle(const ResonatorSystem& s, const SpectralData& spec);
// eigenvectors of the oracle pencil, same order as resonances_oracle
std::vector<Eigen::VectorXcd> oracle_vectors(const ResonatorSystem& s, const SpectralData& spec);

struct MatchedResonance {
    Resonance asym;
    cd oracle;
    double gap = 0;
    bool ambiguous = false;  // oracle root claimed by more than one asymptotic value
};

std::vector<MatchedResonance> match_oracle(const std::vector<Resonance>& asym, const std::vector<cd>& oracle);

bool window_check(cd k, const ResonatorSystem& s);

}  // namespace helmres
