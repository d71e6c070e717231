#include "helmres/resonance_engine.hpp"

#include <cmath>
#include <map>

#include "helmres/errors.hpp"

namespace helmres {

std::vector<Tau> tau_coefficients(const SpectralData& spec, const ResonatorSystem& s) {
    const double c = s.capacity, D = s.cavity_volume;
    const double t1 = std::sqrt(c / D);
    std::vector<Tau> out;
    for (int j = 0; j < spec.betas.size(); ++j) {
        const Eigen::VectorXcd y = spec.Y.col(j).cast<cd>();
        const cd ysy = y.transpose() * spec.S * y;
        out.push_back({t1, -0.5 * (s.alpha0 + spec.betas(j)) * t1 * c, -0.5 * (c * c / D) * ysy});
    }
    return out;
}

std::vector<Resonance> resonances_asymptotic(const ResonatorSystem& s, const SpectralData& spec,
                                             bool check_window) {
    const double e = s.epsilon, se = std::sqrt(e);
    std::vector<Resonance> out;
    const auto taus = tau_coefficients(spec, s);
    for (int j = 0; j < static_cast<int>(taus.size()); ++j) {
        const Tau& t = taus[j];
        const cd k1 = t.tau1 * se + t.tau3 * e * se + t.tau4 * e * e;
        const cd k2 = -t.tau1 * se - t.tau3 * e * se + t.tau4 * e * e;
        out.push_back({k1, 1, j, t.tau1, t.tau3, t.tau4});
        out.push_back({k2, 2, j, t.tau1, t.tau3, t.tau4});
    }
    if (check_window)
        for (const auto& r : out)
            if (!window_check(r.value, s))
                throw WindowError("resonance outside the low-frequency window |k| <= k1/2; reduce epsilon");
    return out;
}

const Resonance& find_resonance(const std::vector<Resonance>& rs, int mode, int branch) {
    for (const auto& r : rs)
        if (r.mode == mode && r.branch == branch) return r;
    throw ParameterError("no resonance for mode " + std::to_string(mode) + " branch " + std::to_string(branch));
}

std::vector<CharacteristicVector> characteristic_vectors(const ResonatorSystem& s, const SpectralData& spec) {
    const int M = s.M();
    if (spec.degenerate)
        throw DegenerateModeError("eigenvalues of T are not mutually distinct; characteristic vectors undefined", -1);
    const double t1 = std::sqrt(s.capacity / s.cavity_volume), se = std::sqrt(s.epsilon);
    std::vector<CharacteristicVector> out;
    for (int j = 0; j < M; ++j) {
        const Eigen::VectorXcd yj = spec.Y.col(j).cast<cd>();
        Eigen::VectorXcd corr = Eigen::VectorXcd::Zero(M);
        for (int i = 0; i < M; ++i) {
            if (i == j) continue;
            const Eigen::VectorXcd yi = spec.Y.col(i).cast<cd>();
            const cd proj = yi.transpose() * spec.S * yj;
            corr += t1 / (spec.betas(j) - spec.betas(i)) * proj * yi;
        }
        out.push_back({j, 1, yj + se * corr});
        out.push_back({j, 2, yj - se * corr});
    }
    return out;
}

namespace {

// k v = sigma a (P - b' k S) v  <=>  k (I + sigma a b' S) v = sigma a P v
Eigen::ComplexEigenSolver<Eigen::MatrixXcd> pencil(const ResonatorSystem& s, const SpectralData& spec,
                                                    double sigma) {
    const int M = s.M();
    const double e = s.epsilon, c = s.capacity;
    const double a = std::sqrt(e * c / s.cavity_volume), half = 0.5 * e * c;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(M, M);
    const Eigen::MatrixXcd P = I - half * (s.alpha0 * I + spec.T.cast<cd>());
    const Eigen::MatrixXcd L = I + sigma * a * half * spec.S;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(L);
    const Eigen::MatrixXcd K = lu.solve(sigma * a * P);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K);
    if (es.info() != Eigen::Success) throw NumericalError("oracle eigensolver failed; epsilon too large?");
    return es;
}

}  // namespace

std::vector<cd> resonances_oracle(const ResonatorSystem& s, const SpectralData& spec) {
    std::vector<cd> out;
    for (double sigma : {1.0, -1.0}) {
        auto es = pencil(s, spec, sigma);
        for (int i = 0; i < s.M(); ++i) out.push_back(es.eigenvalues()(i));
    }
    return out;
}

std::vector<Eigen::VectorXcd> oracle_vectors(const ResonatorSystem& s, const SpectralData& spec) {
    std::vector<Eigen::VectorXcd> out;
    for (double sigma : {1.0, -1.0}) {
        auto es = pencil(s, spec, sigma);
        for (int i = 0; i < s.M(); ++i) out.push_back(es.eigenvectors().col(i));
    }
    return out;
}

std::vector<MatchedResonance> match_oracle(const std::vector<Resonance>& asym, const std::vector<cd>& oracle) {
    std::vector<MatchedResonance> out;
    std::map<std::size_t, int> claims;
    std::vector<std::size_t> pick;
    for (const auto& r : asym) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < oracle.size(); ++i)
            if (std::abs(oracle[i] - r.value) < std::abs(oracle[best] - r.value)) best = i;
        pick.push_back(best);
        ++claims[best];
        out.push_back({r, oracle.at(best), std::abs(oracle[best] - r.value), false});
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].ambiguous = claims[pick[i]] > 1;
    return out;
}

bool window_check(cd k, const ResonatorSystem& s) { return std::abs(k) <= 0.5 * neumann_k1(s.h); }

}  // namespace helmres
