#pragma once
#include <functional>
#include <string>
#include <vector>

#include "helmres/green_field.hpp"

namespace helmres {

enum class SignalKind { smooth_bump, raised_cosine, custom };

SignalKind parse_signal_kind(const std::string& s);
std::string to_string(SignalKind k);

// Root signal F on [0, C1]; the emitted signal is eps^{1/4} F(eps^{1/2} t).
struct SignalSpec {
    SignalKind kind = SignalKind::smooth_bump;
    double C1 = 2.0;
    std::vector<double> t, F;       // uniform samples including both endpoints
    std::function<double(double)> fn;  // the generating function, for resampling
    double epsilon = 1e-2;
    double delta = 0.25;
    double u_cut = 0;             // |F^(u)| is negligible (or unreliable) beyond this
    bool aliasing = false;        // u_cut was limited by the sampling rate
    std::vector<double> k_grid;   // optional tabulation of the spectrum
    std::vector<cd> spectrum;

    double dt() const { return t[1] - t[0]; }
};

// normalized to unit L2 norm (custom signals are used as given)
SignalSpec make_root_signal(SignalKind kind, double C1, int grid = 4096,
                            std::function<double(double)> custom = {});

// F^(u) = int F(t) e^{iut} dt by the trapezoidal rule; aliasing set when u exceeds Nyquist
std::vector<cd> fourier(const std::vector<double>& f, const std::vector<double>& t, const std::vector<double>& u,
                        bool* aliasing = nullptr);
cd spectrum_at(const SignalSpec& s, double u);
// d/du F^(u) = int i t F(t) e^{iut} dt
cd spectrum_derivative_at(const SignalSpec& s, double u);
void tabulate_spectrum(SignalSpec& s, const std::vector<double>& u);

// s(k) = Im( f^(k) e^{ikt} ),  f^(k) = eps^{-1/4} F^(k / sqrt(eps))
double s_of_k(const SignalSpec& s, double eps, double t, double k);
double s_prime_of_k(const SignalSpec& s, double eps, double t, double k);

struct QuasiThresholds {
    double tail_ratio_max = 0.1;  // tail integral / eps
    double hf_ratio_max = 0.1;    // high-frequency integral / eps
    double h2_growth_max = 1.2;   // H2 norm growth under grid doubling
};

struct QuasiReport {
    double h2_norm = 0, h2_norm_refined = 0;
    double tail_integral = 0, tail_ratio = 0, tail_from = 0;
    double hf_integral = 0, hf_ratio = 0;
    bool h2_ok = false, tail_ok = false, hf_ok = false;
    bool pass() const { return h2_ok && tail_ok && hf_ok; }
};

QuasiReport quasi_stationary_report(const SignalSpec& sig, const ResonatorSystem& s, const Vec3& x, const Vec3& x0,
                                    const QuasiThresholds& th = {});
double tail_integral(const SignalSpec& sig, double from);

struct ImagingOptions {
    double t = 0.0;
    ZetaMode zeta_mode = ZetaMode::at_k;
    G4Model g4;
    double kmax_factor = 50.0;  // I5 runs over [k1/2, kmax_factor * k1]
    double r_max = 4.0;         // largest |x - x0| scale the grid must resolve
    int gauss = 8;
};

// Precomputed k-quadrature with s(k) samples, shared by all scan points.
struct ImagingGrid {
    double eps = 0, t = 0, k_half = 0, k_max = 0;
    std::vector<double> k, w, s;     // [0, k1/2]
    std::vector<double> k5, w5, s5;  // [k1/2, k_max]
    double min_step_near_pole = 0;
};

ImagingGrid make_imaging_grid(const SignalSpec& sig, const ResonatorSystem& s, const std::vector<Resonance>& res,
                              const ImagingOptions& opt = {});

struct ImagingBreakdown {
    double I1 = 0, I2 = 0, I3 = 0, I4 = 0, I5 = 0, total = 0;
    double I1_band = 0;  // I1 restricted to [0, 2 tau1 sqrt(eps)]
};

ImagingBreakdown imaging_functional(const Vec3& x, const Vec3& x0, const ImagingGrid& g, const ResonatorSystem& s,
                                    const SpectralData& spec, const std::vector<Resonance>& res,
                                    const ImagingOptions& opt = {});
ImagingBreakdown imaging_functional(const Vec3& x, const Vec3& x0, const SignalSpec& sig, const ResonatorSystem& s,
                                    const SpectralData& spec, const std::vector<Resonance>& res,
                                    const ImagingOptions& opt = {});

// phi(x, x0, 0) = -(2/pi) int_0^inf Im G(x,x0,w) Im f^(w) dw
double resolution_kernel_t0(const Vec3& x, const Vec3& x0, const SignalSpec& sig, const ResonatorSystem& s,
                            const SpectralData& spec, const std::vector<Resonance>& res, ImagingOptions opt = {});
// spectrum of G(.,-t) - G(.,t): -2i Im G
cd kernel_spectrum(const Vec3& x, const Vec3& x0, double w, const ResonatorSystem& s, const SpectralData& spec,
                   const std::vector<Resonance>& res);

struct LeadingOrder {
    double band = 0;         // sinc term over [0, 2 tau1 sqrt(eps)]
    double resonator = 0;    // with the phase e^{+i tau1 sqrt(eps) t}
    double resonator_conj = 0;  // with e^{-i tau1 sqrt(eps) t}
    double total() const { return band + resonator; }
};

LeadingOrder leading_order_prediction(const Vec3& x, const Vec3& x0, double t, const SignalSpec& sig,
                               const ResonatorSystem& s, const SpectralData& spec);

struct FocalMetrics {
    double peak = 0, peak_value = 0, fwhm = 0;
};

FocalMetrics focal_metrics(const std::vector<double>& pos, const std::vector<double>& val);

double recording_time(double epsilon, double safety = 10.0);

}  // namespace helmres
