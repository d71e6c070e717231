#include "helmres/timereversal_imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helmres/errors.hpp"
#include "helmres/quadrature.hpp"

namespace helmres {
namespace {

constexpr double pi = std::numbers::pi;

double trapz_sq(const std::vector<double>& f, double h) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (i == 0 || i + 1 == f.size() ? 0.5 : 1.0) * f[i] * f[i];
    return s * h;
}

void sample(SignalSpec& s, int grid) {
    s.t.resize(grid + 1);
    s.F.resize(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        s.t[i] = s.C1 * i / grid;
        s.F[i] = s.fn(s.t[i]);
        if (!std::isfinite(s.F[i])) throw ParameterError("root signal is not finite on its support");
    }
}

// sum_i wf_i e^{i u t_i}, trapezoid weights folded in; phase by recurrence, refreshed every 64 steps
cd trapezoid_transform(const std::vector<double>& t, const std::vector<double>& f, double u, bool weight_t) {
    const std::size_t n = t.size();
    const double h = t[1] - t[0];
    const cd step = std::polar(1.0, u * h);
    cd acc = 0, ph;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0)
            ph = std::polar(1.0, u * t[i]);
        else
            ph *= step;
        double v = f[i] * (i == 0 || i + 1 == n ? 0.5 : 1.0);
        if (weight_t) v *= t[i];
        acc += v * ph;
    }
    return acc * h;
}

void find_cut(SignalSpec& s) {
    const double nyq = pi / s.dt();
    double peak = 0, last = 0;
    for (double u = 0; u <= 0.5 * nyq; u += 1.0) {
        const double a = std::abs(trapezoid_transform(s.t, s.F, u, false));
        peak = std::max(peak, a);
        if (a > 1e-13 * peak) last = u;
    }
    s.u_cut = std::min(1.2 * last + 5.0, 0.5 * nyq);
    s.aliasing = s.u_cut >= 0.5 * nyq;
}

}  // namespace

SignalKind parse_signal_kind(const std::string& s) {
    if (s == "smooth_bump") return SignalKind::smooth_bump;
    if (s == "raised_cosine") return SignalKind::raised_cosine;
    if (s == "custom") return SignalKind::custom;
    throw ParameterError("unknown signal kind '" + s + "'");
}

std::string to_string(SignalKind k) {
    switch (k) {
        case SignalKind::smooth_bump: return "smooth_bump";
        case SignalKind::raised_cosine: return "raised_cosine";
        case SignalKind::custom: return "custom";
    }
    return "?";
}

SignalSpec make_root_signal(SignalKind kind, double C1, int grid, std::function<double(double)> custom) {
    if (!(C1 > 0)) throw ParameterError("signal support C1 must be positive");
    if (grid < 16) throw ParameterError("signal grid too small");
    SignalSpec s;
    s.kind = kind;
    s.C1 = C1;
    std::function<double(double)> base;
    switch (kind) {
        case SignalKind::smooth_bump:
            base = [C1](double t) { return t > 0 && t < C1 ? std::exp(-1.0 / (t * (C1 - t))) : 0.0; };
            break;
        case SignalKind::raised_cosine:
            base = [C1](double t) { return t > 0 && t < C1 ? 0.5 * (1.0 - std::cos(2 * pi * t / C1)) : 0.0; };
            break;
        case SignalKind::custom:
            if (!custom) throw ParameterError("custom signal requires a function");
            for (double t : {-C1, -1e-3 * C1, C1 * (1 + 1e-3), 2 * C1})
                if (custom(t) != 0.0) throw ParameterError("custom signal is not supported in [0, C1]");
            base = custom;
            break;
    }
    s.fn = base;
    sample(s, grid);
    if (kind != SignalKind::custom) {
        const double nrm = std::sqrt(trapz_sq(s.F, s.dt()));
        s.fn = [base, nrm](double t) { return base(t) / nrm; };
        for (double& v : s.F) v /= nrm;
    }
    find_cut(s);
    return s;
}

std::vector<cd> fourier(const std::vector<double>& f, const std::vector<double>& t, const std::vector<double>& u,
                        bool* aliasing) {
    if (f.size() != t.size() || t.size() < 2) throw ParameterError("fourier: sample/grid mismatch");
    const double nyq = pi / (t[1] - t[0]);
    std::vector<cd> out;
    bool al = false;
    for (double v : u) {
        if (std::abs(v) > nyq) al = true;
        out.push_back(trapezoid_transform(t, f, v, false));
    }
    if (aliasing) *aliasing = al;
    return out;
}

cd spectrum_at(const SignalSpec& s, double u) {
    if (std::abs(u) > s.u_cut) return 0.0;
    return trapezoid_transform(s.t, s.F, u, false);
}

cd spectrum_derivative_at(const SignalSpec& s, double u) {
    if (std::abs(u) > s.u_cut) return 0.0;
    return cd(0, 1) * trapezoid_transform(s.t, s.F, u, true);
}

void tabulate_spectrum(SignalSpec& s, const std::vector<double>& u) {
    s.k_grid = u;
    s.spectrum.clear();
    for (double v : u) s.spectrum.push_back(spectrum_at(s, v));
}

double s_of_k(const SignalSpec& s, double eps, double t, double k) {
    const cd F = spectrum_at(s, k / std::sqrt(eps));
    return std::pow(eps, -0.25) * std::imag(F * std::polar(1.0, k * t));
}

double s_prime_of_k(const SignalSpec& s, double eps, double t, double k) {
    const double u = k / std::sqrt(eps);
    const cd F = spectrum_at(s, u), dF = spectrum_derivative_at(s, u);
    return std::pow(eps, -0.25) * std::imag((dF / std::sqrt(eps) + cd(0, t) * F) * std::polar(1.0, k * t));
}

double tail_integral(const SignalSpec& sig, double from) {
    if (from >= sig.u_cut) return 0.0;
    std::vector<double> br;
    for (double u = from; u < sig.u_cut; u += 0.5) br.push_back(u);
    br.push_back(sig.u_cut);
    return composite_gauss([&](double u) { return std::abs(spectrum_at(sig, u)); }, br, 8);
}

namespace {

double h2_norm(const std::function<double(double)>& fn, double C1, int n) {
    // zero-extended grid so jumps at the support ends are seen
    const double h = C1 / n;
    std::vector<double> f(n + 5), d1(n + 5), d2(n + 5);
    for (int i = 0; i < n + 5; ++i) f[i] = fn((i - 2) * h);
    for (int i = 1; i + 1 < n + 5; ++i) {
        d1[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        d2[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
    }
    return std::sqrt(trapz_sq(f, h) + trapz_sq(d1, h) + trapz_sq(d2, h));
}

void push_panels(std::vector<double>& br, double a, double b, double h) {
    const int n = std::max(1, int(std::ceil((b - a) / h)));
    for (int i = 0; i <= n; ++i) br.push_back(a + (b - a) * i / n);
}

void apply_rule(const std::vector<double>& breaks, int n, std::vector<double>& k, std::vector<double>& w) {
    const Rule& g = gauss_legendre(n);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], h = breaks[i + 1] - a;
        if (h <= 1e-300) continue;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            k.push_back(a + h * g.x[j]);
            w.push_back(h * g.w[j]);
        }
    }
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > 1e-15 * std::max(1.0, std::abs(x))) out.push_back(x);
    return out;
}

double base_step(const SignalSpec& sig, double eps, const ImagingOptions& opt) {
    return std::min(std::sqrt(eps) / std::max(1.0, sig.C1), 1.0 / (1.0 + std::abs(opt.t) + opt.r_max));
}

}  // namespace

QuasiReport quasi_stationary_report(const SignalSpec& sig, const ResonatorSystem& s, const Vec3& x, const Vec3& x0,
                                    const QuasiThresholds& th) {
    QuasiReport r;
    const int n = static_cast<int>(sig.t.size()) - 1;
    r.h2_norm = h2_norm(sig.fn, sig.C1, n);
    r.h2_norm_refined = h2_norm(sig.fn, sig.C1, 2 * n);
    r.h2_ok = std::isfinite(r.h2_norm_refined) && r.h2_norm_refined <= th.h2_growth_max * r.h2_norm;
    const double eps = s.epsilon;
    r.tail_from = std::pow(eps, -sig.delta);
    r.tail_integral = tail_integral(sig, r.tail_from);
    r.tail_ratio = r.tail_integral / eps;
    r.tail_ok = r.tail_ratio <= th.tail_ratio_max && !sig.aliasing;
    const double se = std::sqrt(eps), u0 = 0.5 * neumann_k1(s.h) / se;
    if (u0 < sig.u_cut) {
        std::vector<double> br;
        push_panels(br, u0, sig.u_cut, std::min(0.5, 1.0 / (se * (1.0 + (x - x0).norm()))));
        r.hf_integral = composite_gauss(
            [&](double u) { return im_g1(x, x0, se * u) * std::imag(spectrum_at(sig, u)); }, br, 8);
    }
    r.hf_ratio = std::abs(r.hf_integral) / eps;
    r.hf_ok = r.hf_ratio <= th.hf_ratio_max;
    return r;
}

ImagingGrid make_imaging_grid(const SignalSpec& sig, const ResonatorSystem& s, const std::vector<Resonance>& res,
                              const ImagingOptions& opt) {
    ImagingGrid g;
    g.eps = s.epsilon;
    g.t = opt.t;
    const double k1 = neumann_k1(s.h), se = std::sqrt(g.eps);
    g.k_half = 0.5 * k1;
    g.k_max = std::min(opt.kmax_factor * k1, se * sig.u_cut);
    const double h0 = base_step(sig, g.eps, opt);
    std::vector<double> br;
    push_panels(br, 0.0, g.k_half, h0);
    const double band = 2.0 * std::sqrt(s.capacity / s.cavity_volume) * se;
    if (band < g.k_half) br.push_back(band);
    g.min_step_near_pole = h0;
    for (const auto& r : res) {
        const double a = r.value.real(), b = std::abs(r.value.imag());
        if (!(a > 0 && a < g.k_half) || b == 0) continue;
        br.push_back(a);
        for (double m = 1; m * b < h0; m *= 5) {
            for (double sgn : {-1.0, 1.0}) {
                const double p = a + sgn * m * b;
                if (p > 0 && p < g.k_half) br.push_back(p);
            }
        }
        g.min_step_near_pole = std::min(g.min_step_near_pole, b / opt.gauss);
    }
    apply_rule(sorted_unique(br), opt.gauss, g.k, g.w);
    for (double k : g.k) g.s.push_back(s_of_k(sig, g.eps, g.t, k));
    if (g.k_max > g.k_half) {
        std::vector<double> b5;
        push_panels(b5, g.k_half, g.k_max, h0);
        apply_rule(b5, opt.gauss, g.k5, g.w5);
        for (double k : g.k5) g.s5.push_back(s_of_k(sig, g.eps, g.t, k));
    }
    return g;
}

ImagingBreakdown imaging_functional(const Vec3& x, const Vec3& x0, const ImagingGrid& g, const ResonatorSystem& s,
                                    const SpectralData& spec, const std::vector<Resonance>& res,
                                    const ImagingOptions& opt) {
    if (std::abs(g.eps - s.epsilon) > 1e-15 * s.epsilon) throw ParameterError("imaging grid built for another epsilon");
    check_field_point(x, s);
    check_field_point(x0, s);
    ImagingBreakdown b;
    const double band = 2.0 * std::sqrt(s.capacity / s.cavity_volume) * std::sqrt(s.epsilon);
    for (std::size_t i = 0; i < g.k.size(); ++i) {
        const double k = g.k[i], ws = g.w[i] * g.s[i];
        const GreenParts p = green_corrections(x, x0, k, s, spec, res, opt.zeta_mode, opt.g4);
        const double i1 = im_g1(x, x0, k) * ws;
        b.I1 += i1;
        if (k <= band) b.I1_band += i1;
        b.I2 += p.g2.imag() * ws;
        b.I3 += p.g3.imag() * ws;
        b.I4 += p.g4.imag() * ws;
    }
    for (std::size_t i = 0; i < g.k5.size(); ++i) b.I5 += im_g1(x, x0, g.k5[i]) * g.w5[i] * g.s5[i];
    b.total = b.I1 + b.I2 + b.I3 + b.I4 + b.I5;
    return b;
}

ImagingBreakdown imaging_functional(const Vec3& x, const Vec3& x0, const SignalSpec& sig, const ResonatorSystem& s,
                                    const SpectralData& spec, const std::vector<Resonance>& res,
                                    const ImagingOptions& opt) {
    return imaging_functional(x, x0, make_imaging_grid(sig, s, res, opt), s, spec, res, opt);
}

double resolution_kernel_t0(const Vec3& x, const Vec3& x0, const SignalSpec& sig, const ResonatorSystem& s,
                            const SpectralData& spec, const std::vector<Resonance>& res, ImagingOptions opt) {
    opt.t = 0.0;
    return -2.0 / pi * imaging_functional(x, x0, sig, s, spec, res, opt).total;
}

cd kernel_spectrum(const Vec3& x, const Vec3& x0, double w, const ResonatorSystem& s, const SpectralData& spec,
                   const std::vector<Resonance>& res) {
    const GreenParts p = green_corrections(x, x0, w, s, spec, res);
    return cd(0, -2.0) * (im_g1(x, x0, w) + p.total.imag());
}

LeadingOrder leading_order_prediction(const Vec3& x, const Vec3& x0, double t, const SignalSpec& sig,
                               const ResonatorSystem& s, const SpectralData& spec) {
    (void)spec;
    LeadingOrder r;
    const double eps = s.epsilon, se = std::sqrt(eps);
    const double tau1 = std::sqrt(s.capacity / s.cavity_volume);
    ImagingOptions opt;
    opt.t = t;
    opt.r_max = std::max(opt.r_max, (x - x0).norm());
    std::vector<double> br;
    push_panels(br, 0.0, 2 * tau1 * se, base_step(sig, eps, opt));
    r.band = composite_gauss([&](double k) { return im_g1(x, x0, k) * s_of_k(sig, eps, t, k); }, br, 8);
    double geo = 0;
    for (int j = 0; j < s.M(); ++j) {
        const Vec3 z = center3(s, j);
        geo += 1.0 / (4 * pi * (x - z).norm() * (x0 - z).norm());
    }
    const double pref = std::pow(s.capacity, 1.5) / std::sqrt(s.cavity_volume) * std::pow(eps, 1.25) * geo;
    const cd F = spectrum_at(sig, tau1);
    r.resonator = pref * std::imag(F * std::polar(1.0, tau1 * se * t));
    r.resonator_conj = pref * std::imag(F * std::polar(1.0, -tau1 * se * t));
    return r;
}

FocalMetrics focal_metrics(const std::vector<double>& pos, const std::vector<double>& val) {
    const std::size_t n = val.size();
    if (n < 3 || pos.size() != n) throw ParameterError("focal_metrics needs at least 3 samples");
    const std::size_t i = std::max_element(val.begin(), val.end()) - val.begin();
    if (i == 0 || i + 1 == n) throw NumericalError("profile has no interior peak");
    FocalMetrics m;
    // parabola through the three samples around the maximum
    const double x0 = pos[i - 1], x1 = pos[i], x2 = pos[i + 1];
    const double y0 = val[i - 1], y1 = val[i], y2 = val[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double c2 = (d12 - d01) / (x2 - x0);
    if (c2 < 0) {
        const double c1 = d01 - c2 * (x0 + x1);
        m.peak = -c1 / (2 * c2);
        m.peak_value = y1 + c1 * (m.peak - x1) + c2 * (m.peak * m.peak - x1 * x1);
    } else {
        m.peak = x1;
        m.peak_value = y1;
    }
    const double half = 0.5 * m.peak_value;
    std::size_t l = i, r = i;
    while (l > 0 && val[l] >= half) --l;
    while (r + 1 < n && val[r] >= half) ++r;
    if (val[l] >= half || val[r] >= half) throw NumericalError("half maximum not reached inside the scan");
    const double xl = pos[l] + (half - val[l]) * (pos[l + 1] - pos[l]) / (val[l + 1] - val[l]);
    const double xr = pos[r - 1] + (half - val[r - 1]) * (pos[r] - pos[r - 1]) / (val[r] - val[r - 1]);
    m.fwhm = xr - xl;
    return m;
}

double recording_time(double epsilon, double safety) {
    if (!(epsilon > 0)) throw ParameterError("epsilon must be positive");
    if (!(safety >= 1)) throw ParameterError("safety factor must be >= 1");
    return safety / (epsilon * epsilon);
}

}  // namespace helmres
