#include "helmres/closed_form_integrals.hpp"

#include <cmath>

#include "helmres/errors.hpp"

namespace helmres {
namespace {

void need_b(const LorentzianSpec& s) {
    if (s.b == 0.0) throw ParameterError("Lorentzian half-width b must be nonzero");
}

void need_centered(const LorentzianSpec& s) {
    if (!(s.A1 <= s.a && s.a <= s.A2)) throw ParameterError("formula requires A1 <= a <= A2");
}

}  // namespace

std::complex<double> complex_lorentzian_integral(const LorentzianSpec& s) {
    need_b(s);
    const double u2 = s.A2 - s.a, u1 = s.A1 - s.a, b2 = s.b * s.b;
    const double re = 0.5 * std::log((u2 * u2 + b2) / (u1 * u1 + b2));
    // atan difference written as a single atan2 so nothing jumps when the interval straddles a
    const double im = std::atan2(s.b * (u2 - u1), b2 + u1 * u2);
    return {re, im};
}

double abs_im_lorentzian_integral(const LorentzianSpec& s) {
    need_b(s);
    const double b = std::abs(s.b);
    return std::atan((s.A2 - s.a) / b) + std::atan((s.a - s.A1) / b);
}

double weighted_abs_im_lorentzian(const LorentzianSpec& s) {
    need_b(s);
    need_centered(s);
    const double u2 = s.A2 - s.a, u1 = s.A1 - s.a, b2 = s.b * s.b;
    return 0.5 * std::abs(s.b) * (std::log1p(u2 * u2 / b2) + std::log1p(u1 * u1 / b2));
}

double abs_ratio_integral(const LorentzianSpec& s) {
    need_centered(s);
    const double u2 = s.A2 - s.a, u1 = s.A1 - s.a, b = std::abs(s.b);
    // sqrt(u^2+b^2) - |b| in cancellation-free form
    auto f = [b](double u) { return u * u / (std::hypot(u, b) + b); };
    return f(u2) + f(u1);
}

namespace leading_order {

double abs_ratio_integral(const LorentzianSpec& s) { return 2.0 * (s.A2 - s.A1 - 2.0 * s.b); }

double log_form(const LorentzianSpec& s) {
    need_b(s);
    return std::log(std::abs(s.A2 - s.a)) + std::log(std::abs(s.A1 - s.a)) - 2.0 * std::log(std::abs(s.b));
}

double weighted_abs_im_lorentzian(const LorentzianSpec& s) { return std::abs(s.b) * log_form(s); }

}  // namespace leading_order

}  // namespace helmres
