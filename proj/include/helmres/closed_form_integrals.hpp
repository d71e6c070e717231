#pragma once
#include <complex>

namespace helmres {

struct LorentzianSpec {
    double A1 = 0, A2 = 0, a = 0, b = 1;
};

// int_{A1}^{A2} dk / (k - a - i b)
std::complex<double> complex_lorentzian_integral(const LorentzianSpec& s);
// int |Im 1/(k - a - i b)| dk = int |b| / ((k-a)^2 + b^2) dk
double abs_im_lorentzian_integral(const LorentzianSpec& s);
// int |Im 1/(k - a - i b)| |k - a| dk, needs A1 <= a <= A2
double weighted_abs_im_lorentzian(const LorentzianSpec& s);
// int |k - a| / sqrt((k-a)^2 + b^2) dk, needs A1 <= a <= A2
double abs_ratio_integral(const LorentzianSpec& s);

// leading-order forms, kept for comparison only
namespace leading_order {
double abs_ratio_integral(const LorentzianSpec& s);          // 2 (A2 - A1 - 2b)
double weighted_abs_im_lorentzian(const LorentzianSpec& s);  // |b| (ln|A2-a| + ln|A1-a| - 2 ln|b|)
double log_form(const LorentzianSpec& s);                    // ln|A2-a| + ln|A1-a| - 2 ln|b|
}  // namespace leading_order

}  // namespace helmres
