#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <vector>

#include "helmres/closed_form_integrals.hpp"
#include "helmres/errors.hpp"

using namespace helmres;
using boost::math::quadrature::gauss_kronrod;
constexpr double pi = std::numbers::pi;

namespace {

// composite Gauss-Kronrod on panels graded geometrically toward the peak at a
template <class F>
double gk(F f, double A1, double A2, double a, double b = 1) {
    std::vector<double> br{A1, A2};
    if (a > A1 && a < A2) br.push_back(a);
    for (double d = std::abs(b) / 64; d < A2 - A1; d *= 2) {
        if (a - d > A1 && a - d < A2) br.push_back(a - d);
        if (a + d > A1 && a + d < A2) br.push_back(a + d);
    }
    std::sort(br.begin(), br.end());
    double s = 0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i)
        s += gauss_kronrod<double, 61>::integrate(f, br[i], br[i + 1], 8, 1e-15);
    return s;
}

}  // namespace

TEST_CASE("complex Lorentzian examples") {
    auto v = complex_lorentzian_integral({-1, 1, 0, 1});
    CHECK(std::abs(v.real()) < 1e-15);
    CHECK(v.imag() == doctest::Approx(pi / 2).epsilon(1e-14));
    const double oq = gk([](double k) { return 1.0 / (k * k + 1); }, -1, 1, 0);
    CHECK(v.imag() == doctest::Approx(oq).epsilon(1e-12));
    v = complex_lorentzian_integral({0, 1, 0.5, 0.1});
    CHECK(std::abs(v.real()) < 1e-15);
    CHECK(v.imag() == doctest::Approx(2 * std::atan(5.0)).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(2.7468).epsilon(1e-4));
    CHECK(complex_lorentzian_integral({0.3, 0.3, 0.1, 0.2}) == std::complex<double>(0, 0));
    CHECK_THROWS_AS(complex_lorentzian_integral({0, 1, 0.5, 0}), ParameterError);
}

TEST_CASE("absolute imaginary part") {
    const double b = 0.01;
    CHECK(abs_im_lorentzian_integral({-1, 1, 0, b}) == doctest::Approx(2 * std::atan(100.0)).epsilon(1e-14));
    CHECK(abs_im_lorentzian_integral({-1, 1, 0, b}) == doctest::Approx(3.1216).epsilon(1e-4));
    CHECK(abs_im_lorentzian_integral({-1, 1, 0, 1}) == doctest::Approx(pi / 2));
    CHECK(abs_im_lorentzian_integral({-1, 1, 0, 1e-12}) == doctest::Approx(pi).epsilon(1e-11));
    CHECK(abs_im_lorentzian_integral({-1, 1, 0, -b}) == abs_im_lorentzian_integral({-1, 1, 0, b}));
}

TEST_CASE("weighted forms and leading-order approximations") {
    const LorentzianSpec s{-1, 1, 0, 1e-4};
    const double exact = weighted_abs_im_lorentzian(s);
    CHECK(std::abs(exact - leading_order::weighted_abs_im_lorentzian(s)) / exact < 1e-7);
    const LorentzianSpec u{-1, 1, 0, 1};
    CHECK(weighted_abs_im_lorentzian(u) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(leading_order::weighted_abs_im_lorentzian(u) == 0.0);
    const double oq = gk([](double k) { return std::abs(k) / (k * k + 1); }, -1, 1, 0);
    CHECK(weighted_abs_im_lorentzian(u) == doctest::Approx(oq).epsilon(1e-12));
    // scaling by lambda: value scales by lambda (logs only see ratios)
    const LorentzianSpec v{-0.7, 1.3, 0.2, 0.05};
    const double lam = 3.7;
    const LorentzianSpec w{v.A1 * lam, v.A2 * lam, v.a * lam, v.b * lam};
    CHECK(weighted_abs_im_lorentzian(w) == doctest::Approx(lam * weighted_abs_im_lorentzian(v)).epsilon(1e-13));
    // the leading-order abs-ratio form is twice the leading order of the exact integral
    const LorentzianSpec n{-1, 2, 0, 1e-6};
    CHECK(abs_ratio_integral(n) == doctest::Approx(3 - 2e-6).epsilon(1e-10));
    CHECK(leading_order::abs_ratio_integral(n) / abs_ratio_integral(n) == doctest::Approx(2).epsilon(1e-5));
    CHECK_THROWS_AS(weighted_abs_im_lorentzian({0, 1, 2, 0.1}), ParameterError);
}

TEST_CASE("closed forms against adaptive quadrature on random specs") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-2, 2), L(-6, 0);
    for (int n = 0; n < 200; ++n) {
        double A1 = U(rng), A2 = U(rng);
        if (A1 > A2) std::swap(A1, A2);
        const double a = A1 + (A2 - A1) * std::uniform_real_distribution<double>(0, 1)(rng);
        const double b = std::pow(10.0, L(rng)) * (n % 2 ? 1 : -1);
        const LorentzianSpec s{A1, A2, a, b};
        const auto c = complex_lorentzian_integral(s);
        const double re = gk([&](double k) { return (k - a) / ((k - a) * (k - a) + b * b); }, A1, A2, a, b);
        const double im = gk([&](double k) { return b / ((k - a) * (k - a) + b * b); }, A1, A2, a, b);
        CHECK(std::abs(c.real() - re) < 1e-10);
        CHECK_MESSAGE(std::abs(c.imag() - im) < 1e-10, std::setprecision(17) << A1 << " " << A2 << " " << a << " " << b << " " << c.imag() << " " << im);
        CHECK(std::abs(c.imag()) <= pi);
        CHECK(std::abs(abs_im_lorentzian_integral(s) - std::abs(im)) < 1e-10);
        const double wq = gk([&](double k) { return std::abs(b) * std::abs(k - a) / ((k - a) * (k - a) + b * b); },
                             A1, A2, a, b);
        CHECK(std::abs(weighted_abs_im_lorentzian(s) - wq) < 1e-10);
        const double rq = gk([&](double k) { return std::abs(k - a) / std::hypot(k - a, b); }, A1, A2, a, b);
        CHECK(std::abs(abs_ratio_integral(s) - rq) < 1e-10);
    }
}
