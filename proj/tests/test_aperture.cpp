#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>
#include <numbers>

#include "helmres/aperture_potential.hpp"
#include "helmres/errors.hpp"

using namespace helmres;
using boost::math::quadrature::gauss_kronrod;
constexpr double pi = std::numbers::pi;

namespace {

// int_{disk r}^2 1/(pi|x-y|): the potential of a uniform disk at radius rho is 4 r E(rho/r)
double disk_self_oracle(double r) {
    auto f = [r](double rho) { return 4 * r * boost::math::ellint_2(rho / r) * 2 * pi * rho; };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, r, 15, 1e-13) / pi;
}

// potential of the rectangle [0,a]x[0,b] at an in-plane point, closed form:
// d2/dudv [u asinh(v/|u|) + v asinh(u/|v|)] = 1/sqrt(u^2+v^2)
double rect_potential(double a, double b, double x, double y) {
    auto P = [](double u, double v) {
        double s = 0;
        if (u != 0) s += u * std::asinh(v / std::abs(u));
        if (v != 0) s += v * std::asinh(u / std::abs(v));
        return s;
    };
    return P(a - x, b - y) - P(-x, b - y) - P(a - x, -y) + P(-x, -y);
}

// int_p int_q 1/(pi|x-y|) for axis-aligned unit squares q at (qx,qy), p at the origin
double square_pair_oracle(double qx, double qy) {
    auto inner = [&](double x) {
        auto g = [&](double y) { return rect_potential(1, 1, x - qx, y - qy); };
        return gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 12, 1e-11);
    };
    return gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 12, 1e-11) / pi;
}

Panel square(double x, double y) {
    Panel p;
    p.kind = Panel::Kind::polygon;
    p.v = {Vec2(x, y), Vec2(x + 1, y), Vec2(x + 1, y + 1), Vec2(x, y + 1)};
    return p;
}

}  // namespace

TEST_CASE("single disk panel self term") {
    CHECK(disk_self_oracle(1.0) == doctest::Approx(16.0 / 3.0).epsilon(1e-10));
    for (double r : {1.0, 0.3}) {
        const auto m = scaled(make_mesh(ShapeSpec::disk(), 0), r);
        REQUIRE(m.size() == 1);
        const auto A = assemble_riesz_matrix(m);
        CHECK(A(0, 0) == doctest::Approx(disk_self_oracle(r)).epsilon(1e-4));
    }
}

TEST_CASE("square panel entries against closed-form potential") {
    const auto m = mesh_from_panels({square(0, 0), square(1, 0), square(1, 1), square(2.5, 0.5), square(6, 3)});
    const auto A = assemble_riesz_matrix(m);
    const double self = square_pair_oracle(0, 0);
    // known value for the unit square: (4/pi)(ln(1+sqrt2) - (sqrt2-1)/3)
    CHECK(self == doctest::Approx(4 / pi * (std::log(1 + std::sqrt(2.0)) - (std::sqrt(2.0) - 1) / 3)).epsilon(1e-8));
    CHECK(A(0, 0) == doctest::Approx(self).epsilon(1e-4));
    CHECK(A(0, 1) == doctest::Approx(square_pair_oracle(1, 0)).epsilon(1e-4));
    CHECK(A(0, 2) == doctest::Approx(square_pair_oracle(1, 1)).epsilon(1e-4));
    CHECK(A(0, 3) == doctest::Approx(square_pair_oracle(2.5, 0.5)).epsilon(1e-4));
    CHECK(A(0, 4) == doctest::Approx(square_pair_oracle(6, 3)).epsilon(1e-4));
    CHECK(A(1, 2) == doctest::Approx(square_pair_oracle(0, 1)).epsilon(1e-4));
}

TEST_CASE("mesh invariants") {
    for (int n : {0, 3, 8, 16}) {
        const auto m = make_mesh(ShapeSpec::disk(), n);
        CHECK(m.area() == doctest::Approx(pi).epsilon(1e-6));
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m.nodes[i].norm() <= 1.0);
            CHECK(m.weights[i] > 0);
            CHECK(m.panels[i].contains(m.panels[i].centroid()));
        }
    }
    const auto e = make_mesh(ShapeSpec::ellipse(2, 0.5), 6);
    CHECK(e.area() == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("matrix symmetric and positive definite") {
    for (int n : {4, 8}) {
        const auto A = assemble_riesz_matrix(make_mesh(ShapeSpec::disk(), n));
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0);
    }
}

TEST_CASE("unit disk capacity and density") {
    const auto m = make_mesh(ShapeSpec::disk(), 16);
    CHECK(m.size() <= 5000);
    const auto A = assemble_riesz_matrix(m);
    const auto d = solve_equilibrium(m, A);
    CHECK(std::abs(d.capacity / 2 - 1) < 5e-3);
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(d.values[i] > 0);
        if (m.nodes[i].norm() <= 0.8) CHECK(std::abs(d.values[i] / disk_density_exact(m.nodes[i]) - 1) < 0.02);
    }
    // energy identity
    CHECK(d.values.dot(A * d.values) == doctest::Approx(d.capacity).epsilon(1e-10));
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(m.weights.data(), m.size());
    CHECK(w.dot(d.values) == doctest::Approx(d.capacity).epsilon(1e-14));
}

TEST_CASE("refinement converges monotonically") {
    double prev = 0, prev_diff = 1e9;
    for (int n : {4, 6, 8, 10, 12}) {
        const double c = solve_equilibrium(make_mesh(ShapeSpec::disk(), n)).capacity;
        if (prev != 0) {
            const double diff = std::abs(c - prev);
            CHECK(diff < prev_diff);
            prev_diff = diff;
        }
        prev = c;
    }
}

TEST_CASE("ellipse capacity") {
    const auto disk = solve_equilibrium(make_mesh(ShapeSpec::disk(), 8)).capacity;
    const auto same = solve_equilibrium(make_mesh(ShapeSpec::ellipse(1, 1), 8)).capacity;
    CHECK(same == doctest::Approx(disk).epsilon(1e-13));
    // elliptic plate: pi a / K(e), e^2 = 1 - b^2/a^2
    const double a = 2, b = 1, oracle = pi * a / boost::math::ellint_1(std::sqrt(1 - b * b / (a * a)));
    const auto c = solve_equilibrium(make_mesh(ShapeSpec::ellipse(a, b), 12)).capacity;
    CHECK(c == doctest::Approx(oracle).epsilon(5e-3));
}

TEST_CASE("polygon aperture") {
    std::vector<Vec2> ngon;
    for (int k = 0; k < 48; ++k) ngon.emplace_back(std::cos(2 * pi * k / 48) + 3, std::sin(2 * pi * k / 48) - 1);
    const auto m = make_mesh(ShapeSpec::polygon(ngon), 8);
    const double area = 0.5 * 48 * std::sin(2 * pi / 48);
    CHECK(m.area() == doctest::Approx(area).epsilon(1e-12));
    // inscribed 48-gon: capacity slightly below the disk's
    const double c = solve_equilibrium(m).capacity;
    CHECK(c < 2.0);
    CHECK(c > 1.98);
    CHECK_THROWS_AS(make_mesh(ShapeSpec::polygon({Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)}), 4), GeometryError);
    // non-star-shaped about the centroid
    std::vector<Vec2> hook{{0, 0}, {10, 0}, {10, 1}, {1, 1}, {1, 5}, {0.5, 5}, {0.5, 0.2}, {0, 0.2}};
    CHECK_THROWS_AS(make_mesh(ShapeSpec::polygon(hook), 4), GeometryError);
}

TEST_CASE("scaling law and rotation invariance") {
    const auto m = make_mesh(ShapeSpec::disk(), 8);
    const double c = solve_equilibrium(m).capacity;
    for (double eps : {1e-1, 1e-3}) {
        const double ce = solve_equilibrium(scaled(m, eps)).capacity;
        CHECK(std::abs(ce / scaled_capacity(c, eps) - 1) < 1e-8);
    }
    for (double ang : {0.3, 1.0, 2.5}) CHECK(std::abs(solve_equilibrium(rotated(m, ang)).capacity - c) < 1e-10);
}

TEST_CASE("scaled_capacity examples") {
    CHECK(scaled_capacity(2, 0.5) == 1.0);
    CHECK(scaled_capacity(2, 1) == 2.0);
    CHECK(scaled_capacity(2, 1e-4) == doctest::Approx(2e-4).epsilon(1e-15));
    CHECK_THROWS_AS(scaled_capacity(2, 0), ParameterError);
}

TEST_CASE("degenerate panels rejected") {
    Panel p;
    p.kind = Panel::Kind::polygon;
    p.v = {Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)};
    CHECK_THROWS_AS(assemble_riesz_matrix(mesh_from_panels({p})), GeometryError);
    Panel s;
    s.r0 = 0.5;
    s.r1 = 0.5;
    s.t0 = 0;
    s.t1 = 1;
    CHECK_THROWS_AS(assemble_riesz_matrix(mesh_from_panels({s})), GeometryError);
}
