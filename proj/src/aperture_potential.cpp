#include "helmres/aperture_potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "helmres/errors.hpp"
#include "helmres/quadrature.hpp"

namespace helmres {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Interval {
    double lo, hi;
};

// restrict [lo,hi] by alpha + beta t >= 0
bool clip(double alpha, double beta, double& lo, double& hi) {
    if (beta > 0) {
        lo = std::max(lo, -alpha / beta);
    } else if (beta < 0) {
        hi = std::min(hi, -alpha / beta);
    } else if (alpha < 0) {
        return false;
    }
    return lo < hi;
}

bool is_full(const Panel& p) { return p.t1 - p.t0 >= two_pi - 1e-12; }

double wrap(double a) {
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

}  // namespace

ShapeSpec ShapeSpec::ellipse(double a, double b) {
    if (!(a > 0 && b > 0)) throw ParameterError("ellipse semi-axes must be positive");
    ShapeSpec s;
    s.kind = ShapeKind::ellipse;
    s.a = a;
    s.b = b;
    return s;
}

ShapeSpec ShapeSpec::polygon(std::vector<Vec2> pts) {
    if (pts.size() < 3) throw ParameterError("polygon needs at least 3 boundary points");
    ShapeSpec s;
    s.kind = ShapeKind::polygon;
    s.boundary = std::move(pts);
    return s;
}

std::string ShapeSpec::name() const {
    switch (kind) {
        case ShapeKind::unit_disk: return "unit_disk";
        case ShapeKind::ellipse: return "ellipse";
        case ShapeKind::polygon: return "polygon";
    }
    return "?";
}

double Panel::area() const {
    if (kind == Kind::sector) return 0.5 * (t1 - t0) * (r1 * r1 - r0 * r0);
    double a = 0;
    for (std::size_t k = 0; k < v.size(); ++k) a += cross(v[k], v[(k + 1) % v.size()]);
    return 0.5 * a;
}

Vec2 Panel::centroid() const {
    if (kind == Kind::sector) {
        if (is_full(*this)) return Vec2::Zero();
        const double h = 0.5 * (t1 - t0), tm = 0.5 * (t0 + t1);
        const double rc = 2.0 / 3.0 * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0) * std::sin(h) / h;
        return rc * Vec2(std::cos(tm), std::sin(tm));
    }
    double a = 0;
    Vec2 c = Vec2::Zero();
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Vec2& p = v[k];
        const Vec2& q = v[(k + 1) % v.size()];
        const double w = cross(p, q);
        a += w;
        c += w * (p + q);
    }
    return c / (3.0 * a);
}

std::vector<Vec2> Panel::corners() const {
    if (kind == Kind::polygon) return v;
    if (is_full(*this)) return {};
    const Vec2 e0(std::cos(t0), std::sin(t0)), e1(std::cos(t1), std::sin(t1));
    if (r0 == 0.0) return {Vec2::Zero(), r1 * e0, r1 * e1};
    return {r0 * e0, r1 * e0, r1 * e1, r0 * e1};
}

bool Panel::contains(const Vec2& y) const {
    if (kind == Kind::polygon) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (cross(v[(k + 1) % v.size()] - v[k], y - v[k]) < -1e-14) return false;
        return true;
    }
    const double r = y.norm();
    if (r < r0 - 1e-14 || r > r1 + 1e-14) return false;
    if (is_full(*this) || r == 0.0) return true;
    const double d = wrap(std::atan2(y.y(), y.x()) - t0);
    return d <= t1 - t0 + 1e-14 || d >= two_pi - 1e-14;
}

double Panel::ray_length(const Vec2& x, const Vec2& u) const {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    if (kind == Kind::polygon) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            const Vec2 e = v[(k + 1) % v.size()] - v[k];
            if (!clip(cross(e, x - v[k]), cross(e, u), lo, hi)) return 0.0;
        }
        return hi - lo;
    }
    if (!is_full(*this)) {
        const Vec2 e0(std::cos(t0), std::sin(t0)), e1(std::cos(t1), std::sin(t1));
        if (!clip(cross(e0, x), cross(e0, u), lo, hi)) return 0.0;
        if (!clip(-cross(e1, x), -cross(e1, u), lo, hi)) return 0.0;
    }
    // |x + t u|^2 = t^2 + 2 b t + c
    const double b = x.dot(u), xx = x.squaredNorm();
    const double d1 = b * b - (xx - r1 * r1);
    if (d1 <= 0) return 0.0;
    const double s1 = std::sqrt(d1);
    const double olo = std::max(lo, -b - s1), ohi = std::min(hi, -b + s1);
    if (olo >= ohi) return 0.0;
    double len = ohi - olo;
    if (r0 > 0) {
        const double d0 = b * b - (xx - r0 * r0);
        if (d0 > 0) {
            const double s0 = std::sqrt(d0);
            const double ilo = std::max(olo, -b - s0), ihi = std::min(ohi, -b + s0);
            if (ilo < ihi) len -= ihi - ilo;
        }
    }
    return len;
}

void Panel::critical_angles(const Vec2& x, std::vector<double>& out) const {
    for (const Vec2& c : corners()) {
        const Vec2 d = c - x;
        if (d.squaredNorm() > 0) out.push_back(wrap(std::atan2(d.y(), d.x())));
    }
    if (kind == Kind::sector) {
        const double rx = x.norm();
        const double phi = std::atan2(-x.y(), -x.x());
        for (double r : {r0, r1}) {
            if (r > 0 && rx > r) {
                const double al = std::asin(r / rx);
                out.push_back(wrap(phi + al));
                out.push_back(wrap(phi - al));
            }
        }
    }
}

void Panel::rule(int n, bool clustered, std::vector<Vec2>& pts, std::vector<double>& wts) const {
    const Rule& g = clustered ? gauss_cos(n) : gauss_legendre(n);
    pts.clear();
    wts.clear();
    if (n == 1) {
        pts.push_back(centroid());
        wts.push_back(area());
        return;
    }
    if (kind == Kind::sector) {
        const double dr = r1 - r0, dt = t1 - t0;
        // a full disk is periodic in angle: plain Gauss in theta is enough
        const Rule& gt = is_full(*this) ? gauss_legendre(n) : g;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double r = r0 + dr * g.x[i];
            for (std::size_t j = 0; j < gt.x.size(); ++j) {
                const double t = t0 + dt * gt.x[j];
                pts.emplace_back(r * std::cos(t), r * std::sin(t));
                wts.push_back(g.w[i] * gt.w[j] * dr * dt * r);
            }
        }
        return;
    }
    // bilinear map of the unit square; a triangle repeats its first vertex
    const Vec2 &a = v[0], &b = v[1], &c = v[2];
    const Vec2& d = v.size() == 4 ? v[3] : v[0];
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double s = g.x[i];
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const double t = g.x[j];
            const Vec2 p = (1 - s) * (1 - t) * a + s * (1 - t) * b + s * t * c + (1 - s) * t * d;
            const Vec2 ps = (1 - t) * (b - a) + t * (c - d);
            const Vec2 pt = (1 - s) * (d - a) + s * (c - b);
            pts.push_back(p);
            wts.push_back(g.w[i] * g.w[j] * std::abs(cross(ps, pt)));
        }
    }
}

double ApertureMesh::area() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

namespace {

void finalize(ApertureMesh& m) {
    const double dJ = m.J.determinant();
    m.nodes.clear();
    m.weights.clear();
    for (const Panel& p : m.panels) {
        m.nodes.push_back(m.origin + m.J * p.centroid());
        m.weights.push_back(std::abs(dJ) * p.area());
    }
}

void disk_panels(int n, std::vector<Panel>& out) {
    if (n == 0) {
        out.push_back({Panel::Kind::sector, 0.0, 1.0, 0.0, two_pi, {}});
        return;
    }
    // rings graded towards the rim where the density blows up
    std::vector<double> rho(n + 1);
    for (int i = 0; i <= n; ++i) rho[i] = 1.0 - std::pow(1.0 - double(i) / n, 2.0);
    const double hcap = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        const double dr = rho[i + 1] - rho[i], rm = 0.5 * (rho[i] + rho[i + 1]);
        int m = 4;
        if (i > 0) m = std::max(4, 4 * int(std::ceil(two_pi * rm / (4.0 * std::max(dr, hcap)))));
        for (int k = 0; k < m; ++k)
            out.push_back({Panel::Kind::sector, rho[i], rho[i + 1], two_pi * k / m, two_pi * (k + 1) / m, {}});
    }
}

void polygon_panels(const std::vector<Vec2>& B, int n, std::vector<Panel>& out) {
    const std::size_t K = B.size();
    n = std::max(n, 1);
    std::vector<double> s(n + 1);
    for (int i = 0; i <= n; ++i) s[i] = 1.0 - std::pow(1.0 - double(i) / n, 2.0);
    double rmean = 0;
    for (const Vec2& b : B) rmean += b.norm() / K;
    const double hcap = rmean / n;
    for (int i = 0; i < n; ++i) {
        const double sm = 0.5 * (s[i] + s[i + 1]);
        for (std::size_t k = 0; k < K; ++k) {
            const Vec2 &A = B[k], &C = B[(k + 1) % K];
            const double reach = 0.5 * (A.norm() + C.norm());
            const double h = std::max((s[i + 1] - s[i]) * reach, hcap);
            const int m = std::max(1, int(std::ceil(sm * (C - A).norm() / h)));
            for (int j = 0; j < m; ++j) {
                const Vec2 P = A + (C - A) * (double(j) / m);
                const Vec2 Q = A + (C - A) * (double(j + 1) / m);
                Panel p;
                p.kind = Panel::Kind::polygon;
                if (i == 0)
                    p.v = {Vec2::Zero(), s[1] * P, s[1] * Q};
                else
                    p.v = {s[i] * P, s[i + 1] * P, s[i + 1] * Q, s[i] * Q};
                out.push_back(std::move(p));
            }
        }
    }
}

}  // namespace

ApertureMesh make_mesh(const ShapeSpec& shape, int resolution) {
    if (resolution < 0) throw ParameterError("mesh resolution must be >= 0");
    ApertureMesh m;
    m.shape = shape;
    m.resolution = resolution;
    switch (shape.kind) {
        case ShapeKind::unit_disk: disk_panels(resolution, m.panels); break;
        case ShapeKind::ellipse:
            m.J << shape.a, 0, 0, shape.b;
            disk_panels(resolution, m.panels);
            break;
        case ShapeKind::polygon: {
            const auto& B = shape.boundary;
            if (B.size() < 3) throw GeometryError("polygon needs at least 3 boundary points");
            double a = 0;
            Vec2 c = Vec2::Zero();
            for (std::size_t k = 0; k < B.size(); ++k) {
                const double w = cross(B[k], B[(k + 1) % B.size()]);
                a += w;
                c += w * (B[k] + B[(k + 1) % B.size()]);
            }
            if (!(a > 0)) throw GeometryError("polygon must be counter-clockwise with positive area");
            c /= 3.0 * a;
            std::vector<Vec2> ref;
            for (const Vec2& b : B) ref.push_back(b - c);
            for (std::size_t k = 0; k < ref.size(); ++k)
                if (!(cross(ref[k], ref[(k + 1) % ref.size()]) > 0))
                    throw GeometryError("polygon is not star-shaped about its centroid");
            m.origin = c;
            polygon_panels(ref, std::max(resolution, 1), m.panels);
            break;
        }
    }
    finalize(m);
    return m;
}

ApertureMesh mesh_from_panels(std::vector<Panel> panels) {
    ApertureMesh m;
    m.shape.kind = ShapeKind::polygon;
    m.panels = std::move(panels);
    finalize(m);
    return m;
}

ApertureMesh transformed(const ApertureMesh& m, const Eigen::Matrix2d& L) {
    if (!(std::abs(L.determinant()) > 0)) throw GeometryError("singular aperture map");
    ApertureMesh r = m;
    r.J = L * m.J;
    r.origin = L * m.origin;
    finalize(r);
    return r;
}

ApertureMesh scaled(const ApertureMesh& m, double eps) {
    if (!(eps > 0)) throw ParameterError("scale must be positive");
    return transformed(m, eps * Eigen::Matrix2d::Identity());
}

ApertureMesh rotated(const ApertureMesh& m, double angle) {
    Eigen::Matrix2d R;
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return transformed(m, R);
}

namespace {

struct Assembler {
    const ApertureMesh& m;
    Eigen::Matrix2d J;
    double scale;  // detJ^2 / pi
    std::vector<Vec2> cent;
    std::vector<double> rad;
    double jnorm;

    explicit Assembler(const ApertureMesh& mesh) : m(mesh), J(mesh.J) {
        const double dJ = J.determinant();
        scale = dJ * dJ / pi;
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(J);
        jnorm = svd.singularValues()(0);
        for (const Panel& p : m.panels) {
            const Vec2 c = p.centroid();
            double r = 0;
            for (const Vec2& v : p.corners()) r = std::max(r, (v - c).norm());
            if (p.kind == Panel::Kind::sector)
                for (int k = 0; k <= 16; ++k) {
                    const double t = p.t0 + (p.t1 - p.t0) * k / 16.0;
                    r = std::max(r, (p.r1 * Vec2(std::cos(t), std::sin(t)) - c).norm());
                }
            cent.push_back(c);
            rad.push_back(r);
        }
    }

    // (detJ^2/pi) int_q dy / |J(x-y)|, via the ray-length representation around x
    double potential(const Panel& q, const Vec2& x, std::vector<double>& ang) const {
        ang.clear();
        q.critical_angles(x, ang);
        std::sort(ang.begin(), ang.end());
        std::vector<double> br;
        for (double a : ang)
            if (br.empty() || a - br.back() > 1e-13) br.push_back(a);
        if (br.empty())
            for (int k = 0; k < 4; ++k) br.push_back(two_pi * k / 4);
        const Rule& g = gauss_cos(8);
        double s = 0;
        const std::size_t nb = br.size();
        for (std::size_t k = 0; k < nb; ++k) {
            const double a = br[k];
            const double b = k + 1 < nb ? br[k + 1] : br[0] + two_pi;
            if (b - a < 1e-15) continue;
            const double mid = 0.5 * (a + b);
            if (q.ray_length(x, Vec2(std::cos(mid), std::sin(mid))) == 0.0) continue;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double t = a + (b - a) * g.x[i];
                const Vec2 u(std::cos(t), std::sin(t));
                s += (b - a) * g.w[i] * q.ray_length(x, u) / (J * u).norm();
            }
        }
        return scale * s;
    }

    double entry(std::size_t p, std::size_t q, std::vector<Vec2>& xp, std::vector<double>& wp,
                 std::vector<Vec2>& xq, std::vector<double>& wq, std::vector<double>& ang) const {
        const double R = (J * (cent[p] - cent[q])).norm() / (jnorm * (rad[p] + rad[q]));
        int n = 0;
        if (R > 10)
            n = 1;
        else if (R > 5)
            n = 2;
        else if (R > 3)
            n = 3;
        else if (R > 2)
            n = 5;
        if (n > 0) {
            m.panels[p].rule(n, false, xp, wp);
            m.panels[q].rule(n, false, xq, wq);
            double s = 0;
            for (std::size_t i = 0; i < xp.size(); ++i)
                for (std::size_t j = 0; j < xq.size(); ++j) s += wp[i] * wq[j] / (J * (xp[i] - xq[j])).norm();
            return scale * s;
        }
        m.panels[p].rule(6, true, xp, wp);
        double s = 0;
        for (std::size_t i = 0; i < xp.size(); ++i) s += wp[i] * potential(m.panels[q], xp[i], ang);
        return s;
    }
};

}  // namespace

Eigen::MatrixXd assemble_riesz_matrix(const ApertureMesh& m, int threads) {
    const std::size_t N = m.size();
    if (N == 0) throw GeometryError("empty aperture mesh");
    for (const Panel& p : m.panels)
        if (!(p.area() > 0)) throw GeometryError("degenerate mesh: panel with zero area");
    if (!(std::abs(m.J.determinant()) > 0)) throw GeometryError("degenerate mesh: singular map");
    Assembler as(m);
    Eigen::MatrixXd A(N, N);
    threads = std::max(1, threads);
    auto work = [&](int tid) {
        std::vector<Vec2> xp, xq;
        std::vector<double> wp, wq, ang;
        for (std::size_t p = tid; p < N; p += threads)
            for (std::size_t q = p; q < N; ++q) {
                const double a = as.entry(p, q, xp, wp, xq, wq, ang);
                A(p, q) = a;
                A(q, p) = a;
            }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& t : pool) t.join();
    }
    return A;
}

EquilibriumDensity solve_equilibrium(const ApertureMesh& m, const Eigen::MatrixXd& A) {
    const Eigen::Index N = static_cast<Eigen::Index>(m.size());
    if (A.rows() != N || A.cols() != N) throw ParameterError("matrix does not match mesh");
    Eigen::VectorXd w(N);
    for (Eigen::Index i = 0; i < N; ++i) w(i) = m.weights[i];
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Riesz matrix is not positive definite; refine the mesh");
    EquilibriumDensity d;
    d.values = llt.solve(w);
    if (!d.values.allFinite()) throw NumericalError("ill-conditioned Riesz system; refine the mesh");
    d.capacity = w.dot(d.values);
    return d;
}

EquilibriumDensity solve_equilibrium(const ApertureMesh& m, int threads) {
    return solve_equilibrium(m, assemble_riesz_matrix(m, threads));
}

double scaled_capacity(double c_unit, double epsilon) {
    if (!(epsilon > 0)) throw ParameterError("epsilon must be positive");
    return epsilon * c_unit;
}

double disk_density_exact(const Vec2& x) {
    const double r2 = x.squaredNorm();
    if (r2 >= 1.0) throw ParameterError("point outside the unit disk");
    return 1.0 / (pi * std::sqrt(1.0 - r2));
}

}  // namespace helmres
