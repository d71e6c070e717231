#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

namespace helmres {

using Vec2 = Eigen::Vector2d;

enum class ShapeKind { unit_disk, ellipse, polygon };

struct ShapeSpec {
    ShapeKind kind = ShapeKind::unit_disk;
    double a = 1.0, b = 1.0;     // ellipse semi-axes
    std::vector<Vec2> boundary;  // polygon, counter-clockwise, star-shaped about its centroid

    static ShapeSpec disk() { return {}; }
    static ShapeSpec ellipse(double a, double b);
    static ShapeSpec polygon(std::vector<Vec2> pts);
    std::string name() const;
};

// A panel lives in reference coordinates; the physical aperture is J * reference.
// Sector: r0 <= |y| <= r1, t0 <= arg y <= t1 with t1 - t0 <= pi, or a full disk/annulus
// when t1 - t0 == 2 pi.
// Polygon: convex, 3 or 4 counter-clockwise vertices.
struct Panel {
    enum class Kind { sector, polygon } kind = Kind::sector;
    double r0 = 0, r1 = 0, t0 = 0, t1 = 0;
    std::vector<Vec2> v;

    double area() const;
    Vec2 centroid() const;
    std::vector<Vec2> corners() const;
    bool contains(const Vec2& y) const;
    // length of {t >= 0 : x + t u in panel}
    double ray_length(const Vec2& x, const Vec2& u) const;
    // directions (angles) from x across which ray_length is not smooth
    void critical_angles(const Vec2& x, std::vector<double>& out) const;
    // tensor rule over the panel (reference measure); clustered rules pull nodes to the edges
    void rule(int n, bool clustered, std::vector<Vec2>& pts, std::vector<double>& wts) const;
};

struct ApertureMesh {
    ShapeSpec shape;
    int resolution = 0;
    Eigen::Matrix2d J = Eigen::Matrix2d::Identity();
    Vec2 origin = Vec2::Zero();
    std::vector<Panel> panels;
    std::vector<Vec2> nodes;      // physical panel centroids
    std::vector<double> weights;  // physical panel areas

    std::size_t size() const { return panels.size(); }
    double area() const;
};

ApertureMesh make_mesh(const ShapeSpec& shape, int resolution);
// hand-built mesh (reference == physical coordinates)
ApertureMesh mesh_from_panels(std::vector<Panel> panels);
// same panels, physical map premultiplied by a linear map (scale, rotation, ...)
ApertureMesh transformed(const ApertureMesh& m, const Eigen::Matrix2d& L);
ApertureMesh scaled(const ApertureMesh& m, double eps);
ApertureMesh rotated(const ApertureMesh& m, double angle);

// Galerkin matrix A_pq = int_p int_q 1/(pi |x-y|) dx dy for piecewise-constant densities.
Eigen::MatrixXd assemble_riesz_matrix(const ApertureMesh& m, int threads = 1);

struct EquilibriumDensity {
    Eigen::VectorXd values;  // density on each panel
    double capacity = 0.0;
};

EquilibriumDensity solve_equilibrium(const ApertureMesh& m, int threads = 1);
EquilibriumDensity solve_equilibrium(const ApertureMesh& m, const Eigen::MatrixXd& A);

double scaled_capacity(double c_unit, double epsilon);

// (1/pi)(1-|x|^2)^(-1/2), the unit-disk equilibrium density
double disk_density_exact(const Vec2& x);

}  // namespace helmres
