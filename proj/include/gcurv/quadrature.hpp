/// @file quadrature.hpp
/// @brief Gauss-Legendre rules and product grids on S^k and B^{k+1}.
///
/// Sphere parametrization (iterated spherical coordinates, k angles):
///   Theta^a = cos(u_a) prod_{j<a} sin(u_j),  a = 1..k
///   Theta^{k+1} = prod_{j=1..k} sin(u_j)
/// with u_1..u_{k-1} in [0,pi] (Gauss-Legendre) and the last angle in
/// [0,2pi) (trapezoid). Node weights are plain parameter-space weights; the
/// sin-power Jacobians come out of sqrt(det) of whatever metric is induced
/// on the parametrization, so the same grid serves immersed submanifolds and
/// round-measure integrals (via the `sigma` weights).
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gcurv/linalg.hpp"

namespace gcurv {

struct GaussLegendre {
    std::vector<double> nodes, weights;
};

/// n-point rule on [a, b], Newton iteration on Legendre polynomials.
GaussLegendre gauss_legendre(int n, double a, double b);

struct SphereNode {
    Vec u;           // k angles
    Vec theta;       // point on S^k in R^{k+1}
    Mat dtheta;      // (k+1) x k
    Tensor3 d2theta; // (k+1, k, k)
    double wu;       // parameter-space weight
    double sigma;    // round-measure weight: wu * sqrt(det(dtheta^T dtheta))
};

struct QuadOrders {
    int polar = 32;    // Gauss-Legendre order per polar angle
    int azimuth = 64;  // trapezoid nodes for the last angle (k >= 2)
    int circle = 256;  // trapezoid nodes for k = 1
    int radial = 32;   // Gauss-Legendre order for ball radius
};

class SphereGrid {
public:
    explicit SphereGrid(int k, const QuadOrders& orders = {});
    int k() const { return k_; }
    const std::vector<SphereNode>& nodes() const { return nodes_; }
    /// Quadrature of the round measure (= Vol(S^k) for f = 1).
    double integrate_sigma(const std::function<double(const SphereNode&)>& f) const;

private:
    int k_;
    std::vector<SphereNode> nodes_;
};

/// Radial Gauss-Legendre on [0,1] paired with a shared angular grid.
struct BallGrid {
    BallGrid(int k, std::shared_ptr<const SphereGrid> sphere, int radial_order = 32);
    std::shared_ptr<const SphereGrid> sphere;
    std::vector<double> rnodes, rweights;
    int k;
    /// Flat Lebesgue integral over B^{k+1}: sum w_r * r^k * sigma * f(y).
    double integrate_flat(const std::function<double(const Vec&)>& f) const;
};

/// Closed-form Vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double sphere_volume(int k);

/// Theta and its first/second derivatives at given angles (any k >= 1).
void sphere_parametrization(const Vec& u, Vec& theta, Mat& dtheta, Tensor3& d2theta);

}  // namespace gcurv
