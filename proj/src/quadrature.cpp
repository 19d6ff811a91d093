#include "gcurv/quadrature.hpp"

#include <cmath>
#include <functional>

#include "gcurv/errors.hpp"

namespace gcurv {

GaussLegendre gauss_legendre(int n, double a, double b) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * x;
        gl.weights[i] = (b - a) / ((1.0 - x * x) * pp * pp);
    }
    return gl;
}

void sphere_parametrization(const Vec& u, Vec& theta, Mat& dtheta, Tensor3& d2theta) {
    const int k = static_cast<int>(u.size());
    theta = Vec::Zero(k + 1);
    dtheta = Mat::Zero(k + 1, k);
    d2theta = Tensor3({k + 1, k, k});
    // factor types per component: 0 = one, 1 = sin, 2 = cos
    auto factor = [&](int type, double ang, int deriv) -> double {
        switch (type) {
            case 0: return deriv == 0 ? 1.0 : 0.0;
            case 1: return deriv == 0 ? std::sin(ang) : (deriv == 1 ? std::cos(ang) : -std::sin(ang));
            default: return deriv == 0 ? std::cos(ang) : (deriv == 1 ? -std::sin(ang) : -std::cos(ang));
        }
    };
    for (int a = 0; a <= k; ++a) {
        std::vector<int> types(k, 0);
        if (a < k) {
            for (int j = 0; j < a; ++j) types[j] = 1;
            types[a] = 2;
        } else {
            for (int j = 0; j < k; ++j) types[j] = 1;
        }
        auto value = [&](int db1, int db2) {
            double v = 1.0;
            for (int j = 0; j < k; ++j) {
                int d = (j == db1 ? 1 : 0) + (j == db2 ? 1 : 0);
                v *= factor(types[j], u(j), d);
            }
            return v;
        };
        theta(a) = value(-1, -1);
        for (int b = 0; b < k; ++b) {
            dtheta(a, b) = value(b, -1);
            for (int c = 0; c < k; ++c) d2theta(a, b, c) = value(b, c);
        }
    }
}

SphereGrid::SphereGrid(int k, const QuadOrders& orders) : k_(k) {
    if (k < 1) throw ConfigError("sphere grid requires k >= 1");
    std::vector<std::vector<std::pair<double, double>>> axes;  // (node, weight) per angle
    if (k == 1) {
        std::vector<std::pair<double, double>> circ;
        for (int j = 0; j < orders.circle; ++j)
            circ.push_back({2.0 * M_PI * j / orders.circle, 2.0 * M_PI / orders.circle});
        axes.push_back(circ);
    } else {
        GaussLegendre gl = gauss_legendre(orders.polar, 0.0, M_PI);
        for (int axis = 0; axis < k - 1; ++axis) {
            std::vector<std::pair<double, double>> ax;
            for (int j = 0; j < orders.polar; ++j) ax.push_back({gl.nodes[j], gl.weights[j]});
            axes.push_back(ax);
        }
        std::vector<std::pair<double, double>> circ;
        for (int j = 0; j < orders.azimuth; ++j)
            circ.push_back({2.0 * M_PI * j / orders.azimuth, 2.0 * M_PI / orders.azimuth});
        axes.push_back(circ);
    }
    std::vector<int> idx(k, 0);
    while (true) {
        SphereNode node;
        node.u = Vec(k);
        node.wu = 1.0;
        for (int j = 0; j < k; ++j) {
            node.u(j) = axes[j][idx[j]].first;
            node.wu *= axes[j][idx[j]].second;
        }
        sphere_parametrization(node.u, node.theta, node.dtheta, node.d2theta);
        Mat gpar = node.dtheta.transpose() * node.dtheta;
        node.sigma = node.wu * std::sqrt(std::max(0.0, gpar.determinant()));
        nodes_.push_back(std::move(node));
        int j = k - 1;
        while (j >= 0 && ++idx[j] == static_cast<int>(axes[j].size())) {
            idx[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
}

double SphereGrid::integrate_sigma(const std::function<double(const SphereNode&)>& f) const {
    double s = 0.0;
    for (const auto& n : nodes_) s += n.sigma * f(n);
    return s;
}

BallGrid::BallGrid(int k_in, std::shared_ptr<const SphereGrid> sph, int radial_order)
    : sphere(std::move(sph)), k(k_in) {
    GaussLegendre gl = gauss_legendre(radial_order, 0.0, 1.0);
    rnodes = gl.nodes;
    rweights = gl.weights;
}

double BallGrid::integrate_flat(const std::function<double(const Vec&)>& f) const {
    double s = 0.0;
    for (std::size_t ir = 0; ir < rnodes.size(); ++ir) {
        double r = rnodes[ir];
        double wr = rweights[ir] * std::pow(r, k);
        for (const auto& n : sphere->nodes()) s += wr * n.sigma * f(r * n.theta);
    }
    return s;
}

double sphere_volume(int k) {
    return 2.0 * std::pow(M_PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

}  // namespace gcurv
