#include "gcurv/geodesic.hpp"

#include <cmath>

namespace gcurv {
namespace {

struct State {
    Vec x;
    Vec v;
    Mat F;  // transported columns, may be 0-col
};

State deriv(const MetricChart& chart, const State& s) {
    const int n = chart.dim();
    Tensor3 gam = chart.christoffel(s.x);
    State d;
    d.x = s.v;
    d.v = Vec::Zero(n);
    for (int l = 0; l < n; ++l) {
        double a = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a += gam(l, i, j) * s.v(i) * s.v(j);
        d.v(l) = -a;
    }
    d.F.resize(n, s.F.cols());
    for (int c = 0; c < s.F.cols(); ++c)
        for (int l = 0; l < n; ++l) {
            double a = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a += gam(l, i, j) * s.v(i) * s.F(j, c);
            d.F(l, c) = -a;
        }
    return d;
}

State axpy(const State& s, double h, const State& d) {
    State r;
    r.x = s.x + h * d.x;
    r.v = s.v + h * d.v;
    r.F = s.F + h * d.F;
    return r;
}

State rk4(const MetricChart& chart, State s, double t, int steps) {
    const double h = t / steps;
    const double R = chart.domain_radius();
    for (int n = 0; n < steps; ++n) {
        State k1 = deriv(chart, s);
        State k2 = deriv(chart, axpy(s, 0.5 * h, k1));
        State k3 = deriv(chart, axpy(s, 0.5 * h, k2));
        State k4 = deriv(chart, axpy(s, h, k3));
        s.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        s.F += (h / 6.0) * (k1.F + 2.0 * k2.F + 2.0 * k3.F + k4.F);
        if (s.x.norm() >= R)
            throw DomainError("geodesic left the chart domain", (n + 1) * h);
    }
    return s;
}

int step_count(double t) { return std::max(8, static_cast<int>(std::ceil(200.0 * std::abs(t)))); }

}  // namespace

GeodesicSolution geodesic(const MetricChart& chart, const Vec& p, const Vec& v, double t,
                          const Mat& frame, bool with_estimate) {
    chart.check_domain(p);
    if (chart.has_closed_form()) {
        GeodesicSolution sol = chart.closed_form()->geodesic(p, v, t, frame);
        if (sol.endpoint.norm() >= chart.domain_radius())
            throw DomainError("geodesic left the chart domain", t);
        return sol;
    }
    State s0{p, v, frame.cols() > 0 ? frame : Mat(chart.dim(), 0)};
    if (t == 0.0 || v.norm() == 0.0) {
        GeodesicSolution sol{p, v, frame, 0.0};
        return sol;
    }
    const int N = step_count(t);
    State sN = rk4(chart, s0, t, with_estimate ? N : 2 * N);
    GeodesicSolution sol;
    if (with_estimate) {
        State s2N = rk4(chart, s0, t, 2 * N);
        sol.integrator_error_estimate = (sN.x - s2N.x).norm() / 15.0;
        sN = s2N;
    }
    sol.endpoint = sN.x;
    sol.velocity = sN.v;
    sol.transported_frame = sN.F;
    return sol;
}

Vec exp_map(const MetricChart& chart, const Vec& p, const Vec& w) {
    return geodesic(chart, p, w, 1.0).endpoint;
}

Mat parallel_transport(const MetricChart& chart, const Vec& p, const Vec& v, const Mat& frame, double t) {
    return geodesic(chart, p, v, t, frame).transported_frame;
}

Vec exp_point(const MetricChart& chart, const Vec& p, const Vec& w) {
    return exp_with_frame(chart, p, w, Mat(chart.dim(), 0)).endpoint;
}

GeodesicSolution exp_with_frame(const MetricChart& chart, const Vec& p, const Vec& w,
                                const Mat& frame) {
    if (chart.has_closed_form()) return chart.closed_form()->geodesic(p, w, 1.0, frame);
    double len = w.norm();
    if (len == 0.0) return GeodesicSolution{p, w, frame, 0.0};
    // Unit-speed reparametrization: 200 steps per unit arc length, so short
    // hops (immersion nodes, jet stencils) stay cheap.
    State s{p, w / len, frame};
    State out = rk4(chart, s, len, step_count(len));
    return GeodesicSolution{out.x, out.v * len, out.F, 0.0};
}

}  // namespace gcurv
