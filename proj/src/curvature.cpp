#include "gcurv/curvature.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "gcurv/errors.hpp"
#include "gcurv/rng.hpp"

namespace gcurv {
namespace {

Tensor4 frame_components(const Tensor4& Rc, const Mat& F) {
    const int n = static_cast<int>(F.rows());
    // contract one index at a time to keep this O(n^5)
    Tensor4 t1 = Tensor4::cube(n), t2 = Tensor4::cube(n), t3 = Tensor4::cube(n), out = Tensor4::cube(n);
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int i = 0; i < n; ++i) s += Rc(i, j, k, l) * F(i, a);
                    t1(a, j, k, l) = s;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += t1(a, j, k, l) * F(j, b);
                    t2(a, b, k, l) = s;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k) s += t2(a, b, k, l) * F(k, c);
                    t3(a, b, c, l) = s;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l) s += t3(a, b, c, l) * F(l, d);
                    out(a, b, c, d) = s;
                }
    return out;
}

/// Frame components of R at the point reached from (p, frame) along the
/// geodesic with initial velocity w (frame columns), at parameter t.
Tensor4 frame_R_along(const MetricChart& chart, const Vec& p, const Mat& frame, const Vec& w_frame,
                      double t) {
    Vec w = frame * w_frame;
    GeodesicSolution sol = geodesic(chart, p, w, t, frame, false);
    Tensor4 Rc = riemann_coordinate(chart, sol.endpoint);
    return frame_components(Rc, sol.transported_frame);
}

}  // namespace

Tensor4 riemann_coordinate(const MetricChart& chart, const Vec& x) {
    const int n = chart.dim();
    Mat g = chart.metric(x);
    Tensor3 gam = chart.christoffel(x);
    Tensor4 dgam = chart.dchristoffel(x);
    Tensor4 R = Tensor4::cube(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            for (int k = 0; k < n; ++k) {
                // R^s_{ijk} = d_i Gam^s_{jk} - d_j Gam^s_{ik} + Gam^s_{ia} Gam^a_{jk} - Gam^s_{ja} Gam^a_{ik}
                for (int l = 0; l < n; ++l) {
                    double v = 0.0;
                    for (int s = 0; s < n; ++s) {
                        double t = dgam(i, s, j, k) - dgam(j, s, i, k);
                        for (int a = 0; a < n; ++a)
                            t += gam(s, i, a) * gam(a, j, k) - gam(s, j, a) * gam(a, i, k);
                        v += g(s, l) * t;
                    }
                    R(i, j, k, l) = v;
                    R(j, i, k, l) = -v;
                }
            }
    return R;
}

Mat orthonormal_frame(const MetricChart& chart, const Vec& p) {
    return gram_schmidt(Mat::Identity(chart.dim(), chart.dim()), chart.metric(p));
}

CurvatureData riemann_at(const MetricChart& chart, const Vec& p, const Mat& frame,
                         bool with_derivatives) {
    const int n = chart.dim();
    Mat g = chart.metric(p);
    Mat gram = frame.transpose() * g * frame;
    if ((gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw FrameError("frame is not g-orthonormal at p (Gram deviation above 1e-10)");

    CurvatureData cd;
    cd.frame = frame;
    cd.R = frame_components(riemann_coordinate(chart, p), frame);
    cd.convention_sign = +1;
    if (!with_derivatives) return cd;

    const double h1 = chart.steps().h3;  // first-derivative stencil
    const double h2 = chart.steps().h4;  // second-derivative stencil
    cd.dR = Tensor5::cube(n);
    cd.d2R = Tensor6::cube(n);

    auto samples = [&](const Vec& w_frame, double h) {
        std::array<Tensor4, 4> f;
        f[0] = frame_R_along(chart, p, frame, w_frame, -2.0 * h);
        f[1] = frame_R_along(chart, p, frame, w_frame, -h);
        f[2] = frame_R_along(chart, p, frame, w_frame, h);
        f[3] = frame_R_along(chart, p, frame, w_frame, 2.0 * h);
        return f;
    };
    auto second_dir = [&](const Vec& w_frame) {
        auto f = samples(w_frame, h2);
        Tensor4 d2 = Tensor4::cube(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        d2(i, j, k, l) = (-f[3](i, j, k, l) + 16.0 * f[2](i, j, k, l) -
                                          30.0 * cd.R(i, j, k, l) + 16.0 * f[1](i, j, k, l) -
                                          f[0](i, j, k, l)) /
                                         (12.0 * h2 * h2);
        return d2;
    };

    // first derivatives along each frame direction
    for (int a = 0; a < n; ++a) {
        Vec w = Vec::Zero(n);
        w(a) = 1.0;
        auto f = samples(w, h1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        cd.dR(i, j, k, l, a) = (f[0](i, j, k, l) - 8.0 * f[1](i, j, k, l) +
                                                8.0 * f[2](i, j, k, l) - f[3](i, j, k, l)) /
                                               (12.0 * h1);
    }

    // pure directional second derivatives, then polarization for mixed slots
    std::vector<Tensor4> diag(n);
    for (int a = 0; a < n; ++a) {
        Vec w = Vec::Zero(n);
        w(a) = 1.0;
        diag[a] = second_dir(w);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) cd.d2R(i, j, k, l, a, a) = diag[a](i, j, k, l);
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Vec w = Vec::Zero(n);
            w(a) = 1.0;
            w(b) = 1.0;
            Tensor4 dab = second_dir(w);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l) {
                            double v = 0.5 * (dab(i, j, k, l) - diag[a](i, j, k, l) - diag[b](i, j, k, l));
                            cd.d2R(i, j, k, l, a, b) = v;
                            cd.d2R(i, j, k, l, b, a) = v;
                        }
        }
    cd.has_derivatives = true;
    return cd;
}

ExpansionCheckReport normal_coordinate_expansion_check(const MetricChart& chart, const Vec& p,
                                                       const Mat& frame,
                                                       const std::vector<double>& radii,
                                                       int n_directions, std::uint64_t seed) {
    const int n = chart.dim();
    CurvatureData cd = riemann_at(chart, p, frame, true);
    Xoshiro256ss rng(seed);
    std::vector<Vec> dirs;
    for (int d = 0; d < n_directions; ++d) {
        Vec xi = rng.normal_vec(n);
        xi.normalize();
        dirs.push_back(xi);
    }

    auto pullback_metric = [&](const Vec& y) {
        // (F^* g)_{ij}(y) for Phi(y) = exp_p(frame * y), by 5-point FD columns
        const double del = 1e-3;
        Mat dPhi(n, n);
        for (int i = 0; i < n; ++i) {
            Vec e = Vec::Zero(n);
            e(i) = 1.0;
            Vec fpp = exp_point(chart, p, frame * (y + 2.0 * del * e));
            Vec fp = exp_point(chart, p, frame * (y + del * e));
            Vec fm = exp_point(chart, p, frame * (y - del * e));
            Vec fmm = exp_point(chart, p, frame * (y - 2.0 * del * e));
            dPhi.col(i) = (fmm - 8.0 * fm + 8.0 * fp - fpp) / (12.0 * del);
        }
        Vec F0 = exp_point(chart, p, frame * y);
        Mat G = chart.metric(F0);
        return Mat(dPhi.transpose() * G * dPhi);
    };

    auto partial_sum = [&](const Vec& y, bool quartic) {
        Mat P = Mat::Identity(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double q2 = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) q2 += cd.R(a, i, b, j) * y(a) * y(b);
                P(i, j) += q2 / 3.0;
            }
        if (!quartic) return P;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double q3 = 0.0, q4 = 0.0, qq = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        double yab = y(a) * y(b);
                        for (int c = 0; c < n; ++c) {
                            q3 += cd.dR(a, i, b, j, c) * yab * y(c);
                            for (int d = 0; d < n; ++d) q4 += cd.d2R(a, i, b, j, c, d) * yab * y(c) * y(d);
                        }
                    }
                for (int l = 0; l < n; ++l) {
                    double u = 0.0, v = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            u += cd.R(a, i, b, l) * y(a) * y(b);
                            v += cd.R(a, j, b, l) * y(a) * y(b);
                        }
                    qq += u * v;
                }
                P(i, j) += q3 / 6.0 + q4 / 20.0 + (2.0 / 45.0) * qq;
            }
        return P;
    };

    ExpansionCheckReport rep;
    std::vector<std::vector<std::pair<double, double>>> per_dir(dirs.size()), per_dir_tr(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        for (double r : radii) {
            Vec y = r * dirs[d];
            Mat FG = pullback_metric(y);
            double res = (FG - partial_sum(y, true)).cwiseAbs().maxCoeff();
            double res2 = (FG - partial_sum(y, false)).cwiseAbs().maxCoeff();
            rep.rows.push_back({static_cast<int>(d), r, res});
            rep.truncated_rows.push_back({static_cast<int>(d), r, res2});
            per_dir[d].push_back({r, res});
            per_dir_tr[d].push_back({r, res2});
        }
    }
    auto fit = [](const std::vector<std::pair<double, double>>& pts) {
        double noise_floor = 1e-13;
        std::vector<std::pair<double, double>> keep;
        for (auto& [r, v] : pts)
            if (v > noise_floor) keep.push_back({std::log(r), std::log(v)});
        if (keep.size() < 2) return std::numeric_limits<double>::quiet_NaN();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& [x, yv] : keep) {
            sx += x;
            sy += yv;
            sxx += x * x;
            sxy += x * yv;
        }
        double m = keep.size();
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        rep.fitted_slopes.push_back(fit(per_dir[d]));
        rep.truncated_slopes.push_back(fit(per_dir_tr[d]));
    }
    return rep;
}

}  // namespace gcurv
