/// @file curvature.hpp
/// @brief Riemann tensor and its first/second covariant derivatives in an
///        orthonormal frame, plus the normal-coordinate expansion check.
///
/// Conventions (calibrated so the partial scalar trace over the full tangent
/// space is the standard scalar curvature, positive on round spheres):
///   R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]
///   R_{ijkl} = g(R(E_i,E_j) E_k, E_l)
/// A space form of curvature c then has R_{ijkl} = c (d_il d_jk - d_ik d_jl).
#pragma once

#include <optional>
#include <vector>

#include "gcurv/geodesic.hpp"
#include "gcurv/metric.hpp"

namespace gcurv {

struct CurvatureData {
    Mat frame;       // g-orthonormal columns E_1..E_{m+1} at p
    Tensor4 R;       // frame components R_{ijkl}
    Tensor5 dR;      // (nabla R)_{ijkl;a}
    Tensor6 d2R;     // symmetrized (nabla^2 R)_{ijkl;(ab)}
    int convention_sign = +1;
    bool has_derivatives = false;
};

/// Coordinate components R_{ijkl}(x) from g, dg, d2g.
Tensor4 riemann_coordinate(const MetricChart& chart, const Vec& x);

/// Frame components of the curvature tensor and (optionally) its first and
/// second covariant derivatives at p. Derivatives are finite differences of
/// frame components along geodesics with parallel-transported frames; the
/// mixed second derivatives come from polarization of pure directional
/// second derivatives, so d2R is the symmetrized nabla nabla R.
CurvatureData riemann_at(const MetricChart& chart, const Vec& p, const Mat& frame,
                         bool with_derivatives = true);

/// Orthonormalize the coordinate basis at p (fixed order, positive diagonal).
Mat orthonormal_frame(const MetricChart& chart, const Vec& p);

struct ExpansionCheckRow {
    int direction_id;
    double radius;
    double residual;
};

struct ExpansionCheckReport {
    std::vector<ExpansionCheckRow> rows;            // quartic partial sum subtracted
    std::vector<ExpansionCheckRow> truncated_rows;  // order-|x|^2 partial sum subtracted
    std::vector<double> fitted_slopes;              // per direction; NaN when unresolved
    std::vector<double> truncated_slopes;
};

/// Builds normal coordinates via exp_p, evaluates (F^*g)_ij on a fixed
/// direction set, subtracts the normal-coordinate partial sum through order
/// |x|^4 (coefficients 1/3, 1/6, 1/20, 2/45) and fits the residual order.
ExpansionCheckReport normal_coordinate_expansion_check(const MetricChart& chart, const Vec& p,
                                                       const Mat& frame,
                                                       const std::vector<double>& radii,
                                                       int n_directions = 6,
                                                       std::uint64_t seed = 2024);

}  // namespace gcurv
