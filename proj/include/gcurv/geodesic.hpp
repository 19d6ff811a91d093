/// @file geodesic.hpp
/// @brief Geodesics, parallel transport, and the exponential map:
///        classical RK4 with fixed steps, or the chart's closed form.
#pragma once

#include "gcurv/metric.hpp"

namespace gcurv {

/// Solve the geodesic with initial data (p, v) up to parameter t, transporting
/// the given frame columns in parallel. Dispatches to the chart's closed form
/// when available (zero error estimate); otherwise classical RK4 with
/// N = max(8, ceil(200 |t|)) steps, Richardson error estimate from N vs 2N
/// when `with_estimate` is set.
GeodesicSolution geodesic(const MetricChart& chart, const Vec& p, const Vec& v, double t,
                          const Mat& frame = Mat(), bool with_estimate = true);

/// exp_p(w): geodesic with t = 1.
Vec exp_map(const MetricChart& chart, const Vec& p, const Vec& w);

/// Parallel transport of frame columns along the geodesic from (p, v) to time t.
Mat parallel_transport(const MetricChart& chart, const Vec& p, const Vec& v, const Mat& frame, double t);

/// Lean endpoint-only evaluation (no error estimate), used by immersion jets.
/// Integrates at unit speed with 200 steps per unit arc length, so the cost
/// scales with |w| rather than with a fixed parameter interval.
Vec exp_point(const MetricChart& chart, const Vec& p, const Vec& w);

/// exp_p(w) together with the parallel-transported frame, same fast path.
GeodesicSolution exp_with_frame(const MetricChart& chart, const Vec& p, const Vec& w, const Mat& frame);

}  // namespace gcurv
