/// @file metric.hpp
/// @brief Riemannian metrics in a single coordinate chart: components,
///        derivative schemes, Christoffel symbols, and the metric zoo.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "gcurv/errors.hpp"
#include "gcurv/linalg.hpp"

namespace gcurv {

struct GeodesicSolution {
    Vec endpoint;
    Vec velocity;
    Mat transported_frame;  // columns; empty when no frame was supplied
    double integrator_error_estimate = 0.0;
};

/// Closed-form geometry hooks for zoo entries that have them (flat space,
/// space forms via the embedding model, products of those). `frame` columns
/// are transported alongside the geodesic.
class ClosedFormGeometry {
public:
    virtual ~ClosedFormGeometry() = default;
    virtual GeodesicSolution geodesic(const Vec& p, const Vec& v, double t, const Mat& frame) const = 0;
};

/// Finite-difference steps per derivative order of the metric components.
/// h3/h4 feed the geodesic stencils used for nabla R and nabla nabla R.
struct FdSteps {
    double h1 = 1e-5;
    double h2 = 1e-4;
    double h3 = 5e-4;
    double h4 = 2e-3;
};

/// A coordinate chart with metric components g_ij(x). The single source of
/// geometric truth: everything downstream asks this class for g and its
/// first two derivative arrays (analytic when the entry supplies them,
/// second-order central differences otherwise).
class MetricChart {
public:
    using ComponentFn = std::function<Mat(const Vec&)>;
    using DMetricFn = std::function<Tensor3(const Vec&)>;
    using D2MetricFn = std::function<Tensor4(const Vec&)>;

    MetricChart(int dim, ComponentFn g, double domain_radius)
        : dim_(dim), g_(std::move(g)), domain_radius_(domain_radius) {}

    int dim() const { return dim_; }
    double domain_radius() const { return domain_radius_; }
    bool has_analytic_derivatives() const { return static_cast<bool>(dg_); }
    bool has_closed_form() const { return static_cast<bool>(closed_form_); }
    const ClosedFormGeometry* closed_form() const { return closed_form_.get(); }
    const FdSteps& steps() const { return steps_; }
    const std::string& name() const { return name_; }

    void set_analytic_derivatives(DMetricFn dg, D2MetricFn d2g) {
        dg_ = std::move(dg);
        d2g_ = std::move(d2g);
    }
    void set_closed_form(std::shared_ptr<const ClosedFormGeometry> cf) { closed_form_ = std::move(cf); }
    void set_steps(const FdSteps& s) { steps_ = s; }
    void set_name(std::string n) { name_ = std::move(n); }

    void check_domain(const Vec& x) const {
        if (x.norm() >= domain_radius_)
            throw DomainError("point outside chart domain (|x| = " + std::to_string(x.norm()) + ")", 0.0);
    }

    Mat metric(const Vec& x) const { return g_(x); }

    /// Inverse metric; throws SingularMetricError if g(x) is not SPD.
    Mat inverse_metric(const Vec& x) const;

    Tensor3 dmetric(const Vec& x) const;    // dg[k](i,j) = d_k g_ij
    Tensor4 d2metric(const Vec& x) const;   // d2g(k,l,i,j) = d_k d_l g_ij

    /// Gamma^l_ij = 1/2 g^{lq} (d_j g_iq + d_i g_jq - d_q g_ij).
    Tensor3 christoffel(const Vec& x) const;

    /// d_m Gamma^l_ij, from analytic or FD first/second metric derivatives.
    Tensor4 dchristoffel(const Vec& x) const;

    /// Cholesky SPD check at deterministic sample points in the domain.
    void validate_spd(int samples = 20, std::uint64_t seed = 1) const;

private:
    int dim_;
    ComponentFn g_;
    DMetricFn dg_;
    D2MetricFn d2g_;
    double domain_radius_;
    FdSteps steps_;
    std::shared_ptr<const ClosedFormGeometry> closed_form_;
    std::string name_ = "custom";
};

/// A named metric from the zoo, constructible from JSON configuration.
struct MetricZooEntry {
    std::string name;          // euclidean | space_form | conformal | product
    int dim = 0;               // ambient dimension m+1
    double c = 0.0;            // space_form curvature
    // conformal factor f as a polynomial: exponent multi-index -> coefficient
    std::vector<std::pair<std::vector<int>, double>> f_poly;
    double domain_radius = 1.0;
    // product params
    double c1 = 0.0, c2 = 0.0;
    int d1 = 0, d2 = 0;

    MetricChart build() const;
};

MetricChart make_euclidean(int dim);
MetricChart make_space_form(int dim, double c);
MetricChart make_conformal(int dim, const std::vector<std::pair<std::vector<int>, double>>& f_poly,
                           double domain_radius = 1.0);
MetricChart make_product(double c1, int d1, double c2, int d2);

/// Parse {"metric":{"name":...,"params":{...}}, "dim": n} from a JSON string.
MetricZooEntry parse_zoo_entry(const std::string& json_text);

}  // namespace gcurv
