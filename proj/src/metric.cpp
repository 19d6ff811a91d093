#include "gcurv/metric.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "gcurv/rng.hpp"

namespace gcurv {
namespace {

// ---------------------------------------------------------------------------
// Space-form profile functions. With q = |x|^2 and u = c q:
//   g_ij(x) = a(q) delta_ij + b(q) x_i x_j,
//   a(q) = sin^2(sqrt(c) r)/(c r^2) = A(u),  b(q) = (1 - a)/q = c B(u),
// where A(u) = sum_{j>=0} alpha_j u^j, alpha_j = (-1)^j 4^{j+1} / (2 (2j+2)!),
// and B(u) = (1 - A(u))/u. The series are entire, so they cover c < 0
// (sinh) with the same coefficients.
// ---------------------------------------------------------------------------
constexpr int kSeriesTerms = 42;

struct Series {
    double coef[kSeriesTerms];
    double eval(double u) const {
        double s = 0.0;
        for (int j = kSeriesTerms - 1; j >= 0; --j) s = s * u + coef[j];
        return s;
    }
};

struct SpaceFormProfile {
    Series A, dA, d2A, B, dB, d2B;
    SpaceFormProfile() {
        double alpha[kSeriesTerms + 3];
        double fact = 2.0;  // (2j+2)! running product, j = 0 -> 2! = 2
        double pow4 = 4.0;
        for (int j = 0; j < kSeriesTerms + 3; ++j) {
            alpha[j] = ((j % 2 == 0) ? 1.0 : -1.0) * pow4 / (2.0 * fact);
            pow4 *= 4.0;
            fact *= (2.0 * j + 3.0) * (2.0 * j + 4.0);
        }
        for (int j = 0; j < kSeriesTerms; ++j) {
            A.coef[j] = alpha[j];
            dA.coef[j] = (j + 1.0) * alpha[j + 1];
            d2A.coef[j] = (j + 1.0) * (j + 2.0) * alpha[j + 2];
            B.coef[j] = -alpha[j + 1];
            dB.coef[j] = -(j + 1.0) * alpha[j + 2];
            d2B.coef[j] = -(j + 1.0) * (j + 2.0) * alpha[j + 3];
        }
    }
};

const SpaceFormProfile& profile() {
    static const SpaceFormProfile p;
    return p;
}

Mat space_form_metric(int n, double c, const Vec& x) {
    const auto& P = profile();
    double q = x.squaredNorm();
    double u = c * q;
    double a = P.A.eval(u);
    double b = c * P.B.eval(u);
    Mat g = a * Mat::Identity(n, n);
    g += b * x * x.transpose();
    return g;
}

Tensor3 space_form_dmetric(int n, double c, const Vec& x) {
    const auto& P = profile();
    double q = x.squaredNorm(), u = c * q;
    double ap = c * P.dA.eval(u);
    double b = c * P.B.eval(u);
    double bp = c * c * P.dB.eval(u);
    Tensor3 dg = Tensor3::cube(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = 2.0 * ap * x(k) * (i == j) + 2.0 * bp * x(k) * x(i) * x(j);
                if (i == k) v += b * x(j);
                if (j == k) v += b * x(i);
                dg(k, i, j) = v;
            }
    return dg;
}

Tensor4 space_form_d2metric(int n, double c, const Vec& x) {
    const auto& P = profile();
    double q = x.squaredNorm(), u = c * q;
    double ap = c * P.dA.eval(u);
    double app = c * c * P.d2A.eval(u);
    double b = c * P.B.eval(u);
    double bp = c * c * P.dB.eval(u);
    double bpp = c * c * c * P.d2B.eval(u);
    Tensor4 d2g = Tensor4::cube(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = 4.0 * app * x(k) * x(l) * (i == j) + 2.0 * ap * (k == l) * (i == j);
                    v += 4.0 * bpp * x(k) * x(l) * x(i) * x(j);
                    double s = 0.0;
                    if (k == l) s += x(i) * x(j);
                    if (i == l) s += x(j) * x(k);
                    if (j == l) s += x(i) * x(k);
                    if (i == k) s += x(j) * x(l);
                    if (j == k) s += x(i) * x(l);
                    v += 2.0 * bp * s;
                    if (i == k && j == l) v += b;
                    if (j == k && i == l) v += b;
                    d2g(k, l, i, j) = v;
                }
    return d2g;
}

// ---------------------------------------------------------------------------
// Closed-form geodesics for space forms via the embedding model:
// c > 0: sphere of radius 1/sqrt(c) in R^{n+1};
// c < 0: hyperboloid in Minkowski R^{1,n}. The chart is geodesic normal
// coordinates at the pole, so exp_0 is the identity on coordinates and
// generic base points are handled by mapping through the embedding.
// ---------------------------------------------------------------------------
class SpaceFormClosedForm : public ClosedFormGeometry {
public:
    SpaceFormClosedForm(int n, double c) : n_(n), c_(c), sq_(std::sqrt(std::abs(c))) {}

    GeodesicSolution geodesic(const Vec& p, const Vec& v, double t, const Mat& frame) const override {
        GeodesicSolution sol;
        Vec P = to_emb(p);
        Mat D = demb(p);
        Vec V = D * (t * v);
        double vnorm = std::sqrt(std::max(0.0, inner(V, V)));
        if (vnorm < 1e-300) {
            sol.endpoint = p;
            sol.velocity = v;
            sol.transported_frame = frame;
            return sol;
        }
        Vec That = V / vnorm;
        double sig = sq_ * vnorm;
        Vec Q = cs(sig) * P + sn(sig) / sq_ * That;
        sol.endpoint = from_emb(Q);
        Mat Dq = demb(sol.endpoint);
        Vec Tend = transport_unit_tangent(P, That, sig);
        sol.velocity = pullback(Dq, (vnorm / t) * Tend);
        if (frame.cols() > 0) {
            sol.transported_frame.resize(n_, frame.cols());
            for (int c0 = 0; c0 < frame.cols(); ++c0) {
                Vec W = D * frame.col(c0);
                double wt = inner(W, That);
                Vec Wp = W - wt * That;
                Vec Wt = wt * transport_unit_tangent(P, That, sig);
                sol.transported_frame.col(c0) = pullback(Dq, Wp + Wt);
            }
        }
        sol.integrator_error_estimate = 0.0;
        return sol;
    }

private:
    double cs(double s) const { return c_ > 0 ? std::cos(s) : std::cosh(s); }
    double sn(double s) const { return c_ > 0 ? std::sin(s) : std::sinh(s); }

    double inner(const Vec& u, const Vec& v) const {
        double s = (c_ > 0 ? 1.0 : -1.0) * u(0) * v(0);
        for (int i = 1; i <= n_; ++i) s += u(i) * v(i);
        return s;
    }

    Vec to_emb(const Vec& y) const {
        double r = y.norm();
        Vec P(n_ + 1);
        P(0) = cs(sq_ * r) / sq_;
        double f = (r < 1e-12) ? 1.0 : sn(sq_ * r) / (sq_ * r);
        for (int i = 0; i < n_; ++i) P(i + 1) = f * y(i);
        return P;
    }

    // columns d(to_emb)/dy^i
    Mat demb(const Vec& y) const {
        double r = y.norm();
        Mat D(n_ + 1, n_);
        if (r < 1e-12) {
            D.setZero();
            for (int i = 0; i < n_; ++i) D(i + 1, i) = 1.0;
            return D;
        }
        Vec yh = y / r;
        double s = sn(sq_ * r), co = cs(sq_ * r);
        double snr = s / (sq_ * r);
        for (int i = 0; i < n_; ++i) {
            D(0, i) = (c_ > 0 ? -s : s) * yh(i);
            for (int a = 0; a < n_; ++a)
                D(a + 1, i) = co * yh(i) * yh(a) + snr * ((a == i ? 1.0 : 0.0) - yh(a) * yh(i));
        }
        return D;
    }

    Vec from_emb(const Vec& Q) const {
        double r;
        if (c_ > 0) {
            double u = std::min(1.0, std::max(-1.0, sq_ * Q(0)));
            r = std::acos(u) / sq_;
        } else {
            double u = std::max(1.0, sq_ * Q(0));
            r = std::acosh(u) / sq_;
        }
        Vec tail = Q.tail(n_);
        double tn = tail.norm();
        if (tn < 1e-300) return Vec::Zero(n_);
        return (r / tn) * tail;
    }

    // transported unit tangent after angle sig along the geodesic plane (P, That)
    Vec transport_unit_tangent(const Vec& P, const Vec& That, double sig) const {
        if (c_ > 0) return std::cos(sig) * That - sq_ * std::sin(sig) * P;
        return std::cosh(sig) * That + sq_ * std::sinh(sig) * P;
    }

    Vec pullback(const Mat& D, const Vec& W) const {
        // Solve D w = W in the least-squares sense; W lies in the column space.
        return D.colPivHouseholderQr().solve(W);
    }

    int n_;
    double c_, sq_;
};

class EuclideanClosedForm : public ClosedFormGeometry {
public:
    GeodesicSolution geodesic(const Vec& p, const Vec& v, double t, const Mat& frame) const override {
        GeodesicSolution sol;
        sol.endpoint = p + t * v;
        sol.velocity = v;
        sol.transported_frame = frame;
        sol.integrator_error_estimate = 0.0;
        return sol;
    }
};

class ProductClosedForm : public ClosedFormGeometry {
public:
    ProductClosedForm(std::shared_ptr<const ClosedFormGeometry> b1, int d1,
                      std::shared_ptr<const ClosedFormGeometry> b2, int d2)
        : b1_(std::move(b1)), b2_(std::move(b2)), d1_(d1), d2_(d2) {}

    GeodesicSolution geodesic(const Vec& p, const Vec& v, double t, const Mat& frame) const override {
        Mat f1, f2;
        if (frame.cols() > 0) {
            f1 = frame.topRows(d1_);
            f2 = frame.bottomRows(d2_);
        }
        GeodesicSolution s1 = b1_->geodesic(p.head(d1_), v.head(d1_), t, f1);
        GeodesicSolution s2 = b2_->geodesic(p.tail(d2_), v.tail(d2_), t, f2);
        GeodesicSolution sol;
        sol.endpoint.resize(d1_ + d2_);
        sol.endpoint << s1.endpoint, s2.endpoint;
        sol.velocity.resize(d1_ + d2_);
        sol.velocity << s1.velocity, s2.velocity;
        if (frame.cols() > 0) {
            sol.transported_frame.resize(d1_ + d2_, frame.cols());
            sol.transported_frame << s1.transported_frame, s2.transported_frame;
        }
        sol.integrator_error_estimate = 0.0;
        return sol;
    }

private:
    std::shared_ptr<const ClosedFormGeometry> b1_, b2_;
    int d1_, d2_;
};

// ---------------------------------------------------------------------------
// Polynomial conformal factors.
// ---------------------------------------------------------------------------
struct PolyD {
    std::vector<std::pair<std::vector<int>, double>> terms;
    int nvars = 0;

    double eval(const Vec& x) const {
        double s = 0.0;
        for (const auto& [e, c] : terms) {
            double t = c;
            for (int i = 0; i < nvars; ++i)
                for (int p = 0; p < e[i]; ++p) t *= x(i);
            s += t;
        }
        return s;
    }
    PolyD diff(int var) const {
        PolyD d;
        d.nvars = nvars;
        for (const auto& [e, c] : terms) {
            if (e[var] == 0) continue;
            auto e2 = e;
            e2[var] -= 1;
            d.terms.emplace_back(e2, c * e[var]);
        }
        return d;
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// MetricChart
// ---------------------------------------------------------------------------
Mat MetricChart::inverse_metric(const Vec& x) const {
    Mat g = metric(x);
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) throw SingularMetricError("metric not SPD at sample point");
    return llt.solve(Mat::Identity(dim_, dim_));
}

Tensor3 MetricChart::dmetric(const Vec& x) const {
    if (dg_) return dg_(x);
    const double h = steps_.h1;
    Tensor3 dg = Tensor3::cube(dim_);
    for (int k = 0; k < dim_; ++k) {
        Vec xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        Mat d = (g_(xp) - g_(xm)) / (2.0 * h);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) dg(k, i, j) = d(i, j);
    }
    return dg;
}

Tensor4 MetricChart::d2metric(const Vec& x) const {
    if (d2g_) return d2g_(x);
    const double h = steps_.h2;
    Tensor4 d2g = Tensor4::cube(dim_);
    Mat g0 = g_(x);
    for (int k = 0; k < dim_; ++k) {
        for (int l = k; l < dim_; ++l) {
            Mat d;
            if (k == l) {
                Vec xp = x, xm = x;
                xp(k) += h;
                xm(k) -= h;
                d = (g_(xp) - 2.0 * g0 + g_(xm)) / (h * h);
            } else {
                Vec xpp = x, xpm = x, xmp = x, xmm = x;
                xpp(k) += h; xpp(l) += h;
                xpm(k) += h; xpm(l) -= h;
                xmp(k) -= h; xmp(l) += h;
                xmm(k) -= h; xmm(l) -= h;
                d = (g_(xpp) - g_(xpm) - g_(xmp) + g_(xmm)) / (4.0 * h * h);
            }
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j) {
                    d2g(k, l, i, j) = d(i, j);
                    d2g(l, k, i, j) = d(i, j);
                }
        }
    }
    return d2g;
}

Tensor3 MetricChart::christoffel(const Vec& x) const {
    check_domain(x);
    Mat gi = inverse_metric(x);
    Tensor3 dg = dmetric(x);
    Tensor3 gam = Tensor3::cube(dim_);
    for (int l = 0; l < dim_; ++l)
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                double s = 0.0;
                for (int q = 0; q < dim_; ++q)
                    s += gi(l, q) * (dg(j, i, q) + dg(i, j, q) - dg(q, i, j));
                gam(l, i, j) = 0.5 * s;
                gam(l, j, i) = 0.5 * s;
            }
    return gam;
}

Tensor4 MetricChart::dchristoffel(const Vec& x) const {
    check_domain(x);
    Mat gi = inverse_metric(x);
    Tensor3 dg = dmetric(x);
    Tensor4 d2g = d2metric(x);
    const int n = dim_;
    // d_m g^{lq} = -g^{la} dg[m](a,b) g^{bq}
    std::vector<Mat> dgi(n);
    for (int m = 0; m < n; ++m) {
        Mat dgm(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dgm(a, b) = dg(m, a, b);
        dgi[m] = -gi * dgm * gi;
    }
    Tensor4 dG = Tensor4::cube(n);
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double s = 0.0;
                    for (int q = 0; q < n; ++q) {
                        s += dgi[m](l, q) * (dg(j, i, q) + dg(i, j, q) - dg(q, i, j));
                        s += gi(l, q) * (d2g(m, j, i, q) + d2g(m, i, j, q) - d2g(m, q, i, j));
                    }
                    dG(m, l, i, j) = 0.5 * s;
                    dG(m, l, j, i) = 0.5 * s;
                }
    return dG;
}

void MetricChart::validate_spd(int samples, std::uint64_t seed) const {
    Xoshiro256ss rng(seed);
    for (int s = 0; s < samples; ++s) {
        Vec dir = rng.normal_vec(dim_);
        dir.normalize();
        double r = rng.uniform() * 0.95 * std::min(domain_radius_, 1e3);
        Mat g = metric(r * dir);
        Eigen::LLT<Mat> llt(g);
        if (llt.info() != Eigen::Success)
            throw SingularMetricError("metric not SPD inside stated domain radius");
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw SingularMetricError("metric components not symmetric");
    }
}

// ---------------------------------------------------------------------------
// Zoo factories
// ---------------------------------------------------------------------------
MetricChart make_euclidean(int dim) {
    MetricChart chart(dim, [dim](const Vec&) { return Mat::Identity(dim, dim); }, 1e3);
    chart.set_analytic_derivatives([dim](const Vec&) { return Tensor3::cube(dim); },
                                   [dim](const Vec&) { return Tensor4::cube(dim); });
    chart.set_closed_form(std::make_shared<EuclideanClosedForm>());
    chart.set_name("euclidean");
    return chart;
}

MetricChart make_space_form(int dim, double c) {
    if (c == 0.0) return make_euclidean(dim);
    double domain = c > 0 ? 0.9 * M_PI / std::sqrt(c) : 3.0 / std::sqrt(-c);
    MetricChart chart(dim, [dim, c](const Vec& x) { return space_form_metric(dim, c, x); }, domain);
    chart.set_analytic_derivatives([dim, c](const Vec& x) { return space_form_dmetric(dim, c, x); },
                                   [dim, c](const Vec& x) { return space_form_d2metric(dim, c, x); });
    chart.set_closed_form(std::make_shared<SpaceFormClosedForm>(dim, c));
    chart.set_name("space_form");
    return chart;
}

MetricChart make_conformal(int dim, const std::vector<std::pair<std::vector<int>, double>>& f_poly,
                           double domain_radius) {
    PolyD f;
    f.nvars = dim;
    f.terms = f_poly;
    for (const auto& [e, c] : f.terms)
        if (static_cast<int>(e.size()) != dim)
            throw ConfigError("conformal factor exponent list does not match dim");
    std::vector<PolyD> grad(dim);
    std::vector<std::vector<PolyD>> hess(dim, std::vector<PolyD>(dim));
    for (int i = 0; i < dim; ++i) grad[i] = f.diff(i);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) hess[i][j] = grad[i].diff(j);

    auto comp = [f, dim](const Vec& x) { return std::exp(2.0 * f.eval(x)) * Mat::Identity(dim, dim); };
    MetricChart chart(dim, comp, domain_radius);
    chart.set_analytic_derivatives(
        [grad, f, dim](const Vec& x) {
            double e2f = std::exp(2.0 * f.eval(x));
            Tensor3 dg = Tensor3::cube(dim);
            for (int k = 0; k < dim; ++k) {
                double fk = grad[k].eval(x);
                for (int i = 0; i < dim; ++i) dg(k, i, i) = 2.0 * fk * e2f;
            }
            return dg;
        },
        [grad, hess, f, dim](const Vec& x) {
            double e2f = std::exp(2.0 * f.eval(x));
            Vec fg(dim);
            for (int i = 0; i < dim; ++i) fg(i) = grad[i].eval(x);
            Tensor4 d2g = Tensor4::cube(dim);
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    double v = (4.0 * fg(k) * fg(l) + 2.0 * hess[k][l].eval(x)) * e2f;
                    for (int i = 0; i < dim; ++i) d2g(k, l, i, i) = v;
                }
            return d2g;
        });
    chart.set_name("conformal");
    return chart;
}

MetricChart make_product(double c1, int d1, double c2, int d2) {
    MetricChart b1 = c1 == 0.0 || d1 == 1 ? make_euclidean(d1) : make_space_form(d1, c1);
    MetricChart b2 = c2 == 0.0 || d2 == 1 ? make_euclidean(d2) : make_space_form(d2, c2);
    int dim = d1 + d2;
    double domain = std::min(b1.domain_radius(), b2.domain_radius());
    auto bp1 = std::make_shared<MetricChart>(b1);
    auto bp2 = std::make_shared<MetricChart>(b2);
    MetricChart chart(
        dim,
        [bp1, bp2, d1, d2, dim](const Vec& x) {
            Mat g = Mat::Zero(dim, dim);
            g.topLeftCorner(d1, d1) = bp1->metric(x.head(d1));
            g.bottomRightCorner(d2, d2) = bp2->metric(x.tail(d2));
            return g;
        },
        domain);
    chart.set_analytic_derivatives(
        [bp1, bp2, d1, d2, dim](const Vec& x) {
            Tensor3 dg = Tensor3::cube(dim);
            Tensor3 g1 = bp1->dmetric(x.head(d1)), g2 = bp2->dmetric(x.tail(d2));
            for (int k = 0; k < d1; ++k)
                for (int i = 0; i < d1; ++i)
                    for (int j = 0; j < d1; ++j) dg(k, i, j) = g1(k, i, j);
            for (int k = 0; k < d2; ++k)
                for (int i = 0; i < d2; ++i)
                    for (int j = 0; j < d2; ++j) dg(k + d1, i + d1, j + d1) = g2(k, i, j);
            return dg;
        },
        [bp1, bp2, d1, d2, dim](const Vec& x) {
            Tensor4 d2g = Tensor4::cube(dim);
            Tensor4 g1 = bp1->d2metric(x.head(d1)), g2 = bp2->d2metric(x.tail(d2));
            for (int k = 0; k < d1; ++k)
                for (int l = 0; l < d1; ++l)
                    for (int i = 0; i < d1; ++i)
                        for (int j = 0; j < d1; ++j) d2g(k, l, i, j) = g1(k, l, i, j);
            for (int k = 0; k < d2; ++k)
                for (int l = 0; l < d2; ++l)
                    for (int i = 0; i < d2; ++i)
                        for (int j = 0; j < d2; ++j) d2g(k + d1, l + d1, i + d1, j + d1) = g2(k, l, i, j);
            return d2g;
        });
    chart.set_closed_form(std::make_shared<ProductClosedForm>(
        std::shared_ptr<const ClosedFormGeometry>(bp1, bp1->closed_form()), d1,
        std::shared_ptr<const ClosedFormGeometry>(bp2, bp2->closed_form()), d2));
    chart.set_name("product");
    return chart;
}

MetricChart MetricZooEntry::build() const {
    if (name == "euclidean") return make_euclidean(dim);
    if (name == "space_form") return make_space_form(dim, c);
    if (name == "conformal") return make_conformal(dim, f_poly, domain_radius);
    if (name == "product") return make_product(c1, d1, c2, d2);
    throw ConfigError("unknown metric name: " + name);
}

MetricZooEntry parse_zoo_entry(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config JSON parse failure: ") + e.what());
    }
    MetricZooEntry z;
    if (!j.contains("metric") || !j["metric"].contains("name"))
        throw ConfigError("config missing field: metric.name");
    if (!j.contains("dim")) throw ConfigError("config missing field: dim");
    z.name = j["metric"]["name"].get<std::string>();
    z.dim = j["dim"].get<int>();
    if (z.dim < 2) throw ConfigError("dim must be at least 2");
    auto params = j["metric"].value("params", nlohmann::json::object());
    if (z.name == "space_form") {
        if (!params.contains("c")) throw ConfigError("space_form requires params.c");
        z.c = params["c"].get<double>();
    } else if (z.name == "conformal") {
        if (!params.contains("f")) throw ConfigError("conformal requires params.f (monomial map)");
        for (auto& [key, val] : params["f"].items()) {
            std::vector<int> expo;
            std::size_t pos = 0;
            while (pos < key.size()) {
                std::size_t next = key.find(' ', pos);
                if (next == std::string::npos) next = key.size();
                expo.push_back(std::stoi(key.substr(pos, next - pos)));
                pos = next + 1;
            }
            if (static_cast<int>(expo.size()) != z.dim)
                throw ConfigError("conformal factor key '" + key + "' has wrong number of exponents");
            z.f_poly.emplace_back(expo, val.get<double>());
        }
        z.domain_radius = params.value("domain_radius", 1.0);
    } else if (z.name == "product") {
        z.c1 = params.value("c1", 0.0);
        z.c2 = params.value("c2", 0.0);
        z.d1 = params.value("d1", 0);
        z.d2 = params.value("d2", 0);
        if (z.d1 + z.d2 != z.dim) throw ConfigError("product blocks d1+d2 must equal dim");
    } else if (z.name != "euclidean") {
        throw ConfigError("unknown metric name: " + z.name);
    }
    return z;
}

}  // namespace gcurv
