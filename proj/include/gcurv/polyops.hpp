/// @file polyops.hpp
/// @brief Exact rational polynomial algebra for the flat-model linear theory:
///        polynomial Laplacian, harmonic decomposition, Dirichlet-to-Neumann,
///        and the model Jacobi spectra on S^k in R^{m+1}. No floating point
///        anywhere in this module.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "gcurv/linalg.hpp"

namespace gcurv {

using Rational = boost::multiprecision::cpp_rational;

/// Multivariate polynomial with rational coefficients in canonical form:
/// zero coefficients are never stored.
class Poly {
public:
    using Expo = std::vector<unsigned>;

    explicit Poly(int nvars) : nvars_(nvars) {}
    static Poly variable(int nvars, int i);
    static Poly constant(int nvars, const Rational& c);
    static Poly radius2(int nvars);  // |y|^2

    int nvars() const { return nvars_; }
    const std::map<Expo, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    void add_term(const Expo& e, const Rational& c);
    Rational coefficient(const Expo& e) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const Rational& c) const;
    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    Poly diff(int var) const;
    /// Exact flat Laplacian sum_i d^2/dy_i^2.
    Poly laplacian() const;

    /// Split by total degree: returns the nonzero homogeneous parts.
    std::vector<std::pair<int, Poly>> homogeneous_parts() const;

    double eval(const Vec& x) const;
    Rational eval_exact(const std::vector<Rational>& x) const;

    std::string to_string() const;

private:
    int nvars_;
    std::map<Expo, Rational> terms_;
};

/// Exact conversion of an IEEE double (doubles are dyadic rationals).
Rational rational_from_double(double x);

/// p = sum_j |y|^{2j} h_j with each h_j harmonic; returned as (j, h_j).
/// Exact; reconstruction sum |y|^{2j} h_j equals the input identically.
std::vector<std::pair<int, Poly>> harmonic_decompose(const Poly& p);

/// Dirichlet-to-Neumann on S^k (inward normal): each degree-l harmonic
/// component of the restriction maps to -l times itself.
Poly dtn(const Poly& sphere_restriction);

/// Laplace-Beltrami of a polynomial restriction to S^k: degree-l harmonic
/// components map to -l(l+k-1) times themselves (k = nvars - 1).
Poly sphere_laplacian(const Poly& sphere_restriction);

struct SpectrumRow {
    int l;
    Rational eigenvalue;
    long long multiplicity;  // dimension of degree-l spherical harmonics on S^k
};

struct SpectrumTable {
    std::string operator_id;  // J_parallel | J_perp | DtN | combined
    std::vector<SpectrumRow> rows;
};

/// dim of degree-l harmonics in k+1 variables: C(k+l,l) - C(k+l-2,l-2).
long long harmonic_dim(int k, int l);

/// Exact spectra per harmonic degree l <= L_max:
///   J_parallel = Delta_{S^k} + k  -> k - l(l+k-1)   (kernel at l = 1)
///   J_perp     = Delta_{S^k}      -> -l(l+k-1)
///   DtN                           -> -l
///   combined   = J_perp - k DtN   -> -l(l-1)        (kernel at l = 0, 1)
std::vector<SpectrumTable> model_spectra(int k, int m, int L_max);

/// JSON text for spectrum tables (deterministic ordering).
std::string spectra_to_json(const std::vector<SpectrumTable>& tables, int k, int m);

/// JSON text for a polynomial: exponents with numerator/denominator strings.
std::string poly_to_json(const Poly& p);

}  // namespace gcurv
