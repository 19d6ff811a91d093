#include "gcurv/polyops.hpp"

#include <cmath>
#include <sstream>

#include "gcurv/errors.hpp"

namespace gcurv {

Poly Poly::variable(int nvars, int i) {
    Poly p(nvars);
    Expo e(nvars, 0);
    e[i] = 1;
    p.add_term(e, 1);
    return p;
}

Poly Poly::constant(int nvars, const Rational& c) {
    Poly p(nvars);
    p.add_term(Expo(nvars, 0), c);
    return p;
}

Poly Poly::radius2(int nvars) {
    Poly p(nvars);
    for (int i = 0; i < nvars; ++i) {
        Expo e(nvars, 0);
        e[i] = 2;
        p.add_term(e, 1);
    }
    return p;
}

int Poly::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int t = 0;
        for (unsigned v : e) t += static_cast<int>(v);
        d = std::max(d, t);
    }
    return d;
}

void Poly::add_term(const Expo& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational Poly::coefficient(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r(nvars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Expo e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    Poly r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, cc] : terms_) r.add_term(e, cc * c);
    return r;
}

Poly Poly::diff(int var) const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo e2 = e;
        e2[var] -= 1;
        r.add_term(e2, c * e[var]);
    }
    return r;
}

Poly Poly::laplacian() const {
    Poly r(nvars_);
    for (int i = 0; i < nvars_; ++i) {
        for (const auto& [e, c] : terms_) {
            if (e[i] < 2) continue;
            Expo e2 = e;
            e2[i] -= 2;
            r.add_term(e2, c * e[i] * (e[i] - 1));
        }
    }
    return r;
}

std::vector<std::pair<int, Poly>> Poly::homogeneous_parts() const {
    std::map<int, Poly> parts;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (unsigned v : e) d += static_cast<int>(v);
        auto it = parts.find(d);
        if (it == parts.end()) it = parts.emplace(d, Poly(nvars_)).first;
        it->second.add_term(e, c);
    }
    std::vector<std::pair<int, Poly>> out;
    for (auto& [d, p] : parts) out.emplace_back(d, std::move(p));
    return out;
}

double Poly::eval(const Vec& x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = static_cast<double>(c);
        for (int i = 0; i < nvars_; ++i)
            for (unsigned p = 0; p < e[i]; ++p) t *= x(i);
        s += t;
    }
    return s;
}

Rational Poly::eval_exact(const std::vector<Rational>& x) const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars_; ++i)
            for (unsigned p = 0; p < e[i]; ++p) t *= x[i];
        s += t;
    }
    return s;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        for (int i = 0; i < nvars_; ++i)
            if (e[i] > 0) os << " y" << i + 1 << "^" << e[i];
    }
    return os.str();
}

Rational rational_from_double(double x) {
    if (x == 0.0) return Rational(0);
    if (!std::isfinite(x)) throw ConfigError("cannot convert non-finite double to rational");
    int expo = 0;
    double m = std::frexp(x, &expo);  // x = m * 2^expo, |m| in [0.5, 1)
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    expo -= 53;
    Rational r(mant);
    boost::multiprecision::cpp_int two = 2;
    if (expo >= 0) {
        r *= Rational(boost::multiprecision::pow(two, expo));
    } else {
        r /= Rational(boost::multiprecision::pow(two, -expo));
    }
    return r;
}

std::vector<std::pair<int, Poly>> harmonic_decompose(const Poly& p) {
    const int nvars = p.nvars();
    std::map<int, Poly> collected;  // j -> h_j (summed across homogeneous parts)
    auto add_h = [&](int j, const Poly& h) {
        auto it = collected.find(j);
        if (it == collected.end())
            collected.emplace(j, h);
        else
            it->second = it->second + h;
    };

    for (const auto& [d, part] : p.homogeneous_parts()) {
        const int jmax = d / 2;
        // Delta^i part = sum_{j >= i} mu(j, i, d - 2j) |y|^{2(j-i)} h_j,
        // with mu(j, i, e) = prod_{s=0}^{i-1} 2(j-s) (2(j-s) + nvars - 2 + 2e).
        std::vector<Poly> lap(jmax + 1, Poly(nvars));
        lap[0] = part;
        for (int i = 1; i <= jmax; ++i) lap[i] = lap[i - 1].laplacian();
        auto mu = [&](int j, int i, int e) {
            Rational m = 1;
            for (int s = 0; s < i; ++s) {
                int a = j - s;
                m *= Rational(2 * a) * Rational(2 * a + nvars - 2 + 2 * e);
            }
            return m;
        };
        Poly r2 = Poly::radius2(nvars);
        std::vector<Poly> h(jmax + 1, Poly(nvars));
        for (int i = jmax; i >= 0; --i) {
            Poly rhs = lap[i];
            for (int j = i + 1; j <= jmax; ++j) {
                Poly pw = Poly::constant(nvars, 1);
                for (int s = 0; s < j - i; ++s) pw = pw * r2;
                rhs = rhs - (pw * h[j]).scaled(mu(j, i, d - 2 * j));
            }
            h[i] = rhs.scaled(Rational(1) / mu(i, i, d - 2 * i));
            if (!h[i].is_zero()) add_h(i, h[i]);
        }
    }
    std::vector<std::pair<int, Poly>> out;
    for (auto& [j, h] : collected)
        if (!h.is_zero()) out.emplace_back(j, std::move(h));
    return out;
}

Poly dtn(const Poly& sphere_restriction) {
    Poly out(sphere_restriction.nvars());
    for (const auto& [j, h] : harmonic_decompose(sphere_restriction)) {
        // on the sphere |y|^{2j} = 1: the harmonic extension is sum h_j
        for (const auto& [dl, hl] : h.homogeneous_parts()) out = out + hl.scaled(Rational(-dl));
    }
    return out;
}

Poly sphere_laplacian(const Poly& sphere_restriction) {
    const int k = sphere_restriction.nvars() - 1;
    Poly out(sphere_restriction.nvars());
    for (const auto& [j, h] : harmonic_decompose(sphere_restriction))
        for (const auto& [dl, hl] : h.homogeneous_parts())
            out = out + hl.scaled(Rational(-dl) * Rational(dl + k - 1));
    return out;
}

long long harmonic_dim(int k, int l) {
    auto binom = [](long long n, long long r) -> long long {
        if (r < 0 || r > n) return 0;
        long long v = 1;
        for (long long i = 1; i <= r; ++i) v = v * (n - r + i) / i;
        return v;
    };
    if (l == 0) return 1;
    return binom(k + l, l) - binom(k + l - 2, l - 2);
}

std::vector<SpectrumTable> model_spectra(int k, int /*m*/, int L_max) {
    std::vector<SpectrumTable> tables(4);
    tables[0].operator_id = "J_parallel";
    tables[1].operator_id = "J_perp";
    tables[2].operator_id = "DtN";
    tables[3].operator_id = "combined";
    for (int l = 0; l <= L_max; ++l) {
        long long mult = harmonic_dim(k, l);
        Rational lap = Rational(-l) * Rational(l + k - 1);
        tables[0].rows.push_back({l, lap + k, mult});
        tables[1].rows.push_back({l, lap, mult});
        tables[2].rows.push_back({l, Rational(-l), mult});
        tables[3].rows.push_back({l, Rational(-l) * Rational(l - 1), mult});
    }
    return tables;
}

std::string spectra_to_json(const std::vector<SpectrumTable>& tables, int k, int m) {
    std::ostringstream os;
    os << "{\n  \"k\": " << k << ",\n  \"m\": " << m << ",\n  \"normal_rank\": " << (m - k)
       << ",\n  \"tables\": [\n";
    for (std::size_t t = 0; t < tables.size(); ++t) {
        os << "    {\"operator\": \"" << tables[t].operator_id << "\", \"rows\": [";
        for (std::size_t r = 0; r < tables[t].rows.size(); ++r) {
            const auto& row = tables[t].rows[r];
            os << (r ? ", " : "") << "{\"l\": " << row.l << ", \"eigenvalue\": \"" << row.eigenvalue
               << "\", \"multiplicity\": " << row.multiplicity << "}";
        }
        os << "]}" << (t + 1 < tables.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

std::string poly_to_json(const Poly& p) {
    std::ostringstream os;
    os << "{\"nvars\": " << p.nvars() << ", \"terms\": [";
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (!first) os << ", ";
        first = false;
        os << "{\"e\": [";
        for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
        os << "], \"num\": \"" << boost::multiprecision::numerator(c) << "\", \"den\": \""
           << boost::multiprecision::denominator(c) << "\"}";
    }
    os << "]}";
    return os.str();
}

}  // namespace gcurv
