/// @file linalg.hpp
/// @brief Dense linear-algebra aliases and small tensor containers.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <vector>

namespace gcurv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense tensor of fixed rank with row-major strides. Sizes are small
/// (ambient dimension <= a handful), so a flat vector is plenty.
template <int Rank>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(const std::array<int, Rank>& dims) : dims_(dims) {
        std::size_t n = 1;
        for (int d : dims_) n *= static_cast<std::size_t>(d);
        data_.assign(n, 0.0);
    }
    /// All dimensions equal to n.
    static Tensor cube(int n) {
        std::array<int, Rank> d;
        d.fill(n);
        return Tensor(d);
    }

    template <typename... Ix>
    double& operator()(Ix... ix) {
        static_assert(sizeof...(Ix) == Rank);
        return data_[flat(ix...)];
    }
    template <typename... Ix>
    double operator()(Ix... ix) const {
        static_assert(sizeof...(Ix) == Rank);
        return data_[flat(ix...)];
    }

    int dim(int axis) const { return dims_[axis]; }
    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw() { return data_; }

    Tensor& operator+=(const Tensor& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Tensor& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    template <typename... Ix>
    std::size_t flat(Ix... ix) const {
        std::array<int, Rank> idx{static_cast<int>(ix)...};
        std::size_t f = 0;
        for (int a = 0; a < Rank; ++a) f = f * static_cast<std::size_t>(dims_[a]) + static_cast<std::size_t>(idx[a]);
        return f;
    }
    std::array<int, Rank> dims_{};
    std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;
using Tensor6 = Tensor<6>;

/// Gram-Schmidt in fixed column order against inner product matrix G,
/// with positive-diagonal sign fixing: the coefficient of column j along
/// the original column j is kept positive. Throws on rank deficiency.
inline Mat gram_schmidt(const Mat& cols, const Mat& G, double rank_tol = 1e-12) {
    Mat out = cols;
    const int n = static_cast<int>(cols.cols());
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            double c = out.col(i).dot(G * out.col(j));
            out.col(j) -= c * out.col(i);
        }
        double nrm2 = out.col(j).dot(G * out.col(j));
        if (!(nrm2 > rank_tol * rank_tol)) throw std::runtime_error("gram_schmidt: rank-deficient frame");
        out.col(j) /= std::sqrt(nrm2);
        if (out.col(j).dot(G * cols.col(j)) < 0.0) out.col(j) = -out.col(j);
    }
    return out;
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
/// Matrices here are tiny (frame rotations), so this is accurate and cheap.
inline Mat expm(const Mat& A) {
    const int n = static_cast<int>(A.rows());
    double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    while (nrm > 0.5) {
        nrm *= 0.5;
        ++s;
    }
    Mat B = A / std::pow(2.0, s);
    Mat term = Mat::Identity(n, n);
    Mat sum = term;
    for (int k = 1; k <= 14; ++k) {
        term = term * B / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

}  // namespace gcurv
