#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "alh/linalg.hpp"

namespace alh {

// Dense rank-k tensor over a single point, dimension N, row-major components.
// Index variance is tracked by the caller; contraction helpers below assume
// all-lower components unless stated otherwise.
class NdTensor {
public:
    NdTensor() : dim_(0), rank_(0) {}
    NdTensor(int dim, int rank)
        : dim_(dim), rank_(rank), v_(size_of(dim, rank), 0.0) {}

    static std::size_t size_of(int dim, int rank) {
        std::size_t s = 1;
        for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(dim);
        return s;
    }

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    std::size_t size() const { return v_.size(); }

    double& operator[](std::size_t flat) { return v_[flat]; }
    double operator[](std::size_t flat) const { return v_[flat]; }

    std::size_t flat(std::span<const int> idx) const {
        std::size_t f = 0;
        for (int m = 0; m < rank_; ++m)
            f = f * static_cast<std::size_t>(dim_) +
                static_cast<std::size_t>(idx[m]);
        return f;
    }
    double& at(std::span<const int> idx) { return v_[flat(idx)]; }
    double at(std::span<const int> idx) const { return v_[flat(idx)]; }

    template <typename... I>
    double& operator()(I... idx) {
        const std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
        return at(std::span<const int>(a));
    }
    template <typename... I>
    double operator()(I... idx) const {
        const std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
        return at(std::span<const int>(a));
    }

    NdTensor& operator+=(const NdTensor& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    NdTensor& operator-=(const NdTensor& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    NdTensor& operator*=(double s) {
        for (auto& x : v_) x *= s;
        return *this;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

private:
    int dim_;
    int rank_;
    std::vector<double> v_;
};

// Contract one slot of an all-lower tensor with g^{-1}, i.e. raise it back
// against a second copy. Used by the g-norm below.
inline NdTensor raise_slot(const NdTensor& t, const Mat& ginv, int slot) {
    NdTensor out(t.dim(), t.rank());
    const int N = t.dim();
    const int rank = t.rank();
    std::size_t stride = 1;
    for (int m = rank - 1; m > slot; --m) stride *= static_cast<std::size_t>(N);
    const std::size_t block = stride * static_cast<std::size_t>(N);
    const std::size_t total = t.size();
    for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            for (int i = 0; i < N; ++i) {
                double s = 0.0;
                for (int j = 0; j < N; ++j)
                    s += ginv(i, j) *
                         t[base + static_cast<std::size_t>(j) * stride + off];
                out[base + static_cast<std::size_t>(i) * stride + off] = s;
            }
        }
    }
    return out;
}

// |T|_g for an all-lower tensor: sqrt of the full contraction of T with
// itself through g^{-1} on every slot.
inline double tensor_gnorm(const NdTensor& t, const Mat& g) {
    if (t.rank() == 0) return std::abs(t[0]);
    const Mat ginv = spd_inverse(g, "norm metric");
    NdTensor raised = t;
    for (int slot = 0; slot < t.rank(); ++slot)
        raised = raise_slot(raised, ginv, slot);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += raised[i] * t[i];
    // contraction of an SPD form with itself; clamp tiny negative roundoff
    return std::sqrt(std::max(s, 0.0));
}

inline double tensor_gnorm(const Mat& t, const Mat& g) {
    NdTensor nd(static_cast<int>(t.rows()), 2);
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j) nd(i, j) = t(i, j);
    return tensor_gnorm(nd, g);
}

// Rank-4 curvature-type tensor, antisymmetric in (a,b) and (c,d) and
// symmetric under pair exchange. Stored on antisymmetric index pairs
// p = (a<b), q = (c<d) as a symmetric P x P matrix, so those three symmetries
// hold by construction; only the first Bianchi identity remains a residual.
class CurvatureTensor4 {
public:
    explicit CurvatureTensor4(int dim)
        : dim_(dim),
          pairs_(pair_count(dim)),
          m_(Mat::Zero(pairs_, pairs_)) {
        if (dim < 2) throw dimension_error("curvature tensor needs dim >= 2");
    }

    static int pair_count(int dim) { return dim * (dim - 1) / 2; }

    int dim() const { return dim_; }
    int pairs() const { return pairs_; }

    // index of the ordered pair (a,b), a < b, in lexicographic order
    int pair_index(int a, int b) const {
        // sum_{k<a} (dim-1-k) + (b-a-1)
        return a * (2 * dim_ - a - 1) / 2 + (b - a - 1);
    }

    double operator()(int a, int b, int c, int d) const {
        if (a == b || c == d) return 0.0;
        double sign = 1.0;
        if (a > b) { std::swap(a, b); sign = -sign; }
        if (c > d) { std::swap(c, d); sign = -sign; }
        return sign * m_(pair_index(a, b), pair_index(c, d));
    }

    void set(int a, int b, int c, int d, double v) {
        double sign = 1.0;
        if (a > b) { std::swap(a, b); sign = -sign; }
        if (c > d) { std::swap(c, d); sign = -sign; }
        const int p = pair_index(a, b);
        const int q = pair_index(c, d);
        m_(p, q) = sign * v;
        m_(q, p) = sign * v;
    }

    // Assemble from raw components f(a,b,c,d); evaluates only a<b, c<d,
    // p<=q and averages the two pair orders, which projects exactly onto the
    // stored symmetry class.
    template <typename F>
    static CurvatureTensor4 from_components(int dim, F&& f) {
        CurvatureTensor4 t(dim);
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                for (int c = 0; c < dim; ++c)
                    for (int d = c + 1; d < dim; ++d) {
                        const int p = t.pair_index(a, b);
                        const int q = t.pair_index(c, d);
                        if (p > q) continue;
                        const double v =
                            0.5 * (f(a, b, c, d) + f(c, d, a, b));
                        t.m_(p, q) = v;
                        t.m_(q, p) = v;
                    }
        return t;
    }

    NdTensor to_nd() const {
        NdTensor out(dim_, 4);
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b)
                for (int c = 0; c < dim_; ++c)
                    for (int d = 0; d < dim_; ++d)
                        out(a, b, c, d) = (*this)(a, b, c, d);
        return out;
    }

    CurvatureTensor4& operator+=(const CurvatureTensor4& o) {
        m_ += o.m_;
        return *this;
    }
    CurvatureTensor4& operator-=(const CurvatureTensor4& o) {
        m_ -= o.m_;
        return *this;
    }
    CurvatureTensor4& operator*=(double s) {
        m_ *= s;
        return *this;
    }

    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

    // worst component of the cyclic sum R_{abcd} + R_{acdb} + R_{adbc}
    double max_bianchi_residual() const {
        double worst = 0.0;
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b)
                for (int c = 0; c < dim_; ++c)
                    for (int d = 0; d < dim_; ++d) {
                        const double s = (*this)(a, b, c, d) +
                                         (*this)(a, c, d, b) +
                                         (*this)(a, d, b, c);
                        worst = std::max(worst, std::abs(s));
                    }
        return worst;
    }

private:
    int dim_;
    int pairs_;
    Mat m_;
};

inline CurvatureTensor4 operator+(CurvatureTensor4 a,
                                  const CurvatureTensor4& b) {
    a += b;
    return a;
}
inline CurvatureTensor4 operator-(CurvatureTensor4 a,
                                  const CurvatureTensor4& b) {
    a -= b;
    return a;
}

// K_{abcd} = g_{ad} g_{bc} - g_{ac} g_{bd}; the curvature tensor of the
// model space of curvature -1 is exactly -K in this convention.
inline CurvatureTensor4 constant_curvature_tensor(const Mat& g) {
    require_spd(g, "constant curvature metric");
    const int N = static_cast<int>(g.rows());
    return CurvatureTensor4::from_components(N, [&](int a, int b, int c, int d) {
        return g(a, d) * g(b, c) - g(a, c) * g(b, d);
    });
}

// Ric_{bd} = g^{ac} R_{bacd}; gives Ric = -n g on hyperbolic space.
inline Mat ricci(const CurvatureTensor4& R, const Mat& ginv) {
    const int N = R.dim();
    Mat ric = Mat::Zero(N, N);
    for (int b = 0; b < N; ++b)
        for (int d = 0; d < N; ++d) {
            double s = 0.0;
            for (int a = 0; a < N; ++a)
                for (int c = 0; c < N; ++c) s += ginv(a, c) * R(b, a, c, d);
            ric(b, d) = s;
        }
    return 0.5 * (ric + ric.transpose());
}

inline double scalar_curvature(const Mat& ric, const Mat& ginv) {
    return (ginv * ric).trace();
}

// Weyl tensor via the Ricci decomposition:
//   W = R + (E (x) g)/(N-2) - S (g (x) g)/(2(N-1)(N-2)),
// with (h (x) k)_{abcd} = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad.
// Fully traceless; for Einstein input with Ric = -n g this reduces to R + K.
inline CurvatureTensor4 weyl(const CurvatureTensor4& R, const Mat& g) {
    const int N = R.dim();
    if (N < 3)
        throw dimension_error("Weyl tensor undefined below dimension 3");
    const Mat ginv = spd_inverse(g, "weyl metric");
    const Mat E = ricci(R, ginv);
    const double S = scalar_curvature(E, ginv);
    const double c1 = 1.0 / (N - 2);
    const double c2 = S / (2.0 * (N - 1) * (N - 2));
    return CurvatureTensor4::from_components(N, [&](int a, int b, int c, int d) {
        const double kn_Eg = E(a, c) * g(b, d) + E(b, d) * g(a, c) -
                             E(a, d) * g(b, c) - E(b, c) * g(a, d);
        const double kn_gg = 2.0 * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
        return R(a, b, c, d) + c1 * kn_Eg - c2 * kn_gg;
    });
}

inline double tensor_gnorm(const CurvatureTensor4& t, const Mat& g) {
    return tensor_gnorm(t.to_nd(), g);
}

}  // namespace alh
