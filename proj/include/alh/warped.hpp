#pragma once

#include <cmath>
#include <functional>

#include "alh/grid.hpp"
#include "alh/tensor.hpp"

namespace alh {

// A tangential model space ghat(y) on a coordinate patch. Closed-form
// Christoffels and curvature are supplied where known; they serve as exact
// oracles for the finite-difference path.
struct TangentialPatch {
    int n = 0;
    std::function<Mat(const Vec&)> metric;
    std::function<NdTensor(const Vec&)> christoffel;        // may be empty
    std::function<CurvatureTensor4(const Vec&)> curvature;  // may be empty
    Vec center;
    double halfwidth = 0.0;
};

inline TangentialPatch flat_patch(int n) {
    TangentialPatch p;
    p.n = n;
    p.metric = [n](const Vec&) { return Mat::Identity(n, n); };
    p.christoffel = [n](const Vec&) { return NdTensor(n, 3); };
    p.curvature = [n](const Vec&) { return CurvatureTensor4(n); };
    p.center = Vec::Zero(n);
    p.halfwidth = 1.0;
    return p;
}

// Unit round sphere in polar coordinates, away from the poles. n = 2 or 3.
inline TangentialPatch sphere_patch(int n) {
    if (n != 2 && n != 3)
        throw dimension_error("sphere patch implemented for n = 2, 3");
    TangentialPatch p;
    p.n = n;
    if (n == 2) {
        p.metric = [](const Vec& y) {
            Mat g = Mat::Zero(2, 2);
            g(0, 0) = 1.0;
            g(1, 1) = std::sin(y[0]) * std::sin(y[0]);
            return g;
        };
        p.christoffel = [](const Vec& y) {
            NdTensor gam(2, 3);
            const double th = y[0];
            gam(0, 1, 1) = -std::sin(th) * std::cos(th);
            gam(1, 0, 1) = gam(1, 1, 0) = std::cos(th) / std::sin(th);
            return gam;
        };
    } else {
        p.metric = [](const Vec& y) {
            Mat g = Mat::Zero(3, 3);
            const double s0 = std::sin(y[0]);
            const double s1 = std::sin(y[1]);
            g(0, 0) = 1.0;
            g(1, 1) = s0 * s0;
            g(2, 2) = s0 * s0 * s1 * s1;
            return g;
        };
        p.christoffel = [](const Vec& y) {
            NdTensor gam(3, 3);
            const double th = y[0], ph = y[1];
            const double cot0 = std::cos(th) / std::sin(th);
            const double cot1 = std::cos(ph) / std::sin(ph);
            gam(0, 1, 1) = -std::sin(th) * std::cos(th);
            gam(0, 2, 2) =
                -std::sin(th) * std::cos(th) * std::sin(ph) * std::sin(ph);
            gam(1, 0, 1) = gam(1, 1, 0) = cot0;
            gam(1, 2, 2) = -std::sin(ph) * std::cos(ph);
            gam(2, 0, 2) = gam(2, 2, 0) = cot0;
            gam(2, 1, 2) = gam(2, 2, 1) = cot1;
            return gam;
        };
    }
    const auto metric = p.metric;
    p.curvature = [metric](const Vec& y) {
        // unit sphere: R = +K in this sign convention
        return constant_curvature_tensor(metric(y));
    };
    p.center = n == 2 ? Vec{{1.2, 0.6}} : Vec{{1.2, 1.1, 0.7}};
    p.halfwidth = 0.4;
    return p;
}

// S^2(k) x S^2(k) with Gauss curvature 3 per factor: an Einstein 4-manifold,
// Ric = 3 ghat, that is not a space form. Feeding it to the sinh cone below
// gives an exactly Einstein 5-metric whose curvature approaches -1 at rate
// e^{-2r}.
inline TangentialPatch product_spheres_patch() {
    constexpr double c = 1.0 / 3.0;  // factor metric scale, curvature 1/c
    TangentialPatch p;
    p.n = 4;
    p.metric = [](const Vec& y) {
        Mat g = Mat::Zero(4, 4);
        g(0, 0) = c;
        g(1, 1) = c * std::sin(y[0]) * std::sin(y[0]);
        g(2, 2) = c;
        g(3, 3) = c * std::sin(y[2]) * std::sin(y[2]);
        return g;
    };
    p.christoffel = [](const Vec& y) {
        NdTensor gam(4, 3);
        gam(0, 1, 1) = -std::sin(y[0]) * std::cos(y[0]);
        gam(1, 0, 1) = gam(1, 1, 0) = std::cos(y[0]) / std::sin(y[0]);
        gam(2, 3, 3) = -std::sin(y[2]) * std::cos(y[2]);
        gam(3, 2, 3) = gam(3, 3, 2) = std::cos(y[2]) / std::sin(y[2]);
        return gam;
    };
    p.curvature = [](const Vec& y) {
        CurvatureTensor4 t(4);
        // per factor: all-lower curvature of c * (unit 2-sphere) is c * K_unit
        const double s0 = std::sin(y[0]);
        const double s2 = std::sin(y[2]);
        t.set(0, 1, 0, 1, -c * s0 * s0);
        t.set(2, 3, 2, 3, -c * s2 * s2);
        return t;
    };
    p.center = Vec{{1.2, 0.7, 1.05, 0.55}};
    p.halfwidth = 0.3;
    return p;
}

// Warped product dr^2 + phi(r)^2 ghat(y) with closed-form hypersurface data:
//   S^b_a       = (phi'/phi) delta
//   Gamma^0_ab  = -phi phi' ghat_ab,  Gamma^b_0a = (phi'/phi) delta
//   R_0a0b      =  phi phi'' ghat_ab
//   R_abcd      =  phi^2 [ Rhat_abcd - phi'^2 Khat_abcd ]
struct WarpedProduct {
    std::function<double(double)> phi, dphi, ddphi;
    TangentialPatch base;

    int n() const { return base.n; }

    Mat tangential_metric(const Vec& y, double r) const {
        const double f = phi(r);
        return f * f * base.metric(y);
    }

    FermiGrid::MetricFn metric_fn() const {
        return [*this](const Vec& y, double r) {
            return tangential_metric(y, r);
        };
    }

    double shape_ratio(double r) const { return dphi(r) / phi(r); }

    Mat shape_operator(double r) const {
        return shape_ratio(r) * Mat::Identity(base.n, base.n);
    }

    NdTensor christoffel(const Vec& y, double r) const {
        const int n = base.n;
        const Mat ghat = base.metric(y);
        const NdTensor gamhat = base.christoffel(y);
        NdTensor gam(n + 1, 3);
        const double f = phi(r), fp = dphi(r);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                gam(0, a, b) = -f * fp * ghat(a - 1, b - 1);
                if (a == b) {
                    gam(a, 0, b) = fp / f;
                    gam(a, b, 0) = fp / f;
                }
                for (int c = 1; c <= n; ++c)
                    gam(c, a, b) = gamhat(c - 1, a - 1, b - 1);
            }
        return gam;
    }

    CurvatureTensor4 riemann(const Vec& y, double r) const {
        const int n = base.n;
        const Mat ghat = base.metric(y);
        const CurvatureTensor4 rhat = base.curvature(y);
        const double f = phi(r), fp = dphi(r), fpp = ddphi(r);
        return CurvatureTensor4::from_components(
            n + 1, [&](int a, int b, int c, int d) -> double {
                if (a == 0 && c == 0)
                    return f * fpp * ghat(b - 1, d - 1);
                if (a == 0 || b == 0 || c == 0 || d == 0) return 0.0;
                const double khat =
                    ghat(a - 1, d - 1) * ghat(b - 1, c - 1) -
                    ghat(a - 1, c - 1) * ghat(b - 1, d - 1);
                return f * f *
                       (rhat(a - 1, b - 1, c - 1, d - 1) - fp * fp * khat);
            });
    }
};

// comparison space dr^2 + sinh^2(r + r_off) ghat
inline WarpedProduct hyperbolic_warped(double r_off, TangentialPatch base) {
    WarpedProduct w;
    w.phi = [r_off](double r) { return std::sinh(r + r_off); };
    w.dphi = [r_off](double r) { return std::cosh(r + r_off); };
    w.ddphi = [r_off](double r) { return std::sinh(r + r_off); };
    w.base = std::move(base);
    return w;
}

// horospherical model dr^2 + e^{2r} ghat (flat ghat gives hyperbolic space)
inline WarpedProduct exponential_warped(TangentialPatch base) {
    WarpedProduct w;
    w.phi = [](double r) { return std::exp(r); };
    w.dphi = [](double r) { return std::exp(r); };
    w.ddphi = [](double r) { return std::exp(r); };
    w.base = std::move(base);
    return w;
}

// exactly Einstein (Ric = -4g) cone over S^2 x S^2 with |R + K| ~ e^{-2r}
inline WarpedProduct einstein_product_cone(double r_off) {
    return hyperbolic_warped(r_off, product_spheres_patch());
}

}  // namespace alh
