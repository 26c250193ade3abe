#pragma once

#include <vector>

#include "alh/fit.hpp"
#include "alh/grid.hpp"
#include "alh/tensor.hpp"

namespace alh {

// Ambient index convention: 0 is the radial direction, 1..n tangential.

namespace detail {

inline double g_shift(const FermiGrid& grid, std::span<const int> iy, int ir,
                      int a, int b, int axis1, int off1, int axis2, int off2) {
    // axis in grid terms: 0..n-1 tangential, n radial
    thread_local std::vector<int> jy;
    jy.assign(iy.begin(), iy.end());
    int jr = ir;
    if (axis1 >= 0) {
        if (axis1 == grid.n()) jr += off1;
        else jy[axis1] += off1;
    }
    if (axis2 >= 0) {
        if (axis2 == grid.n()) jr += off2;
        else jy[axis2] += off2;
    }
    return grid.g_at(jy, jr, a, b);
}

inline double step_of(const FermiGrid& grid, int gaxis) {
    return gaxis == grid.n() ? grid.r_step() : grid.y_step();
}

// Central stencils assembled from antisymmetric pairs f(+o) - f(-o) (first
// derivatives) and centered pairs f(+o) + f(-o) - 2 f(0) (second
// derivatives), so a direction the data does not depend on yields an exact
// floating-point zero.
inline void d1_pair_weights(int order, double w[2], int& reach) {
    if (order == 2) {
        reach = 1;
        w[0] = 0.5;
    } else {
        reach = 2;
        w[0] = 8.0 / 12.0;
        w[1] = -1.0 / 12.0;
    }
}

inline double d1(const FermiGrid& grid, std::span<const int> iy, int ir, int a,
                 int b, int gaxis, int order) {
    const double h = step_of(grid, gaxis);
    if (h == 0.0) return 0.0;
    double w[2];
    int reach = 0;
    d1_pair_weights(order, w, reach);
    double acc = 0.0;
    for (int o = 1; o <= reach; ++o)
        acc += w[o - 1] * (g_shift(grid, iy, ir, a, b, gaxis, o, -1, 0) -
                           g_shift(grid, iy, ir, a, b, gaxis, -o, -1, 0));
    return acc / h;
}

inline double d2_same(const FermiGrid& grid, std::span<const int> iy, int ir,
                      int a, int b, int gaxis, int order) {
    const double h = step_of(grid, gaxis);
    if (h == 0.0) return 0.0;
    const double f0 = g_shift(grid, iy, ir, a, b, -1, 0, -1, 0);
    const double p1 = (g_shift(grid, iy, ir, a, b, gaxis, 1, -1, 0) - f0) +
                      (g_shift(grid, iy, ir, a, b, gaxis, -1, -1, 0) - f0);
    if (order == 2) return p1 / (h * h);
    const double p2 = (g_shift(grid, iy, ir, a, b, gaxis, 2, -1, 0) - f0) +
                      (g_shift(grid, iy, ir, a, b, gaxis, -2, -1, 0) - f0);
    return (16.0 * p1 - p2) / (12.0 * h * h);
}

// mixed derivative as a composition of two first-derivative stencils; the
// composed operator is symmetric in the two axes by construction
inline double d2_mixed(const FermiGrid& grid, std::span<const int> iy, int ir,
                       int a, int b, int ax1, int ax2, int order) {
    if (ax1 > ax2) std::swap(ax1, ax2);
    const double h1 = step_of(grid, ax1);
    const double h2 = step_of(grid, ax2);
    if (h1 == 0.0 || h2 == 0.0) return 0.0;
    double w[2];
    int reach = 0;
    d1_pair_weights(order, w, reach);
    auto inner = [&](int o1) {
        double acc = 0.0;
        for (int o2 = 1; o2 <= reach; ++o2)
            acc += w[o2 - 1] *
                   (g_shift(grid, iy, ir, a, b, ax1, o1, ax2, o2) -
                    g_shift(grid, iy, ir, a, b, ax1, o1, ax2, -o2));
        return acc;
    };
    double acc = 0.0;
    for (int o1 = 1; o1 <= reach; ++o1)
        acc += w[o1 - 1] * (inner(o1) - inner(-o1));
    return acc / (h1 * h2);
}

inline int grid_axis(const FermiGrid& grid, int ambient) {
    return ambient == 0 ? grid.n() : ambient - 1;
}

}  // namespace detail

// First and second coordinate derivatives of the full metric at one node.
// The normal block is constant, so only tangential components carry
// derivatives; matrices below are the n x n tangential blocks.
struct MetricJet {
    int n = 0;
    Mat g;     // tangential block
    Mat ginv;  // its inverse
    std::vector<Mat> dg;               // ambient axis -> d g / d x^i
    std::vector<std::vector<Mat>> d2g; // symmetric in the two axes
};

inline void require_margin(const FermiGrid& grid, std::span<const int> iy,
                           int ir, int needed) {
    if (grid.interior_margin(iy, ir) < needed)
        throw boundary_stencil_error(
            "node too close to the patch boundary for the requested stencil");
}

inline MetricJet metric_jet(const FermiGrid& grid, std::span<const int> iy,
                            int ir, int first_order, int second_order = 0) {
    const int margin = std::max(first_order, second_order) / 2;
    require_margin(grid, iy, ir, margin);
    MetricJet jet;
    const int n = grid.n();
    jet.n = n;
    jet.g = grid.metric_block(iy, ir);
    jet.ginv = spd_inverse(jet.g);
    jet.dg.assign(n + 1, Mat::Zero(n, n));
    for (int i = 0; i <= n; ++i) {
        Mat& m = jet.dg[i];
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                const double v = detail::d1(grid, iy, ir, a, b,
                                            detail::grid_axis(grid, i),
                                            first_order);
                m(a, b) = v;
                m(b, a) = v;
            }
    }
    if (second_order > 0) {
        jet.d2g.assign(n + 1, std::vector<Mat>(n + 1));
        for (int i = 0; i <= n; ++i)
            for (int j = i; j <= n; ++j) {
                Mat m = Mat::Zero(n, n);
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b) {
                        const int ax1 = detail::grid_axis(grid, i);
                        const int ax2 = detail::grid_axis(grid, j);
                        const double v =
                            (ax1 == ax2)
                                ? detail::d2_same(grid, iy, ir, a, b, ax1,
                                                  second_order)
                                : detail::d2_mixed(grid, iy, ir, a, b, ax1,
                                                   ax2, second_order);
                        m(a, b) = v;
                        m(b, a) = v;
                    }
                jet.d2g[i][j] = m;
                jet.d2g[j][i] = m;
            }
    }
    return jet;
}

namespace detail {

inline double dG(const MetricJet& jet, int i, int a, int b) {
    if (a == 0 || b == 0) return 0.0;
    return jet.dg[i](a - 1, b - 1);
}

inline double d2G(const MetricJet& jet, int i, int j, int a, int b) {
    if (a == 0 || b == 0) return 0.0;
    return jet.d2g[i][j](a - 1, b - 1);
}

inline double G_full(const MetricJet& jet, int a, int b) {
    if (a == 0 && b == 0) return 1.0;
    if (a == 0 || b == 0) return 0.0;
    return jet.g(a - 1, b - 1);
}

inline double Ginv_full(const MetricJet& jet, int a, int b) {
    if (a == 0 && b == 0) return 1.0;
    if (a == 0 || b == 0) return 0.0;
    return jet.ginv(a - 1, b - 1);
}

inline NdTensor christoffel_from_jet(const MetricJet& jet) {
    const int N = jet.n + 1;
    NdTensor gam(N, 3);
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j) {
                double s = 0.0;
                for (int l = 0; l < N; ++l) {
                    const double giv = Ginv_full(jet, k, l);
                    if (giv == 0.0) continue;
                    s += giv * (dG(jet, i, j, l) + dG(jet, j, i, l) -
                                dG(jet, l, i, j));
                }
                gam(k, i, j) = 0.5 * s;
                gam(k, j, i) = 0.5 * s;
            }
    return gam;
}

inline CurvatureTensor4 riemann_from_jet(const MetricJet& jet,
                                         const NdTensor& gam) {
    const int N = jet.n + 1;
    // R_abcd = (d_a d_c g_bd + d_b d_d g_ac - d_a d_d g_bc - d_b d_c g_ad)/2
    //          + g_ef (Gam^e_ac Gam^f_bd - Gam^e_ad Gam^f_bc)
    // All four curvature symmetries hold for this expression identically in
    // the sampled values, so only the Bianchi residual reflects roundoff.
    return CurvatureTensor4::from_components(N, [&](int a, int b, int c, int d) {
        double t = 0.5 * (d2G(jet, a, c, b, d) + d2G(jet, b, d, a, c) -
                          d2G(jet, a, d, b, c) - d2G(jet, b, c, a, d));
        for (int e = 0; e < N; ++e)
            for (int f = 0; f < N; ++f) {
                const double gef = G_full(jet, e, f);
                if (gef == 0.0) continue;
                t += gef * (gam(e, a, c) * gam(f, b, d) -
                            gam(e, a, d) * gam(f, b, c));
            }
        return t;
    });
}

}  // namespace detail

// Christoffel symbols of dr^2 + g_r at a node, by central differences of the
// stored metric. The Fermi gauge makes Gamma^0_00, Gamma^a_00 and
// Gamma^0_0a vanish identically, which the assembly reproduces exactly.
inline NdTensor christoffel(const FermiGrid& grid, std::span<const int> iy,
                            int ir, int stencil_order = 4) {
    const MetricJet jet = metric_jet(grid, iy, ir, stencil_order);
    return detail::christoffel_from_jet(jet);
}

// mixed shape operator S^b_a = (1/2) g^{bc} d_r g_{ca}
inline Mat shape_operator(const FermiGrid& grid, std::span<const int> iy,
                          int ir, int stencil_order = 4) {
    const MetricJet jet = metric_jet(grid, iy, ir, stencil_order);
    return jet.ginv * (0.5 * jet.dg[0]);
}

inline Mat shape_operator_lower(const FermiGrid& grid, std::span<const int> iy,
                                int ir, int stencil_order = 4) {
    const MetricJet jet = metric_jet(grid, iy, ir, stencil_order);
    return 0.5 * jet.dg[0];
}

inline CurvatureTensor4 riemann(const FermiGrid& grid, std::span<const int> iy,
                                int ir, int first_order = 4,
                                int second_order = 2) {
    const MetricJet jet = metric_jet(grid, iy, ir, first_order, second_order);
    const NdTensor gam = detail::christoffel_from_jet(jet);
    return detail::riemann_from_jet(jet, gam);
}

namespace detail {

inline NdTensor slice_christoffel_from_jet(const MetricJet& jet) {
    const int n = jet.n;
    NdTensor gam(n, 3);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += jet.ginv(k, l) *
                         (jet.dg[i + 1](j, l) + jet.dg[j + 1](i, l) -
                          jet.dg[l + 1](i, j));
                gam(k, i, j) = 0.5 * s;
                gam(k, j, i) = 0.5 * s;
            }
    return gam;
}

template <typename GammaAt>
NdTensor curvature_from_gamma(int N, const GammaAt& gamma_at,
                              std::span<const double> steps, int order,
                              const Mat& g_full) {
    // R_{abcd} = -g_ae [ d_c Gam^e_{db} - d_d Gam^e_{cb}
    //                    + Gam^e_{cs} Gam^s_{db} - Gam^e_{ds} Gam^s_{cb} ]
    const NdTensor gam0 = gamma_at(-1, 0);
    std::vector<NdTensor> dgam(N, NdTensor(N, 3));
    double w[2];
    int reach = 0;
    d1_pair_weights(order, w, reach);
    for (int i = 0; i < N; ++i) {
        NdTensor acc(N, 3);
        for (int o = 1; o <= reach; ++o) {
            NdTensor diff = gamma_at(i, o);
            diff -= gamma_at(i, -o);
            diff *= w[o - 1];
            acc += diff;
        }
        acc *= 1.0 / steps[i];
        dgam[i] = acc;
    }
    NdTensor up(N, 4);  // R^e_{bcd}
    for (int e = 0; e < N; ++e)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d) {
                    double t = dgam[c](e, d, b) - dgam[d](e, c, b);
                    for (int s = 0; s < N; ++s)
                        t += gam0(e, c, s) * gam0(s, d, b) -
                             gam0(e, d, s) * gam0(s, c, b);
                    up(e, b, c, d) = t;
                }
    NdTensor low(N, 4);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d) {
                    double t = 0.0;
                    for (int e = 0; e < N; ++e) {
                        const double gae = g_full(a, e);
                        if (gae != 0.0) t += gae * up(e, b, c, d);
                    }
                    low(a, b, c, d) = -t;
                }
    return low;
}

}  // namespace detail

// Curvature through the Christoffel-derivative route, with the symbols
// re-derived at neighboring nodes. This expression carries none of the
// algebraic symmetries by construction, so it is an independent cross-route
// against riemann(); the structure-equation residuals below rely on that
// independence.
inline NdTensor riemann_via_christoffel(const FermiGrid& grid,
                                        std::span<const int> iy, int ir,
                                        int order = 2) {
    require_margin(grid, iy, ir, order);
    const int N = grid.n() + 1;
    auto gamma_at = [&](int ambient_axis, int off) {
        std::vector<int> ky(iy.begin(), iy.end());
        int kr = ir;
        if (ambient_axis >= 0) {
            const int gax = detail::grid_axis(grid, ambient_axis);
            if (gax == grid.n()) kr += off;
            else ky[gax] += off;
        }
        return detail::christoffel_from_jet(metric_jet(grid, ky, kr, order));
    };
    std::vector<double> steps(N);
    for (int i = 0; i < N; ++i)
        steps[i] = detail::step_of(grid, detail::grid_axis(grid, i));
    const MetricJet jet = metric_jet(grid, iy, ir, order);
    Mat g_full = Mat::Zero(N, N);
    g_full(0, 0) = 1.0;
    g_full.block(1, 1, grid.n(), grid.n()) = jet.g;
    return detail::curvature_from_gamma(N, gamma_at, steps, order, g_full);
}

// same route for the intrinsic geometry of a constant-r slice
inline NdTensor slice_riemann_via_christoffel(const FermiGrid& grid,
                                              std::span<const int> iy, int ir,
                                              int order = 2) {
    require_margin(grid, iy, ir, order);
    const int n = grid.n();
    auto gamma_at = [&](int slice_axis, int off) {
        std::vector<int> ky(iy.begin(), iy.end());
        if (slice_axis >= 0) ky[slice_axis] += off;
        return detail::slice_christoffel_from_jet(metric_jet(grid, ky, ir, order));
    };
    std::vector<double> steps(n, grid.y_step());
    const MetricJet jet = metric_jet(grid, iy, ir, order);
    return detail::curvature_from_gamma(n, gamma_at, steps, order, jet.g);
}

// intrinsic curvature of the constant-r slice (tangential indices only)
inline CurvatureTensor4 slice_riemann(const FermiGrid& grid,
                                      std::span<const int> iy, int ir,
                                      int order = 2) {
    const MetricJet jet = metric_jet(grid, iy, ir, order, order);
    const int n = grid.n();
    NdTensor gam(n, 3);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += jet.ginv(k, l) *
                         (jet.dg[i + 1](j, l) + jet.dg[j + 1](i, l) -
                          jet.dg[l + 1](i, j));
                gam(k, i, j) = 0.5 * s;
                gam(k, j, i) = 0.5 * s;
            }
    return CurvatureTensor4::from_components(n, [&](int a, int b, int c, int d) {
        double t = 0.5 * (jet.d2g[a + 1][c + 1](b, d) +
                          jet.d2g[b + 1][d + 1](a, c) -
                          jet.d2g[a + 1][d + 1](b, c) -
                          jet.d2g[b + 1][c + 1](a, d));
        for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f)
                t += jet.g(e, f) * (gam(e, a, c) * gam(f, b, d) -
                                    gam(e, a, d) * gam(f, b, c));
        return t;
    });
}

struct StructureResidual {
    double gauss = 0.0;
    double codazzi = 0.0;
};

// Max-norm defect of the Gauss and Codazzi-Mainardi equations at a node.
// The ambient curvature comes from the Christoffel-derivative route while
// the slice curvature and the shape operator S = (1/2) d_r g come from
// direct metric stencils, so the equations relate genuinely independent
// discretizations and the defect measures the structure equations rather
// than an algebraic identity.
inline StructureResidual gauss_codazzi_residual(const FermiGrid& grid,
                                                std::span<const int> iy, int ir,
                                                int order = 2) {
    const MetricJet jet = metric_jet(grid, iy, ir, order, order);
    const int n = grid.n();
    const NdTensor amb = riemann_via_christoffel(grid, iy, ir, order);
    const NdTensor intr = slice_riemann_via_christoffel(grid, iy, ir, order);
    const Mat Sl = 0.5 * jet.dg[0];

    StructureResidual res;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const double lhs = amb(a + 1, b + 1, c + 1, d + 1);
                    const double rhs = intr(a, b, c, d) +
                                       Sl(a, c) * Sl(b, d) -
                                       Sl(a, d) * Sl(b, c);
                    res.gauss = std::max(res.gauss, std::abs(lhs - rhs));
                }

    // slice christoffels and d_mu S_{bc} = (1/2) d_mu d_r g_{bc}
    const NdTensor gamt = detail::slice_christoffel_from_jet(jet);
    auto covS = [&](int mu, int b, int c) {
        double t = 0.5 * jet.d2g[0][mu + 1](b, c);
        for (int s = 0; s < n; ++s)
            t -= gamt(s, mu, b) * Sl(s, c) + gamt(s, mu, c) * Sl(b, s);
        return t;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double lhs = covS(a, b, c) - covS(b, a, c);
                const double rhs = -amb(a + 1, b + 1, c + 1, 0);
                res.codazzi = std::max(res.codazzi, std::abs(lhs - rhs));
            }
    return res;
}

// the ambient routes must agree where both are defined
inline double curvature_route_disagreement(const FermiGrid& grid,
                                           std::span<const int> iy, int ir,
                                           int order = 2) {
    const auto direct = riemann(grid, iy, ir, order, order);
    const auto viaGamma = riemann_via_christoffel(grid, iy, ir, order);
    const int N = grid.n() + 1;
    double worst = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d)
                    worst = std::max(worst, std::abs(direct(a, b, c, d) -
                                                     viaGamma(a, b, c, d)));
    return worst;
}

inline double sectional_curvature(const CurvatureTensor4& R, const Mat& g,
                                  const Vec& X, const Vec& Z) {
    const int N = R.dim();
    double num = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d)
                    num += R(a, b, c, d) * X[a] * Z[b] * Z[c] * X[d];
    const double xx = X.dot(g * X);
    const double zz = Z.dot(g * Z);
    const double xz = X.dot(g * Z);
    const double den = xx * zz - xz * xz;
    if (std::abs(den) < 1e-300)
        throw degenerate_data_error("sectional curvature of a degenerate plane");
    return num / den;
}

// Per-component growth exponents of a tensor series along r, checked against
// the index-weight conversion: each lower tangential slot contributes +1,
// each upper tangential slot -1, radial slots nothing, on top of the -a decay
// of the frame norm.
struct ComponentGrowth {
    std::vector<int> index;
    bool zero = false;
    double growth_exponent = 0.0;
    double predicted = 0.0;
    bool consistent = false;
};

struct GrowthCheckReport {
    std::vector<ComponentGrowth> components;
    bool all_consistent = true;
};

inline GrowthCheckReport component_growth_check(
    std::span<const double> r, const std::vector<NdTensor>& series,
    std::span<const bool> upper, double a, double window_lo, double window_hi,
    double tol = 0.1) {
    if (series.empty()) throw fit_domain_error("growth check: empty series");
    std::size_t in_window = 0;
    for (double rv : r)
        if (rv >= window_lo && rv <= window_hi) ++in_window;
    if (in_window < 10)
        throw fit_domain_error("growth check: fit window shorter than 10 nodes");

    const NdTensor& first = series.front();
    const int rank = first.rank();
    const int N = first.dim();
    GrowthCheckReport report;
    std::vector<int> idx(rank, 0);
    const std::size_t total = first.size();
    std::vector<double> vals(series.size());
    for (std::size_t flat = 0; flat < total; ++flat) {
        // decode flat index
        std::size_t rem = flat;
        for (int m = rank - 1; m >= 0; --m) {
            idx[m] = static_cast<int>(rem % N);
            rem /= N;
        }
        ComponentGrowth cg;
        cg.index = idx;
        double pred = -a;
        for (int m = 0; m < rank; ++m)
            if (idx[m] > 0) pred += upper[m] ? -1.0 : 1.0;
        cg.predicted = pred;

        bool all_zero = true;
        for (std::size_t s = 0; s < series.size(); ++s) {
            vals[s] = std::abs(series[s][flat]);
            if (vals[s] >= kZeroFloor && r[s] >= window_lo && r[s] <= window_hi)
                all_zero = false;
        }
        if (all_zero) {
            cg.zero = true;
            cg.growth_exponent = -std::numeric_limits<double>::infinity();
            cg.consistent = true;
        } else {
            try {
                const DecayFit fit = fit_decay(r, vals, window_lo, window_hi);
                cg.growth_exponent = fit.growth();
                cg.consistent = std::abs(cg.growth_exponent - pred) <= tol;
            } catch (const fit_domain_error&) {
                // sign change inside the window: no clean rate
                cg.growth_exponent = std::numeric_limits<double>::quiet_NaN();
                cg.consistent = false;
            }
        }
        report.all_consistent = report.all_consistent && cg.consistent;
        report.components.push_back(std::move(cg));
    }
    return report;
}

}  // namespace alh
