#include <random>

#include "catch_amalgamated.hpp"

#include "alh/tensor.hpp"
#include "alh/warped.hpp"

using namespace alh;

namespace {

Mat random_spd(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
    return A * A.transpose() + 0.5 * static_cast<double>(n) * Mat::Identity(n, n);
}

Mat random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
    return Eigen::HouseholderQR<Mat>(A).householderQ();
}

// independent all-index-loop contraction used as the norm oracle
double gnorm_bruteforce(const NdTensor& t, const Mat& g) {
    const Mat ginv = g.inverse();
    const int N = t.dim();
    const int rank = t.rank();
    std::vector<int> i(rank, 0), j(rank, 0);
    double sum = 0.0;
    const std::size_t total = t.size();
    for (std::size_t fi = 0; fi < total; ++fi) {
        std::size_t rem = fi;
        for (int m = rank - 1; m >= 0; --m) { i[m] = int(rem % N); rem /= N; }
        for (std::size_t fj = 0; fj < total; ++fj) {
            rem = fj;
            for (int m = rank - 1; m >= 0; --m) { j[m] = int(rem % N); rem /= N; }
            double w = t[fi] * t[fj];
            for (int m = 0; m < rank; ++m) w *= ginv(i[m], j[m]);
            sum += w;
        }
    }
    return std::sqrt(std::max(sum, 0.0));
}

CurvatureTensor4 random_curvature_type(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    return CurvatureTensor4::from_components(
        N, [&](int, int, int, int) { return nd(rng); });
}

}  // namespace

TEST_CASE("constant curvature tensor: norms and traces") {
    std::mt19937_64 rng(42);

    SECTION("identity metric in dimension 4 has |K|^2 = 24") {
        const Mat g = Mat::Identity(4, 4);
        const auto K = constant_curvature_tensor(g);
        const double norm = tensor_gnorm(K, g);
        // oracle: 2 n (n+1) with n = 3
        CHECK(norm * norm == Catch::Approx(24.0).epsilon(1e-13));
        CHECK(norm == Catch::Approx(std::sqrt(24.0)).epsilon(1e-13));
    }

    SECTION("full trace equals -n(n+1) for arbitrary metrics") {
        for (int N : {3, 4, 5}) {
            const Mat g = random_spd(N, rng);
            const Mat ginv = g.inverse();
            const auto K = constant_curvature_tensor(g);
            double tr = 0.0;
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    for (int c = 0; c < N; ++c)
                        for (int d = 0; d < N; ++d)
                            tr += ginv(a, c) * ginv(b, d) * K(a, b, c, d);
            const double n = N - 1;
            CHECK(tr == Catch::Approx(-n * (n + 1)).epsilon(1e-11));
        }
    }

    SECTION("dimension 2: single independent component g_11") {
        Mat g = Mat::Identity(2, 2);
        g(1, 1) = 2.7;
        const auto K = constant_curvature_tensor(g);
        CHECK(K(0, 1, 1, 0) == Catch::Approx(g(1, 1)));
        CHECK(K(0, 1, 0, 1) == Catch::Approx(-g(1, 1)));
        CHECK(K(0, 0, 1, 1) == 0.0);
        CHECK(K.pairs() == 1);
    }

    SECTION("K satisfies the first Bianchi identity exactly") {
        const Mat g = random_spd(4, rng);
        const auto K = constant_curvature_tensor(g);
        CHECK(K.max_bianchi_residual() <= 1e-13 * K.max_abs());
    }
}

TEST_CASE("ricci contraction convention") {
    std::mt19937_64 rng(7);
    for (int N : {3, 4, 5}) {
        const Mat g = random_spd(N, rng);
        const Mat ginv = g.inverse();
        auto K = constant_curvature_tensor(g);
        auto R = K;
        R *= -1.0;  // model space of curvature -1
        const Mat ric = ricci(R, ginv);
        const double n = N - 1;
        CHECK((ric + n * g).cwiseAbs().maxCoeff() < 1e-10 * g.cwiseAbs().maxCoeff());
        CHECK(scalar_curvature(ric, ginv) == Catch::Approx(-n * N).epsilon(1e-10));
    }
}

TEST_CASE("weyl tensor") {
    std::mt19937_64 rng(11);

    SECTION("constant curvature input is conformally flat") {
        const Mat g = random_spd(4, rng);
        auto R = constant_curvature_tensor(g);
        R *= -1.0;
        const auto W = weyl(R, g);
        CHECK(W.max_abs() < 1e-12 * R.max_abs());
    }

    SECTION("Einstein input: W = R + K componentwise") {
        const auto cone = einstein_product_cone(0.8);
        const Vec y = cone.base.center;
        const double r = 1.3;
        const auto R = cone.riemann(y, r);
        Mat g = Mat::Zero(5, 5);
        g(0, 0) = 1.0;
        g.block(1, 1, 4, 4) = cone.tangential_metric(y, r);
        // certify the input really is Einstein with Ric = -4 g
        const Mat ric = ricci(R, g.inverse());
        REQUIRE((ric + 4.0 * g).cwiseAbs().maxCoeff() <
                1e-10 * g.cwiseAbs().maxCoeff());
        const auto W = weyl(R, g);
        const auto K = constant_curvature_tensor(g);
        double worst = 0.0;
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b)
                for (int c = 0; c < 5; ++c)
                    for (int d = 0; d < 5; ++d)
                        worst = std::max(worst,
                                         std::abs(W(a, b, c, d) -
                                                  (R(a, b, c, d) + K(a, b, c, d))));
        CHECK(worst < 1e-10 * R.max_abs());
    }

    SECTION("random curvature-type input: every contraction vanishes") {
        for (int N : {4, 5}) {
            const Mat g = random_spd(N, rng);
            const Mat ginv = g.inverse();
            const auto R = random_curvature_type(N, rng);
            const auto W = weyl(R, g);
            double worst = 0.0;
            for (int b = 0; b < N; ++b)
                for (int d = 0; d < N; ++d) {
                    double t13 = 0.0, t14 = 0.0, t23 = 0.0;
                    for (int a = 0; a < N; ++a)
                        for (int c = 0; c < N; ++c) {
                            t13 += ginv(a, c) * W(a, b, c, d);
                            t14 += ginv(a, c) * W(a, b, d, c);
                            t23 += ginv(a, c) * W(b, a, c, d);
                        }
                    worst = std::max({worst, std::abs(t13), std::abs(t14),
                                      std::abs(t23)});
                }
            CHECK(worst < 1e-12 * W.max_abs() * N * N);
        }
    }

    SECTION("dimension below 3 is rejected") {
        const Mat g = Mat::Identity(2, 2);
        auto R = constant_curvature_tensor(g);
        CHECK_THROWS_AS(weyl(R, g), dimension_error);
    }
}

TEST_CASE("tensor g-norm") {
    std::mt19937_64 rng(23);

    SECTION("agrees with the all-index-loop oracle") {
        for (int N : {3, 4}) {
            const Mat g = random_spd(N, rng);
            const auto R = random_curvature_type(N, rng);
            const NdTensor nd = R.to_nd();
            const double lib = tensor_gnorm(nd, g);
            const double ref = gnorm_bruteforce(nd, g);
            CHECK(lib == Catch::Approx(ref).epsilon(1e-12));
        }
    }

    SECTION("zero tensor has zero norm") {
        const Mat g = random_spd(4, rng);
        CHECK(tensor_gnorm(NdTensor(4, 4), g) == 0.0);
        CHECK(tensor_gnorm(CurvatureTensor4(4), g) == 0.0);
    }

    SECTION("invariant under orthogonal relabeling of coordinates") {
        const int N = 4;
        const Mat g = random_spd(N, rng);
        const auto T = random_curvature_type(N, rng).to_nd();
        const Mat Q = random_orthogonal(N, rng);
        const Mat g2 = Q.transpose() * g * Q;
        NdTensor T2(N, 4);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c)
                    for (int d = 0; d < N; ++d) {
                        double s = 0.0;
                        for (int p = 0; p < N; ++p)
                            for (int q = 0; q < N; ++q)
                                for (int u = 0; u < N; ++u)
                                    for (int v = 0; v < N; ++v)
                                        s += Q(p, a) * Q(q, b) * Q(u, c) *
                                             Q(v, d) * T(p, q, u, v);
                        T2(a, b, c, d) = s;
                    }
        const double n1 = tensor_gnorm(T, g);
        const double n2 = tensor_gnorm(T2, g2);
        CHECK(std::abs(n1 - n2) < 1e-12 * std::max(n1, 1.0));
    }

    SECTION("rank-2 overload matches the generic path") {
        const Mat g = random_spd(3, rng);
        Mat t(3, 3);
        t << 1, 2, 0, 2, -1, 3, 0, 3, 5;
        NdTensor nd(3, 2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) nd(i, j) = t(i, j);
        CHECK(tensor_gnorm(t, g) ==
              Catch::Approx(gnorm_bruteforce(nd, g)).epsilon(1e-12));
    }

    SECTION("degenerate metric is rejected") {
        Mat g = Mat::Identity(3, 3);
        g(2, 2) = 0.0;
        CHECK_THROWS_AS(tensor_gnorm(NdTensor(3, 2), g),
                        degenerate_metric_error);
    }
}

TEST_CASE("pair-map storage enforces curvature symmetries by construction") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> nd(0.0, 1.0);
    // assemble from a deliberately unsymmetric component function
    const int N = 4;
    std::vector<double> raw(N * N * N * N);
    for (auto& x : raw) x = nd(rng);
    auto f = [&](int a, int b, int c, int d) {
        return raw[((a * N + b) * N + c) * N + d];
    };
    const auto T = CurvatureTensor4::from_components(N, f);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d) {
                    CHECK(T(a, b, c, d) == -T(b, a, c, d));
                    CHECK(T(a, b, c, d) == -T(a, b, d, c));
                    CHECK(T(a, b, c, d) == T(c, d, a, b));
                }
}
