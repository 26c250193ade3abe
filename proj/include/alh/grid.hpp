#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "alh/linalg.hpp"

namespace alh {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Node address on a Fermi grid: n tangential indices plus one radial index.
struct GridNode {
    std::vector<int> iy;
    int ir = 0;
};

// Discretized metric dr^2 + g_{ab}(y, r) dy^a dy^b on a tensor-product patch
// (y-axes share one node vector) times an r-interval. The normal block is
// fixed by the coordinate gauge, so only the tangential block is stored,
// one array per symmetric component (a <= b).
class FermiGrid {
public:
    using MetricFn = std::function<Mat(const Vec& y, double r)>;

    FermiGrid(std::vector<double> y_nodes, std::vector<double> r_nodes, int n)
        : n_(n), y_(std::move(y_nodes)), r_(std::move(r_nodes)) {
        if (n_ < 1) throw dimension_error("tangential dimension must be >= 1");
        if (y_.size() < 1 || r_.size() < 1)
            throw configuration_error("empty grid axes");
        check_uniform(y_, "y_nodes");
        check_uniform(r_, "r_nodes");
        for (double rv : r_)
            if (rv < 0.0)
                throw configuration_error("r_nodes must be nonnegative");
        std::size_t nodes = r_.size();
        for (int k = 0; k < n_; ++k) nodes *= y_.size();
        comps_.assign(component_count(), std::vector<double>(nodes, 0.0));
    }

    static FermiGrid sample(const MetricFn& metric, std::vector<double> y_nodes,
                            std::vector<double> r_nodes, int n) {
        FermiGrid grid(std::move(y_nodes), std::move(r_nodes), n);
        Vec y(n);
        std::vector<int> iy(n, 0);
        do {
            for (int k = 0; k < n; ++k) y[k] = grid.y_[iy[k]];
            for (std::size_t ir = 0; ir < grid.r_.size(); ++ir) {
                const Mat g = metric(y, grid.r_[ir]);
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b)
                        grid.comp(a, b)[grid.flat(iy, static_cast<int>(ir))] =
                            0.5 * (g(a, b) + g(b, a));
            }
        } while (grid.advance(iy));
        return grid;
    }

    int n() const { return n_; }
    int dim() const { return n_ + 1; }
    int component_count() const { return n_ * (n_ + 1) / 2; }
    const std::vector<double>& y_nodes() const { return y_; }
    const std::vector<double>& r_nodes() const { return r_; }
    double y_step() const { return y_.size() > 1 ? y_[1] - y_[0] : 0.0; }
    double r_step() const { return r_.size() > 1 ? r_[1] - r_[0] : 0.0; }

    std::size_t node_count() const { return comps_[0].size(); }

    std::size_t flat(std::span<const int> iy, int ir) const {
        std::size_t f = 0;
        for (int k = 0; k < n_; ++k)
            f = f * y_.size() + static_cast<std::size_t>(iy[k]);
        return f * r_.size() + static_cast<std::size_t>(ir);
    }

    int comp_index(int a, int b) const {
        if (a > b) std::swap(a, b);
        return a * (2 * n_ - a - 1) / 2 + b;  // offset map for a <= b
    }

    std::vector<double>& comp(int a, int b) { return comps_[comp_index(a, b)]; }
    const std::vector<double>& comp(int a, int b) const {
        return comps_[comp_index(a, b)];
    }

    double g_at(std::span<const int> iy, int ir, int a, int b) const {
        return comps_[comp_index(a, b)][flat(iy, ir)];
    }

    Mat metric_block(std::span<const int> iy, int ir) const {
        Mat g(n_, n_);
        const std::size_t f = flat(iy, ir);
        for (int a = 0; a < n_; ++a)
            for (int b = a; b < n_; ++b) {
                const double v = comps_[comp_index(a, b)][f];
                g(a, b) = v;
                g(b, a) = v;
            }
        return g;
    }

    // full (n+1)x(n+1) metric with index 0 = radial direction
    Mat full_metric(std::span<const int> iy, int ir) const {
        Mat g = Mat::Zero(n_ + 1, n_ + 1);
        g(0, 0) = 1.0;
        const Mat t = metric_block(iy, ir);
        g.block(1, 1, n_, n_) = t;
        return g;
    }

    Vec y_of(std::span<const int> iy) const {
        Vec y(n_);
        for (int k = 0; k < n_; ++k) y[k] = y_[iy[k]];
        return y;
    }

    // margin (in nodes) from the patch boundary, over all directions
    int interior_margin(std::span<const int> iy, int ir) const {
        int m = std::min(ir, static_cast<int>(r_.size()) - 1 - ir);
        for (int k = 0; k < n_; ++k)
            m = std::min({m, iy[k], static_cast<int>(y_.size()) - 1 - iy[k]});
        return m;
    }

    bool advance(std::vector<int>& iy) const {
        for (int k = n_ - 1; k >= 0; --k) {
            if (++iy[k] < static_cast<int>(y_.size())) return true;
            iy[k] = 0;
        }
        return false;
    }

    // Self-describing columnar text: header row names the coordinates and the
    // tangential components in lexicographic (a <= b) order; one node per row,
    // printed so the decimal text round-trips the IEEE-754 value.
    void save(std::ostream& os) const {
        for (int k = 0; k < n_; ++k) os << 'y' << (k + 1) << ' ';
        os << 'r';
        for (int a = 0; a < n_; ++a)
            for (int b = a; b < n_; ++b)
                os << " g_" << (a + 1) << '_' << (b + 1);
        os << '\n';
        std::vector<int> iy(n_, 0);
        do {
            for (std::size_t ir = 0; ir < r_.size(); ++ir) {
                for (int k = 0; k < n_; ++k)
                    os << format_double(y_[iy[k]]) << ' ';
                os << format_double(r_[ir]);
                const std::size_t f = flat(iy, static_cast<int>(ir));
                for (int a = 0; a < n_; ++a)
                    for (int b = a; b < n_; ++b)
                        os << ' ' << format_double(comps_[comp_index(a, b)][f]);
                os << '\n';
            }
        } while (advance(iy));
    }

    static FermiGrid load(std::istream& is) {
        std::string header;
        if (!std::getline(is, header))
            throw configuration_error("grid file: missing header");
        std::istringstream hs(header);
        std::vector<std::string> cols;
        for (std::string c; hs >> c;) cols.push_back(c);
        int n = 0;
        while (n < static_cast<int>(cols.size()) &&
               cols[n] == "y" + std::to_string(n + 1))
            ++n;
        if (n == 0 || n >= static_cast<int>(cols.size()) || cols[n] != "r")
            throw configuration_error("grid file: malformed header");
        const int ncomp = n * (n + 1) / 2;
        if (static_cast<int>(cols.size()) != n + 1 + ncomp)
            throw configuration_error("grid file: wrong component count");

        struct Row {
            std::vector<double> y;
            double r;
            std::vector<double> g;
        };
        std::vector<Row> rows;
        std::map<double, int> yset, rset;
        for (std::string line; std::getline(is, line);) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            Row row;
            row.y.resize(n);
            row.g.resize(ncomp);
            for (int k = 0; k < n; ++k) ls >> row.y[k];
            ls >> row.r;
            for (int c = 0; c < ncomp; ++c) ls >> row.g[c];
            if (!ls) throw configuration_error("grid file: malformed row");
            for (double yv : row.y) yset.emplace(yv, 0);
            rset.emplace(row.r, 0);
            rows.push_back(std::move(row));
        }
        std::vector<double> ys, rs;
        for (auto& [v, idx] : yset) { idx = static_cast<int>(ys.size()); ys.push_back(v); }
        for (auto& [v, idx] : rset) { idx = static_cast<int>(rs.size()); rs.push_back(v); }
        std::size_t expect = rs.size();
        for (int k = 0; k < n; ++k) expect *= ys.size();
        if (rows.size() != expect)
            throw configuration_error("grid file: not a full tensor product");
        FermiGrid grid(ys, rs, n);
        std::vector<int> iy(n);
        for (const Row& row : rows) {
            for (int k = 0; k < n; ++k) iy[k] = yset[row.y[k]];
            const std::size_t f = grid.flat(iy, rset[row.r]);
            int c = 0;
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    grid.comp(a, b)[f] = row.g[c++];
        }
        return grid;
    }

private:
    static void check_uniform(const std::vector<double>& v, const char* what) {
        if (v.size() < 2) return;
        const double h = v[1] - v[0];
        if (h <= 0.0)
            throw configuration_error(std::string(what) +
                                      " must be strictly increasing");
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            const double hi = v[i + 1] - v[i];
            if (hi <= 0.0 || std::abs(hi - h) > 1e-12 * std::abs(h))
                throw configuration_error(std::string(what) +
                                          " must be uniform to 1e-12 relative");
        }
    }

    int n_;
    std::vector<double> y_;
    std::vector<double> r_;
    std::vector<std::vector<double>> comps_;
};

}  // namespace alh
