#include "ancient_heat/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <tuple>

#include "ancient_heat/errors.hpp"
#include "ancient_heat/threading.hpp"

namespace ancient_heat {

std::string boundary_name(Boundary b) {
    switch (b) {
        case Boundary::dirichlet: return "dirichlet";
        case Boundary::neumann: return "neumann";
        case Boundary::periodic: return "periodic";
    }
    return "neumann";
}

Boundary boundary_from_name(const std::string& name) {
    if (name == "dirichlet") return Boundary::dirichlet;
    if (name == "neumann") return Boundary::neumann;
    if (name == "periodic") return Boundary::periodic;
    throw input_error("unknown boundary \"" + name +
                      "\" (expected dirichlet, neumann, or periodic)");
}

namespace {

// canonical undirected key
std::pair<int, int> edge_key(const Edge& e) {
    return {std::min(e.u, e.v), std::max(e.u, e.v)};
}

std::vector<std::vector<int>> adjacency(const DomainGraph& g) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
    for (const auto& e : g.edges) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    return adj;
}

// Expected nearest-neighbor edge set of a lattice, canonical keys.
std::set<std::pair<int, int>> lattice_edge_keys(const LatticeMeta& m) {
    int nd = int(m.dims.size());
    std::vector<int> stride(static_cast<std::size_t>(nd), 1);
    for (int k = nd - 2; k >= 0; --k)
        stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k + 1)] * m.dims[static_cast<std::size_t>(k + 1)];
    int n = stride[0] * m.dims[0];

    std::set<std::pair<int, int>> keys;
    std::vector<int> coord(static_cast<std::size_t>(nd), 0);
    for (int idx = 0; idx < n; ++idx) {
        int rem = idx;
        for (int k = 0; k < nd; ++k) {
            coord[static_cast<std::size_t>(k)] = rem / stride[static_cast<std::size_t>(k)];
            rem %= stride[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k < nd; ++k) {
            int dk = m.dims[static_cast<std::size_t>(k)];
            if (coord[static_cast<std::size_t>(k)] + 1 < dk) {
                keys.insert({idx, idx + stride[static_cast<std::size_t>(k)]});
            } else if (m.boundary == Boundary::periodic) {
                int wrapped = idx - (dk - 1) * stride[static_cast<std::size_t>(k)];
                keys.insert({std::min(idx, wrapped), std::max(idx, wrapped)});
            }
        }
    }
    return keys;
}

}  // namespace

void DomainGraph::validate() const {
    if (n <= 0) throw input_error("vertex count must be positive, got " + std::to_string(n));
    if (origin < 0 || origin >= n)
        throw input_error("origin " + std::to_string(origin) + " out of range [0, " +
                          std::to_string(n) + ")");

    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw input_error("edge " + std::to_string(i) + ": endpoint out of range");
        if (e.u == e.v)
            throw input_error("edge " + std::to_string(i) + ": self-loop at vertex " +
                              std::to_string(e.u));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw input_error("edge " + std::to_string(i) + ": nonpositive weight " +
                              std::to_string(e.w));
        if (!seen.insert(edge_key(e)).second)
            throw input_error("edge " + std::to_string(i) + ": duplicate of (" +
                              std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    }

    // connectivity (makes d(x, 0) finite everywhere)
    auto dist = hop_distances(*this, origin);
    for (int v = 0; v < n; ++v)
        if (dist[static_cast<std::size_t>(v)] < 0)
            throw input_error("graph is disconnected: vertex " + std::to_string(v) +
                              " unreachable from origin");

    if (lattice) {
        const LatticeMeta& m = *lattice;
        if (m.dims.empty()) throw input_error("lattice dims must be nonempty");
        std::int64_t count = 1;
        for (int d : m.dims) {
            if (d < 2) throw input_error("lattice dim " + std::to_string(d) + " < 2");
            if (m.boundary == Boundary::periodic && d < 3)
                throw input_error("periodic lattice dim " + std::to_string(d) + " < 3");
            count *= d;
        }
        if (!(m.h > 0.0)) throw input_error("lattice spacing must be positive");
        if (count != n)
            throw input_error("lattice dims product " + std::to_string(count) +
                              " != vertex count " + std::to_string(n));

        auto expected = lattice_edge_keys(m);
        if (expected.size() != edges.size())
            throw input_error("lattice edge count mismatch: expected " +
                              std::to_string(expected.size()) + ", got " +
                              std::to_string(edges.size()));
        double w = 1.0 / (m.h * m.h);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const Edge& e = edges[i];
            if (!expected.count(edge_key(e)))
                throw input_error("edge " + std::to_string(i) +
                                  ": not a nearest-neighbor lattice edge");
            if (std::fabs(e.w - w) > 1e-12 * w)
                throw input_error("edge " + std::to_string(i) + ": lattice weight must be 1/h^2");
        }
    }
}

void SpaceTimeField::validate() const {
    if (n <= 0) throw input_error("space-time field needs positive vertex count");
    if (times.empty()) throw input_error("space-time field needs at least one time sample");
    if (values.size() != times.size() * static_cast<std::size_t>(n))
        throw input_error("space-time field value count mismatch");
    if (std::fabs(times.back()) > 1e-12)
        throw input_error("time grid must end at t = 0, ends at " + std::to_string(times.back()));
    if (times.size() > 1) {
        double step = times[1] - times[0];
        if (!(step > 0.0)) throw input_error("time grid must be strictly increasing");
        for (std::size_t i = 1; i < times.size(); ++i) {
            double s = times[i] - times[i - 1];
            if (std::fabs(s - step) > 1e-12 * std::max(1.0, std::fabs(step)))
                throw input_error("time grid must be uniform, sample " + std::to_string(i) +
                                  " deviates");
        }
    }
    for (double v : values)
        if (!std::isfinite(v)) throw input_error("space-time field has non-finite entry");
}

DomainGraph build_lattice(const std::vector<int>& dims, double h, Boundary boundary) {
    if (dims.empty()) throw input_error("lattice dims must be nonempty");
    for (int d : dims) {
        if (d < 2) throw input_error("lattice dim " + std::to_string(d) + " < 2");
        if (boundary == Boundary::periodic && d < 3)
            throw input_error("periodic lattice dim " + std::to_string(d) + " < 3");
    }
    if (!(h > 0.0)) throw input_error("lattice spacing must be positive");

    LatticeMeta meta{dims, h, boundary};
    DomainGraph g;
    g.lattice = meta;
    std::int64_t count = 1;
    for (int d : dims) count *= d;
    if (count > (std::int64_t(1) << 24)) throw input_error("lattice too large");
    g.n = int(count);
    g.origin = 0;

    double w = 1.0 / (h * h);
    for (const auto& key : lattice_edge_keys(meta)) g.edges.push_back({key.first, key.second, w});
    g.validate();
    return g;
}

DomainGraph path_graph(int n, double w) {
    if (n < 1) throw input_error("path graph needs at least 1 vertex");
    DomainGraph g;
    g.n = n;
    g.origin = 0;
    for (int v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1, w});
    g.validate();
    return g;
}

DomainGraph random_connected_graph(Rng& rng, int n, double extra_edge_prob) {
    if (n < 1) throw input_error("graph needs at least 1 vertex");
    DomainGraph g;
    g.n = n;
    g.origin = 0;
    std::set<std::pair<int, int>> used;
    for (int v = 1; v < n; ++v) {
        int p = rng.uniform_int(0, v - 1);
        used.insert({p, v});
        g.edges.push_back({p, v, rng.uniform(0.5, 1.5)});
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (used.count({u, v})) continue;
            if (rng.uniform() < extra_edge_prob) g.edges.push_back({u, v, rng.uniform(0.5, 1.5)});
        }
    g.validate();
    return g;
}

std::vector<int> hop_distances(const DomainGraph& g, int from) {
    if (from < 0 || from >= g.n) throw input_error("distance source out of range");
    std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
    auto adj = adjacency(g);
    std::queue<int> q;
    dist[static_cast<std::size_t>(from)] = 0;
    q.push(from);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[static_cast<std::size_t>(u)])
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
    }
    return dist;
}

int ball_volume(const DomainGraph& g, int center, int R) {
    if (R < 0) throw input_error("ball radius must be >= 0");
    auto dist = hop_distances(g, center);
    int count = 0;
    for (int d : dist)
        if (d >= 0 && d <= R) ++count;
    return count;
}

LaplacianOperator::LaplacianOperator(const DomainGraph& g) : n_(g.n) {
    g.validate();

    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n_));
    diag_.assign(static_cast<std::size_t>(n_), 0.0);
    for (const auto& e : g.edges) {
        rows[static_cast<std::size_t>(e.u)].push_back({e.v, e.w});
        rows[static_cast<std::size_t>(e.v)].push_back({e.u, e.w});
        diag_[static_cast<std::size_t>(e.u)] -= e.w;
        diag_[static_cast<std::size_t>(e.v)] -= e.w;
    }

    // dirichlet: each missing lattice neighbor is a ghost clamped to 0 and
    // contributes its weight to the degree only
    if (g.lattice && g.lattice->boundary == Boundary::dirichlet) {
        const LatticeMeta& m = *g.lattice;
        int nd = int(m.dims.size());
        std::vector<int> stride(static_cast<std::size_t>(nd), 1);
        for (int k = nd - 2; k >= 0; --k)
            stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k + 1)] * m.dims[static_cast<std::size_t>(k + 1)];
        double w = 1.0 / (m.h * m.h);
        for (int idx = 0; idx < n_; ++idx) {
            int rem = idx;
            int missing = 0;
            for (int k = 0; k < nd; ++k) {
                int c = rem / stride[static_cast<std::size_t>(k)];
                rem %= stride[static_cast<std::size_t>(k)];
                if (c == 0) ++missing;
                if (c == m.dims[static_cast<std::size_t>(k)] - 1) ++missing;
            }
            diag_[static_cast<std::size_t>(idx)] -= double(missing) * w;
        }
    }

    row_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = 0; i < n_; ++i) {
        auto& r = rows[static_cast<std::size_t>(i)];
        std::sort(r.begin(), r.end());
        row_ptr_[static_cast<std::size_t>(i) + 1] = row_ptr_[static_cast<std::size_t>(i)] + int(r.size());
    }
    col_.reserve(static_cast<std::size_t>(row_ptr_.back()));
    val_.reserve(static_cast<std::size_t>(row_ptr_.back()));
    for (int i = 0; i < n_; ++i)
        for (const auto& [j, w] : rows[static_cast<std::size_t>(i)]) {
            col_.push_back(j);
            val_.push_back(w);
        }

    rho_bar_ = 0.0;
    for (int i = 0; i < n_; ++i) rho_bar_ = std::max(rho_bar_, -2.0 * diag_[static_cast<std::size_t>(i)]);
}

void LaplacianOperator::apply(const double* x, double* y) const {
    parallel_for(n_, [&](int i) {
        double acc = diag_[static_cast<std::size_t>(i)] * x[i];
        for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            acc += val_[static_cast<std::size_t>(k)] * x[col_[static_cast<std::size_t>(k)]];
        y[i] = acc;
    });
}

std::vector<double> LaplacianOperator::apply(const std::vector<double>& x) const {
    if (int(x.size()) != n_)
        throw input_error("field length " + std::to_string(x.size()) +
                          " != vertex count " + std::to_string(n_));
    std::vector<double> y(static_cast<std::size_t>(n_));
    apply(x.data(), y.data());
    return y;
}

std::vector<std::vector<double>> LaplacianOperator::dense() const {
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n_), std::vector<double>(static_cast<std::size_t>(n_), 0.0));
    for (int i = 0; i < n_; ++i) {
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = diag_[static_cast<std::size_t>(i)];
        for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])] = val_[static_cast<std::size_t>(k)];
    }
    return a;
}

}  // namespace ancient_heat
