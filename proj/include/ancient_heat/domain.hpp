#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancient_heat/rng.hpp"

namespace ancient_heat {

using ScalarField = std::vector<double>;

enum class Boundary { dirichlet, neumann, periodic };

std::string boundary_name(Boundary b);
Boundary boundary_from_name(const std::string& name);

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

struct LatticeMeta {
    std::vector<int> dims;
    double h = 1.0;
    Boundary boundary = Boundary::neumann;
};

// Finite weighted graph with a reference vertex. If lattice is set the edge
// list must be exactly the nearest-neighbor edges of that lattice with weight
// 1/h^2; validate() enforces this along with connectivity.
struct DomainGraph {
    int n = 0;
    std::vector<Edge> edges;
    int origin = 0;
    std::optional<LatticeMeta> lattice;

    void validate() const;  // throws input_error with the offending element
};

DomainGraph build_lattice(const std::vector<int>& dims, double h, Boundary boundary);
DomainGraph path_graph(int n, double w = 1.0);

// Random spanning tree plus extra edges; always connected. Weights uniform in
// [0.5, 1.5].
DomainGraph random_connected_graph(Rng& rng, int n, double extra_edge_prob = 0.15);

// Unweighted shortest-path hop counts from `from` to every vertex.
std::vector<int> hop_distances(const DomainGraph& g, int from);

// |B(center, R)|: number of vertices within hop distance R.
int ball_volume(const DomainGraph& g, int center, int R);

// u(x, t) sampled on vertices x a uniform time grid ending at t = 0 (the
// ancient-style window [-T, 0]). values is time-major.
struct SpaceTimeField {
    int n = 0;
    std::vector<double> times;
    std::vector<double> values;

    double at(int v, int ti) const { return values[std::size_t(ti) * std::size_t(n) + std::size_t(v)]; }
    double& at(int v, int ti) { return values[std::size_t(ti) * std::size_t(n) + std::size_t(v)]; }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

    // uniform spacing within 1e-12 relative, last time 0, finite entries
    void validate() const;
};

// Delta = -(D - W): symmetric negative semidefinite, so du/dt = Delta u
// smooths forward in time. For dirichlet lattices the degree of a boundary
// vertex includes one 1/h^2 term per missing neighbor (absorbing ghost at 0).
class LaplacianOperator {
public:
    explicit LaplacianOperator(const DomainGraph& g);

    int size() const { return n_; }

    // y = Delta x; y must not alias x
    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;

    std::vector<std::vector<double>> dense() const;

    // Gershgorin bound 2 * max weighted degree >= spectral radius of Delta.
    double spectral_radius_bound() const { return rho_bar_; }

private:
    int n_;
    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
    std::vector<double> diag_;
    double rho_bar_;
};

}  // namespace ancient_heat
