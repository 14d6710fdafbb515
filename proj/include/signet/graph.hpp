#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "signet/errors.hpp"

namespace signet {

// Undirected simple graph; neighbour lists kept sorted, every list non-empty.
struct NetworkGraph {
    std::vector<std::vector<std::uint32_t>> adj;

    std::size_t n() const { return adj.size(); }
    std::size_t deg(std::size_t i) const { return adj[i].size(); }
    std::size_t edge_count() const;
    std::vector<std::size_t> degree_sequence() const;
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
    void validate() const; // symmetry, sortedness, no loops/multi-edges, non-empty
};

// Preferential attachment: complete seed graph on m+1 nodes, then each new
// node attaches m edges to distinct targets chosen with probability
// proportional to current degree. Deterministic in seed.
NetworkGraph generate_pa(std::size_t n, std::size_t m, std::uint64_t seed);

// Pearson correlation of degrees across edge endpoints (each undirected edge
// counted in both orientations). Throws degenerate_variance when all endpoint
// degrees coincide.
double assortativity(const NetworkGraph& g);

struct RewireResult {
    NetworkGraph graph;
    double achieved = 0;
    std::size_t accepted = 0;
    std::size_t attempted = 0;
};

// Degree-preserving double-edge swaps, accepted only when they lower the
// assortativity; stops at `target` or after max_swaps attempts.
RewireResult rewire_disassortative(const NetworkGraph& g, double target, std::size_t max_swaps,
                                   std::uint64_t seed);

// The k highest-degree nodes, ties resolved by ascending id.
std::vector<std::uint32_t> select_key_nodes(const NetworkGraph& g, std::size_t k);

// Edge-list text form: "i j" per line, 0-based, i < j, sorted.
void write_edge_list(std::ostream& out, const NetworkGraph& g);
NetworkGraph read_edge_list(std::istream& in);

} // namespace signet
