#include "signet/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "signet/rng.hpp"

namespace signet {

std::size_t NetworkGraph::edge_count() const {
    std::size_t s = 0;
    for (const auto& l : adj) s += l.size();
    return s / 2;
}

std::vector<std::size_t> NetworkGraph::degree_sequence() const {
    std::vector<std::size_t> d(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) d[i] = adj[i].size();
    return d;
}

bool NetworkGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    const auto& l = adj[a];
    return std::binary_search(l.begin(), l.end(), b);
}

void NetworkGraph::validate() const {
    for (std::size_t i = 0; i < adj.size(); ++i) {
        const auto& l = adj[i];
        if (l.empty()) throw spec_error("node " + std::to_string(i) + " has no neighbours");
        for (std::size_t j = 0; j < l.size(); ++j) {
            if (l[j] >= adj.size()) throw spec_error("neighbour id out of range");
            if (l[j] == i) throw spec_error("self-loop at node " + std::to_string(i));
            if (j > 0 && l[j] <= l[j - 1])
                throw spec_error("neighbour list not strictly sorted at node " +
                                 std::to_string(i));
            if (!has_edge(l[j], static_cast<std::uint32_t>(i)))
                throw spec_error("asymmetric edge " + std::to_string(i) + "-" +
                                 std::to_string(l[j]));
        }
    }
}

NetworkGraph generate_pa(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1 || n < m + 2) throw invalid_params("need m >= 1 and n >= m + 2");

    auto g = make_stream(seed, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> endpoints; // each edge contributes both ends
    edges.reserve(m * (m + 1) / 2 + m * (n - m - 1));
    endpoints.reserve(2 * edges.capacity());

    // complete seed graph on nodes 0..m
    for (std::uint32_t i = 0; i + 1 <= m; ++i) {
        for (std::uint32_t j = i + 1; j <= m; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }

    std::vector<char> picked(n, 0);
    std::vector<std::uint32_t> targets;
    targets.reserve(m);
    for (std::uint32_t v = static_cast<std::uint32_t>(m) + 1; v < n; ++v) {
        targets.clear();
        while (targets.size() < m) {
            // uniform endpoint = degree-proportional node; reject repeats
            const std::uint32_t t = endpoints[uniform_below(g, endpoints.size())];
            if (!picked[t]) {
                picked[t] = 1;
                targets.push_back(t);
            }
        }
        for (std::uint32_t t : targets) {
            picked[t] = 0;
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }

    NetworkGraph out;
    out.adj.resize(n);
    for (auto [a, b] : edges) {
        out.adj[a].push_back(b);
        out.adj[b].push_back(a);
    }
    for (auto& l : out.adj) std::sort(l.begin(), l.end());
    return out;
}

namespace {

struct DegreeMoments {
    double mean = 0, var = 0, sxy = 0;
    std::size_t pairs = 0;
};

DegreeMoments edge_degree_moments(const NetworkGraph& g) {
    if (g.edge_count() == 0) throw spec_error("assortativity needs at least one edge");
    double sx = 0, sxx = 0, sxy = 0;
    std::size_t pairs = 0;
    for (std::size_t u = 0; u < g.n(); ++u) {
        const double du = static_cast<double>(g.deg(u));
        for (std::uint32_t v : g.adj[u]) {
            sx += du;
            sxx += du * du;
            sxy += du * static_cast<double>(g.deg(v));
            ++pairs;
        }
    }
    DegreeMoments mm;
    mm.pairs = pairs;
    mm.mean = sx / static_cast<double>(pairs);
    mm.var = sxx / static_cast<double>(pairs) - mm.mean * mm.mean;
    mm.sxy = sxy;
    return mm;
}

double pearson_from(const DegreeMoments& mm) {
    const double cov = mm.sxy / static_cast<double>(mm.pairs) - mm.mean * mm.mean;
    return cov / mm.var;
}

void adj_remove(std::vector<std::uint32_t>& l, std::uint32_t v) {
    l.erase(std::lower_bound(l.begin(), l.end(), v));
}

void adj_insert(std::vector<std::uint32_t>& l, std::uint32_t v) {
    l.insert(std::upper_bound(l.begin(), l.end(), v), v);
}

} // namespace

double assortativity(const NetworkGraph& g) {
    const DegreeMoments mm = edge_degree_moments(g);
    if (mm.var < 1e-12 * (mm.mean * mm.mean + 1.0)) throw degenerate_variance();
    return pearson_from(mm);
}

RewireResult rewire_disassortative(const NetworkGraph& g, double target, std::size_t max_swaps,
                                   std::uint64_t seed) {
    RewireResult res;
    res.graph = g;
    DegreeMoments mm = edge_degree_moments(g);
    if (mm.var < 1e-12 * (mm.mean * mm.mean + 1.0)) throw degenerate_variance();
    res.achieved = pearson_from(mm);
    if (res.achieved <= target) return res; // already satisfied

    auto& adj = res.graph.adj;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(res.graph.edge_count());
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (std::uint32_t v : adj[u])
            if (u < v) edges.emplace_back(static_cast<std::uint32_t>(u), v);

    auto g_rng = make_stream(seed, 0);
    auto degree = [&](std::uint32_t u) { return static_cast<double>(adj[u].size()); };

    for (std::size_t attempt = 0; attempt < max_swaps; ++attempt) {
        res.attempted = attempt + 1;
        const std::size_t i = uniform_below(g_rng, edges.size());
        const std::size_t j = uniform_below(g_rng, edges.size());
        if (i == j) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (uniform_below(g_rng, 2) == 1) std::swap(c, d);
        // propose (a,b),(c,d) -> (a,d),(c,b)
        if (a == c || a == d || b == c || b == d) continue;
        if (res.graph.has_edge(a, d) || res.graph.has_edge(c, b)) continue;

        const double da = degree(a), db = degree(b), dc = degree(c), dd = degree(d);
        const double delta = 2.0 * (da * dd + dc * db - da * db - dc * dd);
        if (!(delta < 0.0)) continue; // only strictly assortativity-lowering swaps

        adj_remove(adj[a], b);
        adj_remove(adj[b], a);
        adj_remove(adj[c], d);
        adj_remove(adj[d], c);
        adj_insert(adj[a], d);
        adj_insert(adj[d], a);
        adj_insert(adj[c], b);
        adj_insert(adj[b], c);
        edges[i] = {std::min(a, d), std::max(a, d)};
        edges[j] = {std::min(c, b), std::max(c, b)};
        mm.sxy += delta;
        ++res.accepted;
        res.achieved = pearson_from(mm);
        if (res.achieved <= target) break;
    }
    return res;
}

std::vector<std::uint32_t> select_key_nodes(const NetworkGraph& g, std::size_t k) {
    if (k < 1 || k > g.n()) throw invalid_k("k must lie in [1, n]");
    std::vector<std::uint32_t> ids(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) ids[i] = static_cast<std::uint32_t>(i);
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                      [&](std::uint32_t x, std::uint32_t y) {
                          if (g.deg(x) != g.deg(y)) return g.deg(x) > g.deg(y);
                          return x < y;
                      });
    ids.resize(k);
    return ids;
}

void write_edge_list(std::ostream& out, const NetworkGraph& g) {
    for (std::size_t u = 0; u < g.n(); ++u)
        for (std::uint32_t v : g.adj[u])
            if (u < v) out << u << ' ' << v << '\n';
}

NetworkGraph read_edge_list(std::istream& in) {
    NetworkGraph g;
    std::string line;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::uint32_t maxid = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long a = -1, b = -1;
        if (!(ls >> a >> b) || a < 0 || b < 0 || a == b)
            throw io_error("bad edge list line " + std::to_string(lineno) + ": " + line);
        edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        maxid = std::max({maxid, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
    }
    if (edges.empty()) throw io_error("empty edge list");
    g.adj.resize(static_cast<std::size_t>(maxid) + 1);
    for (auto [a, b] : edges) {
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
    }
    for (auto& l : g.adj) std::sort(l.begin(), l.end());
    g.validate();
    return g;
}

} // namespace signet
