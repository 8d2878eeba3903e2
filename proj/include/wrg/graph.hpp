#pragma once

// Directed word-recurrence multigraphs over token windows, and the seven
// metrics used to profile them:
//
//   N    node count (distinct words)
//   E    distinct directed edges
//   RE   repeated edges: transitions beyond the first per directed pair
//   PE   parallel edges: unordered pairs linked in both directions
//   LCC  largest component under direction-blind reachability
//   LSC  largest set of mutually reachable nodes
//   ASP  mean directed shortest-path length over reachable ordered pairs
//
// Conventions: adjacent tokens produce one transition unless a segment
// boundary falls between them; immediate repetition produces a self-loop,
// which counts as a transition and a distinct edge but never contributes
// to PE or ASP; ASP averages over ordered pairs (u != v) with a finite
// directed distance and is 0 when no such pair exists; isolated nodes are
// singleton components, so LSC >= 1 for nonempty windows.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wrg {

enum class Attribute : int {
    nodes = 0,
    edges,
    repeated_edges,
    parallel_edges,
    largest_component,
    largest_strong_component,
    avg_shortest_path,
};

inline constexpr std::size_t kAttributeCount = 7;
inline constexpr std::array<std::string_view, kAttributeCount> kAttributeNames{
    "N", "E", "RE", "PE", "LCC", "LSC", "ASP"};

struct AttributeVector {
    std::array<double, kAttributeCount> values{};

    double& operator[](Attribute a) { return values[static_cast<std::size_t>(a)]; }
    double operator[](Attribute a) const { return values[static_cast<std::size_t>(a)]; }
    friend bool operator==(const AttributeVector&, const AttributeVector&) = default;
};

using NodeId = std::int32_t;
using Transition = std::pair<NodeId, NodeId>;

/// Directed multigraph over the distinct words of one token window.
/// Node ids follow first appearance in the window.
struct WindowGraph {
    std::vector<std::string> node_labels;
    std::vector<Transition> transitions;
    std::size_t window_len = 0;

    NodeId node_count() const { return static_cast<NodeId>(node_labels.size()); }
};

namespace detail {

/// Reusable buffers for per-window metric computation.
struct MetricsScratch {
    std::vector<Transition> edges;       // sorted distinct edges
    std::vector<std::int32_t> parent;    // union-find
    std::vector<std::int32_t> comp_size;
    std::vector<std::int32_t> head;      // CSR adjacency (self-loops excluded)
    std::vector<NodeId> adj;
    std::vector<std::int32_t> index;     // Tarjan
    std::vector<std::int32_t> lowlink;
    std::vector<std::int32_t> comp;
    std::vector<NodeId> stack;
    std::vector<std::uint8_t> on_stack;
    std::vector<std::pair<NodeId, std::int32_t>> call_stack;
    std::vector<std::int32_t> dist;      // BFS
    std::vector<NodeId> queue;
};

struct GraphMetrics {
    std::int64_t transition_count = 0;
    std::int32_t nodes = 0;
    std::int32_t distinct_edges = 0;
    std::int32_t repeated_edges = 0;
    std::int32_t parallel_edges = 0;
    std::int32_t largest_component = 0;
    std::int32_t largest_strong_component = 0;
    double avg_shortest_path = 0.0;
};

inline std::int32_t dsu_find(std::vector<std::int32_t>& parent, std::int32_t v) {
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}

/// Computes all metrics for a graph given as (node count, transition list).
inline GraphMetrics compute_metrics(NodeId n, std::span<const Transition> transitions,
                                    MetricsScratch& s) {
    GraphMetrics m;
    m.nodes = n;
    m.transition_count = static_cast<std::int64_t>(transitions.size());
    if (n == 0) return m;

    // Distinct edges and duplicates.
    s.edges.assign(transitions.begin(), transitions.end());
    std::sort(s.edges.begin(), s.edges.end());
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
    m.distinct_edges = static_cast<std::int32_t>(s.edges.size());
    m.repeated_edges = static_cast<std::int32_t>(m.transition_count - m.distinct_edges);

    // Anti-parallel pairs.
    for (const auto& [u, v] : s.edges) {
        if (u < v && std::binary_search(s.edges.begin(), s.edges.end(), Transition{v, u}))
            ++m.parallel_edges;
    }

    // Weak components via union-find.
    s.parent.resize(n);
    s.comp_size.assign(n, 1);
    for (NodeId v = 0; v < n; ++v) s.parent[v] = v;
    for (const auto& [u, v] : s.edges) {
        const auto ru = dsu_find(s.parent, u);
        const auto rv = dsu_find(s.parent, v);
        if (ru != rv) {
            s.parent[ru] = rv;
            s.comp_size[rv] += s.comp_size[ru];
        }
    }
    m.largest_component = 1;
    for (NodeId v = 0; v < n; ++v)
        if (s.parent[v] == v) m.largest_component = std::max(m.largest_component, s.comp_size[v]);

    // CSR adjacency over distinct edges, self-loops excluded (they affect
    // neither reachability nor distances).
    s.head.assign(n + 1, 0);
    for (const auto& [u, v] : s.edges)
        if (u != v) ++s.head[u + 1];
    for (NodeId v = 0; v < n; ++v) s.head[v + 1] += s.head[v];
    s.adj.resize(static_cast<std::size_t>(s.head[n]));
    {
        // edges are sorted by source, so a running cursor suffices
        std::int32_t cursor = 0;
        NodeId prev_u = -1;
        for (const auto& [u, v] : s.edges) {
            if (u == v) continue;
            if (u != prev_u) {
                cursor = s.head[u];
                prev_u = u;
            }
            s.adj[static_cast<std::size_t>(cursor++)] = v;
        }
    }

    // Strongly connected components, iterative Tarjan.
    s.index.assign(n, -1);
    s.lowlink.assign(n, 0);
    s.comp.assign(n, -1);
    s.on_stack.assign(n, 0);
    s.stack.clear();
    s.call_stack.clear();
    std::int32_t next_index = 0;
    std::int32_t comp_count = 0;
    for (NodeId root = 0; root < n; ++root) {
        if (s.index[root] != -1) continue;
        s.call_stack.push_back({root, s.head[root]});
        s.index[root] = s.lowlink[root] = next_index++;
        s.stack.push_back(root);
        s.on_stack[root] = 1;
        while (!s.call_stack.empty()) {
            auto& [v, edge_it] = s.call_stack.back();
            if (edge_it < s.head[v + 1]) {
                const NodeId w = s.adj[static_cast<std::size_t>(edge_it++)];
                if (s.index[w] == -1) {
                    s.index[w] = s.lowlink[w] = next_index++;
                    s.stack.push_back(w);
                    s.on_stack[w] = 1;
                    s.call_stack.push_back({w, s.head[w]});
                } else if (s.on_stack[w]) {
                    s.lowlink[v] = std::min(s.lowlink[v], s.index[w]);
                }
            } else {
                if (s.lowlink[v] == s.index[v]) {
                    std::int32_t size = 0;
                    NodeId w;
                    do {
                        w = s.stack.back();
                        s.stack.pop_back();
                        s.on_stack[w] = 0;
                        s.comp[w] = comp_count;
                        ++size;
                    } while (w != v);
                    ++comp_count;
                    m.largest_strong_component = std::max(m.largest_strong_component, size);
                }
                const NodeId finished = v;
                s.call_stack.pop_back();
                if (!s.call_stack.empty()) {
                    const NodeId parent = s.call_stack.back().first;
                    s.lowlink[parent] = std::min(s.lowlink[parent], s.lowlink[finished]);
                }
            }
        }
    }

    // All-pairs BFS for the average shortest path.
    std::int64_t dist_sum = 0;
    std::int64_t pair_count = 0;
    s.dist.assign(n, -1);
    s.queue.clear();
    for (NodeId src = 0; src < n; ++src) {
        if (s.head[src] == s.head[src + 1]) continue;  // no outgoing edges
        s.queue.clear();
        s.dist[src] = 0;
        s.queue.push_back(src);
        for (std::size_t qi = 0; qi < s.queue.size(); ++qi) {
            const NodeId v = s.queue[qi];
            for (std::int32_t e = s.head[v]; e < s.head[v + 1]; ++e) {
                const NodeId w = s.adj[static_cast<std::size_t>(e)];
                if (s.dist[w] == -1) {
                    s.dist[w] = s.dist[v] + 1;
                    dist_sum += s.dist[w];
                    ++pair_count;
                    s.queue.push_back(w);
                }
            }
        }
        for (const NodeId v : s.queue) s.dist[v] = -1;  // reset touched entries
    }
    m.avg_shortest_path =
        pair_count == 0 ? 0.0 : static_cast<double>(dist_sum) / static_cast<double>(pair_count);
    return m;
}

inline AttributeVector to_attributes(const GraphMetrics& m) {
    AttributeVector a;
    a[Attribute::nodes] = m.nodes;
    a[Attribute::edges] = m.distinct_edges;
    a[Attribute::repeated_edges] = m.repeated_edges;
    a[Attribute::parallel_edges] = m.parallel_edges;
    a[Attribute::largest_component] = m.largest_component;
    a[Attribute::largest_strong_component] = m.largest_strong_component;
    a[Attribute::avg_shortest_path] = m.avg_shortest_path;
    return a;
}

}  // namespace detail

/// Builds the window graph: one node per distinct token, one transition per
/// adjacent token pair (i, i+1) unless a boundary starts at i+1. The
/// boundary span may be empty (no boundaries) or exactly one flag per token.
inline WindowGraph build_window_graph(std::span<const std::string> tokens,
                                      std::span<const std::uint8_t> boundary_before = {}) {
    if (tokens.empty()) throw std::invalid_argument("build_window_graph: empty window");
    if (!boundary_before.empty() && boundary_before.size() != tokens.size())
        throw std::invalid_argument("build_window_graph: boundary flags do not match tokens");

    WindowGraph g;
    g.window_len = tokens.size();
    std::unordered_map<std::string_view, NodeId> ids;
    ids.reserve(tokens.size());
    NodeId prev = -1;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(tokens[i], static_cast<NodeId>(ids.size()));
        if (inserted) g.node_labels.push_back(tokens[i]);
        const NodeId cur = it->second;
        if (i > 0 && (boundary_before.empty() || !boundary_before[i]))
            g.transitions.push_back({prev, cur});
        prev = cur;
    }
    return g;
}

inline AttributeVector compute_attributes(const WindowGraph& g) {
    detail::MetricsScratch scratch;
    return detail::to_attributes(detail::compute_metrics(g.node_count(), g.transitions, scratch));
}

inline double average_shortest_path(const WindowGraph& g) {
    return compute_attributes(g)[Attribute::avg_shortest_path];
}

namespace detail {

inline std::vector<std::vector<NodeId>> group_components(std::span<const std::int32_t> comp_of) {
    std::int32_t comp_count = 0;
    for (const auto c : comp_of) comp_count = std::max(comp_count, c + 1);
    std::vector<std::vector<NodeId>> groups(static_cast<std::size_t>(comp_count));
    for (NodeId v = 0; v < static_cast<NodeId>(comp_of.size()); ++v)
        groups[static_cast<std::size_t>(comp_of[v])].push_back(v);
    // stable order: components sorted by their smallest node id
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

}  // namespace detail

/// Partition into maximal sets of mutually reachable nodes, ordered by
/// smallest contained node id.
inline std::vector<std::vector<NodeId>> strongly_connected_components(const WindowGraph& g) {
    const NodeId n = g.node_count();
    detail::MetricsScratch s;
    detail::compute_metrics(n, g.transitions, s);
    return detail::group_components(s.comp);
}

/// Partition under direction-blind reachability, same ordering as above.
inline std::vector<std::vector<NodeId>> weakly_connected_components(const WindowGraph& g) {
    const NodeId n = g.node_count();
    std::vector<std::int32_t> parent(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) parent[static_cast<std::size_t>(v)] = v;
    for (const auto& [u, v] : g.transitions) {
        const auto ru = detail::dsu_find(parent, u);
        const auto rv = detail::dsu_find(parent, v);
        if (ru != rv) parent[static_cast<std::size_t>(ru)] = rv;
    }
    std::vector<std::int32_t> root_to_comp(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> comp_of(static_cast<std::size_t>(n));
    std::int32_t next = 0;
    for (NodeId v = 0; v < n; ++v) {
        const auto r = detail::dsu_find(parent, v);
        if (root_to_comp[static_cast<std::size_t>(r)] == -1)
            root_to_comp[static_cast<std::size_t>(r)] = next++;
        comp_of[static_cast<std::size_t>(v)] = root_to_comp[static_cast<std::size_t>(r)];
    }
    return detail::group_components(comp_of);
}

/// Debug export: one `source<TAB>target<TAB>multiplicity` line per distinct
/// edge, sorted by label pair.
inline std::string edge_list_text(const WindowGraph& g) {
    std::vector<Transition> edges(g.transitions);
    std::sort(edges.begin(), edges.end());
    std::vector<std::pair<Transition, std::int64_t>> counted;
    for (const auto& e : edges) {
        if (!counted.empty() && counted.back().first == e)
            ++counted.back().second;
        else
            counted.push_back({e, 1});
    }
    std::sort(counted.begin(), counted.end(), [&](const auto& a, const auto& b) {
        const auto& la = g.node_labels[static_cast<std::size_t>(a.first.first)];
        const auto& lb = g.node_labels[static_cast<std::size_t>(b.first.first)];
        if (la != lb) return la < lb;
        return g.node_labels[static_cast<std::size_t>(a.first.second)] <
               g.node_labels[static_cast<std::size_t>(b.first.second)];
    });
    std::string out;
    for (const auto& [edge, mult] : counted) {
        out += g.node_labels[static_cast<std::size_t>(edge.first)];
        out += '\t';
        out += g.node_labels[static_cast<std::size_t>(edge.second)];
        out += '\t';
        out += std::to_string(mult);
        out += '\n';
    }
    return out;
}

}  // namespace wrg
