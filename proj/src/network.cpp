#include "ivmm/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ivmm {

namespace {

// Snap key for node dedup: 1e-6 degree grid, roughly 0.1 m.
std::pair<std::int64_t, std::int64_t> snap_key(const GeoPoint &p) {
  return {static_cast<std::int64_t>(std::llround(p.lat * 1e6)),
          static_cast<std::int64_t>(std::llround(p.lon * 1e6))};
}

struct PairHash {
  size_t operator()(const std::pair<std::int64_t, std::int64_t> &k) const {
    return std::hash<std::int64_t>()(k.first) * 1000003u ^
           std::hash<std::int64_t>()(k.second);
  }
};

int find_root(std::vector<int> &parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Min-heap entry ordered by (distance, node) so equal distances settle in
// node order and results stay deterministic.
using HeapEntry = std::pair<double, int>;

struct SearchState {
  std::vector<double> dist;
  std::vector<int> pred_arc;  // arc that settled the node, -1 for a seed
  std::vector<int> pred_node;
  std::vector<int> seed_exit;  // 0 forward exit, 1 backward exit, -1 none
};

// How a path may enter the target piece.
struct EntrySpec {
  int node;      // graph node where the piece is entered
  double extra;  // partial length from that node to the foot point
  bool forward;  // direction of travel over the target piece
};

void resolve_piece(const RoadNetwork &net, const Candidate &c, int *index) {
  auto it = net.piece_index_by_id.find(c.piece_id);
  if (it == net.piece_index_by_id.end()) {
    throw Error("candidate references unknown piece id " +
                std::to_string(c.piece_id));
  }
  *index = it->second;
}

std::vector<EntrySpec> entry_specs(const RoadNetwork &net, int piece_index,
                                   double frac) {
  const RoadPiece &piece = net.pieces[piece_index];
  std::vector<EntrySpec> out;
  out.push_back({net.piece_tail[piece_index], frac * piece.length, true});
  if (!piece.oneway) {
    out.push_back(
        {net.piece_head[piece_index], (1.0 - frac) * piece.length, false});
  }
  return out;
}

// Runs one source-rooted search. Targets are expressed as entry nodes; the
// search stops once every distinct entry node is settled or the frontier
// passes max_radius.
void run_dijkstra(const RoadNetwork &net, const Candidate &from,
                  int from_piece, const std::vector<int> &needed_nodes,
                  double max_radius, SearchState *st) {
  const int n = net.node_count();
  st->dist.assign(n, std::numeric_limits<double>::infinity());
  st->pred_arc.assign(n, -1);
  st->pred_node.assign(n, -1);
  st->seed_exit.assign(n, -1);

  std::vector<int> remaining(n, 0);
  int outstanding = 0;
  for (int node : needed_nodes) {
    if (remaining[node]++ == 0) ++outstanding;
  }

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  const RoadPiece &piece = net.pieces[from_piece];

  auto seed = [&](int node, double cost, int exit_kind) {
    if (cost > max_radius) return;
    if (cost < st->dist[node] ||
        (cost == st->dist[node] && st->seed_exit[node] == -1)) {
      st->dist[node] = cost;
      st->seed_exit[node] = exit_kind;
      st->pred_arc[node] = -1;
      st->pred_node[node] = -1;
      heap.emplace(cost, node);
    }
  };
  seed(net.piece_head[from_piece], (1.0 - from.frac) * piece.length, 0);
  if (!piece.oneway) {
    seed(net.piece_tail[from_piece], from.frac * piece.length, 1);
  }

  std::vector<bool> settled(n, false);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d != st->dist[u]) continue;
    settled[u] = true;
    if (remaining[u] > 0) {
      remaining[u] = 0;
      if (--outstanding == 0) break;
    }
    for (int a = net.arc_offset[u]; a < net.arc_offset[u + 1]; ++a) {
      const Arc &arc = net.arcs[a];
      const double nd = d + arc.length;
      if (nd > max_radius) continue;
      if (nd < st->dist[arc.to]) {
        st->dist[arc.to] = nd;
        st->pred_arc[arc.to] = a;
        st->pred_node[arc.to] = u;
        st->seed_exit[arc.to] = -1;
        heap.emplace(nd, arc.to);
      }
    }
  }
}

// Rebuilds the step/node sequence for a search result that enters the
// target through `entry`.
NetworkPath assemble_path(const RoadNetwork &net, const Candidate &from,
                          int from_piece, const Candidate &to, int to_piece,
                          const SearchState &st, const EntrySpec &entry) {
  NetworkPath path;
  path.entry_frac = from.frac;
  path.exit_frac = to.frac;

  std::vector<int> arc_chain;
  int node = entry.node;
  while (st.pred_arc[node] != -1) {
    arc_chain.push_back(st.pred_arc[node]);
    node = st.pred_node[node];
  }
  std::reverse(arc_chain.begin(), arc_chain.end());

  const RoadPiece &src = net.pieces[from_piece];
  if (st.seed_exit[node] == 0) {
    path.steps.push_back(
        {src.piece_id, true, (1.0 - from.frac) * src.length});
  } else {
    path.steps.push_back({src.piece_id, false, from.frac * src.length});
  }

  path.nodes.push_back(node);
  for (int a : arc_chain) {
    const Arc &arc = net.arcs[a];
    path.steps.push_back(
        {net.pieces[arc.piece_index].piece_id, arc.forward, arc.length});
    path.nodes.push_back(arc.to);
  }

  const RoadPiece &dst = net.pieces[to_piece];
  if (entry.forward) {
    path.steps.push_back({dst.piece_id, true, to.frac * dst.length});
  } else {
    path.steps.push_back({dst.piece_id, false, (1.0 - to.frac) * dst.length});
  }

  path.total_length = 0.0;
  for (const auto &s : path.steps) path.total_length += s.traversed;
  return path;
}

// Direct traversal within one shared piece, when the direction allows it.
std::optional<NetworkPath> direct_same_piece(const RoadNetwork &net,
                                             const Candidate &from,
                                             const Candidate &to,
                                             int piece_index,
                                             double max_radius) {
  const RoadPiece &piece = net.pieces[piece_index];
  const bool forward = to.frac >= from.frac;
  if (!forward && piece.oneway) return std::nullopt;
  const double length = std::abs(to.frac - from.frac) * piece.length;
  if (length > max_radius) return std::nullopt;
  NetworkPath path;
  path.steps.push_back({piece.piece_id, forward, length});
  path.total_length = length;
  path.entry_frac = from.frac;
  path.exit_frac = to.frac;
  return path;
}

}  // namespace

RoadNetwork build_graph(std::vector<RoadPiece> pieces) {
  if (pieces.empty()) {
    throw EmptyNetwork("cannot build a routing graph from zero pieces");
  }
  RoadNetwork net;
  net.pieces = std::move(pieces);

  std::unordered_map<std::pair<std::int64_t, std::int64_t>, int, PairHash>
      node_of;
  auto intern = [&](const GeoPoint &p) {
    auto key = snap_key(p);
    auto it = node_of.find(key);
    if (it != node_of.end()) return it->second;
    const int id = static_cast<int>(net.nodes.size());
    net.nodes.push_back(p);
    node_of.emplace(key, id);
    return id;
  };

  net.piece_tail.reserve(net.pieces.size());
  net.piece_head.reserve(net.pieces.size());
  for (size_t i = 0; i < net.pieces.size(); ++i) {
    const RoadPiece &piece = net.pieces[i];
    if (piece.length <= 0.0 || piece.start == piece.end) {
      throw CorruptAsset("piece " + std::to_string(piece.piece_id) +
                         " violates geometry invariants");
    }
    if (!net.piece_index_by_id.emplace(piece.piece_id, static_cast<int>(i))
             .second) {
      throw CorruptAsset("duplicate piece id " + std::to_string(piece.piece_id));
    }
    net.piece_tail.push_back(intern(piece.start));
    net.piece_head.push_back(intern(piece.end));
  }

  // Snapping may merge the two endpoints of an extremely short piece; such
  // a piece cannot form an arc.
  struct RawArc {
    int from, to, piece;
    bool forward;
    double length;
  };
  std::vector<RawArc> raw;
  raw.reserve(net.pieces.size() * 2);
  for (size_t i = 0; i < net.pieces.size(); ++i) {
    const int tail = net.piece_tail[i];
    const int head = net.piece_head[i];
    if (tail == head) {
      throw CorruptAsset("piece " + std::to_string(net.pieces[i].piece_id) +
                         " collapses to a single node after snapping");
    }
    const double len = net.pieces[i].length;
    raw.push_back({tail, head, static_cast<int>(i), true, len});
    if (!net.pieces[i].oneway) {
      raw.push_back({head, tail, static_cast<int>(i), false, len});
    }
  }

  const int n = net.node_count();
  std::vector<int> counts(n + 1, 0);
  for (const auto &a : raw) ++counts[a.from + 1];
  for (int i = 0; i < n; ++i) counts[i + 1] += counts[i];
  net.arc_offset = counts;
  net.arcs.resize(raw.size());
  {
    std::vector<int> cursor(net.arc_offset.begin(), net.arc_offset.end() - 1);
    for (const auto &a : raw) {
      net.arcs[cursor[a.from]++] = Arc{a.to, a.piece, a.forward, a.length};
    }
  }

  // Weakly connected components over the undirected arc endpoints.
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  for (const auto &a : raw) {
    const int ra = find_root(parent, a.from);
    const int rb = find_root(parent, a.to);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  net.component.assign(n, -1);
  int next_component = 0;
  for (int i = 0; i < n; ++i) {
    const int root = find_root(parent, i);
    if (net.component[root] == -1) net.component[root] = next_component++;
    net.component[i] = net.component[root];
  }
  net.component_count = next_component;
  return net;
}

std::optional<NetworkPath> shortest_path(const RoadNetwork &net,
                                         const Candidate &from,
                                         const Candidate &to,
                                         double max_radius) {
  auto matrix = many_to_many_shortest(net, {from}, {to}, max_radius);
  return std::move(matrix[0][0]);
}

std::vector<std::vector<std::optional<NetworkPath>>> many_to_many_shortest(
    const RoadNetwork &net, const std::vector<Candidate> &from_set,
    const std::vector<Candidate> &to_set, double max_radius) {
  std::vector<std::vector<std::optional<NetworkPath>>> result(
      from_set.size());

  std::vector<int> to_piece(to_set.size());
  std::vector<std::vector<EntrySpec>> entries(to_set.size());
  std::vector<int> needed_nodes;
  for (size_t j = 0; j < to_set.size(); ++j) {
    resolve_piece(net, to_set[j], &to_piece[j]);
    entries[j] = entry_specs(net, to_piece[j], to_set[j].frac);
    for (const auto &e : entries[j]) needed_nodes.push_back(e.node);
  }

  SearchState st;
  for (size_t i = 0; i < from_set.size(); ++i) {
    const Candidate &from = from_set[i];
    int from_piece = 0;
    resolve_piece(net, from, &from_piece);
    run_dijkstra(net, from, from_piece, needed_nodes, max_radius, &st);

    result[i].resize(to_set.size());
    for (size_t j = 0; j < to_set.size(); ++j) {
      const Candidate &to = to_set[j];
      std::optional<NetworkPath> best;
      if (from.piece_id == to.piece_id) {
        best = direct_same_piece(net, from, to, to_piece[j], max_radius);
      }
      for (const auto &entry : entries[j]) {
        if (!std::isfinite(st.dist[entry.node])) continue;
        const double total = st.dist[entry.node] + entry.extra;
        if (total > max_radius) continue;
        if (!best || total < best->total_length) {
          auto candidate_path =
              assemble_path(net, from, from_piece, to, to_piece[j], st, entry);
          if (!best || candidate_path.total_length < best->total_length) {
            best = std::move(candidate_path);
          }
        }
      }
      result[i][j] = std::move(best);
    }
  }
  return result;
}

std::optional<std::vector<int>> shortest_arc_route(const RoadNetwork &net,
                                                   int from_node,
                                                   int to_node) {
  const int n = net.node_count();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> pred_arc(n, -1);
  std::vector<int> pred_node(n, -1);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  dist[from_node] = 0.0;
  heap.emplace(0.0, from_node);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    if (u == to_node) break;
    for (int a = net.arc_offset[u]; a < net.arc_offset[u + 1]; ++a) {
      const Arc &arc = net.arcs[a];
      const double nd = d + arc.length;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        pred_arc[arc.to] = a;
        pred_node[arc.to] = u;
        heap.emplace(nd, arc.to);
      }
    }
  }
  if (!std::isfinite(dist[to_node])) return std::nullopt;
  std::vector<int> route;
  for (int node = to_node; node != from_node; node = pred_node[node]) {
    route.push_back(pred_arc[node]);
  }
  std::reverse(route.begin(), route.end());
  return route;
}

}  // namespace ivmm
