#include "troplift/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "troplift/rational.hpp"

namespace troplift {

Multigraph::Multigraph(std::vector<std::string> vertices, std::vector<EdgeSpec> edges) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    throw Error(Error::Kind::Malformed, "duplicate vertex id");
  vertices_ = std::move(vertices);

  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].id == edges[i - 1].id) throw Error(Error::Kind::Malformed, "duplicate edge id '" + edges[i].id + "'");

  incident_.assign(vertices_.size(), {});
  for (const auto& spec : edges) {
    auto t = find_vertex(spec.tail);
    auto h = find_vertex(spec.head);
    if (!t || !h) throw Error(Error::Kind::Malformed, "edge '" + spec.id + "' has an unknown endpoint");
    edges_.push_back({spec.id, *t, *h});
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    incident_[edges_[e].tail].push_back(e);
    if (edges_[e].head != edges_[e].tail) incident_[edges_[e].head].push_back(e);
  }
}

std::optional<std::size_t> Multigraph::find_vertex(std::string_view id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> Multigraph::find_edge(std::string_view id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, std::string_view key) { return e.id < key; });
  if (it == edges_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t Multigraph::vertex_index(std::string_view id) const {
  if (auto v = find_vertex(id)) return *v;
  throw Error(Error::Kind::Malformed, "unknown vertex '" + std::string(id) + "'");
}

std::size_t Multigraph::edge_index(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw Error(Error::Kind::Malformed, "unknown edge '" + std::string(id) + "'");
}

int Multigraph::sigma(std::size_t e, std::size_t v) const {
  const auto& ed = edges_.at(e);
  if (ed.tail == v) return 1;
  if (ed.head == v) return -1;
  throw Error("vertex is not incident on edge '" + ed.id + "'");
}

std::size_t Multigraph::other_end(std::size_t e, std::size_t v) const {
  const auto& ed = edges_.at(e);
  if (ed.tail == v) return ed.head;
  if (ed.head == v) return ed.tail;
  throw Error("vertex is not incident on edge '" + ed.id + "'");
}

std::vector<EdgeSpec> Multigraph::edge_specs() const {
  std::vector<EdgeSpec> out;
  for (const auto& e : edges_) out.push_back({e.id, vertices_[e.tail], vertices_[e.head]});
  return out;
}

ChainStructure::ChainStructure(std::vector<long> lengths) : lengths_(std::move(lengths)) {
  for (long n : lengths_)
    if (n < 1) throw Error(Error::Kind::Malformed, "edge lengths must be positive integers");
}

ChainStructure ChainStructure::scaled(long m) const {
  if (m < 1) throw Error("chain structure scale factor must be positive");
  std::vector<long> out(lengths_);
  for (long& n : out) n *= m;
  return ChainStructure(std::move(out));
}

MetricGraph::MetricGraph(Multigraph g, ChainStructure n) : graph(std::move(g)), chain(std::move(n)) {
  if (chain.size() != graph.edge_count())
    throw Error(Error::Kind::Malformed, "chain structure does not match the edge set");
}

namespace {

bool connected(const Multigraph& g) {
  if (g.vertex_count() == 0) return true;
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t e : g.incident(v)) {
      std::size_t u = g.edge(e).tail == v ? g.edge(e).head : g.edge(e).tail;
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  return std::find(seen.begin(), seen.end(), false) == seen.end();
}

}  // namespace

ValidationReport validate(const Multigraph& g) {
  ValidationReport report;
  for (const auto& e : g.edges())
    if (e.tail == e.head) report.violations.push_back("loop: edge '" + e.id + "' has tail = head");
  if (!connected(g)) report.violations.push_back("disconnected graph");

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> tail_of_pair;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (ed.tail == ed.head) continue;
    auto key = std::minmax(ed.tail, ed.head);
    auto [it, fresh] = tail_of_pair.emplace(key, ed.tail);
    if (!fresh && it->second != ed.tail)
      report.violations.push_back("direction: edge '" + ed.id + "' does not share the tail of its parallel edges");
  }
  return report;
}

std::pair<Multigraph, std::vector<std::size_t>> reorient(const Multigraph& g) {
  std::vector<EdgeSpec> specs;
  std::vector<std::size_t> flipped;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (ed.head < ed.tail) {
      flipped.push_back(e);
      specs.push_back({ed.id, g.vertex_id(ed.head), g.vertex_id(ed.tail)});
    } else {
      specs.push_back({ed.id, g.vertex_id(ed.tail), g.vertex_id(ed.head)});
    }
  }
  return {Multigraph(g.vertex_ids(), std::move(specs)), std::move(flipped)};
}

std::optional<std::size_t> ContractedTree::between(std::size_t u, std::size_t v) const {
  for (std::size_t t : adjacency_.at(u)) {
    const auto& te = edges_[t];
    if ((te.a == u && te.b == v) || (te.a == v && te.b == u)) return t;
  }
  return std::nullopt;
}

std::size_t ContractedTree::other_end(std::size_t t, std::size_t v) const {
  const auto& te = edges_.at(t);
  if (te.a == v) return te.b;
  if (te.b == v) return te.a;
  throw Error("vertex is not an endpoint of the contracted edge");
}

std::vector<bool> ContractedTree::side(std::size_t t, std::size_t v) const {
  if (!multitree_) throw Error("not a multitree");
  std::vector<bool> in(vertex_count(), false);
  std::vector<std::size_t> stack{v};
  in[v] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t s : adjacency_[u]) {
      if (s == t) continue;
      std::size_t w = other_end(s, u);
      if (!in[w]) {
        in[w] = true;
        stack.push_back(w);
      }
    }
  }
  return in;
}

std::string ContractedTree::name(const Multigraph& g, std::size_t t) const {
  return g.vertex_id(edges_.at(t).a) + "~" + g.vertex_id(edges_.at(t).b);
}

Multigraph ContractedTree::as_multigraph(const Multigraph& g) const {
  std::vector<EdgeSpec> specs;
  for (std::size_t t = 0; t < edges_.size(); ++t)
    specs.push_back({name(g, t), g.vertex_id(edges_[t].a), g.vertex_id(edges_[t].b)});
  return Multigraph(g.vertex_ids(), std::move(specs));
}

ContractedTree contract(const Multigraph& g) {
  ContractedTree tree;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  tree.image_.assign(g.edge_count(), 0);
  tree.adjacency_.assign(g.vertex_count(), {});
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (ed.tail == ed.head) throw Error(Error::Kind::Malformed, "cannot contract a graph with loops");
    auto key = std::minmax(ed.tail, ed.head);
    auto [it, fresh] = index.emplace(key, tree.edges_.size());
    if (fresh) tree.edges_.push_back({key.first, key.second, {}});
    tree.edges_[it->second].fiber.push_back(e);
    tree.image_[e] = it->second;
  }
  for (std::size_t t = 0; t < tree.edges_.size(); ++t) {
    tree.adjacency_[tree.edges_[t].a].push_back(t);
    tree.adjacency_[tree.edges_[t].b].push_back(t);
  }

  tree.multitree_ = connected(g) && tree.edges_.size() + 1 == std::max<std::size_t>(g.vertex_count(), 1);
  tree.chain_ = tree.multitree_ && std::all_of(tree.adjacency_.begin(), tree.adjacency_.end(),
                                               [](const auto& adj) { return adj.size() <= 2; });
  return tree;
}

SubdividedGraph::SubdividedGraph(const MetricGraph& mg) : metric_(mg) {
  const auto& g = mg.graph;
  original_ = g.vertex_count();
  names_ = g.vertex_ids();
  location_.assign(original_, std::nullopt);
  interior_.assign(g.edge_count(), {});
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (long k = 1; k < mg.chain[e]; ++k) {
      interior_[e].push_back(names_.size());
      names_.push_back(g.edge(e).id + "#" + std::to_string(k));
      location_.emplace_back(std::make_pair(e, k));
    }
  }
  adjacency_.assign(names_.size(), {});
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::size_t prev = g.edge(e).tail;
    for (long k = 1; k <= mg.chain[e]; ++k) {
      std::size_t next = point_on_edge(e, k);
      adjacency_[prev].push_back(next);
      adjacency_[next].push_back(prev);
      ++edge_count_;
      prev = next;
    }
  }
}

std::optional<std::size_t> SubdividedGraph::find_vertex(std::string_view name) const {
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return v;
  return std::nullopt;
}

std::size_t SubdividedGraph::point_on_edge(std::size_t e, long k) const {
  const auto& ed = metric_.graph.edge(e);
  long n = metric_.chain[e];
  if (k < 0 || k > n) throw Error("point lies outside the edge");
  if (k == 0) return ed.tail;
  if (k == n) return ed.head;
  return interior_[e][static_cast<std::size_t>(k - 1)];
}

std::size_t SubdividedGraph::step_from(std::size_t e, std::size_t v) const {
  const auto& ed = metric_.graph.edge(e);
  if (ed.tail == v) return point_on_edge(e, 1);
  if (ed.head == v) return point_on_edge(e, metric_.chain[e] - 1);
  throw Error("vertex is not incident on edge '" + ed.id + "'");
}

std::optional<std::pair<std::size_t, long>> SubdividedGraph::location(std::size_t v) const {
  return location_.at(v);
}

long genus(const Multigraph& g) {
  return static_cast<long>(g.edge_count()) - static_cast<long>(g.vertex_count()) + 1;
}

long genus(const SubdividedGraph& g) {
  return static_cast<long>(g.edge_count()) - static_cast<long>(g.vertex_count()) + 1;
}

}  // namespace troplift
