#include "roix/exploration_tree.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace roix {

const char* vertex_state_name(VertexState s) {
  switch (s) {
    case VertexState::Unexplored: return "unexplored";
    case VertexState::UnderExploration: return "under_exploration";
    case VertexState::Explored: return "explored";
  }
  return "?";
}

VertexState vertex_state_from_name(const std::string& name) {
  if (name == "unexplored") return VertexState::Unexplored;
  if (name == "under_exploration") return VertexState::UnderExploration;
  if (name == "explored") return VertexState::Explored;
  throw std::invalid_argument("unknown vertex state: " + name);
}

VertexId ExplorationTree::add_root(Cell cell) {
  if (root_ != kNoVertex) throw std::logic_error("tree already has a root");
  Vertex v;
  v.id = 0;
  v.cell = cell;
  v.anchor = cell;
  vertices_.push_back(v);
  by_cell_.emplace(cell, 0);
  root_ = 0;
  return 0;
}

VertexId ExplorationTree::add_child(VertexId parent, Cell cell) {
  Vertex& p = vertices_.at(parent);
  if (by_cell_.count(cell))
    throw std::logic_error("cell already present in the tree");
  if (p.children.size() >= 2)
    throw std::logic_error("parent already has two children; binarize first");

  Vertex v;
  v.id = static_cast<VertexId>(vertices_.size());
  v.cell = cell;
  v.anchor = cell;
  v.parent = parent;
  v.edge_length = 1;
  p.children.push_back(v.id);
  by_cell_.emplace(cell, v.id);
  vertices_.push_back(v);
  return v.id;
}

VertexId ExplorationTree::insert_dummy(VertexId parent) {
  Vertex& p = vertices_.at(parent);
  if (p.children.size() >= 2)
    throw std::logic_error("parent already has two children; cannot add dummy");

  Vertex v;
  v.id = static_cast<VertexId>(vertices_.size());
  v.cell = std::nullopt;
  v.anchor = p.anchor;
  v.parent = parent;
  v.edge_length = 0;
  p.children.push_back(v.id);
  vertices_.push_back(v);
  return v.id;
}

std::vector<VertexId> ExplorationTree::attach_children(VertexId parent,
                                                       std::span<const Cell> cells) {
  const std::size_t existing = vertices_.at(parent).children.size();
  const std::size_t n = cells.size();
  if (n == 0) return {};
  if (existing + n > 4 || (existing > 0 && existing + n > 2))
    throw std::logic_error("attach_children: too many pending children");

  std::vector<VertexId> ids;
  ids.reserve(n);
  if (existing + n <= 2) {
    for (const Cell& c : cells) ids.push_back(add_child(parent, c));
  } else if (n == 3) {
    // One dummy keeps the tree binary: first child direct, two under the dummy.
    ids.push_back(add_child(parent, cells[0]));
    VertexId d = insert_dummy(parent);
    ids.push_back(add_child(d, cells[1]));
    ids.push_back(add_child(d, cells[2]));
  } else {  // n == 4, only the root can sense four fresh neighbors
    VertexId d1 = insert_dummy(parent);
    VertexId d2 = insert_dummy(parent);
    ids.push_back(add_child(d1, cells[0]));
    ids.push_back(add_child(d1, cells[1]));
    ids.push_back(add_child(d2, cells[2]));
    ids.push_back(add_child(d2, cells[3]));
  }
  return ids;
}

void ExplorationTree::set_state(VertexId v, VertexState s) {
  Vertex& vx = vertices_.at(v);
  if (vx.state == s) return;
  const bool legal =
      (vx.state == VertexState::Unexplored && s == VertexState::UnderExploration) ||
      (vx.state == VertexState::UnderExploration && s == VertexState::Explored);
  if (!legal)
    throw std::logic_error(std::string("illegal vertex state transition: ") +
                           vertex_state_name(vx.state) + " -> " + vertex_state_name(s));
  vx.state = s;
}

VertexId ExplorationTree::vertex_for_cell(Cell c) const {
  auto it = by_cell_.find(c);
  return it == by_cell_.end() ? kNoVertex : it->second;
}

int ExplorationTree::depth(VertexId v) const {
  int d = 0;
  for (VertexId cur = v; cur != root_;) {
    const Vertex& vx = vertices_.at(cur);
    d += vx.edge_length;
    cur = vx.parent;
  }
  return d;
}

int ExplorationTree::total_edge_length() const {
  int L = 0;
  for (const Vertex& v : vertices_)
    if (v.id != root_) L += v.edge_length;
  return L;
}

int ExplorationTree::real_vertex_count() const {
  int n = 0;
  for (const Vertex& v : vertices_)
    if (!v.is_dummy()) ++n;
  return n;
}

bool ExplorationTree::all_explored() const {
  return std::all_of(vertices_.begin(), vertices_.end(),
                     [](const Vertex& v) { return v.state == VertexState::Explored; });
}

namespace {

// Ribs hang off the backbone at real vertices: a dummy junction carries no
// length and splits into the subtrees below it.
void collect_rib_roots(const std::vector<Vertex>& vertices,
                       const std::vector<VertexId>& backbone,
                       std::vector<VertexId>& rib_roots) {
  std::vector<char> on_backbone(vertices.size(), 0);
  for (VertexId v : backbone) on_backbone[v] = 1;
  for (VertexId b : backbone) {
    for (VertexId c : vertices[b].children) {
      if (on_backbone[c]) continue;
      std::vector<VertexId> stack{c};
      while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        if (vertices[v].is_dummy())
          for (VertexId g : vertices[v].children) stack.push_back(g);
        else
          rib_roots.push_back(v);
      }
    }
  }
}

// Deepest descendant distance below each vertex, computed without recursion.
std::vector<int> depths_below(const std::vector<Vertex>& vertices, VertexId root) {
  std::vector<int> below(vertices.size(), 0);
  std::vector<VertexId> order;
  order.reserve(vertices.size());
  std::vector<VertexId> stack{root};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (VertexId c : vertices[v].children) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex& v = vertices[*it];
    for (VertexId c : v.children)
      below[v.id] = std::max(below[v.id], vertices[c].edge_length + below[c]);
  }
  return below;
}

}  // namespace

BackboneDecomposition ExplorationTree::decompose() const {
  if (root_ == kNoVertex) throw std::logic_error("decompose on empty tree");
  const std::vector<int> below = depths_below(vertices_, root_);

  BackboneDecomposition d;
  d.max_depth = below[root_];
  VertexId cur = root_;
  d.backbone.push_back(cur);
  while (!vertices_[cur].children.empty()) {
    // Follow the deepest subtree; ties go to the smaller child index.
    VertexId next = kNoVertex;
    int best = -1;
    for (VertexId c : vertices_[cur].children) {
      const int reach = vertices_[c].edge_length + below[c];
      if (reach > best) {
        best = reach;
        next = c;
      }
    }
    d.backbone_length += vertices_[next].edge_length;
    d.backbone.push_back(next);
    cur = next;
  }
  collect_rib_roots(vertices_, d.backbone, d.rib_roots);
  return d;
}

BackboneDecomposition ExplorationTree::decompose_to(VertexId leaf) const {
  const Vertex& l = vertices_.at(leaf);
  if (!l.is_leaf()) throw std::logic_error("decompose_to target is not a leaf");

  BackboneDecomposition d;
  d.max_depth = depths_below(vertices_, root_)[root_];
  for (VertexId cur = leaf; cur != kNoVertex; cur = vertices_[cur].parent) {
    d.backbone.push_back(cur);
    if (cur != root_) d.backbone_length += vertices_[cur].edge_length;
  }
  std::reverse(d.backbone.begin(), d.backbone.end());
  collect_rib_roots(vertices_, d.backbone, d.rib_roots);
  return d;
}

std::string ExplorationTree::serialize() const {
  nlohmann::json j;
  j["format"] = "roix-tree-v1";
  j["root"] = root_;
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const Vertex& v : vertices_) {
    nlohmann::json jv;
    jv["id"] = v.id;
    if (v.is_dummy())
      jv["cell"] = nullptr;
    else
      jv["cell"] = {v.cell->x, v.cell->y};
    jv["anchor"] = {v.anchor.x, v.anchor.y};
    jv["state"] = vertex_state_name(v.state);
    jv["parent"] = v.parent;
    jv["children"] = v.children;
    jv["edge_length"] = v.edge_length;
    verts.push_back(std::move(jv));
  }
  return j.dump();
}

ExplorationTree ExplorationTree::deserialize(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.contains("format") || j["format"] != "roix-tree-v1")
    throw std::runtime_error("unrecognized tree document format");

  ExplorationTree t;
  t.root_ = j.at("root").get<VertexId>();
  for (const auto& jv : j.at("vertices")) {
    Vertex v;
    v.id = jv.at("id").get<VertexId>();
    if (!jv.at("cell").is_null())
      v.cell = Cell{jv["cell"].at(0).get<int>(), jv["cell"].at(1).get<int>()};
    v.anchor = Cell{jv.at("anchor").at(0).get<int>(), jv.at("anchor").at(1).get<int>()};
    v.state = vertex_state_from_name(jv.at("state").get<std::string>());
    v.parent = jv.at("parent").get<VertexId>();
    v.children = jv.at("children").get<std::vector<VertexId>>();
    v.edge_length = jv.at("edge_length").get<int>();
    if (v.id != static_cast<VertexId>(t.vertices_.size()))
      throw std::runtime_error("tree document has non-contiguous vertex ids");
    if (v.cell) t.by_cell_.emplace(*v.cell, v.id);
    t.vertices_.push_back(std::move(v));
  }
  if (t.root_ != 0 || t.vertices_.empty())
    throw std::runtime_error("tree document missing root");
  return t;
}

}  // namespace roix
