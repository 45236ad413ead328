#include "mnread/mdd.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "mnread/errors.hpp"

namespace mnread {
namespace {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct ArcVectorHash {
  std::size_t operator()(const std::vector<Arc>& arcs) const noexcept {
    std::size_t h = arcs.size();
    for (const Arc& a : arcs) {
      std::uint64_t v = (std::uint64_t{a.label} << 32) | a.child;
      v ^= v >> 33;
      v *= 0xff51afd7ed558ccdULL;
      v ^= v >> 33;
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

bool arc_label_less(const Arc& a, const Arc& b) { return a.label < b.label; }

}  // namespace

Mdd::Mdd(std::size_t depth, std::shared_ptr<LabelTable> labels)
    : depth_(depth), labels_(std::move(labels)) {
  if (depth_ == 0) throw ArityError("an MDD needs at least one layer");
  if (!labels_) labels_ = std::make_shared<LabelTable>();
  add_node(0);
  add_node(static_cast<std::uint32_t>(depth_));
}

NodeId Mdd::add_node(std::uint32_t level) {
  const auto id = static_cast<NodeId>(levels_.size());
  levels_.push_back(level);
  arcs_.emplace_back();
  indegree_.push_back(0);
  return id;
}

void Mdd::add_arc(NodeId from, LabelId label, NodeId to) {
  auto& out = arcs_[from];
  auto pos = std::upper_bound(out.begin(), out.end(), Arc{label, 0}, arc_label_less);
  out.insert(pos, Arc{label, to});
  ++indegree_[to];
}

std::optional<NodeId> Mdd::child(NodeId node, LabelId label) const {
  const auto& out = arcs_[node];
  auto it = std::lower_bound(out.begin(), out.end(), Arc{label, 0}, arc_label_less);
  if (it == out.end() || it->label != label) return std::nullopt;
  return it->child;
}

std::optional<NodeId> Mdd::walk(std::span<const LabelId> prefix) const {
  NodeId node = kRoot;
  for (LabelId label : prefix) {
    auto next = child(node, label);
    if (!next) return std::nullopt;
    node = *next;
  }
  return node;
}

void Mdd::insert(std::span<const LabelId> tuple) {
  if (tuple.size() != depth_) {
    throw ArityError("tuple of length " + std::to_string(tuple.size()) +
                     " inserted into an MDD with " + std::to_string(depth_) + " layers");
  }
  NodeId node = kRoot;
  for (std::size_t i = 0; i < depth_; ++i) {
    const LabelId label = tuple[i];
    auto& out = arcs_[node];
    auto it = std::lower_bound(out.begin(), out.end(), Arc{label, 0}, arc_label_less);
    const bool found = it != out.end() && it->label == label;
    if (i + 1 == depth_) {
      if (!found) add_arc(node, label, kTerminal);
      return;
    }
    if (!found) {
      const NodeId fresh = add_node(static_cast<std::uint32_t>(i + 1));
      add_arc(node, label, fresh);
      node = fresh;
      continue;
    }
    NodeId next = it->child;
    if (indegree_[next] > 1) {
      // copy-on-write: the new suffix must not leak into other parents
      const NodeId copy = add_node(levels_[next]);
      arcs_[copy] = arcs_[next];
      for (const Arc& a : arcs_[copy]) ++indegree_[a.child];
      --indegree_[next];
      ++indegree_[copy];
      // `out` may have been invalidated by add_node
      auto& parent = arcs_[node];
      auto pit = std::lower_bound(parent.begin(), parent.end(), Arc{label, 0}, arc_label_less);
      pit->child = copy;
      next = copy;
    }
    node = next;
  }
}

void Mdd::insert(std::span<const std::string> tuple) {
  std::vector<LabelId> ids;
  ids.reserve(tuple.size());
  for (const auto& word : tuple) ids.push_back(labels_->intern(word));
  insert(std::span<const LabelId>(ids));
}

void Mdd::insert(std::initializer_list<std::string_view> tuple) {
  std::vector<LabelId> ids;
  ids.reserve(tuple.size());
  for (auto word : tuple) ids.push_back(labels_->intern(word));
  insert(std::span<const LabelId>(ids));
}

bool Mdd::contains(std::span<const LabelId> tuple) const {
  if (tuple.size() != depth_) return false;
  auto end = walk(tuple);
  return end && *end == kTerminal;
}

std::vector<std::uint8_t> Mdd::live_mask() const {
  const std::size_t n = levels_.size();
  std::vector<std::uint8_t> reach(n, 0);
  std::vector<NodeId> stack{kRoot};
  reach[kRoot] = 1;
  while (!stack.empty()) {
    const NodeId node = stack.back();
    stack.pop_back();
    for (const Arc& a : arcs_[node]) {
      if (!reach[a.child]) {
        reach[a.child] = 1;
        stack.push_back(a.child);
      }
    }
  }

  // reverse adjacency in CSR form, restricted to reachable nodes
  std::vector<std::uint32_t> offset(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (!reach[v]) continue;
    for (const Arc& a : arcs_[v]) ++offset[a.child + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
  std::vector<NodeId> parents(offset[n]);
  std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
  for (NodeId v = 0; v < n; ++v) {
    if (!reach[v]) continue;
    for (const Arc& a : arcs_[v]) parents[fill[a.child]++] = v;
  }

  std::vector<std::uint8_t> live(n, 0);
  if (!reach[kTerminal]) return live;
  live[kTerminal] = 1;
  stack.assign(1, kTerminal);
  while (!stack.empty()) {
    const NodeId node = stack.back();
    stack.pop_back();
    for (std::uint32_t i = offset[node]; i < offset[node + 1]; ++i) {
      const NodeId p = parents[i];
      if (!live[p]) {
        live[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return live;
}

std::vector<std::vector<NodeId>> Mdd::live_layers() const {
  const auto live = live_mask();
  std::vector<std::vector<NodeId>> layers(depth_ + 1);
  for (NodeId v = 0; v < levels_.size(); ++v) {
    if (live[v]) layers[levels_[v]].push_back(v);
  }
  return layers;
}

std::size_t Mdd::node_count() const {
  const auto live = live_mask();
  if (!live[kRoot]) return 0;
  return static_cast<std::size_t>(std::count(live.begin(), live.end(), std::uint8_t{1}));
}

std::size_t Mdd::arc_count() const {
  const auto live = live_mask();
  if (!live[kRoot]) return 0;
  std::size_t total = 0;
  for (NodeId v = 0; v < levels_.size(); ++v) {
    if (!live[v]) continue;
    for (const Arc& a : arcs_[v]) total += live[a.child];
  }
  return total;
}

SolutionCount Mdd::count_paths() const {
  const auto layers = live_layers();
  if (layers[0].empty()) return 0;
  std::vector<SolutionCount> count(levels_.size());
  count[kTerminal] = 1;
  for (std::size_t level = depth_; level-- > 0;) {
    for (NodeId v : layers[level]) {
      SolutionCount total = 0;
      for (const Arc& a : arcs_[v]) total += count[a.child];
      count[v] = std::move(total);
    }
  }
  return count[kRoot];
}

std::size_t Mdd::enumerate(std::optional<std::size_t> limit,
                           const std::function<void(std::span<const LabelId>)>& visit) const {
  if (limit && *limit == 0) return 0;
  const auto live = live_mask();
  if (!live[kRoot]) return 0;
  const auto rank = labels_->lexicographic_ranks();

  struct Frame {
    std::vector<Arc> arcs;
    std::size_t next = 0;
  };
  auto expand = [&](NodeId node) {
    Frame f;
    for (const Arc& a : arcs_[node]) {
      if (live[a.child]) f.arcs.push_back(a);
    }
    std::sort(f.arcs.begin(), f.arcs.end(),
              [&](const Arc& x, const Arc& y) { return rank[x.label] < rank[y.label]; });
    return f;
  };

  std::vector<Frame> stack;
  std::vector<LabelId> tuple;
  tuple.reserve(depth_);
  stack.push_back(expand(kRoot));
  std::size_t emitted = 0;
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.arcs.size()) {
      stack.pop_back();
      if (!tuple.empty()) tuple.pop_back();
      continue;
    }
    const Arc arc = top.arcs[top.next++];
    tuple.push_back(arc.label);
    if (arc.child == kTerminal) {
      visit(std::span<const LabelId>(tuple));
      tuple.pop_back();
      ++emitted;
      if (limit && emitted == *limit) return emitted;
      continue;
    }
    stack.push_back(expand(arc.child));
  }
  return emitted;
}

Mdd Mdd::trim() const {
  const auto live = live_mask();
  Mdd out(depth_, labels_);
  if (!live[kRoot]) return out;
  std::vector<NodeId> remap(levels_.size(), kNoNode);
  remap[kRoot] = kRoot;
  remap[kTerminal] = kTerminal;
  for (NodeId v = 0; v < levels_.size(); ++v) {
    if (live[v] && remap[v] == kNoNode) remap[v] = out.add_node(levels_[v]);
  }
  for (NodeId v = 0; v < levels_.size(); ++v) {
    if (!live[v]) continue;
    auto& dst = out.arcs_[remap[v]];
    for (const Arc& a : arcs_[v]) {
      if (!live[a.child]) continue;
      dst.push_back(Arc{a.label, remap[a.child]});
      ++out.indegree_[remap[a.child]];
    }
  }
  return out;
}

Mdd Mdd::reduce() const {
  const auto layers = live_layers();
  Mdd out(depth_, labels_);
  if (layers[0].empty()) return out;

  // Bottom-up: each live node maps to an equivalence class whose signature
  // is its (label, child-class) list. Class 0 is the terminal.
  std::vector<NodeId> cls(levels_.size(), kNoNode);
  cls[kTerminal] = 0;
  std::vector<std::vector<Arc>> class_arcs(1);
  std::vector<std::uint32_t> class_level{static_cast<std::uint32_t>(depth_)};
  std::unordered_map<std::vector<Arc>, NodeId, ArcVectorHash> seen;
  for (std::size_t level = depth_; level-- > 0;) {
    seen.clear();
    for (NodeId v : layers[level]) {
      std::vector<Arc> sig;
      sig.reserve(arcs_[v].size());
      for (const Arc& a : arcs_[v]) {
        if (cls[a.child] != kNoNode) sig.push_back(Arc{a.label, cls[a.child]});
      }
      // arcs are label-sorted; equal (label, class) duplicates collapse
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, inserted] = seen.try_emplace(sig, static_cast<NodeId>(class_arcs.size()));
      if (inserted) {
        class_arcs.push_back(std::move(sig));
        class_level.push_back(static_cast<std::uint32_t>(level));
      }
      cls[v] = it->second;
    }
  }

  // Top-down renumbering in breadth-first, label order for a canonical id
  // assignment.
  std::vector<NodeId> new_id(class_arcs.size(), kNoNode);
  new_id[0] = kTerminal;
  const NodeId root_class = cls[kRoot];
  new_id[root_class] = kRoot;
  std::deque<NodeId> queue{root_class};
  while (!queue.empty()) {
    const NodeId c = queue.front();
    queue.pop_front();
    for (const Arc& a : class_arcs[c]) {
      if (new_id[a.child] == kNoNode) {
        new_id[a.child] = out.add_node(class_level[a.child]);
        queue.push_back(a.child);
      }
    }
    auto& dst = out.arcs_[new_id[c]];
    dst.reserve(class_arcs[c].size());
    for (const Arc& a : class_arcs[c]) {
      dst.push_back(Arc{a.label, new_id[a.child]});
      ++out.indegree_[new_id[a.child]];
    }
  }
  return out;
}

Mdd Mdd::relabel(std::shared_ptr<LabelTable> target, bool intern_missing) const {
  if (target.get() == labels_.get()) return *this;
  std::vector<std::optional<LabelId>> map(labels_->size());
  for (LabelId id = 0; id < labels_->size(); ++id) {
    map[id] = intern_missing ? std::optional<LabelId>(target->intern(labels_->name(id)))
                             : target->find(labels_->name(id));
  }
  Mdd out(depth_, std::move(target));
  out.levels_ = levels_;
  out.arcs_.assign(arcs_.size(), {});
  out.indegree_.assign(indegree_.size(), 0);
  for (NodeId v = 0; v < arcs_.size(); ++v) {
    auto& dst = out.arcs_[v];
    for (const Arc& a : arcs_[v]) {
      if (!map[a.label]) continue;
      dst.push_back(Arc{*map[a.label], a.child});
      ++out.indegree_[a.child];
    }
    std::stable_sort(dst.begin(), dst.end(), arc_label_less);
  }
  return out;
}

std::vector<std::vector<std::string>> Mdd::paths(std::optional<std::size_t> limit) const {
  std::vector<std::vector<std::string>> out;
  enumerate(limit, [&](std::span<const LabelId> tuple) {
    std::vector<std::string> words;
    words.reserve(tuple.size());
    for (LabelId id : tuple) words.push_back(labels_->name(id));
    out.push_back(std::move(words));
  });
  return out;
}

Mdd intersect(const Mdd& a, const Mdd& b_in) {
  if (a.depth() != b_in.depth()) {
    throw ArityError("cannot intersect MDDs of depth " + std::to_string(a.depth()) + " and " +
                     std::to_string(b_in.depth()));
  }
  const Mdd b = b_in.relabel(a.label_table(), /*intern_missing=*/false);
  Mdd out(a.depth(), a.label_table());
  const std::size_t depth = a.depth();

  using Pair = std::pair<NodeId, NodeId>;
  std::vector<Pair> frontier{{a.root(), b.root()}};
  std::vector<NodeId> frontier_ids{out.root()};
  std::unordered_map<std::uint64_t, NodeId> next_ids;
  for (std::size_t level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<Pair> next;
    std::vector<NodeId> next_node;
    next_ids.clear();
    const bool last = level + 1 == depth;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      auto [u, v] = frontier[i];
      auto ua = a.arcs(u);
      auto vb = b.arcs(v);
      std::size_t p = 0, q = 0;
      while (p < ua.size() && q < vb.size()) {
        if (ua[p].label < vb[q].label) {
          ++p;
        } else if (vb[q].label < ua[p].label) {
          ++q;
        } else {
          const Arc x = ua[p++];
          const Arc y = vb[q++];
          if (last) {
            if (x.child == a.terminal() && y.child == b.terminal()) {
              out.add_arc(frontier_ids[i], x.label, out.terminal());
            }
            continue;
          }
          const std::uint64_t key = (std::uint64_t{x.child} << 32) | y.child;
          auto [it, inserted] = next_ids.try_emplace(key, 0);
          if (inserted) {
            it->second = out.add_node(static_cast<std::uint32_t>(level + 1));
            next.emplace_back(x.child, y.child);
            next_node.push_back(it->second);
          }
          out.add_arc(frontier_ids[i], x.label, it->second);
        }
      }
    }
    frontier = std::move(next);
    frontier_ids = std::move(next_node);
  }
  return out.reduce();
}

Mdd build_weighted_sum_mdd(const std::vector<std::vector<WeightedLabel>>& layers,
                           std::int64_t lo, std::int64_t hi,
                           std::shared_ptr<LabelTable> labels) {
  if (layers.empty()) throw ArityError("a sum MDD needs at least one layer");
  const std::size_t depth = layers.size();
  Mdd out(depth, std::move(labels));
  if (lo > hi) return out;
  for (const auto& layer : layers) {
    if (layer.empty()) return out;
  }

  // min_rest[i] / max_rest[i]: extreme sums reachable over layers i..depth-1
  std::vector<std::int64_t> min_rest(depth + 1, 0), max_rest(depth + 1, 0);
  for (std::size_t i = depth; i-- > 0;) {
    auto [mn, mx] = std::minmax_element(
        layers[i].begin(), layers[i].end(),
        [](const WeightedLabel& x, const WeightedLabel& y) { return x.weight < y.weight; });
    min_rest[i] = min_rest[i + 1] + mn->weight;
    max_rest[i] = max_rest[i + 1] + mx->weight;
  }
  if (min_rest[0] > hi || max_rest[0] < lo) return out;

  std::vector<std::pair<std::int64_t, NodeId>> frontier{{0, out.root()}};
  for (std::size_t level = 0; level < depth; ++level) {
    std::unordered_map<std::int64_t, NodeId> next_ids;
    std::vector<std::pair<std::int64_t, NodeId>> next;
    const bool last = level + 1 == depth;
    for (auto [sum, node] : frontier) {
      for (const WeightedLabel& wl : layers[level]) {
        const std::int64_t s = sum + wl.weight;
        if (s + min_rest[level + 1] > hi || s + max_rest[level + 1] < lo) continue;
        if (last) {
          out.add_arc(node, wl.label, out.terminal());
          continue;
        }
        auto [it, inserted] = next_ids.try_emplace(s, 0);
        if (inserted) {
          it->second = out.add_node(static_cast<std::uint32_t>(level + 1));
          next.emplace_back(s, it->second);
        }
        out.add_arc(node, wl.label, it->second);
      }
    }
    frontier = std::move(next);
  }
  return out.reduce();
}

Mdd build_sum_mdd(const std::vector<std::vector<std::int64_t>>& domains, std::int64_t lo,
                  std::int64_t hi) {
  auto labels = std::make_shared<LabelTable>();
  std::vector<std::vector<WeightedLabel>> layers;
  layers.reserve(domains.size());
  for (const auto& domain : domains) {
    auto& layer = layers.emplace_back();
    std::vector<std::int64_t> values(domain.begin(), domain.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::int64_t v : values) layer.push_back({labels->intern(std::to_string(v)), v});
  }
  return build_weighted_sum_mdd(layers, lo, hi, std::move(labels));
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNondeterministic: return "nondeterministic";
    case ViolationKind::kCrossLayer: return "cross-layer";
    case ViolationKind::kUnreachable: return "unreachable";
    case ViolationKind::kNotCoreachable: return "not-coreachable";
    case ViolationKind::kBadTerminal: return "bad-terminal";
  }
  return "unknown";
}

std::vector<Violation> validate(const Mdd& mdd) {
  std::vector<Violation> out;
  const std::size_t n = mdd.node_capacity();
  if (mdd.level(mdd.root()) != 0) {
    out.push_back({ViolationKind::kBadTerminal, mdd.root(), "root is not on layer 0"});
  }
  if (mdd.level(mdd.terminal()) != mdd.depth() || !mdd.arcs(mdd.terminal()).empty()) {
    out.push_back({ViolationKind::kBadTerminal, mdd.terminal(),
                   "terminal must sit on the last layer with no outgoing arcs"});
  }
  for (NodeId v = 0; v < n; ++v) {
    auto arcs = mdd.arcs(v);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (i > 0 && arcs[i].label == arcs[i - 1].label &&
          (i == 1 || arcs[i - 2].label != arcs[i].label)) {
        out.push_back({ViolationKind::kNondeterministic, v,
                       "duplicate label '" + mdd.labels().name(arcs[i].label) + "'"});
      }
      if (mdd.level(arcs[i].child) != mdd.level(v) + 1) {
        out.push_back({ViolationKind::kCrossLayer, v,
                       "arc to node " + std::to_string(arcs[i].child) + " on layer " +
                           std::to_string(mdd.level(arcs[i].child))});
      }
    }
  }

  std::vector<std::uint8_t> reach(n, 0);
  std::vector<NodeId> stack{mdd.root()};
  reach[mdd.root()] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const Arc& a : mdd.arcs(v)) {
      if (!reach[a.child]) {
        reach[a.child] = 1;
        stack.push_back(a.child);
      }
    }
  }
  // co-reachability by fixpoint over the reachable part; tolerant of cycles
  std::vector<std::uint8_t> co(n, 0);
  co[mdd.terminal()] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId v = 0; v < n; ++v) {
      if (co[v] || !reach[v]) continue;
      for (const Arc& a : mdd.arcs(v)) {
        if (co[a.child]) {
          co[v] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (v == mdd.root() || v == mdd.terminal()) continue;
    if (!reach[v]) {
      out.push_back({ViolationKind::kUnreachable, v, "no path from the root"});
    } else if (!co[v]) {
      out.push_back({ViolationKind::kNotCoreachable, v, "no path to the terminal"});
    }
  }
  return out;
}

void save_mdd(const Mdd& mdd, std::ostream& out) {
  const LabelTable& labels = mdd.labels();
  out << "mnread-mdd 1\n";
  out << "depth " << mdd.depth() << '\n';
  out << "labels " << labels.size() << '\n';
  for (LabelId id = 0; id < labels.size(); ++id) {
    const std::string& name = labels.name(id);
    if (name.find_first_of("\r\n") != std::string::npos) {
      throw FormatError("label contains a line break: cannot serialize", 0);
    }
    out << name << '\n';
  }
  out << "nodes " << mdd.node_capacity() << '\n';
  for (NodeId v = 0; v < mdd.node_capacity(); ++v) {
    auto arcs = mdd.arcs(v);
    out << mdd.level(v) << ' ' << arcs.size();
    for (const Arc& a : arcs) out << ' ' << a.label << ' ' << a.child;
    out << '\n';
  }
  out << "end\n";
  if (!out) throw IoError("failed writing MDD");
}

Mdd load_mdd(std::istream& in, std::shared_ptr<LabelTable> labels) {
  std::size_t line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw FormatError("truncated MDD file", line_no + 1);
    ++line_no;
    return line;
  };
  auto expect_count = [&](std::string_view key) {
    std::istringstream fields(next_line());
    std::string got;
    std::size_t value = 0;
    if (!(fields >> got >> value) || got != key) {
      throw FormatError("expected '" + std::string(key) + " <n>'", line_no);
    }
    return value;
  };

  if (next_line() != "mnread-mdd 1") throw FormatError("not an mnread-mdd v1 file", line_no);
  const std::size_t depth = expect_count("depth");
  const std::size_t nlabels = expect_count("labels");
  auto own = std::make_shared<LabelTable>();
  std::vector<LabelId> map(nlabels);
  for (std::size_t i = 0; i < nlabels; ++i) {
    const std::string& name = next_line();
    if (i == 0 && !name.empty()) throw FormatError("label 0 must be the empty word", line_no);
    map[i] = labels ? labels->intern(name) : own->intern(name);
    if (!labels && map[i] != i) throw FormatError("duplicate label '" + name + "'", line_no);
  }
  const std::size_t nnodes = expect_count("nodes");
  if (nnodes < 2) throw FormatError("an MDD has at least root and terminal", line_no);

  Mdd mdd(depth, labels ? labels : own);
  std::vector<std::vector<Arc>> pending(nnodes);
  for (std::size_t v = 0; v < nnodes; ++v) {
    std::istringstream fields(next_line());
    std::uint32_t level = 0;
    std::size_t count = 0;
    if (!(fields >> level >> count)) throw FormatError("bad node record", line_no);
    if (v >= 2) {
      mdd.add_node(level);
    } else if (level != (v == 0 ? 0 : depth)) {
      throw FormatError("root/terminal on wrong layer", line_no);
    }
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t label = 0, child = 0;
      if (!(fields >> label >> child)) throw FormatError("bad arc record", line_no);
      if (label >= nlabels || child >= nnodes) throw FormatError("arc out of range", line_no);
      pending[v].push_back(Arc{map[label], static_cast<NodeId>(child)});
    }
  }
  if (next_line() != "end") throw FormatError("missing end marker", line_no);
  for (NodeId v = 0; v < nnodes; ++v) {
    for (const Arc& a : pending[v]) mdd.add_arc(v, a.label, a.child);
  }
  return mdd;
}

void save_mdd(const Mdd& mdd, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save_mdd(mdd, out);
}

Mdd load_mdd(const std::string& path, std::shared_ptr<LabelTable> labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_mdd(in, std::move(labels));
}

}  // namespace mnread
