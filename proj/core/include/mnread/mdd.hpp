#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mnread/labels.hpp"

namespace mnread {

using NodeId = std::uint32_t;

/// Exact number of root-to-terminal paths.
using SolutionCount = boost::multiprecision::cpp_int;

struct Arc {
  LabelId label;
  NodeId child;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Layered multi-valued decision diagram.
///
/// Layer i holds the nodes deciding variable X_i; the root sits alone on
/// layer 0 and the terminal `tt` alone on layer `depth()`. Every
/// root-to-terminal path spells one solution tuple. Nodes live in an arena
/// indexed by NodeId; each node's arcs are kept sorted by label id.
///
/// `insert` and `add_arc` mutate in place. `reduce`, `trim` and
/// `intersect` return new diagrams sharing the label table.
class Mdd {
 public:
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kTerminal = 1;

  explicit Mdd(std::size_t depth,
               std::shared_ptr<LabelTable> labels = std::make_shared<LabelTable>());

  std::size_t depth() const noexcept { return depth_; }
  NodeId root() const noexcept { return kRoot; }
  NodeId terminal() const noexcept { return kTerminal; }

  LabelTable& labels() noexcept { return *labels_; }
  const LabelTable& labels() const noexcept { return *labels_; }
  const std::shared_ptr<LabelTable>& label_table() const noexcept { return labels_; }

  /// Arena size, including nodes that may be dead before `trim`.
  std::size_t node_capacity() const noexcept { return levels_.size(); }
  std::uint32_t level(NodeId node) const { return levels_[node]; }
  std::span<const Arc> arcs(NodeId node) const { return arcs_[node]; }
  std::optional<NodeId> child(NodeId node, LabelId label) const;

  /// Walks `prefix` from the root; nullopt when the walk leaves the diagram.
  std::optional<NodeId> walk(std::span<const LabelId> prefix) const;

  /// Raw construction. No determinism or layering checks: `validate`
  /// reports what these calls may break.
  NodeId add_node(std::uint32_t level);
  void add_arc(NodeId from, LabelId label, NodeId to);

  /// Adds one solution tuple. Shared nodes along the path are copied first,
  /// so the path set grows by exactly this tuple.
  void insert(std::span<const LabelId> tuple);
  void insert(std::span<const std::string> tuple);
  void insert(std::initializer_list<std::string_view> tuple);

  bool contains(std::span<const LabelId> tuple) const;

  bool empty() const { return arcs_[kRoot].empty(); }

  /// Live node count (nodes on some root-to-terminal path), 0 when empty.
  std::size_t node_count() const;
  /// Arcs between live nodes.
  std::size_t arc_count() const;

  SolutionCount count_paths() const;

  /// Visits up to `limit` solutions in depth-first order, arcs taken in
  /// lexicographic order of their label strings. Returns the number visited.
  std::size_t enumerate(std::optional<std::size_t> limit,
                        const std::function<void(std::span<const LabelId>)>& visit) const;

  /// Copy holding only nodes that are reachable and co-reachable.
  Mdd trim() const;

  /// Canonical reduced form: trimmed, and no two nodes of a layer share an
  /// outgoing signature. Same path set gives an isomorphic result.
  Mdd reduce() const;

  /// Same structure re-expressed over another label table. Labels unknown
  /// to `target` are interned when `intern_missing`, dropped otherwise.
  Mdd relabel(std::shared_ptr<LabelTable> target, bool intern_missing = true) const;

  /// Tuples of label strings, mostly for tests and debugging.
  std::vector<std::vector<std::string>> paths(
      std::optional<std::size_t> limit = std::nullopt) const;

 private:
  std::vector<std::vector<NodeId>> live_layers() const;
  std::vector<std::uint8_t> live_mask() const;

  std::size_t depth_;
  std::shared_ptr<LabelTable> labels_;
  std::vector<std::uint32_t> levels_;
  std::vector<std::vector<Arc>> arcs_;
  std::vector<std::uint32_t> indegree_;
};

/// Path set equal to paths(a) ∩ paths(b); trimmed and reduced. Labels are
/// matched by string when the tables differ. Throws ArityError on a depth
/// mismatch.
Mdd intersect(const Mdd& a, const Mdd& b);

struct WeightedLabel {
  LabelId label;
  std::int64_t weight;
};

/// Reduced MDD of all tuples, one label per layer from `layers[i]`, whose
/// weights sum into [lo, hi].
Mdd build_weighted_sum_mdd(const std::vector<std::vector<WeightedLabel>>& layers,
                           std::int64_t lo, std::int64_t hi,
                           std::shared_ptr<LabelTable> labels);

/// Sum MDD over integer domains; labels are the decimal spellings of the
/// values.
Mdd build_sum_mdd(const std::vector<std::vector<std::int64_t>>& domains,
                  std::int64_t lo, std::int64_t hi);

enum class ViolationKind {
  kNondeterministic,
  kCrossLayer,
  kUnreachable,
  kNotCoreachable,
  kBadTerminal,
};

struct Violation {
  ViolationKind kind;
  NodeId node;
  std::string detail;
};

std::string_view to_string(ViolationKind kind);

/// Structural check; an empty result means the diagram is well formed.
std::vector<Violation> validate(const Mdd& mdd);

/// Versioned line format: header, label table, then one record per node.
void save_mdd(const Mdd& mdd, std::ostream& out);
/// When `labels` is given the loaded diagram is remapped onto that table.
Mdd load_mdd(std::istream& in, std::shared_ptr<LabelTable> labels = nullptr);

void save_mdd(const Mdd& mdd, const std::string& path);
Mdd load_mdd(const std::string& path, std::shared_ptr<LabelTable> labels = nullptr);

}  // namespace mnread
