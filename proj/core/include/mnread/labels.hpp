#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mnread {

using LabelId = std::uint32_t;

/// The empty word. Every table interns it first, so its id is always 0.
inline constexpr LabelId kEpsilon = 0;

/// Interned arc labels shared by all MDDs built over the same vocabulary.
class LabelTable {
 public:
  LabelTable();
  LabelTable(const LabelTable& other);
  LabelTable& operator=(const LabelTable& other);
  LabelTable(LabelTable&&) noexcept = default;
  LabelTable& operator=(LabelTable&&) noexcept = default;

  LabelId intern(std::string_view name);
  std::optional<LabelId> find(std::string_view name) const;
  const std::string& name(LabelId id) const { return names_[id]; }
  std::size_t size() const noexcept { return names_.size(); }

  /// rank[id] orders labels lexicographically by their string.
  std::vector<std::uint32_t> lexicographic_ranks() const;

 private:
  void rebuild_index();

  std::deque<std::string> names_;
  std::unordered_map<std::string_view, LabelId> ids_;
};

}  // namespace mnread
