#include "mnread/labels.hpp"

#include <algorithm>
#include <numeric>

namespace mnread {

LabelTable::LabelTable() { intern(""); }

LabelTable::LabelTable(const LabelTable& other) : names_(other.names_) {
  rebuild_index();
}

LabelTable& LabelTable::operator=(const LabelTable& other) {
  if (this != &other) {
    names_ = other.names_;
    rebuild_index();
  }
  return *this;
}

void LabelTable::rebuild_index() {
  ids_.clear();
  ids_.reserve(names_.size());
  for (LabelId id = 0; id < names_.size(); ++id) ids_.emplace(names_[id], id);
}

LabelId LabelTable::intern(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const auto id = static_cast<LabelId>(names_.size());
  // deque keeps element addresses stable, so the view key stays valid
  const std::string& stored = names_.emplace_back(name);
  ids_.emplace(stored, id);
  return id;
}

std::optional<LabelId> LabelTable::find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::uint32_t> LabelTable::lexicographic_ranks() const {
  std::vector<LabelId> order(names_.size());
  std::iota(order.begin(), order.end(), LabelId{0});
  std::sort(order.begin(), order.end(),
            [this](LabelId a, LabelId b) { return names_[a] < names_[b]; });
  std::vector<std::uint32_t> rank(names_.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

}  // namespace mnread
