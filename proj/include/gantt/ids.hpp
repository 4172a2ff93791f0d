#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>

namespace gantt {

/// 1-based identifier with a phantom tag so node and tag ids never mix.
template <class Tag>
class Id {
 public:
  constexpr Id() = default;
  constexpr explicit Id(int value) : value_(value) {}

  static constexpr Id from_index(std::size_t index) { return Id(static_cast<int>(index) + 1); }

  constexpr int value() const { return value_; }
  constexpr std::size_t index() const { return static_cast<std::size_t>(value_ - 1); }

  constexpr auto operator<=>(const Id&) const = default;

 private:
  int value_ = 0;
};

struct NodeTag {};
struct TagTag {};

using NodeId = Id<NodeTag>;
using TagId = Id<TagTag>;

template <class Tag>
std::ostream& operator<<(std::ostream& os, Id<Tag> id) {
  return os << id.value();
}

}  // namespace gantt

template <class Tag>
struct std::hash<gantt::Id<Tag>> {
  std::size_t operator()(gantt::Id<Tag> id) const noexcept { return std::hash<int>{}(id.value()); }
};
