#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace spanauto {

/// A finite set of labelled elements. Element order is the insertion order
/// and is what indices refer to; equality ignores order.
///
/// The element storage is shared and immutable, so copies are cheap.
class FinSet {
 public:
  FinSet();
  FinSet(std::string id, std::vector<std::string> elements);

  const std::string& id() const { return data_->id; }
  std::size_t size() const { return data_->elements.size(); }
  bool empty() const { return data_->elements.empty(); }
  const std::vector<std::string>& elements() const { return data_->elements; }
  const std::string& operator[](std::size_t i) const { return data_->elements[i]; }

  std::optional<std::size_t> find(const std::string& label) const;
  /// Throws Error(unknown_element) when absent.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const { return find(label).has_value(); }

  /// Same elements in the same order (index-compatible).
  bool same_layout(const FinSet& other) const;

  friend bool operator==(const FinSet& a, const FinSet& b);

 private:
  struct Data {
    std::string id;
    std::vector<std::string> elements;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace spanauto
