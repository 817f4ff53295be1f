#include "spanauto/finset.hpp"

#include "spanauto/error.hpp"

namespace spanauto {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::input: return "input-error";
    case ErrorCode::mismatch: return "mismatch";
    case ErrorCode::unknown_element: return "unknown-element";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::bound_exceeded: return "bound-exceeded";
    case ErrorCode::not_natural: return "not-natural";
  }
  return "error";
}

FinSet::FinSet() : data_(std::make_shared<const Data>()) {}

FinSet::FinSet(std::string id, std::vector<std::string> elements) {
  auto data = std::make_shared<Data>();
  data->id = std::move(id);
  data->index.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!data->index.emplace(elements[i], i).second)
      throw Error(ErrorCode::input,
                  "duplicate element '" + elements[i] + "' in set '" + data->id + "'");
  }
  data->elements = std::move(elements);
  data_ = std::move(data);
}

std::optional<std::size_t> FinSet::find(const std::string& label) const {
  auto it = data_->index.find(label);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t FinSet::index_of(const std::string& label) const {
  auto it = data_->index.find(label);
  if (it == data_->index.end())
    throw Error(ErrorCode::unknown_element,
                "element '" + label + "' not in set '" + data_->id + "'");
  return it->second;
}

bool FinSet::same_layout(const FinSet& other) const {
  return data_ == other.data_ || data_->elements == other.data_->elements;
}

bool operator==(const FinSet& a, const FinSet& b) {
  if (a.data_ == b.data_) return true;
  if (a.size() != b.size()) return false;
  for (const auto& e : a.elements())
    if (!b.contains(e)) return false;
  return true;
}

}  // namespace spanauto
