#include "pathmine/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "pathmine/error.hpp"

namespace pathmine {

std::string normalize_code(std::string_view code) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!code.empty() && is_space(code.front())) code.remove_prefix(1);
  while (!code.empty() && is_space(code.back())) code.remove_suffix(1);
  std::string out(code);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

Taxonomy::Taxonomy(std::vector<TaxonomyEdge> edges) : edges_(std::move(edges)) {
  std::map<std::string, std::vector<std::string>> parents;
  for (auto& [child, parent] : edges_) {
    child = normalize_code(child);
    parent = normalize_code(parent);
    parents[child].push_back(parent);
    parents.try_emplace(parent);
  }

  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark> mark;
  std::vector<std::string> path;

  // Depth-first over parent links; an edge back to an active node is a cycle.
  std::function<void(const std::string&)> visit = [&](const std::string& node) {
    mark[node] = Mark::kActive;
    path.push_back(node);
    std::set<std::string> closure{node};
    for (const auto& parent : parents[node]) {
      const Mark m = mark[parent];
      if (m == Mark::kActive) {
        auto start = std::find(path.begin(), path.end(), parent);
        std::string cycle;
        for (auto it = start; it != path.end(); ++it) cycle += *it + " -> ";
        cycle += parent;
        throw Error(Errc::kCycle, "taxonomy cycle: " + cycle);
      }
      if (m == Mark::kNone) visit(parent);
      const auto& up = closure_.at(parent);
      closure.insert(up.begin(), up.end());
    }
    closure_[node] = std::move(closure);
    path.pop_back();
    mark[node] = Mark::kDone;
  };

  for (const auto& [node, unused] : parents) {
    if (mark[node] == Mark::kNone) visit(node);
  }
}

std::set<std::string> Taxonomy::ancestors(const std::string& code) const {
  const std::string key = normalize_code(code);
  auto it = closure_.find(key);
  if (it == closure_.end()) return {key};
  return it->second;
}

bool Taxonomy::descends_from_any(const std::string& code,
                                 const std::set<std::string>& targets) const {
  const std::string key = normalize_code(code);
  auto it = closure_.find(key);
  if (it == closure_.end()) return targets.contains(key);
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const std::string& a) { return targets.contains(a); });
}

KnowledgeBase::KnowledgeBase(std::vector<CodeAttributes> attributes, Taxonomy taxonomy,
                             std::vector<std::string> extra_columns)
    : taxonomy_(std::move(taxonomy)), extra_columns_(std::move(extra_columns)) {
  for (auto& row : attributes) {
    row.delivery_code = normalize_code(row.delivery_code);
    row.therapeutic_class = normalize_code(row.therapeutic_class);
    row.speciality_group = normalize_code(row.speciality_group);
    if (row.generic_flag != 0 && row.generic_flag != 1) {
      throw Error(Errc::kParseError, "generic flag of " + row.delivery_code +
                                         " must be 0 or 1, got " +
                                         std::to_string(row.generic_flag));
    }
    auto [it, inserted] = table_.try_emplace(row.delivery_code, row);
    if (!inserted && !(it->second == row)) {
      throw Error(Errc::kDuplicateCode,
                  "conflicting attribute rows for delivery code " + row.delivery_code);
    }
  }
}

const CodeAttributes* KnowledgeBase::find(const std::string& delivery_code) const {
  auto it = table_.find(normalize_code(delivery_code));
  return it == table_.end() ? nullptr : &it->second;
}

const CodeAttributes& KnowledgeBase::at(const std::string& delivery_code) const {
  if (const auto* row = find(delivery_code)) return *row;
  throw Error(Errc::kUnknownCode, "delivery code " + delivery_code +
                                      " is absent from the attribute table");
}

std::vector<std::string> KnowledgeBase::attribute_names() const {
  std::vector<std::string> names{"cip", "atc", "group", "generic"};
  names.insert(names.end(), extra_columns_.begin(), extra_columns_.end());
  return names;
}

bool KnowledgeBase::has_attribute(const std::string& name) const {
  const auto names = attribute_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::optional<AttributeValue> KnowledgeBase::attribute(const CodeAttributes& row,
                                                       const std::string& name) const {
  if (name == "cip") return row.delivery_code;
  if (name == "atc") return row.therapeutic_class;
  if (name == "group") return row.speciality_group;
  if (name == "generic") return static_cast<std::int64_t>(row.generic_flag);
  for (std::size_t i = 0; i < extra_columns_.size(); ++i) {
    if (extra_columns_[i] == name) {
      return i < row.extras.size() ? row.extras[i] : std::string{};
    }
  }
  return std::nullopt;
}

std::optional<Item> KnowledgeBase::classify(const std::string& delivery_code,
                                            const std::set<std::string>& class_filter,
                                            const ItemSchema& schema) const {
  const CodeAttributes& row = at(delivery_code);
  if (!class_filter.contains(row.therapeutic_class)) return std::nullopt;
  Item item;
  item.values.reserve(schema.names.size());
  for (const auto& name : schema.names) {
    auto value = attribute(row, name);
    if (!value) throw Error(Errc::kUnknownAttribute, "attribute " + name);
    item.values.push_back(std::move(*value));
  }
  return item;
}

const ItemSchema& default_item_schema() {
  static const ItemSchema schema{{"atc", "group", "generic"}};
  return schema;
}

std::optional<Item> classify_delivery(const std::string& delivery_code,
                                      const KnowledgeBase& kb,
                                      const std::set<std::string>& class_filter) {
  std::set<std::string> normalized;
  for (const auto& c : class_filter) normalized.insert(normalize_code(c));
  return kb.classify(delivery_code, normalized, default_item_schema());
}

}  // namespace pathmine
