#include "pathmine/output.hpp"

#include <ostream>

#include <json.hpp>

namespace pathmine {

namespace {

nlohmann::json attribute_json(const AttributeValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

}  // namespace

std::string to_json_line(const PatternTuple& tuple, bool with_embeddings) {
  nlohmann::ordered_json j;
  auto items = nlohmann::json::array();
  for (const auto& item : tuple.pattern.items) {
    auto values = nlohmann::json::array();
    for (const auto& v : item.values) values.push_back(attribute_json(v));
    items.push_back(std::move(values));
  }
  j["items"] = std::move(items);
  j["length"] = tuple.pattern.size();
  j["positive_support"] = tuple.supported.size();
  if (tuple.discriminative) {
    j["discriminative_support"] = *tuple.discriminative;
  } else {
    j["discriminative_support"] = nullptr;
  }
  if (with_embeddings) {
    nlohmann::ordered_json emb = nlohmann::ordered_json::object();
    for (const auto& [id, list] : tuple.embeddings) {
      auto arr = nlohmann::json::array();
      for (const auto& e : list) arr.push_back(e.positions);
      emb[id.patient] = std::move(arr);
    }
    j["embeddings"] = std::move(emb);
  }
  return j.dump();
}

std::size_t write_jsonl(std::ostream& out, const MiningResult& result, bool with_embeddings) {
  for (const auto& t : result.patterns) out << to_json_line(t, with_embeddings) << '\n';
  return result.patterns.size();
}

std::string to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["patients"] = r.patients;
  j["patients_with_index_event"] = r.with_index_event;
  j["delivery_facts"] = r.delivery_facts;
  j["disease_facts"] = r.disease_facts;
  j["kb_codes"] = r.kb_codes;
  j["taxonomy_edges"] = r.taxonomy_edges;
  j["skipped_unknown_codes"] = r.skipped_unknown_codes;
  j["positive_events"] = r.positive_events;
  j["negative_events"] = r.negative_events;
  j["pattern_count"] = r.pattern_count;
  j["nodes_explored"] = r.nodes_explored;
  j["wall_seconds"] = r.wall_seconds;
  j["complete"] = r.complete;
  j["configuration"] = r.configuration;
  return j.dump(2);
}

}  // namespace pathmine
