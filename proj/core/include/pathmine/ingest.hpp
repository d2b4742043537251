#pragma once

// Flat-file loaders for the raw event database and the knowledge base.
//
//   deliveries.csv      patient,day,cip,qty
//   diseases.csv        patient,day,icd
//   kb_attributes.csv   cip,atc,group,generic[,extra...]
//   taxonomy.csv        child,parent
//
// Comma separated, header row required, days are non-negative integers.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pathmine/knowledge_base.hpp"

namespace pathmine {

struct DeliveryFact {
  std::string patient;
  std::int64_t day = 0;
  std::string cip;
  std::int64_t quantity = 1;

  friend bool operator==(const DeliveryFact&, const DeliveryFact&) = default;
  friend auto operator<=>(const DeliveryFact&, const DeliveryFact&) = default;
};

struct DiseaseFact {
  std::string patient;
  std::int64_t day = 0;
  std::string icd;

  friend bool operator==(const DiseaseFact&, const DiseaseFact&) = default;
  friend auto operator<=>(const DiseaseFact&, const DiseaseFact&) = default;
};

struct RawDatabase {
  std::vector<DeliveryFact> deliveries;
  std::vector<DiseaseFact> diseases;

  /// Stable sort of both lists by (patient, day).
  void sort();
};

// Parsers take the source name for diagnostics. All throw Error with
// kParseError (carrying the line number), kNegativeDay or kIo.
std::vector<DeliveryFact> parse_deliveries(std::istream& in, const std::string& source = "<deliveries>");
std::vector<DiseaseFact> parse_diseases(std::istream& in, const std::string& source = "<diseases>");
/// Returns the rows plus the names of any extra columns.
std::pair<std::vector<CodeAttributes>, std::vector<std::string>> parse_kb_attributes(
    std::istream& in, const std::string& source = "<kb_attributes>");
std::vector<TaxonomyEdge> parse_taxonomy(std::istream& in, const std::string& source = "<taxonomy>");

std::vector<DeliveryFact> load_deliveries(const std::filesystem::path& path);
std::vector<DiseaseFact> load_diseases(const std::filesystem::path& path);
/// Also throws kDuplicateCode and kCycle.
KnowledgeBase load_kb(const std::filesystem::path& attributes_path,
                      const std::filesystem::path& taxonomy_path);

void write_deliveries(std::ostream& out, std::span<const DeliveryFact> facts);
void write_diseases(std::ostream& out, std::span<const DiseaseFact> facts);
void write_kb_attributes(std::ostream& out, const KnowledgeBase& kb);
void write_taxonomy(std::ostream& out, const Taxonomy& taxonomy);

}  // namespace pathmine
