#include "pathmine/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "pathmine/error.hpp"

namespace pathmine {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line,
                              const std::string& what) {
  throw Error(Errc::kParseError, source + ":" + std::to_string(line) + ": " + what);
}

// RFC-4180-ish: fields may be double-quoted, "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line, const std::string& source,
                                   std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) parse_error(source, line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::int64_t parse_int(const std::string& text, const std::string& column,
                       const std::string& source, std::size_t line) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    parse_error(source, line, "column '" + column + "' is not an integer: '" + text + "'");
  }
  return value;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Reads the header and every data row. With `allow_extra`, rows may carry
/// more columns than `expected` as long as they match the header width.
struct Table {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line, fields)
};

Table read_table(std::istream& in, const std::vector<std::string>& expected,
                 const std::string& source, bool allow_extra = false) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line, source, line_no);
    if (!have_header) {
      if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) fields[0] = trim(fields[0].substr(3));
      const bool width_ok = allow_extra ? fields.size() >= expected.size()
                                        : fields.size() == expected.size();
      bool names_ok = width_ok;
      for (std::size_t i = 0; names_ok && i < expected.size(); ++i) {
        names_ok = lower(fields[i]) == expected[i];
      }
      if (!names_ok) {
        std::string want;
        for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
        parse_error(source, line_no, "expected header '" + want + "'");
      }
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      parse_error(source, line_no,
                  "expected " + std::to_string(table.header.size()) + " columns, got " +
                      std::to_string(fields.size()));
    }
    table.rows.emplace_back(line_no, std::move(fields));
  }
  if (in.bad()) throw Error(Errc::kIo, "read failure on " + source);
  if (!have_header) parse_error(source, line_no, "missing header row");
  return table;
}

std::int64_t parse_day(const std::string& text, const std::string& source, std::size_t line) {
  const auto day = parse_int(text, "day", source, line);
  if (day < 0) {
    throw Error(Errc::kNegativeDay,
                source + ":" + std::to_string(line) + ": day " + std::to_string(day));
  }
  return day;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

void RawDatabase::sort() {
  auto key = [](const auto& f) { return std::tie(f.patient, f.day); };
  std::stable_sort(deliveries.begin(), deliveries.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::stable_sort(diseases.begin(), diseases.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

std::vector<DeliveryFact> parse_deliveries(std::istream& in, const std::string& source) {
  const auto table = read_table(in, {"patient", "day", "cip", "qty"}, source);
  std::vector<DeliveryFact> facts;
  facts.reserve(table.rows.size());
  for (const auto& [line, f] : table.rows) {
    DeliveryFact fact{f[0], parse_day(f[1], source, line), normalize_code(f[2]),
                      parse_int(f[3], "qty", source, line)};
    if (fact.patient.empty()) parse_error(source, line, "empty patient id");
    if (fact.cip.empty()) parse_error(source, line, "empty cip code");
    if (fact.quantity < 1) parse_error(source, line, "quantity must be >= 1");
    facts.push_back(std::move(fact));
  }
  return facts;
}

std::vector<DiseaseFact> parse_diseases(std::istream& in, const std::string& source) {
  const auto table = read_table(in, {"patient", "day", "icd"}, source);
  std::vector<DiseaseFact> facts;
  facts.reserve(table.rows.size());
  for (const auto& [line, f] : table.rows) {
    DiseaseFact fact{f[0], parse_day(f[1], source, line), normalize_code(f[2])};
    if (fact.patient.empty()) parse_error(source, line, "empty patient id");
    if (fact.icd.empty()) parse_error(source, line, "empty icd code");
    facts.push_back(std::move(fact));
  }
  return facts;
}

std::pair<std::vector<CodeAttributes>, std::vector<std::string>> parse_kb_attributes(
    std::istream& in, const std::string& source) {
  const auto table = read_table(in, {"cip", "atc", "group", "generic"}, source, true);
  std::vector<std::string> extras(table.header.begin() + 4, table.header.end());
  std::vector<CodeAttributes> rows;
  rows.reserve(table.rows.size());
  for (const auto& [line, f] : table.rows) {
    const auto generic = parse_int(f[3], "generic", source, line);
    if (generic != 0 && generic != 1) parse_error(source, line, "generic must be 0 or 1");
    if (f[0].empty() || f[1].empty()) parse_error(source, line, "empty cip or atc code");
    rows.push_back(CodeAttributes{normalize_code(f[0]), normalize_code(f[1]),
                                  normalize_code(f[2]), static_cast<int>(generic),
                                  std::vector<std::string>(f.begin() + 4, f.end())});
  }
  return {std::move(rows), std::move(extras)};
}

std::vector<TaxonomyEdge> parse_taxonomy(std::istream& in, const std::string& source) {
  const auto table = read_table(in, {"child", "parent"}, source);
  std::vector<TaxonomyEdge> edges;
  edges.reserve(table.rows.size());
  for (const auto& [line, f] : table.rows) {
    if (f[0].empty() || f[1].empty()) parse_error(source, line, "empty taxonomy code");
    edges.emplace_back(normalize_code(f[0]), normalize_code(f[1]));
  }
  return edges;
}

std::vector<DeliveryFact> load_deliveries(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_deliveries(in, path.string());
}

std::vector<DiseaseFact> load_diseases(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_diseases(in, path.string());
}

KnowledgeBase load_kb(const std::filesystem::path& attributes_path,
                      const std::filesystem::path& taxonomy_path) {
  auto attr_in = open(attributes_path);
  auto [rows, extras] = parse_kb_attributes(attr_in, attributes_path.string());
  auto tax_in = open(taxonomy_path);
  Taxonomy taxonomy(parse_taxonomy(tax_in, taxonomy_path.string()));
  return KnowledgeBase(std::move(rows), std::move(taxonomy), std::move(extras));
}

void write_deliveries(std::ostream& out, std::span<const DeliveryFact> facts) {
  out << "patient,day,cip,qty\n";
  for (const auto& f : facts) {
    out << quote_csv(f.patient) << ',' << f.day << ',' << quote_csv(f.cip) << ','
        << f.quantity << '\n';
  }
}

void write_diseases(std::ostream& out, std::span<const DiseaseFact> facts) {
  out << "patient,day,icd\n";
  for (const auto& f : facts) {
    out << quote_csv(f.patient) << ',' << f.day << ',' << quote_csv(f.icd) << '\n';
  }
}

void write_kb_attributes(std::ostream& out, const KnowledgeBase& kb) {
  out << "cip,atc,group,generic";
  for (const auto& name : kb.extra_columns()) out << ',' << quote_csv(name);
  out << '\n';
  for (const auto& [code, row] : kb.attributes()) {
    out << quote_csv(row.delivery_code) << ',' << quote_csv(row.therapeutic_class) << ','
        << quote_csv(row.speciality_group) << ',' << row.generic_flag;
    for (std::size_t i = 0; i < kb.extra_columns().size(); ++i) {
      out << ',' << (i < row.extras.size() ? quote_csv(row.extras[i]) : std::string{});
    }
    out << '\n';
  }
}

void write_taxonomy(std::ostream& out, const Taxonomy& taxonomy) {
  out << "child,parent\n";
  for (const auto& [child, parent] : taxonomy.edges()) {
    out << quote_csv(child) << ',' << quote_csv(parent) << '\n';
  }
}

}  // namespace pathmine
