#include "pathmine/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "pathmine/error.hpp"
#include "pathmine/matching.hpp"
#include "pathmine/query.hpp"

namespace pathmine {

namespace {

[[noreturn]] void bad_spec(const std::string& why) { throw Error(Errc::kInvalidPlantSpec, why); }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

// Distribution objects in <random> are implementation-defined; these keep
// generated files identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

struct Drug {
  std::string atc;
  std::string group;
};

const std::vector<Drug>& antiepileptics() {
  static const std::vector<Drug> drugs{
      {"N03AF01", "301"}, {"N03AF01", "302"}, {"N03AG01", "438"}, {"N03AG01", "439"},
      {"N03AX09", "512"}, {"N03AX09", "513"}, {"N03AX11", "777"}, {"N03AX11", "778"},
      {"N03AX14", "1023"}, {"N03AX14", "1024"},
  };
  return drugs;
}

const std::vector<Drug>& other_drugs() {
  static const std::vector<Drug> drugs{{"N02BE01", "900"}, {"N05BA01", "901"}, {"C09AA05", "902"}};
  return drugs;
}

using Triple = std::tuple<std::string, std::string, int>;  // (atc, group, generic)

Item to_item(const Triple& t) {
  return Item{std::get<0>(t), std::get<1>(t), static_cast<std::int64_t>(std::get<2>(t))};
}

struct Catalog {
  std::map<Triple, std::string> cip;  // triple -> delivery code
  std::vector<CodeAttributes> rows;

  const std::string& code(const Triple& t) {
    auto it = cip.find(t);
    if (it != cip.end()) return it->second;
    char buf[32];
    std::snprintf(buf, sizeof buf, "34009%08zu", cip.size() + 1);
    CodeAttributes row{buf, std::get<0>(t), std::get<1>(t), std::get<2>(t), {}};
    rows.push_back(row);
    return cip.emplace(t, buf).first->second;
  }
};

std::vector<TaxonomyEdge> synthetic_taxonomy(const Catalog& catalog) {
  std::set<TaxonomyEdge> edges{
      {"G403", "G40"}, {"G409", "G40"}, {"G410", "G41"}, {"G419", "G41"},
      {"G40", "G40-G47"}, {"G41", "G40-G47"}, {"I10", "I10-I15"}, {"J459", "J45"},
  };
  // ATC levels: N03AG01 -> N03AG -> N03A -> N03 -> N.
  for (const auto& [triple, code] : catalog.cip) {
    std::string atc = std::get<0>(triple);
    for (std::size_t len : {5u, 4u, 3u, 1u}) {
      if (atc.size() <= len) continue;
      std::string parent = atc.substr(0, len);
      edges.emplace(atc, parent);
      atc = parent;
    }
  }
  return {edges.begin(), edges.end()};
}

struct WindowEvent {
  std::int64_t day;
  Triple drug;
};

}  // namespace

PlantSpec parse_plant_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) bad_spec("expected K:ITEM,ITEM,... in '" + std::string(text) + "'");
  PlantSpec spec;
  const auto count_text = text.substr(0, colon);
  auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), spec.count);
  if (count_text.empty() || ec != std::errc{} || ptr != count_text.data() + count_text.size()) {
    bad_spec("plant count '" + std::string(count_text) + "' is not a non-negative integer");
  }
  for (auto item_text : split(text.substr(colon + 1), ',')) {
    const auto parts = split(item_text, '/');
    if (parts.size() != 3 || parts[0].empty() || parts[1].empty()) {
      bad_spec("item '" + std::string(item_text) + "' is not ATC/GROUP/FLAG");
    }
    if (parts[2] != "0" && parts[2] != "1") {
      bad_spec("generic flag of '" + std::string(item_text) + "' must be 0 or 1");
    }
    spec.pattern.push_back(Item{normalize_code(parts[0]), normalize_code(parts[1]),
                                static_cast<std::int64_t>(parts[2] == "1")});
  }
  // The pattern needs distinct days inside the open 90-day window.
  if (spec.pattern.size() > 89) bad_spec("planted pattern longer than 89 items");
  return spec;
}

std::string to_string(const PlantSpec& spec) {
  std::string out = std::to_string(spec.count) + ":";
  for (std::size_t i = 0; i < spec.pattern.size(); ++i) {
    if (i) out += ',';
    const auto& it = spec.pattern[i];
    out += to_string(it[0]) + "/" + to_string(it[1]) + "/" + to_string(it[2]);
  }
  return out;
}

PlantSpec default_plant(std::size_t count) {
  return parse_plant_spec(std::to_string(count) +
                          ":N03AG01/438/1,N03AG01/438/1,N03AX14/1023/0,N03AX14/1023/0");
}

SynthCohort generate_cohort(const SynthOptions& options) {
  if (options.plant && options.plant->count > options.patients) {
    bad_spec("plant count " + std::to_string(options.plant->count) + " exceeds " +
             std::to_string(options.patients) + " patients");
  }
  Rng rng(options.seed);
  Catalog catalog;
  for (const auto& d : antiepileptics()) {
    catalog.code({d.atc, d.group, 1});
    catalog.code({d.atc, d.group, 0});
  }
  for (const auto& d : other_drugs()) catalog.code({d.atc, d.group, 1});

  std::vector<Triple> plant;
  if (options.plant) {
    for (const auto& item : options.plant->pattern) {
      Triple t{to_string(item[0]), to_string(item[1]), static_cast<int>(std::get<std::int64_t>(item[2]))};
      catalog.code(t);
      plant.push_back(t);
    }
  }
  std::vector<Item> plant_items;
  for (const auto& t : plant) plant_items.push_back(to_item(t));

  // Planted patients: a seeded choice of `count` distinct indices.
  std::vector<std::size_t> order(options.patients);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
  }
  const std::size_t plant_count = options.plant ? options.plant->count : 0;
  std::vector<bool> planted(options.patients, false);
  for (std::size_t i = 0; i < plant_count; ++i) planted[order[i]] = true;

  SynthCohort cohort;
  const int width = std::max<int>(5, static_cast<int>(std::to_string(options.patients).size()));
  const auto mean = std::max(1.0, options.events_per_window);
  const auto lo_count = static_cast<std::int64_t>(mean / 2);
  const auto hi_count = static_cast<std::int64_t>(mean * 3 / 2 + 0.5);

  for (std::size_t p = 0; p < options.patients; ++p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "P%0*zu", width, p + 1);
    const std::string patient = buf;
    const bool is_planted = planted[p];
    const bool seizure = is_planted || rng.chance(options.seizure_fraction);
    const std::int64_t index = rng.uniform(200, 700);

    // Diagnoses: unrelated ones anywhere, seizures only from the index day on.
    for (std::int64_t k = rng.uniform(0, 3); k > 0; --k) {
      cohort.raw.diseases.push_back({patient, rng.uniform(0, 900), rng.chance(0.5) ? "I10" : "J459"});
    }
    if (seizure) {
      static const std::vector<std::string> seizure_codes{"G403", "G409", "G410", "G419"};
      cohort.raw.diseases.push_back({patient, index, rng.pick(seizure_codes)});
      for (std::int64_t k = rng.uniform(0, 2); k > 0; --k) {
        cohort.raw.diseases.push_back({patient, rng.uniform(index, index + 200), rng.pick(seizure_codes)});
      }
    }

    // Treatment: one speciality, sometimes a second one.
    const Drug primary = rng.pick(antiepileptics());
    std::optional<Drug> secondary;
    if (rng.chance(options.polytherapy_fraction)) {
      Drug d = rng.pick(antiepileptics());
      if (d.atc != primary.atc || d.group != primary.group) secondary = d;
    }
    int flag = rng.chance(0.5) ? 1 : 0;

    auto deliver = [&](std::int64_t day, const Triple& t) {
      cohort.raw.deliveries.push_back({patient, day, catalog.code(t), rng.uniform(1, 3)});
    };

    // Background treatment in (index + lo, index + hi), with at most one
    // generic/brand switch.
    auto window_events = [&](std::int64_t lo, std::int64_t hi) {
      std::vector<WindowEvent> events;
      const auto n = rng.uniform(lo_count, hi_count);
      std::vector<std::int64_t> days;
      for (std::int64_t k = 0; k < n; ++k) days.push_back(rng.uniform(index + lo + 1, index + hi - 1));
      std::sort(days.begin(), days.end());
      const bool switches = rng.chance(options.switch_probability);
      const auto switch_at = rng.uniform(0, std::max<std::int64_t>(0, n - 1));
      for (std::int64_t k = 0; k < n; ++k) {
        const Drug& d = secondary && rng.chance(0.3) ? *secondary : primary;
        const int f = switches && k >= switch_at ? 1 - flag : flag;
        events.push_back({days[static_cast<std::size_t>(k)], {d.atc, d.group, f}});
      }
      if (switches) flag = 1 - flag;
      return events;
    };
    auto window_items = [](const std::vector<WindowEvent>& events) {
      std::vector<Event> ev;
      for (const auto& e : events) ev.push_back({e.day, to_item(e.drug)});
      return EventSequence({"", Polarity::kPositive}, std::move(ev)).items();
    };
    auto contains_plant = [&](const std::vector<WindowEvent>& events) {
      if (plant_items.empty()) return false;
      const auto items = window_items(events);
      return supports(std::span<const Item>(plant_items), std::span<const Item>(items));
    };
    // Redraws until the window misses the plant; then drops the plant's
    // last item as a last resort.
    auto clean_window = [&](std::int64_t lo, std::int64_t hi) {
      auto events = window_events(lo, hi);
      for (int attempt = 0; attempt < 20 && contains_plant(events); ++attempt) {
        events = window_events(lo, hi);
      }
      if (contains_plant(events)) {
        std::erase_if(events, [&](const WindowEvent& e) { return e.drug == plant.back(); });
      }
      return events;
    };

    if (seizure) {
      // Control window first so the flag evolves forward in time.
      for (const auto& e : clean_window(-180, -90)) deliver(e.day, e.drug);
      std::vector<WindowEvent> at_risk =
          is_planted ? window_events(-90, 0) : clean_window(-90, 0);
      if (is_planted) {
        std::set<std::int64_t> days;
        while (days.size() < plant.size()) days.insert(rng.uniform(index - 89, index - 1));
        auto it = days.begin();
        for (const auto& t : plant) at_risk.push_back({*it++, t});
      }
      for (const auto& e : at_risk) deliver(e.day, e.drug);
      // Window boundaries and out-of-window treatment.
      if (rng.chance(0.2)) deliver(index - 90, {primary.atc, primary.group, flag});
      if (rng.chance(0.2)) deliver(index - 180, {primary.atc, primary.group, flag});
      for (std::int64_t k = rng.uniform(0, 3); k > 0; --k) {
        const auto day = rng.chance(0.5) ? rng.uniform(0, std::max<std::int64_t>(0, index - 181))
                                         : rng.uniform(index, index + 200);
        deliver(day, {primary.atc, primary.group, flag});
      }
    } else {
      for (std::int64_t k = rng.uniform(0, 8); k > 0; --k) {
        deliver(rng.uniform(0, 900), {primary.atc, primary.group, flag});
      }
    }
    for (std::int64_t k = rng.uniform(0, 4); k > 0; --k) {
      const Drug& d = rng.pick(other_drugs());
      deliver(rng.uniform(0, 900), {d.atc, d.group, 1});
    }
    if (is_planted) cohort.planted_patients.push_back(patient);
  }

  cohort.raw.sort();
  cohort.kb = KnowledgeBase(catalog.rows, Taxonomy(synthetic_taxonomy(catalog)));
  return cohort;
}

void write_cohort(const SynthCohort& cohort, const std::filesystem::path& dir,
                  int study_min_support) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(Errc::kIo, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("deliveries.csv");
    write_deliveries(out, cohort.raw.deliveries);
  }
  {
    auto out = open("diseases.csv");
    write_diseases(out, cohort.raw.diseases);
  }
  {
    auto out = open("kb_attributes.csv");
    write_kb_attributes(out, cohort.kb);
  }
  {
    auto out = open("taxonomy.csv");
    write_taxonomy(out, cohort.kb.taxonomy());
  }
  {
    auto out = open("study.pmq");
    out << seizure_switch_query(study_min_support);
  }
  {
    auto out = open("planted_patients.txt");
    for (const auto& p : cohort.planted_patients) out << p << '\n';
  }
}

}  // namespace pathmine
