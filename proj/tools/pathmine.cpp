// pathmine: mine constrained care-pathway patterns from delivery and
// diagnosis CSVs, or generate a synthetic cohort to mine.
//
// Exit codes: 0 success, 1 usage or query error, 2 data error,
// 3 search stopped by a resource limit.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pathmine/error.hpp"
#include "pathmine/ingest.hpp"
#include "pathmine/miner.hpp"
#include "pathmine/output.hpp"
#include "pathmine/query.hpp"
#include "pathmine/sequence_builder.hpp"
#include "pathmine/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIncomplete = 3;

struct MineArgs {
  std::string query;
  std::string deliveries;
  std::string diseases;
  std::string kb;
  std::string taxonomy;
  std::string out;
  std::string report;
  std::string embeddings = "witness";
  std::size_t max_len = 0;
  unsigned threads = 1;
  std::string unknown_code = "abort";
  std::size_t embedding_limit = 0;
  std::size_t node_limit = 0;
  std::int64_t time_limit_ms = 0;
  bool exact_class_match = false;
  bool closed_negative_window = false;
  bool no_pruning = false;
};

struct SynthArgs {
  std::size_t patients = 1000;
  std::string plant;
  std::uint64_t seed = 1;
  std::string out_dir;
  double events_per_window = 6.0;
  int min_support = 20;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pathmine::Error(pathmine::Errc::kIo, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exit_code_for(const pathmine::Error& e) {
  using pathmine::Errc;
  switch (e.code()) {
    case Errc::kSyntax:
    case Errc::kDuplicateClause:
    case Errc::kMissingClause:
    case Errc::kUnknownAttribute:
    case Errc::kEmptyClassFilter:
    case Errc::kInvalidWindow:
    case Errc::kTypeMismatch:
    case Errc::kMissingNegativeWindow:
    case Errc::kInvalidPlantSpec:
      return kExitUsage;
    default:
      return kExitData;
  }
}

int run_mine(const MineArgs& args) {
  using namespace pathmine;
  const auto started = std::chrono::steady_clock::now();

  // The query is checked first so a bad query never waits on data loading.
  QueryAst ast;
  try {
    ast = parse_query(read_text(args.query));
  } catch (const QueryError& e) {
    std::cerr << args.query << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kExitUsage;
  }

  RawDatabase raw;
  raw.deliveries = load_deliveries(args.deliveries);
  raw.diseases = load_diseases(args.diseases);
  raw.sort();
  const KnowledgeBase kb = load_kb(args.kb, args.taxonomy);

  CompileOptions copts;
  copts.exact_class_match = args.exact_class_match;
  copts.closed_negative_window = args.closed_negative_window;
  MiningTask task;
  try {
    task = compile(ast, kb, copts);
  } catch (const QueryError& e) {
    std::cerr << args.query << ": " << e.what() << "\n";
    return kExitUsage;
  }

  BuildOptions bopts;
  bopts.unknown_code =
      args.unknown_code == "skip" ? UnknownCodePolicy::kSkip : UnknownCodePolicy::kAbort;
  BuildStats stats;
  const auto db = build_database(raw, task, kb, bopts, &stats);

  MiningOptions mopts;
  if (args.max_len > 0) mopts.max_length = args.max_len;
  mopts.threads = args.threads;
  mopts.pruning = !args.no_pruning;
  if (args.embeddings == "all") {
    mopts.embeddings = EmbeddingMode::kAll;
  } else if (args.embeddings == "none") {
    mopts.embeddings = EmbeddingMode::kNone;
  } else {
    mopts.embeddings = EmbeddingMode::kWitness;
  }
  if (args.embedding_limit > 0) mopts.embedding_limit = args.embedding_limit;
  if (args.node_limit > 0) mopts.node_limit = args.node_limit;
  if (args.time_limit_ms > 0) mopts.time_limit = std::chrono::milliseconds(args.time_limit_ms);

  const auto result = mine(task, db, mopts);

  std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + args.out);
  const std::size_t lines =
      write_jsonl(out, result, mopts.embeddings != EmbeddingMode::kNone);
  out.close();
  if (!out) throw Error(Errc::kIo, "failed writing " + args.out);

  RunReport report;
  report.patients = stats.patients;
  report.with_index_event = stats.with_index_event;
  report.delivery_facts = raw.deliveries.size();
  report.disease_facts = raw.diseases.size();
  report.kb_codes = kb.attributes().size();
  report.taxonomy_edges = kb.taxonomy().edges().size();
  report.skipped_unknown_codes = stats.skipped_unknown_codes;
  report.positive_events = stats.positive_events;
  report.negative_events = stats.negative_events;
  report.pattern_count = lines;
  report.nodes_explored = result.nodes_explored;
  report.complete = result.complete;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  report.configuration = {
      {"query", args.query},
      {"min_support", std::to_string(task.min_support())},
      {"discriminative", task.discriminative() != nullptr ? "true" : "false"},
      {"embeddings", args.embeddings},
      {"max_len", args.max_len > 0 ? std::to_string(args.max_len) : "auto"},
      {"threads", std::to_string(args.threads)},
      {"unknown_code", args.unknown_code},
      {"pruning", args.no_pruning ? "false" : "true"},
      {"exact_class_match", args.exact_class_match ? "true" : "false"},
      {"closed_negative_window", args.closed_negative_window ? "true" : "false"},
  };
  const std::string json = to_json(report);
  std::cout << json << "\n";
  if (!args.report.empty()) {
    std::ofstream rep(args.report, std::ios::binary | std::ios::trunc);
    if (!rep) throw Error(Errc::kIo, "cannot write " + args.report);
    rep << json << "\n";
  }

  if (!result.complete) {
    std::cerr << "search stopped by a resource limit after " << result.nodes_explored
              << " nodes; output is incomplete\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

int run_synth(const SynthArgs& args) {
  using namespace pathmine;
  SynthOptions options;
  options.patients = args.patients;
  options.seed = args.seed;
  options.events_per_window = args.events_per_window;
  if (!args.plant.empty()) options.plant = parse_plant_spec(args.plant);
  const auto cohort = generate_cohort(options);
  write_cohort(cohort, args.out_dir, args.min_support);
  std::cerr << "wrote " << cohort.raw.deliveries.size() << " deliveries and "
            << cohort.raw.diseases.size() << " diagnoses for " << args.patients
            << " patients to " << args.out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-based care-pathway pattern miner"};
  app.require_subcommand(1);

  MineArgs margs;
  auto* mine_cmd = app.add_subcommand("mine", "Mine patterns with a .pmq query");
  mine_cmd->add_option("--query", margs.query, "Query file (.pmq)")->required();
  mine_cmd->add_option("--deliveries", margs.deliveries, "patient,day,cip,qty CSV")->required();
  mine_cmd->add_option("--diseases", margs.diseases, "patient,day,icd CSV")->required();
  mine_cmd->add_option("--kb", margs.kb, "cip,atc,group,generic[,...] CSV")->required();
  mine_cmd->add_option("--taxonomy", margs.taxonomy, "child,parent CSV")->required();
  mine_cmd->add_option("--out", margs.out, "JSON Lines output file")->required();
  mine_cmd->add_option("--report", margs.report, "Also write the run report to this file");
  mine_cmd->add_option("--embeddings", margs.embeddings, "Embeddings to emit")
      ->check(CLI::IsMember({"all", "witness", "none"}))
      ->capture_default_str();
  mine_cmd->add_option("--max-len", margs.max_len, "Longest pattern (0 = longest sequence)");
  mine_cmd->add_option("--threads", margs.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  mine_cmd->add_option("--unknown-code", margs.unknown_code, "Deliveries absent from the KB")
      ->check(CLI::IsMember({"skip", "abort"}))
      ->capture_default_str();
  mine_cmd->add_option("--embedding-limit", margs.embedding_limit,
                       "Per-sequence cap with --embeddings all (0 = unlimited)");
  mine_cmd->add_option("--node-limit", margs.node_limit, "Stop after this many search nodes");
  mine_cmd->add_option("--time-limit", margs.time_limit_ms, "Stop after this many milliseconds");
  mine_cmd->add_flag("--exact-class-match", margs.exact_class_match,
                     "Do not expand event classes through the taxonomy");
  mine_cmd->add_flag("--closed-negative-window", margs.closed_negative_window,
                     "Include both endpoints of the negative window");
  mine_cmd->add_flag("--no-pruning", margs.no_pruning, "Disable search-space pruning");

  SynthArgs sargs;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic cohort");
  synth_cmd->add_option("--patients", sargs.patients, "Cohort size")->capture_default_str();
  synth_cmd->add_option("--plant", sargs.plant, "K:ATC/GROUP/FLAG,... planted in K patients");
  synth_cmd->add_option("--seed", sargs.seed, "Random seed")->required();
  synth_cmd->add_option("--out-dir", sargs.out_dir, "Output directory")->required();
  synth_cmd->add_option("--events-per-window", sargs.events_per_window,
                        "Mean deliveries per window")
      ->capture_default_str();
  synth_cmd->add_option("--min-support", sargs.min_support, "Threshold written to study.pmq")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* which = mine_cmd->parsed() ? mine_cmd : synth_cmd->parsed() ? synth_cmd : &app;
    std::cerr << which->help();
    return kExitUsage;
  }

  try {
    if (mine_cmd->parsed()) return run_mine(margs);
    return run_synth(sargs);
  } catch (const pathmine::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
