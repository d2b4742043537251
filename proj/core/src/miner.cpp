#include "pathmine/miner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <thread>

#include "pathmine/error.hpp"

namespace pathmine {

std::vector<std::string> positive_support(const Pattern& pattern,
                                          const CaseCrossoverDatabase& database) {
  std::vector<std::string> out;
  for (const auto& pair : database.pairs) {
    if (supports(pattern, pair.positive)) out.push_back(pair.patient);
  }
  return out;
}

std::vector<std::string> discriminative_support(const Pattern& pattern,
                                                const CaseCrossoverDatabase& database) {
  if (!database.has_negative) {
    throw Error(Errc::kMissingNegativeWindow,
                "discriminative support needs a database built with a negative window");
  }
  std::vector<std::string> out;
  for (const auto& pair : database.pairs) {
    if (supports(pattern, pair.positive) && !supports(pattern, pair.negative)) {
      out.push_back(pair.patient);
    }
  }
  return out;
}

std::size_t count_switches(const Pattern& pattern, std::size_t attribute) {
  std::size_t count = 0;
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    if (pattern.items[i - 1][attribute] != pattern.items[i][attribute]) ++count;
  }
  return count;
}

NodeVerdict check_constraints(const SearchNode& node, const MiningTask& task,
                              const std::function<std::size_t()>& discriminative_count) {
  if (node.positive_support < task.min_support()) return NodeVerdict::kPrune;
  const auto& cs = task.constraints;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (const auto* sc = std::get_if<SwitchCountConstraint>(&cs[i].kind)) {
      if (sc->comparator != Comparator::kGe && node.switch_counts.at(i) > sc->bound) {
        return NodeVerdict::kPrune;
      }
    }
  }

  if (node.length == 0) return NodeVerdict::kExtendOnly;
  const DiscriminativeConstraint* discr = nullptr;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (std::holds_alternative<ContainsValueConstraint>(cs[i].kind)) {
      if (!node.contains_satisfied.at(i)) return NodeVerdict::kExtendOnly;
    } else if (const auto* sc = std::get_if<SwitchCountConstraint>(&cs[i].kind)) {
      if (!compare(node.switch_counts.at(i), sc->comparator, sc->bound)) {
        return NodeVerdict::kExtendOnly;
      }
    } else if (const auto* d = std::get_if<DiscriminativeConstraint>(&cs[i].kind)) {
      discr = d;
    }
  }
  if (discr != nullptr) {
    if (!discriminative_count || discriminative_count() < discr->threshold) {
      return NodeVerdict::kExtendOnly;
    }
  }
  return NodeVerdict::kEmit;
}

namespace {

using Symbol = std::uint32_t;

struct Occurrence {
  std::uint32_t sequence;
  std::uint32_t next;  // first position after the leftmost embedding's tail
};

// Item-interned view of the database. Symbols are numbered in item order,
// so comparing symbol strings is comparing item tuples.
struct SymbolDatabase {
  std::vector<Item> alphabet;
  std::vector<std::vector<Symbol>> positive;
  std::vector<std::vector<Symbol>> negative;
};

SymbolDatabase intern(const CaseCrossoverDatabase& db) {
  SymbolDatabase out;
  std::map<Item, Symbol> ids;
  for (const auto& pair : db.pairs) {
    for (const auto& e : pair.positive.events()) ids.emplace(e.item, 0);
    for (const auto& e : pair.negative.events()) ids.emplace(e.item, 0);
  }
  Symbol next = 0;
  for (auto& [item, id] : ids) {
    id = next++;
    out.alphabet.push_back(item);
  }
  auto encode = [&](const EventSequence& s) {
    std::vector<Symbol> v;
    v.reserve(s.size());
    for (const auto& e : s.events()) v.push_back(ids.at(e.item));
    return v;
  };
  for (const auto& pair : db.pairs) {
    out.positive.push_back(encode(pair.positive));
    out.negative.push_back(encode(pair.negative));
  }
  return out;
}

struct Found {
  std::vector<Symbol> pattern;
  std::vector<std::uint32_t> supporters;
  std::vector<std::uint32_t> discriminative;
};

class Search {
 public:
  Search(const MiningTask& task, const SymbolDatabase& db, const MiningOptions& options,
         std::size_t max_length)
      : task_(task), db_(db), options_(options), max_length_(max_length) {
    const auto& cs = task.constraints;
    attr_keys_.resize(cs.size());
    has_value_.resize(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (const auto* sc = std::get_if<SwitchCountConstraint>(&cs[i].kind)) {
        // Equal keys iff equal attribute values.
        std::map<AttributeValue, std::uint32_t> keys;
        for (const auto& item : db.alphabet) {
          attr_keys_[i].push_back(
              keys.emplace(item.values.at(sc->attribute), keys.size()).first->second);
        }
        switch_slots_.push_back(i);
      } else if (const auto* cv = std::get_if<ContainsValueConstraint>(&cs[i].kind)) {
        for (const auto& item : db.alphabet) {
          has_value_[i].push_back(item.values.at(cv->attribute) == cv->value);
        }
        contains_slots_.push_back(i);
      }
    }
    discriminative_ = task.discriminative() != nullptr;
  }

  struct Node {
    std::vector<Symbol> pattern;
    std::vector<Occurrence> projection;
    SearchNode summary;
  };

  Node root() const {
    Node node;
    node.summary.switch_counts.assign(task_.constraints.size(), 0);
    node.summary.contains_satisfied.assign(task_.constraints.size(), false);
    node.projection.reserve(db_.positive.size());
    for (std::uint32_t s = 0; s < db_.positive.size(); ++s) node.projection.push_back({s, 0});
    node.summary.positive_support = node.projection.size();
    return node;
  }

  /// Children of `node` in symbol order, each with its projection and
  /// summary. Children that may be pruned are dropped when pruning is on.
  std::vector<Node> expand(const Node& node) {
    std::vector<Node> children;
    if (node.pattern.size() >= max_length_) return children;
    const std::size_t n = db_.alphabet.size();
    if (stamp_.size() != n) {
      stamp_.assign(n, 0);
      buckets_.assign(n, {});
    }
    ++epoch_;
    touched_.clear();
    for (const auto& occ : node.projection) {
      const auto& seq = db_.positive[occ.sequence];
      const std::uint64_t mark = (epoch_ << 32) | (occ.sequence + 1ULL);
      for (std::uint32_t j = occ.next; j < seq.size(); ++j) {
        const Symbol s = seq[j];
        if (stamp_[s] == mark) continue;
        if ((stamp_[s] >> 32) != epoch_) {
          touched_.push_back(s);
          buckets_[s].clear();
        }
        stamp_[s] = mark;
        buckets_[s].push_back({occ.sequence, j + 1});
      }
    }

    std::vector<Symbol> candidates;
    if (options_.pruning) {
      candidates = touched_;
    } else {
      candidates.resize(n);
      for (Symbol s = 0; s < n; ++s) candidates[s] = s;
    }
    std::sort(candidates.begin(), candidates.end());

    for (Symbol s : candidates) {
      const bool present = (stamp_[s] >> 32) == epoch_;
      const std::size_t support = present ? buckets_[s].size() : 0;
      if (options_.pruning && support < task_.min_support()) continue;
      Node child;
      child.pattern = node.pattern;
      child.pattern.push_back(s);
      if (present) child.projection = buckets_[s];
      child.summary = node.summary;
      child.summary.length = child.pattern.size();
      child.summary.positive_support = support;
      for (std::size_t i : switch_slots_) {
        if (!node.pattern.empty() && attr_keys_[i][node.pattern.back()] != attr_keys_[i][s]) {
          ++child.summary.switch_counts[i];
        }
      }
      for (std::size_t i : contains_slots_) {
        if (has_value_[i][s]) child.summary.contains_satisfied[i] = true;
      }
      children.push_back(std::move(child));
    }
    return children;
  }

  /// Evaluates `node`; records it when emitted and reports whether its
  /// subtree must still be explored.
  bool visit(const Node& node, std::vector<Found>& out) const {
    std::vector<std::uint32_t> discr;
    bool discr_done = false;
    auto discr_count = [&]() -> std::size_t {
      if (!discr_done) {
        for (const auto& occ : node.projection) {
          if (!supports(std::span<const Symbol>(node.pattern),
                        std::span<const Symbol>(db_.negative[occ.sequence]))) {
            discr.push_back(occ.sequence);
          }
        }
        discr_done = true;
      }
      return discr.size();
    };
    const auto verdict = check_constraints(node.summary, task_, discr_count);
    if (verdict == NodeVerdict::kEmit) {
      Found f;
      f.pattern = node.pattern;
      f.supporters.reserve(node.projection.size());
      for (const auto& occ : node.projection) f.supporters.push_back(occ.sequence);
      if (discriminative_) {
        discr_count();
        f.discriminative = std::move(discr);
      }
      out.push_back(std::move(f));
    }
    return verdict != NodeVerdict::kPrune || !options_.pruning;
  }

 private:
  const MiningTask& task_;
  const SymbolDatabase& db_;
  const MiningOptions& options_;
  std::size_t max_length_;
  bool discriminative_ = false;

  std::vector<std::vector<std::uint32_t>> attr_keys_;
  std::vector<std::vector<bool>> has_value_;
  std::vector<std::size_t> switch_slots_;
  std::vector<std::size_t> contains_slots_;

  // Scratch space for expand(); each worker owns its Search.
  std::vector<std::uint64_t> stamp_;
  std::vector<std::vector<Occurrence>> buckets_;
  std::vector<Symbol> touched_;
  std::uint64_t epoch_ = 0;
};

class Budget {
 public:
  explicit Budget(const MiningOptions& options)
      : options_(options), start_(std::chrono::steady_clock::now()) {}

  /// Counts one node; false once a limit is hit.
  bool charge() {
    if (stopped_.load(std::memory_order_relaxed)) return false;
    const auto n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (options_.node_limit && n > *options_.node_limit) {
      stopped_ = true;
      return false;
    }
    if (options_.time_limit && (n & 1023) == 0 &&
        std::chrono::steady_clock::now() - start_ > *options_.time_limit) {
      stopped_ = true;
      return false;
    }
    return true;
  }

  bool stopped() const { return stopped_.load(); }
  std::size_t nodes() const { return nodes_.load(); }

 private:
  const MiningOptions& options_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::size_t> nodes_{0};
  std::atomic<bool> stopped_{false};
};

void depth_first(Search& search, Search::Node& node, Budget& budget, std::vector<Found>& out) {
  if (!budget.charge()) return;
  if (!search.visit(node, out)) return;
  auto children = search.expand(node);
  for (auto& child : children) {
    depth_first(search, child, budget, out);
    if (budget.stopped()) return;
  }
}

}  // namespace

MiningResult mine(const MiningTask& task, const CaseCrossoverDatabase& database,
                  const MiningOptions& options) {
  if (task.discriminative() != nullptr && !database.has_negative) {
    throw Error(Errc::kMissingNegativeWindow,
                "discriminative task needs a database built with a negative window");
  }
  const SymbolDatabase db = intern(database);
  std::size_t longest = 0;
  for (const auto& s : db.positive) longest = std::max(longest, s.size());
  const std::size_t max_length = options.max_length.value_or(longest);

  Budget budget(options);
  std::vector<Found> found;
  {
    Search search(task, db, options, max_length);
    auto root = search.root();
    budget.charge();
    auto top = search.expand(root);

    const unsigned workers = std::max(1u, std::min<unsigned>(
                                              options.threads, static_cast<unsigned>(top.size())));
    if (workers <= 1) {
      for (auto& child : top) {
        depth_first(search, child, budget, found);
        if (budget.stopped()) break;
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::vector<Found>> partial(workers);
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          Search local(task, db, options, max_length);
          for (std::size_t i = next++; i < top.size(); i = next++) {
            depth_first(local, top[i], budget, partial[w]);
            if (budget.stopped()) break;
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& p : partial) {
        found.insert(found.end(), std::make_move_iterator(p.begin()),
                     std::make_move_iterator(p.end()));
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    if (a.pattern.size() != b.pattern.size()) return a.pattern.size() < b.pattern.size();
    return a.pattern < b.pattern;
  });

  MiningResult result;
  result.complete = !budget.stopped();
  result.nodes_explored = budget.nodes();
  result.patterns.reserve(found.size());
  const std::size_t limit = options.embeddings == EmbeddingMode::kWitness ? 1
                                                                           : options.embedding_limit;
  for (auto& f : found) {
    PatternTuple t;
    t.pattern.items.reserve(f.pattern.size());
    for (Symbol s : f.pattern) t.pattern.items.push_back(db.alphabet[s]);
    for (auto s : f.supporters) {
      SequenceId id{database.pairs[s].patient, Polarity::kPositive};
      if (options.embeddings != EmbeddingMode::kNone) {
        t.embeddings.emplace(id, find_embeddings(std::span<const Symbol>(f.pattern),
                                                 std::span<const Symbol>(db.positive[s]), limit));
      }
      t.supported.push_back(std::move(id));
    }
    std::sort(t.supported.begin(), t.supported.end());
    if (task.discriminative() != nullptr) {
      std::vector<std::string> patients;
      patients.reserve(f.discriminative.size());
      for (auto s : f.discriminative) patients.push_back(database.pairs[s].patient);
      std::sort(patients.begin(), patients.end());
      t.discriminative = std::move(patients);
    }
    result.patterns.push_back(std::move(t));
  }
  return result;
}

}  // namespace pathmine
