#include "pathmine/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "pathmine/error.hpp"

namespace pathmine {

namespace {

enum class Tok { kWord, kInt, kString, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.';
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isdigit(c) != 0;
         });
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      tok.text = std::string(text.substr(i, j - i));
      tok.kind = all_digits(tok.text) ? Tok::kInt : Tok::kWord;
      advance(j - i);
    } else if (c == '"') {
      tok.kind = Tok::kString;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          tok.text += text[i + 1];
          advance(2);
        } else if (text[i] == '"') {
          advance(1);
          closed = true;
          break;
        } else if (text[i] == '\n') {
          break;
        } else {
          tok.text += text[i];
          advance(1);
        }
      }
      if (!closed) {
        throw QueryError(Errc::kSyntax, "unterminated string literal", tok.line, tok.column);
      }
    } else if ((c == '=' || c == '<' || c == '>') && i + 1 < text.size() && text[i + 1] == '=') {
      tok.kind = Tok::kPunct;
      tok.text = std::string(text.substr(i, 2));
      advance(2);
    } else if (std::string_view(";{}(),+-").find(c) != std::string_view::npos) {
      tok.kind = Tok::kPunct;
      tok.text = std::string(1, c);
      advance(1);
    } else {
      throw QueryError(Errc::kSyntax, std::string("unexpected character '") + c + "'", line, col);
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  tokens.push_back(end);
  return tokens;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kString: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  QueryAst parse() {
    QueryAst ast;
    bool have_index = false, have_event = false, have_positive = false;
    bool have_min_support = false;
    const Token* discriminative_at = nullptr;
    const Token* negative_at = nullptr;

    if (peek().kind == Tok::kEnd) {
      throw QueryError(Errc::kMissingClause, "empty query", peek().line, peek().column);
    }
    while (peek().kind != Tok::kEnd) {
      const Token& head = peek();
      if (head.kind != Tok::kWord) fail("expected a statement keyword, got " + describe(head));
      if (head.text == "index_event") {
        duplicate_check(have_index, head, "index_event");
        next();
        expect_word("first");
        expect_word("diagnosis");
        expect_word("in");
        ast.index_event.codes = code_set();
      } else if (head.text == "event") {
        duplicate_check(have_event, head, "event");
        next();
        expect_word("delivery");
        expect_word("where");
        expect_word("atc");
        expect_word("in");
        ast.event.classes = code_set();
        expect_word("as");
        expect_punct("(");
        ast.event.attributes.push_back(ident());
        while (accept_punct(",")) ast.event.attributes.push_back(ident());
        expect_punct(")");
      } else if (head.text == "window") {
        next();
        const Token& which = peek();
        if (accept_word("positive")) {
          duplicate_check(have_positive, head, "window positive");
          ast.positive = window_body(which);
        } else if (accept_word("negative")) {
          bool seen = negative_at != nullptr;
          duplicate_check(seen, head, "window negative");
          negative_at = &head;
          ast.negative = window_body(which);
        } else {
          fail("expected 'positive' or 'negative', got " + describe(which));
        }
      } else if (head.text == "min_support") {
        duplicate_check(have_min_support, head, "min_support");
        next();
        const Token& value = peek();
        ast.min_support = integer();
        if (ast.min_support < 1) {
          throw QueryError(Errc::kSyntax, "min_support must be >= 1", value.line, value.column);
        }
      } else if (head.text == "constraint") {
        next();
        auto clause = constraint();
        if (std::holds_alternative<DiscriminativeClause>(clause)) {
          bool seen = discriminative_at != nullptr;
          duplicate_check(seen, head, "constraint discriminative");
          discriminative_at = &head;
        }
        ast.constraints.push_back(std::move(clause));
      } else {
        fail("unknown keyword '" + head.text + "'");
      }
      expect_punct(";");
    }

    const Token& end = peek();
    auto missing = [&](const std::string& what) {
      throw QueryError(Errc::kMissingClause, "missing " + what, end.line, end.column);
    };
    if (!have_index) missing("index_event clause");
    if (!have_event) missing("event clause");
    if (!have_positive) missing("window positive clause");
    if (discriminative_at && !negative_at) {
      missing("window negative clause (required by constraint discriminative)");
    }
    if (negative_at && !discriminative_at) {
      throw QueryError(Errc::kMissingClause,
                       "window negative requires constraint discriminative",
                       negative_at->line, negative_at->column);
    }
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& message) const {
    throw QueryError(Errc::kSyntax, message, peek().line, peek().column);
  }

  void duplicate_check(bool& seen, const Token& at, const std::string& what) {
    if (seen) throw QueryError(Errc::kDuplicateClause, "duplicate " + what, at.line, at.column);
    seen = true;
  }

  bool accept_word(std::string_view w) {
    if (peek().kind == Tok::kWord && peek().text == w) {
      next();
      return true;
    }
    return false;
  }

  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "', got " + describe(peek()));
  }

  bool accept_punct(std::string_view p) {
    if (peek().kind == Tok::kPunct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "', got " + describe(peek()));
  }

  std::string ident() {
    if (peek().kind != Tok::kWord) fail("expected an identifier, got " + describe(peek()));
    return next().text;
  }

  std::int64_t integer() {
    if (peek().kind != Tok::kInt) fail("expected an integer, got " + describe(peek()));
    const std::string& text = peek().text;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{}) fail("integer out of range: " + text);
    next();
    return value;
  }

  std::vector<std::string> code_set() {
    expect_punct("{");
    std::vector<std::string> codes;
    do {
      if (peek().kind != Tok::kWord && peek().kind != Tok::kInt) {
        fail("expected a code, got " + describe(peek()));
      }
      codes.push_back(next().text);
    } while (accept_punct(","));
    expect_punct("}");
    return codes;
  }

  std::int64_t bound() {
    expect_word("index");
    if (accept_punct("+")) return integer();
    if (accept_punct("-")) return -integer();
    return 0;
  }

  WindowClause window_body(const Token& at) {
    expect_punct("(");
    WindowClause w;
    w.lower = bound();
    expect_punct(",");
    w.upper = bound();
    expect_punct(")");
    if (!(w.lower < w.upper && w.upper <= 0)) {
      throw QueryError(Errc::kInvalidWindow,
                       "window bounds must satisfy lower < upper <= index", at.line, at.column);
    }
    return w;
  }

  Literal literal() {
    const Token& t = peek();
    if (t.kind == Tok::kInt) return Literal{next().text, true};
    if (t.kind == Tok::kWord || t.kind == Tok::kString) return Literal{next().text, false};
    fail("expected a value, got " + describe(t));
  }

  ConstraintClause constraint() {
    if (accept_word("discriminative")) return DiscriminativeClause{};
    if (accept_word("contains_value")) {
      expect_punct("(");
      ContainsValueClause c;
      c.attribute = ident();
      expect_punct(",");
      c.value = literal();
      expect_punct(")");
      return c;
    }
    if (accept_word("switch_count")) {
      expect_punct("(");
      SwitchCountClause c;
      c.attribute = ident();
      expect_punct(")");
      if (accept_punct("==")) {
        c.comparator = Comparator::kEq;
      } else if (accept_punct("<=")) {
        c.comparator = Comparator::kLe;
      } else if (accept_punct(">=")) {
        c.comparator = Comparator::kGe;
      } else {
        fail("expected '==', '<=' or '>=', got " + describe(peek()));
      }
      c.bound = integer();
      return c;
    }
    fail("unknown constraint " + describe(peek()));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string print_bound(std::int64_t offset) {
  if (offset == 0) return "index";
  if (offset > 0) return "index+" + std::to_string(offset);
  return "index-" + std::to_string(-offset);
}

std::string print_codes(const std::vector<std::string>& codes) {
  std::string out = "{";
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i) out += ", ";
    out += codes[i];
  }
  return out + "}";
}

std::string print_literal(const Literal& lit) {
  if (lit.integer) return lit.text;
  const bool bare = !lit.text.empty() && !all_digits(lit.text) &&
                    std::all_of(lit.text.begin(), lit.text.end(), is_word_char);
  if (bare) return lit.text;
  std::string out = "\"";
  for (char c : lit.text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

bool QueryAst::discriminative() const noexcept {
  return std::any_of(constraints.begin(), constraints.end(), [](const auto& c) {
    return std::holds_alternative<DiscriminativeClause>(c);
  });
}

QueryAst parse_query(std::string_view text) { return Parser(lex(text)).parse(); }

std::string print_query(const QueryAst& ast) {
  std::ostringstream out;
  out << "index_event first diagnosis in " << print_codes(ast.index_event.codes) << ";\n";
  out << "event delivery where atc in " << print_codes(ast.event.classes) << "\n      as (";
  for (std::size_t i = 0; i < ast.event.attributes.size(); ++i) {
    out << (i ? ", " : "") << ast.event.attributes[i];
  }
  out << ");\n";
  out << "window positive (" << print_bound(ast.positive.lower) << ", "
      << print_bound(ast.positive.upper) << ");\n";
  if (ast.negative) {
    out << "window negative (" << print_bound(ast.negative->lower) << ", "
        << print_bound(ast.negative->upper) << ");\n";
  }
  out << "min_support " << ast.min_support << ";\n";
  for (const auto& c : ast.constraints) {
    out << "constraint ";
    if (std::holds_alternative<DiscriminativeClause>(c)) {
      out << "discriminative";
    } else if (const auto* cv = std::get_if<ContainsValueClause>(&c)) {
      out << "contains_value(" << cv->attribute << ", " << print_literal(cv->value) << ")";
    } else if (const auto* sc = std::get_if<SwitchCountClause>(&c)) {
      out << "switch_count(" << sc->attribute << ") " << to_string(sc->comparator) << " "
          << sc->bound;
    }
    out << ";\n";
  }
  return out.str();
}

MiningTask compile(const QueryAst& ast, const KnowledgeBase& kb, const CompileOptions& options) {
  MiningTask task;

  for (const auto& code : ast.index_event.codes) {
    task.index_event.diagnosis_ancestors.insert(normalize_code(code));
  }

  for (const auto& name : ast.event.attributes) {
    if (!kb.has_attribute(name)) {
      throw QueryError(Errc::kUnknownAttribute,
                       "event attribute '" + name + "' is not a knowledge-base column");
    }
    task.schema.names.push_back(name);
  }

  std::set<std::string> listed;
  for (const auto& code : ast.event.classes) listed.insert(normalize_code(code));
  task.class_filter = listed;
  bool any_match = false;
  for (const auto& [code, row] : kb.attributes()) {
    const bool match = options.exact_class_match
                           ? listed.contains(row.therapeutic_class)
                           : kb.taxonomy().descends_from_any(row.therapeutic_class, listed);
    if (match) {
      task.class_filter.insert(row.therapeutic_class);
      any_match = true;
    }
  }
  if (!any_match) {
    throw QueryError(Errc::kEmptyClassFilter,
                     "no knowledge-base delivery code has a therapeutic class in " +
                         print_codes(ast.event.classes));
  }

  task.positive = WindowSpec{Polarity::kPositive, ast.positive.lower, ast.positive.upper};
  if (ast.negative) {
    WindowSpec neg{Polarity::kNegative, ast.negative->lower, ast.negative->upper};
    neg.lower_inclusive = neg.upper_inclusive = options.closed_negative_window;
    task.negative = neg;
  }

  const auto threshold = static_cast<std::size_t>(ast.min_support);
  task.constraints.push_back(make_constraint(MinSupportConstraint{threshold}));

  auto schema_index = [&](const std::string& name, const char* where) {
    auto idx = task.schema.index_of(name);
    if (!idx) {
      throw QueryError(Errc::kUnknownAttribute, std::string(where) + " attribute '" + name +
                                                    "' is not in the event projection");
    }
    return *idx;
  };

  for (const auto& clause : ast.constraints) {
    if (std::holds_alternative<DiscriminativeClause>(clause)) {
      task.constraints.push_back(make_constraint(DiscriminativeConstraint{threshold}));
    } else if (const auto* cv = std::get_if<ContainsValueClause>(&clause)) {
      ContainsValueConstraint c;
      c.attribute = schema_index(cv->attribute, "contains_value");
      if (KnowledgeBase::is_integer_attribute(cv->attribute)) {
        if (!cv->value.integer) {
          throw QueryError(Errc::kTypeMismatch, "contains_value(" + cv->attribute +
                                                    ", ...) needs an integer value");
        }
        c.value = static_cast<std::int64_t>(std::stoll(cv->value.text));
      } else if (cv->attribute == "cip" || cv->attribute == "atc" || cv->attribute == "group") {
        c.value = normalize_code(cv->value.text);
      } else {
        c.value = cv->value.text;
      }
      task.constraints.push_back(make_constraint(std::move(c)));
    } else if (const auto* sc = std::get_if<SwitchCountClause>(&clause)) {
      SwitchCountConstraint c;
      c.attribute = schema_index(sc->attribute, "switch_count");
      c.comparator = sc->comparator;
      c.bound = static_cast<std::size_t>(sc->bound);
      task.constraints.push_back(make_constraint(c));
    }
  }
  return task;
}

std::string seizure_switch_query(int min_support) {
  return "index_event first diagnosis in {G40, G41};\n"
         "event delivery where atc in {N03AX09,N03AX14,N03AX11,N03AG01,N03AF01}\n"
         "      as (atc, group, generic);\n"
         "window positive (index-90, index);\n"
         "window negative (index-180, index-90);\n"
         "min_support " +
         std::to_string(min_support) +
         ";\n"
         "constraint discriminative;\n"
         "constraint contains_value(generic, 1);\n"
         "constraint contains_value(generic, 0);\n"
         "constraint switch_count(generic) == 1;\n";
}

}  // namespace pathmine
