#include "crnkit/crn_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <span>
#include <sstream>

namespace crnkit {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

bool is_name_char(char ch) {
  const auto u = static_cast<unsigned char>(ch);
  return std::isalnum(u) || ch == '_' || ch == '\'' || ch == '.' || ch == '*' ||
         ch == '^' || u >= 0x80;
}

// Cursor over one line of input.
class LineLexer {
 public:
  LineLexer(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!consume(token)) fail("expected '" + std::string(token) + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, static_cast<int>(pos_) + 1);
  }
  int column() const { return static_cast<int>(pos_) + 1; }

  std::string word() {
    std::string w;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
      w += text_[pos_++];
    }
    return w;
  }

  std::string name() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected species name");
    std::string n(text_.substr(start, pos_ - start));
    if (!is_valid_species_name(n)) {
      pos_ = start;
      fail("invalid species name '" + n + "'");
    }
    return n;
  }

  std::optional<Count> integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) return std::nullopt;
    Count value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || value > kMaxCoefficient) {
      pos_ = start;
      fail("coefficient out of range");
    }
    return value;
  }

  double decimal() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '-' ||
            text_[pos_] == '+')) {
      ++pos_;
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (start == pos_ || ec != std::errc() || ptr != text_.data() + pos_ ||
        !std::isfinite(value)) {
      pos_ = start;
      fail("expected a decimal number");
    }
    return value;
  }

  // `0` or term (+ term)*; returns (name, coeff) pairs.
  CrnBuilder::Side side() {
    CrnBuilder::Side out;
    skip_space();
    if (peek() == '0') {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !is_name_char(text_[pos_])) return out;
      pos_ = save;
    }
    for (;;) {
      std::optional<Count> coeff = integer();
      if (coeff && *coeff == 0) fail("zero coefficient");
      out.emplace_back(name(), coeff.value_or(1));
      if (!consume("+")) break;
    }
    return out;
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

struct PendingDirective {
  std::string keyword;
  std::vector<std::pair<std::string, int>> names;  // name, column
  CrnBuilder::Side terms;
  std::vector<int> term_columns;
  int line;
};

}  // namespace

CrnDocument parse_crn(std::string_view text) {
  CrnBuilder builder;
  std::vector<PendingDirective> directives;
  std::optional<double> volume;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto pct = line.find('%'); pct != std::string_view::npos) line = line.substr(0, pct);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineLexer lex(line, line_no);
    if (lex.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    if (lex.consume("#")) {
      PendingDirective d;
      d.line = line_no;
      const int kw_col = lex.column();
      d.keyword = lex.word();
      if (d.keyword == "input" || d.keyword == "vote0" || d.keyword == "vote1" ||
          d.keyword == "output" || d.keyword == "species") {
        while (!lex.at_end()) {
          const int col = lex.column();
          d.names.emplace_back(lex.name(), col);
          lex.consume(",");
        }
        if (d.keyword == "species") {
          for (const auto& [n, col] : d.names) builder.add_species(n);
        }
      } else if (d.keyword == "init") {
        lex.skip_space();
        d.term_columns.push_back(lex.column());
        d.terms = lex.side();
        if (!lex.at_end()) lex.fail("unexpected text after #init");
      } else if (d.keyword == "volume") {
        const double v = lex.decimal();
        if (!(v > 0)) throw ParseError("volume must be positive", line_no, kw_col);
        volume = v;
        if (!lex.at_end()) lex.fail("unexpected text after #volume");
        continue;
      } else {
        throw ParseError("unknown directive '#" + d.keyword + "'", line_no, kw_col);
      }
      directives.push_back(std::move(d));
      continue;
    }
    CrnBuilder::Side reactants = lex.side();
    lex.expect("->");
    CrnBuilder::Side products = lex.side();
    double rate = 1.0;
    if (lex.consume("[")) {
      lex.expect("k");
      lex.expect("=");
      const int col = lex.column();
      rate = lex.decimal();
      if (!(rate > 0)) throw ParseError("nonpositive rate constant", line_no, col);
      lex.expect("]");
    }
    if (!lex.at_end()) lex.fail("unexpected text after reaction");
    builder.add_reaction(reactants, products, rate);
  }

  CrnDocument doc;
  doc.crn = builder.build();
  doc.volume = volume;
  for (const auto& d : directives) {
    auto check = [&](const std::string& n, int col) {
      if (!doc.crn.find_species(n)) {
        throw ParseError("unknown species '" + n + "' in #" + d.keyword, d.line, col);
      }
    };
    if (d.keyword == "init") {
      State s = doc.crn.zero_state();
      for (const auto& [n, coeff] : d.terms) {
        check(n, d.term_columns.front());
        s[doc.crn.species_index(n)] += coeff;
      }
      doc.init = s;
      continue;
    }
    std::vector<std::string>* target = nullptr;
    if (d.keyword == "input") target = &doc.input;
    if (d.keyword == "vote0") target = &doc.vote0;
    if (d.keyword == "vote1") target = &doc.vote1;
    if (d.keyword == "output") target = &doc.output;
    for (const auto& [n, col] : d.names) {
      check(n, col);
      if (target && std::find(target->begin(), target->end(), n) == target->end()) {
        target->push_back(n);
      }
    }
  }
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CrnDocument read_crn_file(const std::string& path) {
  return parse_crn(read_text_file(path));
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::string render_side(const Crn& crn, std::span<const Term> terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (const Term& t : terms) {
    if (!out.empty()) out += " + ";
    if (t.coeff != 1) out += std::to_string(t.coeff);
    out += crn.species_name(t.species);
  }
  return out;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += " " + n;
  return out;
}

}  // namespace

std::string render_reaction(const Crn& crn, const Reaction& r) {
  std::string out = render_side(crn, r.reactant_terms()) + " -> " +
                    render_side(crn, r.product_terms());
  if (r.rate() != 1.0) out += " [k=" + format_double(r.rate()) + "]";
  return out;
}

std::string render_crn(const Crn& crn) {
  CrnDocument doc;
  doc.crn = crn;
  return render_crn(doc);
}

std::string render_crn(const CrnDocument& doc) {
  const Crn& crn = doc.crn;
  std::string out;
  // Species that no reaction mentions would otherwise be lost.
  std::vector<bool> used(crn.species_count(), false);
  for (const auto& r : crn.reactions()) {
    for (const Term& t : r.reactant_terms()) used[t.species] = true;
    for (const Term& t : r.product_terms()) used[t.species] = true;
  }
  std::vector<std::string> unused;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) unused.push_back(crn.species_name(i));
  }
  if (!unused.empty()) out += "#species" + join(unused) + "\n";
  for (const auto& r : crn.reactions()) out += render_reaction(crn, r) + "\n";
  if (!doc.input.empty()) out += "#input" + join(doc.input) + "\n";
  if (!doc.vote0.empty()) out += "#vote0" + join(doc.vote0) + "\n";
  if (!doc.vote1.empty()) out += "#vote1" + join(doc.vote1) + "\n";
  if (!doc.output.empty()) out += "#output" + join(doc.output) + "\n";
  if (doc.init) out += "#init " + format_state(crn, *doc.init) + "\n";
  if (doc.volume) out += "#volume " + format_double(*doc.volume) + "\n";
  return out;
}

State parse_state(const Crn& crn, std::string_view text) {
  LineLexer lex(text, 1);
  const int col = lex.column();
  CrnBuilder::Side terms = lex.side();
  if (!lex.at_end()) lex.fail("unexpected text in state");
  State s = crn.zero_state();
  for (const auto& [n, coeff] : terms) {
    auto i = crn.find_species(n);
    if (!i) throw ParseError("unknown species '" + n + "'", 1, col);
    s[*i] += coeff;
  }
  return s;
}

std::string format_state(const Crn& crn, const State& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (c[i] != 1) out += std::to_string(c[i]);
    out += crn.species_name(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace crnkit
