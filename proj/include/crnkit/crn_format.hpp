#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crnkit/crn.hpp"

namespace crnkit {

/// Syntax or semantic error in a textual input, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// A parsed .crn file: the network plus the optional role directives.
struct CrnDocument {
  Crn crn;
  std::vector<std::string> input;
  std::vector<std::string> vote0;
  std::vector<std::string> vote1;
  std::vector<std::string> output;
  std::optional<State> init;
  std::optional<double> volume;
};

CrnDocument parse_crn(std::string_view text);
CrnDocument read_crn_file(const std::string& path);

/// Serializes a document so that parse_crn(render_crn(d)) reproduces it.
std::string render_crn(const CrnDocument& doc);
std::string render_crn(const Crn& crn);
std::string render_reaction(const Crn& crn, const Reaction& r);

/// Parses "2X + 3Y" (or "0") against the species of `crn`.
State parse_state(const Crn& crn, std::string_view text);
/// "A + 2C"; the zero state renders as "0".
std::string format_state(const Crn& crn, const State& c);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

std::string read_text_file(const std::string& path);

}  // namespace crnkit
