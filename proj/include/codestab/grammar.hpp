#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "codestab/parse_tree.hpp"

namespace codestab {

struct LanguageId {
  std::string name;             // e.g. "python", "sql"
  std::string grammar_version;  // opaque, echoed into report provenance
};

// A parser for one language. Implementations must be safe to call from
// several threads at once (the tree-sitter backend creates a parser per call).
class GrammarBackend {
 public:
  virtual ~GrammarBackend() = default;

  // Raw grammar output. May contain error-recovery nodes; the registry decides
  // whether the result is acceptable.
  virtual ParseTree parse(std::string_view source) const = 0;

  // A small well-formed program used to smoke-test the backend on
  // registration.
  virtual std::string_view sample_program() const = 0;
};

struct ParseOptions {
  // Reject trees containing any error-recovery node.
  bool strict = false;
};

// Language name -> backend. Populate before parsing starts; lookups are
// read-only afterwards and may run concurrently.
class GrammarRegistry {
 public:
  // Registry preloaded with the bundled python and sql grammars.
  static GrammarRegistry with_builtin_grammars();

  // Throws DuplicateGrammar when the name is taken, InvalidBackend when the
  // backend cannot parse its own sample program.
  void register_grammar(LanguageId lang,
                        std::shared_ptr<const GrammarBackend> backend);

  bool contains(std::string_view name) const;
  const LanguageId& language(std::string_view name) const;
  std::vector<LanguageId> languages() const;

  // Errors: UnknownLanguage, EmptyInput, ParseError (root is an error
  // sentinel, nothing parsed, or strict mode with error nodes present).
  ParseTree parse(std::string_view name, std::string_view source,
                  ParseOptions options = {}) const;

 private:
  struct Entry {
    LanguageId id;
    std::shared_ptr<const GrammarBackend> backend;
  };
  const Entry& entry(std::string_view name) const;

  std::map<std::string, Entry, std::less<>> entries_;
};

// Applies the acceptance rules shared by every backend. Throws ParseError.
void check_parse_result(const ParseTree& tree, std::string_view language,
                        ParseOptions options);

}  // namespace codestab
