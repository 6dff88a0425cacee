#include "codestab/grammar.hpp"

#include <algorithm>

#include "codestab/errors.hpp"
#include "codestab/tree_sitter_backend.hpp"

namespace codestab {

GrammarRegistry GrammarRegistry::with_builtin_grammars() {
  GrammarRegistry registry;
  registry.register_grammar(python_language(), make_python_backend());
  registry.register_grammar(sql_language(), make_sql_backend());
  return registry;
}

void GrammarRegistry::register_grammar(
    LanguageId lang, std::shared_ptr<const GrammarBackend> backend) {
  if (lang.name.empty()) {
    throw Error(ErrorKind::InvalidBackend, "language name must be non-empty");
  }
  if (!backend) {
    throw Error(ErrorKind::InvalidBackend,
                "null backend for language '" + lang.name + "'");
  }
  if (entries_.contains(lang.name)) {
    throw Error(ErrorKind::DuplicateGrammar,
                "grammar already registered for '" + lang.name + "'");
  }
  try {
    const ParseTree tree = backend->parse(backend->sample_program());
    check_parse_result(tree, lang.name, ParseOptions{.strict = true});
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidBackend, "backend for '" + lang.name +
                                               "' failed its sample program: " +
                                               e.what());
  }
  std::string key = lang.name;
  entries_.emplace(std::move(key), Entry{std::move(lang), std::move(backend)});
}

bool GrammarRegistry::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

const GrammarRegistry::Entry& GrammarRegistry::entry(
    std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorKind::UnknownLanguage,
                "no grammar registered for language '" + std::string(name) +
                    "'");
  }
  return it->second;
}

const LanguageId& GrammarRegistry::language(std::string_view name) const {
  return entry(name).id;
}

std::vector<LanguageId> GrammarRegistry::languages() const {
  std::vector<LanguageId> out;
  out.reserve(entries_.size());
  for (const auto& [name, e] : entries_) out.push_back(e.id);
  return out;
}

ParseTree GrammarRegistry::parse(std::string_view name,
                                 std::string_view source,
                                 ParseOptions options) const {
  const Entry& e = entry(name);
  if (source.empty()) {
    throw Error(ErrorKind::EmptyInput,
                "empty " + std::string(name) + " source text");
  }
  ParseTree tree = e.backend->parse(source);
  check_parse_result(tree, name, options);
  return tree;
}

void check_parse_result(const ParseTree& tree, std::string_view language,
                        ParseOptions options) {
  const std::string lang(language);
  const Node& root = tree.node(tree.root());
  if (root.is_error) {
    throw ParseError(lang, "root node is an error sentinel");
  }
  if (root.children.empty()) {
    throw ParseError(lang, "no parseable content");
  }
  const auto nodes = tree.nodes();
  if (std::all_of(root.children.begin(), root.children.end(),
                  [&](NodeId c) { return nodes[c].is_error; })) {
    throw ParseError(lang, "input consists solely of unparseable text");
  }
  if (options.strict && tree.has_errors()) {
    const auto bad = std::find_if(nodes.begin(), nodes.end(),
                                  [](const Node& n) { return n.is_error; });
    std::string where;
    if (bad != nodes.end()) {
      where = " at byte " + std::to_string(bad->lexeme_span.begin);
    }
    throw ParseError(lang, "error-recovery node" + where + " (strict mode)");
  }
}

}  // namespace codestab
