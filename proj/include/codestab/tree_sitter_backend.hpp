#pragma once

#include <memory>
#include <string>

#include "codestab/grammar.hpp"

struct TSLanguage;

namespace codestab {

// Adapts a tree-sitter grammar to GrammarBackend. Every child the grammar
// produces is kept, anonymous tokens ("=", "(") and comments included.
class TreeSitterBackend final : public GrammarBackend {
 public:
  TreeSitterBackend(const TSLanguage* language, std::string sample_program);

  ParseTree parse(std::string_view source) const override;
  std::string_view sample_program() const override { return sample_; }

 private:
  const TSLanguage* language_;
  std::string sample_;
};

std::shared_ptr<const GrammarBackend> make_python_backend();
std::shared_ptr<const GrammarBackend> make_sql_backend();

LanguageId python_language();
LanguageId sql_language();

}  // namespace codestab
