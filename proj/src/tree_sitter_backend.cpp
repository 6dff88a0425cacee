#include "codestab/tree_sitter_backend.hpp"

#include <tree_sitter/api.h>

#include <algorithm>
#include <limits>
#include <memory>

#include "codestab/errors.hpp"

extern "C" const TSLanguage* tree_sitter_python();
extern "C" const TSLanguage* tree_sitter_sql();

namespace codestab {

namespace {

struct ParserDeleter {
  void operator()(TSParser* p) const noexcept { ts_parser_delete(p); }
};
struct TreeDeleter {
  void operator()(TSTree* t) const noexcept { ts_tree_delete(t); }
};
struct CursorGuard {
  TSTreeCursor cursor;
  explicit CursorGuard(TSNode root) : cursor(ts_tree_cursor_new(root)) {}
  ~CursorGuard() { ts_tree_cursor_delete(&cursor); }
  CursorGuard(const CursorGuard&) = delete;
  CursorGuard& operator=(const CursorGuard&) = delete;
};

Node make_node(TSNode n) {
  Node out;
  out.node_type = ts_node_type(n);
  out.lexeme_span = ByteSpan{ts_node_start_byte(n), ts_node_end_byte(n)};
  out.is_error = ts_node_is_error(n) || ts_node_is_missing(n);
  return out;
}

}  // namespace

TreeSitterBackend::TreeSitterBackend(const TSLanguage* language,
                                     std::string sample_program)
    : language_(language), sample_(std::move(sample_program)) {
  if (language_ == nullptr) {
    throw Error(ErrorKind::InvalidBackend, "null tree-sitter language");
  }
}

ParseTree TreeSitterBackend::parse(std::string_view source) const {
  if (source.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidConfig, "source exceeds 4 GiB");
  }
  std::unique_ptr<TSParser, ParserDeleter> parser(ts_parser_new());
  if (!ts_parser_set_language(parser.get(), language_)) {
    throw Error(ErrorKind::InvalidBackend,
                "tree-sitter language ABI version is incompatible");
  }
  std::unique_ptr<TSTree, TreeDeleter> ts_tree(ts_parser_parse_string(
      parser.get(), nullptr, source.data(),
      static_cast<std::uint32_t>(source.size())));
  if (!ts_tree) {
    throw Error(ErrorKind::ParseFailure, "tree-sitter produced no tree");
  }

  const TSNode root = ts_tree_root_node(ts_tree.get());
  std::vector<Node> nodes;
  nodes.push_back(make_node(root));

  // Pre-order walk with a cursor; ts_node_child is linear in the child index,
  // which would make wide nodes quadratic.
  CursorGuard guard(root);
  TSTreeCursor* cur = &guard.cursor;
  std::vector<NodeId> parents;
  NodeId current = 0;
  auto emit = [&](NodeId parent) {
    nodes.push_back(make_node(ts_tree_cursor_current_node(cur)));
    const auto id = static_cast<NodeId>(nodes.size() - 1);
    nodes[parent].children.push_back(id);
    return id;
  };
  for (bool done = false; !done;) {
    if (ts_tree_cursor_goto_first_child(cur)) {
      parents.push_back(current);
      current = emit(parents.back());
      continue;
    }
    for (;;) {
      if (ts_tree_cursor_goto_next_sibling(cur)) {
        current = emit(parents.back());
        break;
      }
      if (!ts_tree_cursor_goto_parent(cur)) {
        done = true;
        break;
      }
      current = parents.back();
      parents.pop_back();
    }
  }

  // Children always carry larger ids than their parent, so a reverse sweep
  // widens every ancestor to cover its descendants.
  for (std::size_t i = nodes.size(); i-- > 0;) {
    Node& n = nodes[i];
    for (NodeId c : n.children) {
      n.lexeme_span.begin =
          std::min(n.lexeme_span.begin, nodes[c].lexeme_span.begin);
      n.lexeme_span.end = std::max(n.lexeme_span.end, nodes[c].lexeme_span.end);
    }
  }

  const bool has_errors = ts_node_has_error(root);
  return ParseTree(std::string(source), std::move(nodes), 0, has_errors);
}

std::shared_ptr<const GrammarBackend> make_python_backend() {
  return std::make_shared<TreeSitterBackend>(tree_sitter_python(),
                                             "x = 1\n");
}

std::shared_ptr<const GrammarBackend> make_sql_backend() {
  return std::make_shared<TreeSitterBackend>(tree_sitter_sql(), "SELECT 1;\n");
}

LanguageId python_language() {
  return LanguageId{"python", "tree-sitter-python 0.25.0"};
}

LanguageId sql_language() {
  return LanguageId{"sql", "tree-sitter-sql 0.3.11"};
}

}  // namespace codestab
