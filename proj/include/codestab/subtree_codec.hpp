#pragma once

#include <optional>
#include <string>
#include <vector>

#include "codestab/parse_tree.hpp"
#include "codestab/symbol.hpp"

namespace codestab {

enum class EncodingScheme {
  StructOnly,   // node types only
  StructValue,  // node types plus leaf lexemes (sentinel for internal nodes)
};

const char* to_string(EncodingScheme scheme) noexcept;

// Depth parameter d >= 1: a subtree holds its root plus d levels below it.
class DepthBound {
 public:
  explicit DepthBound(int d);
  int value() const noexcept { return d_; }

 private:
  int d_;
};

// Canonical form grammar:
//
//   node  := str [ '@' ( '~' | str ) ] [ '(' node* ')' ]
//   str   := <decimal byte count> ':' <bytes>
//
// Nodes above the depth frontier carry a child list; under StructValue they
// also carry a value slot, '~' for internal nodes or the exact source text for
// leaves. Frontier nodes (exactly d levels below the root) are bare types.
// Inside str, backslash and control bytes (< 0x20, 0x7f) are written as \xHH;
// the length counts raw bytes. Other bytes, UTF-8 included, pass through.
//
// For d = 1 this is (type(v), [lexeme(v)], (type(c1), ..., type(ck))).
SubtreeSymbol encode_subtree(const ParseTree& tree, NodeId v, DepthBound d,
                             EncodingScheme scheme);

// One symbol per node of the tree, so total() == node_count(tree).
SubtreeMultiset extract_symbols(const ParseTree& tree, DepthBound d,
                                EncodingScheme scheme);

struct DecodedSubtree {
  enum class Value { Absent, Sentinel, Lexeme };

  std::string node_type;
  Value value = Value::Absent;
  std::string lexeme;
  // nullopt for frontier nodes, which carry no child list at all.
  std::optional<std::vector<DecodedSubtree>> children;

  friend bool operator==(const DecodedSubtree&,
                         const DecodedSubtree&) = default;
};

// Inverse of encode_subtree. Throws Error(MalformedSymbol).
DecodedSubtree decode_symbol(const SubtreeSymbol& symbol);

// Re-encodes a decoded structure; encode(decode(s)) == s.
SubtreeSymbol encode_decoded(const DecodedSubtree& subtree);

}  // namespace codestab
