#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codestab {

using NodeId = std::uint32_t;

// Half-open byte range [begin, end) into ParseTree::source().
struct ByteSpan {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const noexcept { return end - begin; }
  bool covers(const ByteSpan& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

struct Node {
  std::string node_type;
  ByteSpan lexeme_span;
  std::vector<NodeId> children;
  // Set for grammar error-recovery nodes (tree-sitter ERROR / MISSING).
  bool is_error = false;
};

// Rooted, ordered, acyclic tree over a retained source buffer.
//
// Construction validates the structural invariants: the root exists, every
// other node has exactly one parent, no cycles, every span lies inside the
// source. Instances are immutable afterwards and safe to share across threads.
class ParseTree {
 public:
  ParseTree(std::string source, std::vector<Node> nodes, NodeId root,
            bool has_errors = false);

  NodeId root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool contains(NodeId id) const noexcept { return id < nodes_.size(); }

  // Throws Error(InvalidNode) for ids outside the tree.
  const Node& node(NodeId id) const;
  std::span<const Node> nodes() const noexcept { return nodes_; }

  std::string_view source() const noexcept { return source_; }
  std::string_view lexeme(NodeId id) const;

  bool is_leaf(NodeId id) const { return node(id).children.empty(); }
  // True when any error-recovery node is present anywhere in the tree.
  bool has_errors() const noexcept { return has_errors_; }

 private:
  std::string source_;
  std::vector<Node> nodes_;
  NodeId root_;
  bool has_errors_;
};

// Number of nodes reachable from the root.
std::size_t node_count(const ParseTree& tree);

// Node ids in pre-order (parent before children, children in source order).
std::vector<NodeId> preorder(const ParseTree& tree);

// Incremental construction of hand-made trees (tests, synthetic corpora).
class TreeBuilder {
 public:
  explicit TreeBuilder(std::string source = {}) : source_(std::move(source)) {}

  NodeId add(std::string node_type, ByteSpan span = {});
  NodeId add_child(NodeId parent, std::string node_type, ByteSpan span = {});
  void attach(NodeId parent, NodeId child);
  void mark_error(NodeId id);

  ParseTree build(NodeId root) &&;

 private:
  std::string source_;
  std::vector<Node> nodes_;
  bool has_errors_ = false;
};

}  // namespace codestab
