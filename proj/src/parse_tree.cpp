#include "codestab/parse_tree.hpp"

#include <string>

#include "codestab/errors.hpp"

namespace codestab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownLanguage: return "unknown-language";
    case ErrorKind::DuplicateGrammar: return "duplicate-grammar";
    case ErrorKind::InvalidBackend: return "invalid-backend";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::ParseFailure: return "parse-failure";
    case ErrorKind::InvalidNode: return "invalid-node";
    case ErrorKind::InvalidTree: return "invalid-tree";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::MalformedSymbol: return "malformed-symbol";
    case ErrorKind::EmptyDistribution: return "empty-distribution";
    case ErrorKind::SupportMismatch: return "support-mismatch";
    case ErrorKind::InvalidEpsilon: return "invalid-epsilon";
    case ErrorKind::UnsmoothedZero: return "unsmoothed-zero";
    case ErrorKind::DegenerateScore: return "degenerate-score";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::EmptyReport: return "empty-report";
    case ErrorKind::DatasetFormat: return "dataset-format";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

namespace {

[[noreturn]] void invalid_tree(const std::string& why) {
  throw Error(ErrorKind::InvalidTree, "invalid parse tree: " + why);
}

}  // namespace

ParseTree::ParseTree(std::string source, std::vector<Node> nodes, NodeId root,
                     bool has_errors)
    : source_(std::move(source)),
      nodes_(std::move(nodes)),
      root_(root),
      has_errors_(has_errors) {
  if (nodes_.empty()) invalid_tree("no nodes");
  if (root_ >= nodes_.size()) invalid_tree("root id out of range");

  std::vector<std::uint32_t> parents(nodes_.size(), 0);
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.node_type.empty()) {
      invalid_tree("node " + std::to_string(id) + " has an empty node type");
    }
    if (n.lexeme_span.begin > n.lexeme_span.end ||
        n.lexeme_span.end > source_.size()) {
      invalid_tree("node " + std::to_string(id) + " span outside source");
    }
    if (n.is_error) has_errors_ = true;
    for (NodeId c : n.children) {
      if (c >= nodes_.size()) {
        invalid_tree("child id " + std::to_string(c) + " out of range");
      }
      ++parents[c];
    }
  }
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const std::uint32_t expected = id == root_ ? 0 : 1;
    if (parents[id] != expected) {
      invalid_tree("node " + std::to_string(id) + " has " +
                   std::to_string(parents[id]) + " parents");
    }
  }
  // With one parent per non-root node, acyclicity is equivalent to every node
  // being reachable from the root.
  if (node_count(*this) != nodes_.size()) {
    invalid_tree("cycle or unreachable nodes");
  }
}

const Node& ParseTree::node(NodeId id) const {
  if (!contains(id)) {
    throw Error(ErrorKind::InvalidNode,
                "node id " + std::to_string(id) + " is not in the tree");
  }
  return nodes_[id];
}

std::string_view ParseTree::lexeme(NodeId id) const {
  const ByteSpan& s = node(id).lexeme_span;
  return std::string_view(source_).substr(s.begin, s.size());
}

std::size_t node_count(const ParseTree& tree) {
  // Bounded by size() so a malformed child graph cannot loop forever.
  std::vector<NodeId> stack{tree.root()};
  std::size_t count = 0;
  const auto nodes = tree.nodes();
  while (!stack.empty() && count <= nodes.size()) {
    const NodeId id = stack.back();
    stack.pop_back();
    ++count;
    for (NodeId c : nodes[id].children) stack.push_back(c);
  }
  return count;
}

std::vector<NodeId> preorder(const ParseTree& tree) {
  std::vector<NodeId> order;
  order.reserve(tree.size());
  std::vector<NodeId> stack{tree.root()};
  const auto nodes = tree.nodes();
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const auto& ch = nodes[id].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

NodeId TreeBuilder::add(std::string node_type, ByteSpan span) {
  nodes_.push_back(Node{std::move(node_type), span, {}, false});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::add_child(NodeId parent, std::string node_type,
                              ByteSpan span) {
  const NodeId id = add(std::move(node_type), span);
  attach(parent, id);
  return id;
}

void TreeBuilder::attach(NodeId parent, NodeId child) {
  if (parent >= nodes_.size() || child >= nodes_.size()) {
    throw Error(ErrorKind::InvalidNode, "attach: node id out of range");
  }
  nodes_[parent].children.push_back(child);
}

void TreeBuilder::mark_error(NodeId id) {
  if (id >= nodes_.size()) {
    throw Error(ErrorKind::InvalidNode, "mark_error: node id out of range");
  }
  nodes_[id].is_error = true;
  has_errors_ = true;
}

ParseTree TreeBuilder::build(NodeId root) && {
  return ParseTree(std::move(source_), std::move(nodes_), root, has_errors_);
}

}  // namespace codestab
