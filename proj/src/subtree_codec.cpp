#include "codestab/subtree_codec.hpp"

#include <charconv>
#include <string_view>
#include <unordered_map>

#include "codestab/errors.hpp"

namespace codestab {

const char* to_string(EncodingScheme scheme) noexcept {
  return scheme == EncodingScheme::StructOnly ? "structural" : "value";
}

DepthBound::DepthBound(int d) : d_(d) {
  if (d < 1) {
    throw Error(ErrorKind::InvalidConfig,
                "depth bound must be >= 1, got " + std::to_string(d));
  }
}

namespace {

constexpr char kHex[] = "0123456789abcdef";
constexpr std::size_t kMaxDecodeNesting = 4096;

bool needs_escape(unsigned char c) {
  return c < 0x20 || c == 0x7f || c == '\\';
}

void append_str(std::string& out, std::string_view s) {
  out += std::to_string(s.size());
  out += ':';
  for (unsigned char c : s) {
    if (needs_escape(c)) {
      out += "\\x";
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
}

void append_node(const ParseTree& tree, NodeId id, int remaining,
                 EncodingScheme scheme, std::string& out) {
  const Node& n = tree.nodes()[id];
  append_str(out, n.node_type);
  if (remaining == 0) return;
  if (scheme == EncodingScheme::StructValue) {
    out += '@';
    if (n.children.empty()) {
      append_str(out, tree.lexeme(id));
    } else {
      out += '~';
    }
  }
  out += '(';
  for (NodeId c : n.children) append_node(tree, c, remaining - 1, scheme, out);
  out += ')';
}

class Decoder {
 public:
  explicit Decoder(std::string_view text) : text_(text) {}

  DecodedSubtree decode_all() {
    DecodedSubtree root = node(0);
    if (pos_ != text_.size()) fail("trailing bytes");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::MalformedSymbol, "malformed subtree symbol at byte " +
                                                std::to_string(pos_) + ": " +
                                                why);
  }

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  bool at_digit() const {
    return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
  }

  std::string str() {
    const std::size_t start = pos_;
    while (at_digit()) ++pos_;
    if (pos_ == start) fail("expected a length prefix");
    if (text_[start] == '0' && pos_ - start > 1) fail("non-canonical length");
    std::size_t len = 0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, len);
    if (ec != std::errc()) fail("length prefix out of range");
    if (!at(':')) fail("expected ':' after length");
    ++pos_;
    std::string out;
    out.reserve(len);
    while (out.size() < len) {
      if (pos_ >= text_.size()) fail("string shorter than its length prefix");
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (c == '\\') {
        if (pos_ + 4 > text_.size() || text_[pos_ + 1] != 'x') {
          fail("bad escape sequence");
        }
        const int hi = hex(text_[pos_ + 2]);
        const int lo = hex(text_[pos_ + 3]);
        const auto byte = static_cast<unsigned char>(hi * 16 + lo);
        if (!needs_escape(byte)) fail("non-canonical escape");
        out += static_cast<char>(byte);
        pos_ += 4;
      } else {
        if (needs_escape(c)) fail("unescaped control byte");
        out += static_cast<char>(c);
        ++pos_;
      }
    }
    return out;
  }

  int hex(char c) const {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    fail("bad hex digit");
  }

  DecodedSubtree node(std::size_t nesting) {
    if (nesting > kMaxDecodeNesting) fail("nesting too deep");
    DecodedSubtree out;
    out.node_type = str();
    if (out.node_type.empty()) fail("empty node type");
    if (at('@')) {
      ++pos_;
      if (at('~')) {
        ++pos_;
        out.value = DecodedSubtree::Value::Sentinel;
      } else {
        out.value = DecodedSubtree::Value::Lexeme;
        out.lexeme = str();
      }
    }
    if (at('(')) {
      ++pos_;
      std::vector<DecodedSubtree> children;
      while (!at(')')) {
        if (pos_ >= text_.size()) fail("unterminated child list");
        children.push_back(node(nesting + 1));
      }
      ++pos_;
      out.children = std::move(children);
    }
    // Value slots only appear above the frontier: '~' on internal nodes,
    // source text on leaves.
    if (out.value != DecodedSubtree::Value::Absent) {
      if (!out.children) fail("value slot on a frontier node");
      const bool leaf = out.children->empty();
      if (leaf != (out.value == DecodedSubtree::Value::Lexeme)) {
        fail(leaf ? "sentinel on a leaf" : "lexeme on an internal node");
      }
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void append_decoded(const DecodedSubtree& s, std::string& out) {
  append_str(out, s.node_type);
  switch (s.value) {
    case DecodedSubtree::Value::Absent: break;
    case DecodedSubtree::Value::Sentinel: out += "@~"; break;
    case DecodedSubtree::Value::Lexeme:
      out += '@';
      append_str(out, s.lexeme);
      break;
  }
  if (s.children) {
    out += '(';
    for (const auto& c : *s.children) append_decoded(c, out);
    out += ')';
  }
}

}  // namespace

SubtreeSymbol encode_subtree(const ParseTree& tree, NodeId v, DepthBound d,
                             EncodingScheme scheme) {
  if (!tree.contains(v)) {
    throw Error(ErrorKind::InvalidNode,
                "node id " + std::to_string(v) + " is not in the tree");
  }
  std::string out;
  append_node(tree, v, d.value(), scheme, out);
  return SubtreeSymbol(std::move(out));
}

SubtreeMultiset extract_symbols(const ParseTree& tree, DepthBound d,
                                EncodingScheme scheme) {
  std::unordered_map<std::string, std::uint64_t> counts;
  counts.reserve(tree.size());
  std::string buffer;
  for (NodeId v : preorder(tree)) {
    buffer.clear();
    append_node(tree, v, d.value(), scheme, buffer);
    ++counts[buffer];
  }
  SubtreeMultiset out;
  for (auto& [form, n] : counts) out.add(SubtreeSymbol(form), n);
  return out;
}

DecodedSubtree decode_symbol(const SubtreeSymbol& symbol) {
  return Decoder(symbol.canonical_form()).decode_all();
}

SubtreeSymbol encode_decoded(const DecodedSubtree& subtree) {
  std::string out;
  append_decoded(subtree, out);
  return SubtreeSymbol(std::move(out));
}

}  // namespace codestab
