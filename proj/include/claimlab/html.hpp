#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// A small error-tolerant HTML tree builder: tag soup in, element tree out.
// Covers what section extraction needs (implied end tags for p/li/td and
// friends, void elements, raw-text script/style, comments); it does not
// implement the full HTML5 insertion-mode machine.
namespace claimlab::html {

struct Node {
  enum class Kind { Document, Element, Text, Comment };

  Kind kind = Kind::Document;
  std::string name;  // lower-case tag name for elements
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // entity-decoded content for text nodes
  std::vector<std::unique_ptr<Node>> children;
  Node* parent = nullptr;
  // Byte span of the node's outer HTML in the source document.
  std::size_t begin = 0;
  std::size_t end = 0;

  bool is_element() const { return kind == Kind::Element; }
  std::optional<std::string_view> attribute(std::string_view attr) const;
  std::vector<std::string_view> classes() const;
  bool has_class(std::string_view cls) const;
};

class Document {
 public:
  explicit Document(std::string source);

  const Node& root() const { return *root_; }
  const std::string& source() const { return source_; }
  std::string_view outer_html(const Node& node) const;

 private:
  std::string source_;
  std::unique_ptr<Node> root_;
};

using NodePredicate = std::function<bool(const Node&)>;

// Document order (pre-order).
const Node* find_first(const Node& root, const NodePredicate& pred);
std::vector<const Node*> find_all(const Node& root, const NodePredicate& pred);

// Concatenated text of the subtree, script/style excluded, block element
// boundaries treated as whitespace, then whitespace-collapsed. Subtrees
// for which `skip` returns true are left out.
std::string text_content(const Node& node, const NodePredicate& skip = {});

// Character reference decoding with the HTML5 named table, including the
// legacy no-semicolon forms and the numeric remapping rules.
std::string decode_entities(std::string_view s);

bool is_void_element(std::string_view tag);

}  // namespace claimlab::html
