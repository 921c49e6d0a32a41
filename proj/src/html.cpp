#include "claimlab/html.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <span>

#include "claimlab/text.hpp"

namespace claimlab::html {
namespace {

struct NamedEntity {
  const char* name;
  const char* value;
};

struct RemappedCharref {
  char32_t codepoint;
  const char* value;
};

#include "html_entities.inc"

constexpr std::array<std::string_view, 14> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param",
    "source", "track", "wbr"};

// Starting one of these closes an open <p>.
constexpr std::array<std::string_view, 33> kClosesParagraph = {
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div",
    "dl", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hgroup", "hr", "main", "menu", "nav", "ol", "p", "pre", "section",
    "table", "ul"};

constexpr std::array<std::string_view, 36> kBlockElements = {
    "address", "article", "aside", "blockquote", "br", "caption", "dd", "details", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section", "table", "td",
    "th", "tr", "ul"};

// Elements that stop the search for an open <p> (simplified button scope).
constexpr std::array<std::string_view, 9> kScopeBoundaries = {
    "html", "table", "td", "th", "caption", "button", "object", "marquee", "template"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

const char* lookup_entity(std::string_view name) {
  auto it = std::lower_bound(std::begin(kNamedEntities), std::end(kNamedEntities), name,
                             [](const NamedEntity& e, std::string_view n) { return e.name < n; });
  if (it != std::end(kNamedEntities) && it->name == name) return it->value;
  return nullptr;
}

void append_numeric_reference(std::string& out, char32_t num) {
  auto remap = std::lower_bound(
      std::begin(kRemappedCharrefs), std::end(kRemappedCharrefs), num,
      [](const RemappedCharref& r, char32_t n) { return r.codepoint < n; });
  if (remap != std::end(kRemappedCharrefs) && remap->codepoint == num) {
    out += remap->value;
    return;
  }
  if ((num >= 0xD800 && num <= 0xDFFF) || num > 0x10FFFF) {
    text::append_utf8(out, 0xFFFD);
    return;
  }
  if (std::binary_search(std::begin(kDroppedCodepoints), std::end(kDroppedCodepoints), num)) {
    return;
  }
  text::append_utf8(out, num);
}

bool is_name_excluded(char32_t cp) {
  return cp == '\t' || cp == '\n' || cp == '\f' || cp == ' ' || cp == '<' || cp == '&' ||
         cp == '#' || cp == ';';
}

class TreeBuilder {
 public:
  TreeBuilder(const std::string& src, Node& root) : src_(src), root_(root) {
    stack_.push_back(&root_);
  }

  void run() {
    std::size_t text_start = 0;
    while (pos_ < src_.size()) {
      if (src_[pos_] != '<') {
        ++pos_;
        continue;
      }
      const std::size_t tag_start = pos_;
      if (!at_markup()) {
        ++pos_;
        continue;
      }
      emit_text(text_start, tag_start);
      parse_markup();
      text_start = pos_;
    }
    emit_text(text_start, src_.size());
    for (std::size_t i = stack_.size(); i-- > 1;) stack_[i]->end = src_.size();
    root_.end = src_.size();
  }

 private:
  bool at_markup() const {
    if (pos_ + 1 >= src_.size()) return false;
    const char c = src_[pos_ + 1];
    if (is_alpha(c) || c == '!' || c == '?') return true;
    return c == '/' && pos_ + 2 < src_.size() && is_alpha(src_[pos_ + 2]);
  }

  Node* current() const { return stack_.back(); }

  Node& append_child(Node::Kind kind, std::size_t begin) {
    auto node = std::make_unique<Node>();
    node->kind = kind;
    node->parent = current();
    node->begin = begin;
    Node& ref = *node;
    current()->children.push_back(std::move(node));
    return ref;
  }

  void emit_text(std::size_t begin, std::size_t end) {
    if (end <= begin) return;
    Node& t = append_child(Node::Kind::Text, begin);
    t.end = end;
    t.text = decode_entities(std::string_view(src_).substr(begin, end - begin));
  }

  void parse_markup() {
    const std::size_t start = pos_;
    if (src_.compare(pos_, 4, "<!--") == 0) {
      const auto close = src_.find("-->", pos_ + 4);
      pos_ = close == std::string::npos ? src_.size() : close + 3;
      Node& c = append_child(Node::Kind::Comment, start);
      c.end = pos_;
      return;
    }
    if (src_[pos_ + 1] == '!' || src_[pos_ + 1] == '?') {
      const auto close = src_.find('>', pos_);
      pos_ = close == std::string::npos ? src_.size() : close + 1;
      return;  // doctype / processing instruction
    }
    if (src_[pos_ + 1] == '/') {
      pos_ += 2;
      const std::string name = read_name();
      const auto close = src_.find('>', pos_);
      pos_ = close == std::string::npos ? src_.size() : close + 1;
      close_element(name, start, pos_);
      return;
    }
    ++pos_;
    const std::string name = read_name();
    std::vector<std::pair<std::string, std::string>> attrs;
    const bool self_closing = read_attributes(attrs);
    open_element(name, std::move(attrs), start, self_closing);
  }

  std::string read_name() {
    std::string name;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (text::is_ascii_space(c) || c == '/' || c == '>') break;
      name.push_back(c);
      ++pos_;
    }
    return text::to_lower_ascii(name);
  }

  void skip_space() {
    while (pos_ < src_.size() && text::is_ascii_space(src_[pos_])) ++pos_;
  }

  // Returns true for a "/>" terminated tag.
  bool read_attributes(std::vector<std::pair<std::string, std::string>>& attrs) {
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) return false;
      if (src_[pos_] == '>') {
        ++pos_;
        return false;
      }
      if (src_[pos_] == '/') {
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '>') {
          ++pos_;
          return true;
        }
        continue;
      }
      std::string name;
      while (pos_ < src_.size()) {
        const char c = src_[pos_];
        if (text::is_ascii_space(c) || c == '/' || c == '>' || (c == '=' && !name.empty())) break;
        name.push_back(c);
        ++pos_;
      }
      skip_space();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          const char quote = src_[pos_++];
          const auto close = src_.find(quote, pos_);
          const std::size_t stop = close == std::string::npos ? src_.size() : close;
          value = src_.substr(pos_, stop - pos_);
          pos_ = close == std::string::npos ? src_.size() : close + 1;
        } else {
          const std::size_t begin = pos_;
          while (pos_ < src_.size() && !text::is_ascii_space(src_[pos_]) && src_[pos_] != '>') {
            ++pos_;
          }
          value = src_.substr(begin, pos_ - begin);
        }
      }
      name = text::to_lower_ascii(name);
      const bool duplicate = std::any_of(attrs.begin(), attrs.end(),
                                         [&](const auto& a) { return a.first == name; });
      if (!duplicate) attrs.emplace_back(std::move(name), decode_entities(value));
    }
  }

  // Index in stack_ of the nearest open `name`, searching down to the first
  // boundary element; 0 when absent.
  std::size_t find_open(std::string_view name, std::span<const std::string_view> boundaries) const {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) return i;
      if (std::find(boundaries.begin(), boundaries.end(), stack_[i]->name) != boundaries.end()) {
        return 0;
      }
    }
    return 0;
  }

  void pop_to(std::size_t index, std::size_t implicit_end, std::size_t matched_end) {
    for (std::size_t i = stack_.size() - 1; i > index; --i) stack_[i]->end = implicit_end;
    stack_[index]->end = matched_end;
    stack_.resize(index);
  }

  void implicitly_close(std::string_view name, std::span<const std::string_view> boundaries,
                        std::size_t at) {
    if (const std::size_t i = find_open(name, boundaries); i != 0) pop_to(i, at, at);
  }

  void open_element(const std::string& name,
                    std::vector<std::pair<std::string, std::string>> attrs, std::size_t start,
                    bool self_closing) {
    static constexpr std::array<std::string_view, 2> kList = {"ul", "ol"};
    static constexpr std::array<std::string_view, 1> kDefList = {"dl"};
    static constexpr std::array<std::string_view, 1> kTable = {"table"};
    static constexpr std::array<std::string_view, 2> kRow = {"tr", "table"};
    static constexpr std::array<std::string_view, 1> kSelect = {"select"};

    if (contains(kClosesParagraph, name)) implicitly_close("p", kScopeBoundaries, start);
    if (name == "li") implicitly_close("li", kList, start);
    if (name == "dt" || name == "dd") {
      implicitly_close("dt", kDefList, start);
      implicitly_close("dd", kDefList, start);
    }
    if (name == "tr") implicitly_close("tr", kTable, start);
    if (name == "td" || name == "th") {
      implicitly_close("td", kRow, start);
      implicitly_close("th", kRow, start);
    }
    if (name == "option") implicitly_close("option", kSelect, start);

    Node& el = append_child(Node::Kind::Element, start);
    el.name = name;
    el.attributes = std::move(attrs);
    if (self_closing || is_void_element(name)) {
      el.end = pos_;
      return;
    }
    if (name == "script" || name == "style" || name == "textarea" || name == "title") {
      read_raw_text(el);
      return;
    }
    stack_.push_back(&el);
  }

  void read_raw_text(Node& el) {
    const std::string closing = "</" + el.name;
    std::size_t search = pos_;
    std::size_t close = std::string::npos;
    while ((search = src_.find("</", search)) != std::string::npos) {
      if (search + closing.size() <= src_.size() &&
          text::to_lower_ascii(std::string_view(src_).substr(search, closing.size())) == closing) {
        close = search;
        break;
      }
      search += 2;
    }
    const std::size_t content_end = close == std::string::npos ? src_.size() : close;
    if (content_end > pos_) {
      auto t = std::make_unique<Node>();
      t->kind = Node::Kind::Text;
      t->parent = &el;
      t->begin = pos_;
      t->end = content_end;
      const std::string_view raw = std::string_view(src_).substr(pos_, content_end - pos_);
      const bool rcdata = el.name == "textarea" || el.name == "title";
      t->text = rcdata ? decode_entities(raw) : std::string(raw);
      el.children.push_back(std::move(t));
    }
    if (close == std::string::npos) {
      pos_ = src_.size();
    } else {
      const auto gt = src_.find('>', close);
      pos_ = gt == std::string::npos ? src_.size() : gt + 1;
    }
    el.end = pos_;
  }

  void close_element(const std::string& name, std::size_t tag_start, std::size_t tag_end) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) {
        pop_to(i, tag_start, tag_end);
        return;
      }
    }
    // Unmatched end tag: ignored.
  }

  const std::string& src_;
  Node& root_;
  std::vector<Node*> stack_;
  std::size_t pos_ = 0;
};

void collect_text(const Node& node, const NodePredicate& skip, std::string& out) {
  if (skip && skip(node)) return;
  switch (node.kind) {
    case Node::Kind::Text:
      out += node.text;
      return;
    case Node::Kind::Comment:
      return;
    case Node::Kind::Element:
      if (node.name == "script" || node.name == "style") return;
      break;
    case Node::Kind::Document:
      break;
  }
  const bool block = node.is_element() && contains(kBlockElements, node.name);
  if (block) out.push_back(' ');
  for (const auto& child : node.children) collect_text(*child, skip, out);
  if (block) out.push_back(' ');
}

void walk(const Node& node, const NodePredicate& pred, std::vector<const Node*>& out,
          bool first_only) {
  if (pred(node)) {
    out.push_back(&node);
    if (first_only) return;
  }
  for (const auto& child : node.children) {
    walk(*child, pred, out, first_only);
    if (first_only && !out.empty()) return;
  }
}

}  // namespace

std::optional<std::string_view> Node::attribute(std::string_view attr) const {
  for (const auto& [k, v] : attributes) {
    if (k == attr) return std::string_view(v);
  }
  return std::nullopt;
}

std::vector<std::string_view> Node::classes() const {
  std::vector<std::string_view> out;
  const auto cls = attribute("class");
  if (!cls) return out;
  std::size_t i = 0;
  while (i < cls->size()) {
    while (i < cls->size() && text::is_ascii_space((*cls)[i])) ++i;
    const std::size_t b = i;
    while (i < cls->size() && !text::is_ascii_space((*cls)[i])) ++i;
    if (i > b) out.push_back(cls->substr(b, i - b));
  }
  return out;
}

bool Node::has_class(std::string_view cls) const {
  const auto all = classes();
  return std::find(all.begin(), all.end(), cls) != all.end();
}

Document::Document(std::string source) : source_(std::move(source)), root_(std::make_unique<Node>()) {
  TreeBuilder(source_, *root_).run();
}

std::string_view Document::outer_html(const Node& node) const {
  return std::string_view(source_).substr(node.begin, node.end - node.begin);
}

const Node* find_first(const Node& root, const NodePredicate& pred) {
  std::vector<const Node*> out;
  walk(root, pred, out, true);
  return out.empty() ? nullptr : out.front();
}

std::vector<const Node*> find_all(const Node& root, const NodePredicate& pred) {
  std::vector<const Node*> out;
  walk(root, pred, out, false);
  return out;
}

std::string text_content(const Node& node, const NodePredicate& skip) {
  std::string raw;
  collect_text(node, skip, raw);
  return text::collapse_whitespace(raw);
}

bool is_void_element(std::string_view tag) { return contains(kVoidElements, tag); }

std::string decode_entities(std::string_view s) {
  if (s.find('&') == std::string_view::npos) return std::string(s);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t amp = i;
    std::size_t j = amp + 1;
    if (j < s.size() && s[j] == '#') {
      ++j;
      const bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
      const std::size_t digits_begin = hex ? j + 1 : j;
      std::size_t k = digits_begin;
      std::uint64_t num = 0;
      while (k < s.size() && (hex ? is_hex(s[k]) : (s[k] >= '0' && s[k] <= '9'))) {
        const char c = s[k];
        const unsigned d = c <= '9' ? c - '0' : (c | 0x20) - 'a' + 10;
        num = std::min<std::uint64_t>(num * (hex ? 16 : 10) + d, 0x110000);
        ++k;
      }
      if (k == digits_begin) {
        out.push_back('&');
        i = amp + 1;
        continue;
      }
      if (k < s.size() && s[k] == ';') ++k;
      append_numeric_reference(out, static_cast<char32_t>(num));
      i = k;
      continue;
    }
    // Named reference: up to 32 code points, then an optional ';'.
    std::vector<std::size_t> cp_ends;
    std::size_t k = j;
    while (k < s.size() && cp_ends.size() < 32) {
      std::size_t next = k;
      const char32_t cp = text::next_codepoint(s, next);
      if (is_name_excluded(cp)) break;
      k = next;
      cp_ends.push_back(k);
    }
    if (cp_ends.empty()) {
      out.push_back('&');
      i = amp + 1;
      continue;
    }
    if (k < s.size() && s[k] == ';') {
      ++k;
      cp_ends.push_back(k);
    }
    const std::string_view name = s.substr(j, k - j);
    if (const char* v = lookup_entity(name)) {
      out += v;
      i = k;
      continue;
    }
    // Longest prefix of at least two characters that is a known name.
    bool matched = false;
    for (std::size_t x = cp_ends.size() - 1; x >= 2; --x) {
      const std::size_t prefix_end = cp_ends[x - 1];
      if (const char* v = lookup_entity(s.substr(j, prefix_end - j))) {
        out += v;
        out.append(s.substr(prefix_end, k - prefix_end));
        matched = true;
        break;
      }
    }
    if (!matched) out.append(s.substr(amp, k - amp));
    i = k;
  }
  return out;
}

}  // namespace claimlab::html
