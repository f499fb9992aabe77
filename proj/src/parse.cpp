#include "fbounds/parse.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fbounds/errors.hpp"

namespace fbounds {
namespace {

enum class Op { var, and_, or_, xor_, not_, maj };

struct Node {
  Op op = Op::var;
  int var = 0;  // 0-based
  std::vector<Node> args;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("'") + c + "'", "unexpected " + describe_here());
    ++pos_;
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                   (pos_ > start && std::isdigit(static_cast<unsigned char>(text_[pos_])))))
      ++pos_;
    if (pos_ == start) fail("identifier", "unexpected " + describe_here());
    return std::string(text_.substr(start, pos_ - start));
  }

  long long integer(const std::string& what) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail(what, "unexpected " + describe_here());
    if (pos_ - start > 9) fail(what, "number too large", start);
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  std::string rest() {
    skip_space();
    std::string out(text_.substr(pos_));
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    pos_ = text_.size();
    return out;
  }

  [[noreturn]] void fail(const std::string& expected, const std::string& detail) const {
    throw ParseError(pos_, expected, detail);
  }
  [[noreturn]] void fail(const std::string& expected, const std::string& detail,
                         std::size_t at) const {
    throw ParseError(at, expected, detail);
  }

  std::string describe_here() const {
    if (pos_ >= text_.size()) return "end of input";
    return std::string("'") + text_[pos_] + "'";
  }

  void set_pos(std::size_t p) { pos_ = p; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

Node parse_expr(Parser& p, int arity_cap) {
  const std::size_t start = p.pos();
  p.skip_space();
  const std::size_t ident_pos = p.pos();
  const std::string ident = p.identifier();
  if (ident.size() > 1 && ident[0] == 'x' &&
      std::all_of(ident.begin() + 1, ident.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    if (ident.size() > 10) p.fail("variable index", "index too large", ident_pos + 1);
    const long long index = std::stoll(ident.substr(1));
    if (index < 1) p.fail("variable index >= 1", "bad variable '" + ident + "'", ident_pos);
    if (index > arity_cap)
      throw CapacityError("variable x" + std::to_string(index) + " exceeds arity cap " +
                          std::to_string(arity_cap));
    Node n;
    n.var = static_cast<int>(index - 1);
    return n;
  }
  Node n;
  if (ident == "and")
    n.op = Op::and_;
  else if (ident == "or")
    n.op = Op::or_;
  else if (ident == "xor")
    n.op = Op::xor_;
  else if (ident == "not")
    n.op = Op::not_;
  else if (ident == "maj")
    n.op = Op::maj;
  else
    p.fail("variable xN or one of and/or/xor/not/maj", "unknown name '" + ident + "'", ident_pos);
  p.expect('(');
  n.args.push_back(parse_expr(p, arity_cap));
  while (p.peek(',')) {
    p.expect(',');
    n.args.push_back(parse_expr(p, arity_cap));
  }
  p.expect(')');
  if (n.op == Op::not_ && n.args.size() != 1)
    p.fail("exactly one argument to not", "not() given " + std::to_string(n.args.size()) + " arguments", start);
  if (n.op == Op::maj && n.args.size() % 2 == 0)
    p.fail("odd number of arguments to maj", "maj() given " + std::to_string(n.args.size()) + " arguments", start);
  return n;
}

void collect_vars(const Node& n, std::set<int>& vars) {
  if (n.op == Op::var) vars.insert(n.var);
  for (const auto& a : n.args) collect_vars(a, vars);
}

bool eval_node(const Node& n, std::uint64_t index) {
  switch (n.op) {
    case Op::var:
      return (index >> n.var) & 1;
    case Op::not_:
      return !eval_node(n.args[0], index);
    case Op::and_:
      return std::all_of(n.args.begin(), n.args.end(), [&](const Node& a) { return eval_node(a, index); });
    case Op::or_:
      return std::any_of(n.args.begin(), n.args.end(), [&](const Node& a) { return eval_node(a, index); });
    case Op::xor_: {
      bool acc = false;
      for (const auto& a : n.args) acc ^= eval_node(a, index);
      return acc;
    }
    case Op::maj: {
      std::size_t votes = 0;
      for (const auto& a : n.args) votes += eval_node(a, index);
      return 2 * votes > n.args.size();
    }
  }
  return false;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

BooleanFunction parse_table(Parser& p, std::string_view spec, int arity_cap) {
  p.expect(':');
  const std::size_t k_pos = p.pos();
  const long long k = p.integer("arity");
  if (k < 1) p.fail("arity >= 1", "bad arity", k_pos);
  if (k > arity_cap)
    throw CapacityError("arity " + std::to_string(k) + " exceeds cap " + std::to_string(arity_cap));
  p.expect(':');
  p.skip_space();
  const std::size_t hex_pos = p.pos();
  const std::string hex = p.rest();
  if (hex.empty()) p.fail("hex digits", "missing table", hex_pos);
  const std::uint64_t bits = std::uint64_t{1} << k;
  std::vector<std::uint64_t> words((bits + 63) / 64, 0);
  std::uint64_t bit = 0;
  for (std::size_t i = hex.size(); i-- > 0;) {
    const int v = hex_value(hex[i]);
    if (v < 0) p.fail("hex digit", std::string("bad character '") + hex[i] + "'", hex_pos + i);
    for (int b = 0; b < 4; ++b, ++bit) {
      if (!((v >> b) & 1)) continue;
      if (bit >= bits)
        p.fail("at most " + std::to_string(bits) + " table bits", "table has bits past 2^k", hex_pos + i);
      words[bit >> 6] |= std::uint64_t{1} << (bit & 63);
    }
  }
  return BooleanFunction(static_cast<int>(k), std::move(words), std::string(spec));
}

}  // namespace

BooleanFunction parse_function(std::string_view spec, int arity_cap) {
  Parser p(spec);
  if (p.at_end()) p.fail("function spec", "empty input");
  const std::size_t ident_pos = p.pos();
  const std::string ident = p.identifier();

  if (p.peek(':')) {
    if (ident == "table") return parse_table(p, spec, arity_cap);
    p.expect(':');
    std::vector<int> params;
    params.push_back(static_cast<int>(p.integer("integer parameter")));
    while (p.peek(',')) {
      p.expect(',');
      params.push_back(static_cast<int>(p.integer("integer parameter")));
    }
    if (!p.at_end()) p.fail("',' or end of input", "unexpected " + p.describe_here());
    if (!is_builtin_family(ident)) p.fail("known family", "unknown function family '" + ident + "'", ident_pos);
    return builtin(ident, params, arity_cap).with_name(std::string(spec));
  }

  p.set_pos(ident_pos);
  const Node root = parse_expr(p, arity_cap);
  if (!p.at_end()) p.fail("end of input", "unexpected " + p.describe_here());
  std::set<int> vars;
  collect_vars(root, vars);
  const int k = *vars.rbegin() + 1;
  for (int v = 0; v < k; ++v)
    if (!vars.count(v))
      throw ArgumentError("variable x" + std::to_string(v + 1) + " missing (indices must cover 1.." +
                          std::to_string(k) + ")");
  return BooleanFunction::from_predicate(
      k, [&](std::uint64_t i) { return eval_node(root, i); }, std::string(spec), arity_cap);
}

}  // namespace fbounds
