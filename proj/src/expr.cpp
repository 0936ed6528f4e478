#include "fiflab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "fiflab/error.hpp"

namespace fiflab::expr {

struct Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call, Cond, Less, LessEq, And };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_), pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_word(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    return after >= text_.size() ||
           !(std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_');
  }

  bool accept_word(std::string_view word) {
    if (!peek_word(word)) return false;
    pos_ += word.size();
    return true;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  NodePtr expression() {
    if (accept_word("if")) {
      NodePtr cond = condition();
      if (!accept_word("then")) fail("expected 'then'");
      NodePtr yes = expression();
      if (!accept_word("else")) fail("expected 'else'");
      NodePtr no = expression();
      return make(Node::Kind::Cond, {cond, yes, no});
    }
    return sum();
  }

  // Returns a Less/LessEq node (operands reordered for > and >=); the raw
  // flag reports whether a relation was found.
  NodePtr relation(NodePtr lhs, bool& found) {
    found = true;
    if (accept("<=")) return make(Node::Kind::LessEq, {lhs, sum()});
    if (accept(">=")) return make(Node::Kind::LessEq, {sum(), lhs});
    if (accept("<")) return make(Node::Kind::Less, {lhs, sum()});
    if (accept(">")) return make(Node::Kind::Less, {sum(), lhs});
    found = false;
    return nullptr;
  }

  NodePtr condition() {
    NodePtr first = sum();
    bool found = false;
    NodePtr rel = relation(first, found);
    if (!found) fail("expected a comparison");
    // Chained form a <= y <= b: the middle operand is shared.
    const NodePtr& middle = rel->args[0] == first ? rel->args[1] : rel->args[0];
    bool chained = false;
    NodePtr second = relation(middle, chained);
    if (!chained) return rel;
    return make(Node::Kind::And, {rel, second});
  }

  NodePtr sum() {
    NodePtr lhs = term();
    for (;;) {
      if (accept("+")) lhs = make(Node::Kind::Add, {lhs, term()});
      else if (accept("-")) lhs = make(Node::Kind::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept("*")) lhs = make(Node::Kind::Mul, {lhs, unary()});
      else if (accept("/")) lhs = make(Node::Kind::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make(Node::Kind::Neg, {unary()});
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept("^")) return make(Node::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept("(")) {
      NodePtr inner = expression();
      expect(")");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    for (std::string_view var : {"y", "t", "x"})
      if (accept_word(var)) return make(Node::Kind::Var);
    for (std::string_view fn : {"abs", "sqrt", "exp", "log", "min", "max"}) {
      if (!accept_word(fn)) continue;
      expect("(");
      std::vector<NodePtr> args{expression()};
      if (fn == "min" || fn == "max") {
        expect(",");
        args.push_back(expression());
      }
      expect(")");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->fn = std::string(fn);
      n->args = std::move(args);
      return n;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double v) {
  using K = Node::Kind;
  auto arg = [&](std::size_t i) { return eval(*n.args[i], v); };
  switch (n.kind) {
    case K::Number: return n.number;
    case K::Var: return v;
    case K::Neg: return -arg(0);
    case K::Add: return arg(0) + arg(1);
    case K::Sub: return arg(0) - arg(1);
    case K::Mul: return arg(0) * arg(1);
    case K::Div: return arg(0) / arg(1);
    case K::Pow: return std::pow(arg(0), arg(1));
    case K::Less: return arg(0) < arg(1) ? 1.0 : 0.0;
    case K::LessEq: return arg(0) <= arg(1) ? 1.0 : 0.0;
    case K::And: return (arg(0) != 0.0 && arg(1) != 0.0) ? 1.0 : 0.0;
    case K::Cond: return arg(0) != 0.0 ? arg(1) : arg(2);
    case K::Call:
      if (n.fn == "abs") return std::abs(arg(0));
      if (n.fn == "sqrt") return std::sqrt(arg(0));
      if (n.fn == "exp") return std::exp(arg(0));
      if (n.fn == "log") return std::log(arg(0));
      if (n.fn == "min") return std::min(arg(0), arg(1));
      if (n.fn == "max") return std::max(arg(0), arg(1));
      break;
  }
  return std::nan("");
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  return Expression(parser.parse_all(), std::string(text));
}

double Expression::operator()(double v) const { return eval(*root_, v); }

}  // namespace fiflab::expr
