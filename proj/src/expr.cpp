#include "qcoord/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace qcoord {

namespace {

// Counted per expression and per unary level, so about half of this in parentheses.
constexpr int kMaxNesting = 500;

bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Floor; }
bool is_binary(Op op) { return op >= Op::Add; }

const char* function_name(Op op) {
  switch (op) {
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Floor: return "floor";
    case Op::Min: return "min";
    case Op::Max: return "max";
    default: return nullptr;
  }
}

std::optional<Op> lookup_function(std::string_view name) {
  static constexpr std::array kFunctions{Op::Abs, Op::Sqrt, Op::Exp,
                                         Op::Log, Op::Sin,  Op::Cos,
                                         Op::Floor, Op::Min, Op::Max};
  for (Op op : kFunctions) {
    if (name == function_name(op)) return op;
  }
  return std::nullopt;
}

NodePtr make_leaf(Op op, double value = 0) {
  return std::make_shared<const Node>(Node{op, value, nullptr, nullptr});
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  return std::make_shared<const Node>(
      Node{op, 0, std::move(lhs), std::move(rhs)});
}

class Parser {
 public:
  Parser(std::string_view text, int arity) : text_(text), arity_(arity) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    NodePtr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw SyntaxError("syntax error at offset " + std::to_string(at) + ": " + msg,
                      at);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxNesting) p_.fail("expression nested too deeply");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  NodePtr expression() {
    DepthGuard guard(*this);
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_node(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    DepthGuard guard(*this);
    if (accept('-')) return make_node(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_node(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr inner = expression();
      expect(')');
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double value = 0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      fail_at("number out of range", start);
    }
    return make_leaf(Op::Const, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make_leaf(Op::VarX);
    if (name == "y") {
      if (arity_ < 2) {
        throw ArityError("variable 'y' at offset " + std::to_string(start) +
                             " is not available in a function of x only",
                         start);
      }
      return make_leaf(Op::VarY);
    }
    if (name == "t") {
      throw ArityError("'t' at offset " + std::to_string(start) +
                           " is reserved for the convexity parameter",
                       start);
    }
    if (name == "pi") return make_leaf(Op::Const, std::numbers::pi);
    const auto fn = lookup_function(name);
    if (!fn) fail_at("unknown identifier '" + std::string(name) + "'", start);
    expect('(');
    NodePtr first = expression();
    if (*fn == Op::Min || *fn == Op::Max) {
      expect(',');
      NodePtr second = expression();
      expect(')');
      return make_node(*fn, first, second);
    }
    expect(')');
    return make_node(*fn, first);
  }

  std::string_view text_;
  int arity_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// Returns the stack depth needed by the subtree.
int emit(const Node& n, std::vector<std::pair<Op, double>>& out) {
  if (is_binary(n.op)) {
    const int l = emit(*n.lhs, out);
    const int r = emit(*n.rhs, out);
    out.emplace_back(n.op, 0.0);
    return std::max(l, r + 1);
  }
  if (is_unary(n.op)) {
    const int d = emit(*n.lhs, out);
    out.emplace_back(n.op, 0.0);
    return d;
  }
  out.emplace_back(n.op, n.value);
  return 1;
}

void print(const Node& n, std::ostream& os) {
  switch (n.op) {
    case Op::Const:
      if (std::signbit(n.value)) {
        os << "(-" << format_number(-n.value) << ")";
      } else {
        os << format_number(n.value);
      }
      return;
    case Op::VarX: os << 'x'; return;
    case Op::VarY: os << 'y'; return;
    case Op::Neg: os << "(-"; print(*n.lhs, os); os << ')'; return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow: {
      static constexpr char kSym[] = {'+', '-', '*', '/', '^'};
      os << '(';
      print(*n.lhs, os);
      os << kSym[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
      print(*n.rhs, os);
      os << ')';
      return;
    }
    case Op::Min:
    case Op::Max:
      os << function_name(n.op) << '(';
      print(*n.lhs, os);
      os << ',';
      print(*n.rhs, os);
      os << ')';
      return;
    default:
      os << function_name(n.op) << '(';
      print(*n.lhs, os);
      os << ')';
      return;
  }
}

NodePtr substitute(const NodePtr& n, Axis axis, double value) {
  switch (n->op) {
    case Op::VarX:
      return axis == Axis::X ? make_leaf(Op::Const, value) : n;
    case Op::VarY:
      // The remaining co-ordinate becomes the variable of the 1D mapping.
      return axis == Axis::Y ? make_leaf(Op::Const, value) : make_leaf(Op::VarX);
    case Op::Const:
      return n;
    default:
      break;
  }
  if (is_binary(n->op)) {
    return make_node(n->op, substitute(n->lhs, axis, value),
                     substitute(n->rhs, axis, value));
  }
  return make_node(n->op, substitute(n->lhs, axis, value));
}

}  // namespace

Expr::Expr(NodePtr root, int arity) : root_(std::move(root)), arity_(arity) {
  if (!root_) throw std::invalid_argument("expression has no root");
  if (arity_ != 1 && arity_ != 2) throw std::invalid_argument("arity must be 1 or 2");
  std::vector<std::pair<Op, double>> code;
  stack_depth_ = emit(*root_, code);
  auto program = std::make_shared<std::vector<Instr>>();
  program->reserve(code.size());
  for (const auto& [op, v] : code) {
    if (op == Op::VarY && arity_ < 2) {
      throw std::invalid_argument("arity-1 expression references y");
    }
    program->push_back(Instr{op, v});
  }
  program_ = std::move(program);
}

double Expr::operator()(double x) const {
  if (arity_ != 1) throw std::invalid_argument("expression needs two arguments");
  return run(x, 0.0);
}

double Expr::operator()(double x, double y) const {
  if (arity_ != 2) throw std::invalid_argument("expression takes one argument");
  return run(x, y);
}

double Expr::eval(double x, std::optional<double> y) const {
  if ((arity_ == 2) != y.has_value()) {
    throw std::invalid_argument("y must be supplied exactly when arity is 2");
  }
  return run(x, y.value_or(0.0));
}

double Expr::run(double x, double y) const {
  constexpr int kInline = 64;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (stack_depth_ > kInline) {
    heap_stack.resize(static_cast<std::size_t>(stack_depth_));
    stack = heap_stack.data();
  }

  auto undefined = [&](const char* why) -> DomainError {
    std::ostringstream os;
    os << why << " at x=" << format_number(x);
    if (arity_ == 2) os << ", y=" << format_number(y);
    return DomainError(os.str(), Point{x, y}, arity_);
  };

  int top = -1;
  for (const Instr& in : *program_) {
    double r = 0;
    switch (in.op) {
      case Op::Const: stack[++top] = in.value; continue;
      case Op::VarX: stack[++top] = x; continue;
      case Op::VarY: stack[++top] = y; continue;
      case Op::Neg: r = -stack[top]; break;
      case Op::Abs: r = std::fabs(stack[top]); break;
      case Op::Sqrt:
        if (stack[top] < 0) throw undefined("sqrt of a negative number");
        r = std::sqrt(stack[top]);
        break;
      case Op::Exp: r = std::exp(stack[top]); break;
      case Op::Log:
        if (stack[top] <= 0) throw undefined("log of a non-positive number");
        r = std::log(stack[top]);
        break;
      case Op::Sin: r = std::sin(stack[top]); break;
      case Op::Cos: r = std::cos(stack[top]); break;
      case Op::Floor: r = std::floor(stack[top]); break;
      default: {
        const double b = stack[top--];
        const double a = stack[top];
        switch (in.op) {
          case Op::Add: r = a + b; break;
          case Op::Sub: r = a - b; break;
          case Op::Mul: r = a * b; break;
          case Op::Div:
            if (b == 0) throw undefined("division by zero");
            r = a / b;
            break;
          case Op::Pow:
            if (a < 0 && std::trunc(b) != b) {
              throw undefined("non-integer power of a negative number");
            }
            r = std::pow(a, b);
            break;
          case Op::Min: r = std::min(a, b); break;
          case Op::Max: r = std::max(a, b); break;
          default: break;
        }
      }
    }
    if (!std::isfinite(r)) throw undefined("non-finite value");
    stack[top] = r;
  }
  return stack[0];
}

std::string Expr::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

Expr parse(std::string_view text, int arity) {
  if (arity != 1 && arity != 2) throw std::invalid_argument("arity must be 1 or 2");
  Parser p(text, arity);
  return Expr(p.parse_all(), arity);
}

Expr restrict(const Expr& e, Axis axis, double value) {
  if (e.arity() != 2) throw std::invalid_argument("restrict needs an arity-2 expression");
  if (!std::isfinite(value)) throw std::invalid_argument("frozen co-ordinate must be finite");
  return Expr(substitute(e.root_ptr(), axis, value), 1);
}

std::string format_number(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), ptr);
}

}  // namespace qcoord
