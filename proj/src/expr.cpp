#include "curvmeasure/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <utility>

#include "curvmeasure/error.hpp"

namespace curvmeasure {

namespace {

struct FunctionName {
  const char* name;
  Expr::Op op;
  int arity;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Expr::Op::Sin, 1},   {"cos", Expr::Op::Cos, 1},   {"tan", Expr::Op::Tan, 1},
    {"exp", Expr::Op::Exp, 1},   {"log", Expr::Op::Log, 1},   {"sqrt", Expr::Op::Sqrt, 1},
    {"sinh", Expr::Op::Sinh, 1}, {"cosh", Expr::Op::Cosh, 1}, {"atan", Expr::Op::Atan, 1},
    {"atan2", Expr::Op::Atan2, 2}, {"abs", Expr::Op::Abs, 1},
};

const char* function_name(Expr::Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "?";
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

}  // namespace

class ExprParser {
public:
  ExprParser(std::string_view src, const std::vector<std::string>& vars)
      : src_(src), vars_(vars) {}

  Expr run() {
    skip_space();
    if (pos_ >= src_.size()) fail("expression");
    const int root = parse_sum();
    skip_space();
    if (pos_ != src_.size()) fail("operator or end of input");
    Expr e;
    e.source_ = std::string(src_);
    e.variables_ = vars_;
    e.nodes_ = std::make_shared<const std::vector<Expr::Node>>(std::move(nodes_));
    e.root_ = root;
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(pos_, expected, std::string(src_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Expr::Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(Expr::Op op, int l, int r) { return add({op, 0.0, 0, l, r}); }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = binary(Expr::Op::Add, lhs, parse_product());
      else if (accept('-'))
        lhs = binary(Expr::Op::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = binary(Expr::Op::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = binary(Expr::Op::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  int parse_unary() {
    if (accept('-')) return add({Expr::Op::Neg, 0.0, 0, parse_unary(), -1});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) return binary(Expr::Op::Pow, base, parse_unary());
    return base;
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("number, identifier or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_sum();
      if (!accept(')')) fail("')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("number, identifier or '('");
  }

  int parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("digit");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;  // treat as end of number; 'e' is then an identifier error
        fail("exponent digits");
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    return add({Expr::Op::Number, std::strtod(text.c_str(), nullptr), 0, -1, -1});
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    skip_space();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (call) {
      for (const auto& f : kFunctions) {
        if (name != f.name) continue;
        ++pos_;
        const int a = parse_sum();
        int b = -1;
        if (f.arity == 2) {
          if (!accept(',')) fail("','");
          b = parse_sum();
        }
        if (!accept(')')) fail("')'");
        return add({f.op, 0.0, 0, a, b});
      }
      throw UnknownIdentifier(name, start);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (name == vars_[i]) return add({Expr::Op::Variable, 0.0, static_cast<int>(i), -1, -1});
    if (name == "pi") return add({Expr::Op::Number, std::numbers::pi, 0, -1, -1});
    if (name == "e") return add({Expr::Op::Number, std::numbers::e, 0, -1, -1});
    throw UnknownIdentifier(name, start);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::vector<Expr::Node> nodes_;
  std::size_t pos_ = 0;
};

Expr Expr::parse(std::string_view source, std::vector<std::string> variables) {
  ExprParser p(source, variables);
  return p.run();
}

Expr Expr::constant(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return parse(buf);
}

namespace {

using Nodes = std::vector<Expr::Node>;

double checked(const char* fn, double arg, double result) {
  if (!std::isfinite(result)) throw DomainError(fn, arg);
  return result;
}

double eval_node(const Nodes& n, int i, double x, double y) {
  const Expr::Node& nd = n[static_cast<std::size_t>(i)];
  using Op = Expr::Op;
  switch (nd.op) {
    case Op::Number:
      return nd.number;
    case Op::Variable:
      return nd.var == 0 ? x : y;
    case Op::Neg:
      return -eval_node(n, nd.lhs, x, y);
    case Op::Add:
      return eval_node(n, nd.lhs, x, y) + eval_node(n, nd.rhs, x, y);
    case Op::Sub:
      return eval_node(n, nd.lhs, x, y) - eval_node(n, nd.rhs, x, y);
    case Op::Mul:
      return eval_node(n, nd.lhs, x, y) * eval_node(n, nd.rhs, x, y);
    case Op::Div: {
      const double a = eval_node(n, nd.lhs, x, y);
      const double b = eval_node(n, nd.rhs, x, y);
      if (b == 0.0) throw DomainError("/", b);
      return checked("/", b, a / b);
    }
    case Op::Pow: {
      const double a = eval_node(n, nd.lhs, x, y);
      const double b = eval_node(n, nd.rhs, x, y);
      if (a < 0 && !is_integer(b)) throw DomainError("^", a);
      if (a == 0 && b < 0) throw DomainError("^", a);
      return checked("^", a, std::pow(a, b));
    }
    default:
      break;
  }
  const double a = eval_node(n, nd.lhs, x, y);
  switch (nd.op) {
    case Op::Sin:
      return std::sin(a);
    case Op::Cos:
      return std::cos(a);
    case Op::Tan:
      if (std::cos(a) == 0.0) throw DomainError("tan", a);
      return checked("tan", a, std::tan(a));
    case Op::Exp:
      return checked("exp", a, std::exp(a));
    case Op::Log:
      if (a <= 0) throw DomainError("log", a);
      return std::log(a);
    case Op::Sqrt:
      if (a < 0) throw DomainError("sqrt", a);
      return std::sqrt(a);
    case Op::Sinh:
      return checked("sinh", a, std::sinh(a));
    case Op::Cosh:
      return checked("cosh", a, std::cosh(a));
    case Op::Atan:
      return std::atan(a);
    case Op::Atan2: {
      const double xb = eval_node(n, nd.rhs, x, y);
      if (a == 0 && xb == 0) throw DomainError("atan2", 0.0);
      return std::atan2(a, xb);
    }
    case Op::Abs:
      return std::abs(a);
    default:
      throw DomainError("unknown operator", 0.0);
  }
}

Jet2 pow_jet(const Jet2& a, const Jet2& b) {
  if (!b.is_constant()) {
    if (a.value <= 0) throw DomainError("^", a.value);
    const double la = std::log(a.value);
    const Jet2 log_a = compose(a, la, 1 / a.value, -1 / (a.value * a.value));
    const Jet2 prod = b * log_a;
    const double ex = checked("^", a.value, std::exp(prod.value));
    return compose(prod, ex, ex, ex);
  }
  const double p = b.value;
  if (a.is_constant()) {
    if (a.value < 0 && !is_integer(p)) throw DomainError("^", a.value);
    if (a.value == 0 && p < 0) throw DomainError("^", a.value);
    return Jet2::constant(checked("^", a.value, std::pow(a.value, p)));
  }
  if (p == 0) return Jet2::constant(1.0);
  if (p == 1) return a;
  const bool ok = a.value > 0 || (a.value < 0 && is_integer(p)) || (a.value == 0 && p >= 2);
  if (!ok) throw DomainError("^", a.value);
  const double f0 = std::pow(a.value, p);
  const double f1 = p * std::pow(a.value, p - 1);
  const double f2 = p * (p - 1) * std::pow(a.value, p - 2);
  if (!std::isfinite(f0) || !std::isfinite(f1) || !std::isfinite(f2)) throw DomainError("^", a.value);
  return compose(a, f0, f1, f2);
}

Jet2 jet_node(const Nodes& n, int i, double x, double y) {
  const Expr::Node& nd = n[static_cast<std::size_t>(i)];
  using Op = Expr::Op;
  switch (nd.op) {
    case Op::Number:
      return Jet2::constant(nd.number);
    case Op::Variable:
      return nd.var == 0 ? Jet2::variable_u(x) : Jet2::variable_v(y);
    case Op::Neg:
      return -jet_node(n, nd.lhs, x, y);
    case Op::Add:
      return jet_node(n, nd.lhs, x, y) + jet_node(n, nd.rhs, x, y);
    case Op::Sub:
      return jet_node(n, nd.lhs, x, y) - jet_node(n, nd.rhs, x, y);
    case Op::Mul:
      return jet_node(n, nd.lhs, x, y) * jet_node(n, nd.rhs, x, y);
    case Op::Div: {
      const Jet2 a = jet_node(n, nd.lhs, x, y);
      const Jet2 b = jet_node(n, nd.rhs, x, y);
      if (b.value == 0.0) throw DomainError("/", 0.0);
      return a / b;
    }
    case Op::Pow:
      return pow_jet(jet_node(n, nd.lhs, x, y), jet_node(n, nd.rhs, x, y));
    default:
      break;
  }
  const Jet2 a = jet_node(n, nd.lhs, x, y);
  const double g = a.value;
  switch (nd.op) {
    case Op::Sin:
      return compose(a, std::sin(g), std::cos(g), -std::sin(g));
    case Op::Cos:
      return compose(a, std::cos(g), -std::sin(g), -std::cos(g));
    case Op::Tan: {
      const double c = std::cos(g);
      if (c == 0.0) throw DomainError("tan", g);
      const double t = std::tan(g);
      const double s2 = 1 + t * t;
      return compose(a, t, s2, 2 * t * s2);
    }
    case Op::Exp: {
      const double ex = checked("exp", g, std::exp(g));
      return compose(a, ex, ex, ex);
    }
    case Op::Log:
      if (g <= 0) throw DomainError("log", g);
      return compose(a, std::log(g), 1 / g, -1 / (g * g));
    case Op::Sqrt: {
      if (g < 0) throw DomainError("sqrt", g);
      if (a.is_constant()) return Jet2::constant(std::sqrt(g));
      if (g == 0) throw DomainError("sqrt", g);
      const double s = std::sqrt(g);
      return compose(a, s, 0.5 / s, -0.25 / (s * g));
    }
    case Op::Sinh:
      return compose(a, checked("sinh", g, std::sinh(g)), std::cosh(g), std::sinh(g));
    case Op::Cosh:
      return compose(a, checked("cosh", g, std::cosh(g)), std::sinh(g), std::cosh(g));
    case Op::Atan: {
      const double d = 1 / (1 + g * g);
      return compose(a, std::atan(g), d, -2 * g * d * d);
    }
    case Op::Atan2: {
      // atan2(y, x) = theta0 + atan((x0*y - y0*x) / (x0*x + y0*y)) near (x0, y0).
      const Jet2 xb = jet_node(n, nd.rhs, x, y);
      const double y0 = a.value;
      const double x0 = xb.value;
      if (x0 == 0 && y0 == 0) throw DomainError("atan2", 0.0);
      const Jet2 w = (x0 * a - y0 * xb) / (x0 * xb + y0 * a);
      const double d = 1 / (1 + w.value * w.value);
      Jet2 r = compose(w, std::atan(w.value), d, -2 * w.value * d * d);
      r.value = std::atan2(y0, x0);
      return r;
    }
    case Op::Abs: {
      if (a.is_constant()) return Jet2::constant(std::abs(g));
      if (g == 0) throw DomainError("abs", g);
      return g > 0 ? a : -a;
    }
    default:
      throw DomainError("unknown operator", 0.0);
  }
}

int precedence(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Nodes& n, int i, const std::vector<std::string>& vars, std::string& out) {
  const Expr::Node& nd = n[static_cast<std::size_t>(i)];
  using Op = Expr::Op;
  auto child = [&](int c, bool parens) {
    if (parens) out += '(';
    print_node(n, c, vars, out);
    if (parens) out += ')';
  };
  const int prec = precedence(nd.op);
  switch (nd.op) {
    case Op::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", nd.number);
      out += buf;
      return;
    }
    case Op::Variable:
      out += vars[static_cast<std::size_t>(nd.var)];
      return;
    case Op::Neg:
      out += '-';
      child(nd.lhs, precedence(n[static_cast<std::size_t>(nd.lhs)].op) < prec);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const char sym = nd.op == Op::Add ? '+' : nd.op == Op::Sub ? '-' : nd.op == Op::Mul ? '*' : '/';
      child(nd.lhs, precedence(n[static_cast<std::size_t>(nd.lhs)].op) < prec);
      out += ' ';
      out += sym;
      out += ' ';
      child(nd.rhs, precedence(n[static_cast<std::size_t>(nd.rhs)].op) <= prec);
      return;
    }
    case Op::Pow:
      child(nd.lhs, precedence(n[static_cast<std::size_t>(nd.lhs)].op) <= prec);
      out += '^';
      child(nd.rhs, precedence(n[static_cast<std::size_t>(nd.rhs)].op) < prec);
      return;
    default:
      out += function_name(nd.op);
      out += '(';
      print_node(n, nd.lhs, vars, out);
      if (nd.rhs >= 0) {
        out += ", ";
        print_node(n, nd.rhs, vars, out);
      }
      out += ')';
      return;
  }
}

bool same_node(const Nodes& a, int i, const Nodes& b, int j) {
  if ((i < 0) != (j < 0)) return false;
  if (i < 0) return true;
  const Expr::Node& x = a[static_cast<std::size_t>(i)];
  const Expr::Node& y = b[static_cast<std::size_t>(j)];
  if (x.op != y.op) return false;
  if (x.op == Expr::Op::Number) return x.number == y.number;
  if (x.op == Expr::Op::Variable) return x.var == y.var;
  return same_node(a, x.lhs, b, y.lhs) && same_node(a, x.rhs, b, y.rhs);
}

}  // namespace

double Expr::eval(double x, double y) const { return eval_node(*nodes_, root_, x, y); }

Jet2 Expr::eval_jet2(double x, double y) const { return jet_node(*nodes_, root_, x, y); }

std::string Expr::to_string() const {
  std::string out;
  print_node(*nodes_, root_, variables_, out);
  return out;
}

bool Expr::is_constant() const {
  for (const auto& n : *nodes_)
    if (n.op == Op::Variable) return false;
  return true;
}

bool Expr::same_tree(const Expr& other) const {
  return same_node(*nodes_, root_, *other.nodes_, other.root_);
}

}  // namespace curvmeasure
