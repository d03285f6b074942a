#include "confgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

#include "confgeo/errors.hpp"

namespace confgeo {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(const Vec& x) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Num : Node {
  double v;
  explicit Num(double v) : v(v) {}
  double eval(const Vec&) const override { return v; }
};

struct Coord : Node {
  int i;
  explicit Coord(int i) : i(i) {}
  double eval(const Vec& x) const override {
    if (i >= x.size()) throw BadParams("expression uses coordinate beyond dimension");
    return x(i);
  }
};

struct Radius2 : Node {
  double eval(const Vec& x) const override { return x.squaredNorm(); }
};

struct Radius : Node {
  double eval(const Vec& x) const override { return x.norm(); }
};

struct Unary : Node {
  double (*f)(double);
  NodePtr arg;
  Unary(double (*f)(double), NodePtr a) : f(f), arg(std::move(a)) {}
  double eval(const Vec& x) const override { return f(arg->eval(x)); }
};

struct Binary : Node {
  char op;
  NodePtr l, r;
  Binary(char op, NodePtr l, NodePtr r) : op(op), l(std::move(l)), r(std::move(r)) {}
  double eval(const Vec& x) const override {
    const double a = l->eval(x);
    const double b = r->eval(x);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
    }
  }
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw BadParams("expression parse error at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (eat('+')) e = std::make_shared<Binary>('+', e, term());
      else if (eat('-')) e = std::make_shared<Binary>('-', e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = power();
    while (true) {
      if (eat('*')) e = std::make_shared<Binary>('*', e, power());
      else if (eat('/')) e = std::make_shared<Binary>('/', e, power());
      else return e;
    }
  }

  NodePtr power() {
    NodePtr base = unary();
    if (eat('^')) return std::make_shared<Binary>('^', base, power());
    return base;
  }

  NodePtr unary() {
    if (eat('-')) return std::make_shared<Binary>('-', std::make_shared<Num>(0.0), unary());
    eat('+');
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<size_t>(end - begin);
    return std::make_shared<Num>(v);
  }

  NodePtr ident() {
    const size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "r2") return std::make_shared<Radius2>();
    if (name == "r") return std::make_shared<Radius>();
    if (name == "x") return std::make_shared<Coord>(0);
    if (name == "y") return std::make_shared<Coord>(1);
    if (name == "z") return std::make_shared<Coord>(2);
    if (name == "pi") return std::make_shared<Num>(M_PI);
    if (name == "e") return std::make_shared<Num>(M_E);
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char d) { return std::isdigit(static_cast<unsigned char>(d)); }))
      return std::make_shared<Coord>(std::stoi(name.substr(1)));
    // function call
    if (!eat('(')) fail("unknown identifier '" + name + "'");
    NodePtr arg = expr();
    if (!eat(')')) fail("expected ')' after function argument");
    double (*f)(double) = nullptr;
    if (name == "exp") f = std::exp;
    else if (name == "log") f = std::log;
    else if (name == "sqrt") f = std::sqrt;
    else if (name == "sin") f = std::sin;
    else if (name == "cos") f = std::cos;
    else if (name == "tan") f = std::tan;
    else if (name == "tanh") f = std::tanh;
    else if (name == "abs") f = std::fabs;
    else fail("unknown function '" + name + "'");
    return std::make_shared<Unary>(f, arg);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

std::function<double(const Vec&)> compile_expression(const std::string& src) {
  Parser p(src);
  NodePtr root = p.parse();
  return [root](const Vec& x) { return root->eval(x); };
}

}  // namespace confgeo
