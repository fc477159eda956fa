#include "mkinv/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include "mkinv/error.hpp"

namespace mkinv {

namespace {

enum class Kind { Number, X, Neg, Add, Sub, Mul, Div, Pow, Call, Indicator, Random, Mode };

struct Context {
  const Vector* x = nullptr;
  const SpectralDecomposition* dec = nullptr;
  std::uint64_t seed = 0;
};

}  // namespace

struct ExpressionNode {
  Kind kind = Kind::Number;
  double value = 0.0;  // number, or seed / mode index
  double upper = 0.0;  // indicator upper end
  bool hasSeed = false;
  std::string function;
  size_t position = 0;
  std::unique_ptr<ExpressionNode> lhs;
  std::unique_ptr<ExpressionNode> rhs;

  bool grid_only() const {
    if (kind == Kind::Random || kind == Kind::Mode) return true;
    return (lhs && lhs->grid_only()) || (rhs && rhs->grid_only());
  }

  Vector eval(const Context& ctx) const {
    const Eigen::Index n = ctx.x->size();
    switch (kind) {
      case Kind::Number: return Vector::Constant(n, value);
      case Kind::X: return *ctx.x;
      case Kind::Neg: return -lhs->eval(ctx);
      case Kind::Add: return lhs->eval(ctx) + rhs->eval(ctx);
      case Kind::Sub: return lhs->eval(ctx) - rhs->eval(ctx);
      case Kind::Mul: return lhs->eval(ctx).cwiseProduct(rhs->eval(ctx));
      case Kind::Div: return lhs->eval(ctx).cwiseQuotient(rhs->eval(ctx));
      case Kind::Pow: return lhs->eval(ctx).binaryExpr(rhs->eval(ctx), [](double a, double b) { return std::pow(a, b); });
      case Kind::Call: {
        const Vector a = lhs->eval(ctx);
        if (function == "exp") return a.array().exp();
        if (function == "log") return a.array().log();
        if (function == "sqrt") return a.array().sqrt();
        if (function == "abs") return a.array().abs();
        if (function == "sin") return a.array().sin();
        return a.array().cos();
      }
      case Kind::Indicator:
        return ctx.x->unaryExpr([this](double v) { return v >= value && v <= upper ? 1.0 : 0.0; });
      case Kind::Random: {
        std::mt19937_64 rng(hasSeed ? std::uint64_t(value) : ctx.seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vector out(n);
        for (Eigen::Index i = 0; i < n; ++i) out[i] = dist(rng);
        return out;
      }
      case Kind::Mode: {
        if (!ctx.dec) {
          throw Error(ErrorCode::ParseError, "parse_function_literal", "mode(k) needs a decomposed model",
                      {{"position", double(position)}});
        }
        const auto k = Eigen::Index(value);
        if (k >= ctx.dec->size()) {
          throw Error(ErrorCode::ParseError, "parse_function_literal", "mode index out of range",
                      {{"position", double(position)}, {"k", value}, {"size", double(ctx.dec->size())}});
        }
        return ctx.dec->eigenvectors().col(k);
      }
    }
    return Vector::Zero(n);
  }
};

namespace {

using Node = std::unique_ptr<ExpressionNode>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Node parse() {
    Node out = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    const std::string near = pos_ < s_.size() ? " '" + std::string(1, s_[pos_]) + "'" : " at end of input";
    throw Error(ErrorCode::ParseError, "parse_function_literal",
                what + near + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"",
                {{"position", double(pos_)}});
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static Node make(Kind kind, Node lhs = nullptr, Node rhs = nullptr) {
    auto n = std::make_unique<ExpressionNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  Node expr() {
    Node out = term();
    for (;;) {
      if (accept('+')) {
        out = make(Kind::Add, std::move(out), term());
      } else if (accept('-')) {
        out = make(Kind::Sub, std::move(out), term());
      } else {
        return out;
      }
    }
  }

  Node term() {
    Node out = unary();
    for (;;) {
      if (accept('*')) {
        out = make(Kind::Mul, std::move(out), unary());
      } else if (accept('/')) {
        out = make(Kind::Div, std::move(out), unary());
      } else {
        return out;
      }
    }
  }

  Node unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    if (accept('^')) return make(Kind::Pow, std::move(base), unary());
    return base;
  }

  double number() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += size_t(end - begin);
    return v;
  }

  double signed_number() {
    if (accept('-')) return -number();
    accept('+');
    return number();
  }

  double integer() {
    const size_t start = pos_;
    const double v = number();
    if (v < 0.0 || v != std::floor(v)) {
      pos_ = start;
      skip();
      fail("expected a non-negative integer");
    }
    return v;
  }

  std::string identifier() {
    std::string out;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      out += s_[pos_++];
    }
    return out;
  }

  Node primary() {
    skip();
    if (pos_ >= s_.size()) fail("expected an operand");
    const size_t start = pos_;
    if (accept('(')) {
      Node inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.') {
      Node n = make(Kind::Number);
      n->value = number();
      return n;
    }
    const std::string name = identifier();
    if (name.empty()) fail("expected an operand");
    if (name == "x") return make(Kind::X);
    if (name == "pi") {
      Node n = make(Kind::Number);
      n->value = std::numbers::pi;
      return n;
    }
    if (name == "exp" || name == "log" || name == "sqrt" || name == "abs" || name == "sin" || name == "cos") {
      expect('(');
      Node n = make(Kind::Call, expr());
      n->function = name;
      expect(')');
      return n;
    }
    if (name == "ind") {
      expect('(');
      Node n = make(Kind::Indicator);
      n->value = signed_number();
      expect(',');
      n->upper = signed_number();
      expect(')');
      return n;
    }
    if (name == "random") {
      Node n = make(Kind::Random);
      n->position = start;
      if (accept('(')) {
        n->value = integer();
        n->hasSeed = true;
        expect(')');
      }
      return n;
    }
    if (name == "mode") {
      Node n = make(Kind::Mode);
      n->position = start;
      expect('(');
      n->value = integer();
      expect(')');
      return n;
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

bool Expression::grid_only() const noexcept { return root_->grid_only(); }

double Expression::operator()(double x) const {
  if (grid_only()) {
    throw Error(ErrorCode::ParseError, "parse_function_literal",
                "random and mode have no pointwise value in \"" + source_ + "\"");
  }
  const Vector xs = Vector::Constant(1, x);
  return root_->eval({&xs, nullptr, 0})[0];
}

Vector Expression::evaluate(const WeightedStateSpace& space, const SpectralDecomposition* dec,
                            std::uint64_t seed) const {
  return root_->eval({&space.points(), dec, seed});
}

Vector parse_function_literal(const std::string& expr, const WeightedStateSpace& space,
                              const SpectralDecomposition* dec, std::uint64_t seed) {
  return Expression(expr).evaluate(space, dec, seed);
}

}  // namespace mkinv
