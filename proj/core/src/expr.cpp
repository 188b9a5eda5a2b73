#include "mlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mlab/errors.hpp"

namespace mlab::weights {

ExprPtr make_const(double v) { return std::make_shared<const Expr>(Expr{Op::Const, v, {}}); }
ExprPtr make_var() { return std::make_shared<const Expr>(Expr{Op::Var, 0.0, {}}); }
ExprPtr make_pow(ExprPtr base, double exponent) {
  return std::make_shared<const Expr>(Expr{Op::Pow, exponent, {std::move(base)}});
}
ExprPtr make_log(ExprPtr inner) {
  return std::make_shared<const Expr>(Expr{Op::Log, 0.0, {std::move(inner)}});
}
ExprPtr make_recip(ExprPtr inner) {
  return std::make_shared<const Expr>(Expr{Op::Recip, 0.0, {std::move(inner)}});
}
ExprPtr make_prod(std::vector<ExprPtr> kids) {
  if (kids.empty()) throw std::invalid_argument("empty product");
  if (kids.size() == 1) return kids.front();
  return std::make_shared<const Expr>(Expr{Op::Prod, 0.0, std::move(kids)});
}
ExprPtr make_sum(std::vector<ExprPtr> kids) {
  if (kids.empty()) throw std::invalid_argument("empty sum");
  if (kids.size() == 1) return kids.front();
  return std::make_shared<const Expr>(Expr{Op::Sum, 0.0, std::move(kids)});
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr run() {
    if (s_.empty()) throw syntax_error("empty expression", 0);
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) throw syntax_error("unexpected character", pos_);
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw syntax_error(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  ExprPtr expr() {
    std::vector<ExprPtr> terms{term()};
    while (peek('+')) {
      ++pos_;
      terms.push_back(term());
    }
    return make_sum(std::move(terms));
  }

  ExprPtr term() {
    skip();
    std::size_t start = pos_;
    std::vector<ExprPtr> fs{factor()};
    std::string_view lead = s_.substr(start, pos_ - start);
    while (!lead.empty() && std::isspace(static_cast<unsigned char>(lead.back())))
      lead.remove_suffix(1);
    bool bare_one = fs[0]->op == Op::Const && lead == "1";
    bool first_op = true;
    for (;;) {
      if (peek('*')) {
        ++pos_;
        fs.push_back(factor());
      } else if (peek('/')) {
        ++pos_;
        fs.push_back(make_recip(factor()));
        if (first_op && bare_one) fs.erase(fs.begin());
      } else {
        break;
      }
      first_op = false;
    }
    return make_prod(std::move(fs));
  }

  ExprPtr factor() {
    ExprPtr a = atom();
    if (peek('^')) {
      ++pos_;
      skip();
      return make_pow(std::move(a), number(true));
    }
    return a;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) throw syntax_error("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == 't') {
      ++pos_;
      return make_var();
    }
    if (s_.substr(pos_, 4) == "log(") {
      pos_ += 4;
      ExprPtr inner = expr();
      expect(')');
      return make_log(std::move(inner));
    }
    if (c == 'e') {
      ++pos_;
      return make_const(std::numbers::e);
    }
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_const(number(false));
    throw syntax_error("unexpected character", pos_);
  }

  double number(bool allow_sign) {
    std::size_t start = pos_;
    std::size_t i = pos_;
    auto digit = [&](std::size_t k) {
      return k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]));
    };
    if (allow_sign && i < s_.size() && (s_[i] == '+' || s_[i] == '-')) ++i;
    std::size_t mantissa = i;
    while (digit(i)) ++i;
    if (i < s_.size() && s_[i] == '.') {
      ++i;
      while (digit(i)) ++i;
    }
    if (i == mantissa || (i == mantissa + 1 && s_[mantissa] == '.'))
      throw syntax_error("expected number", mantissa);
    if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (digit(j)) {
        while (digit(j)) ++j;
        i = j;
      }
    }
    std::string text(s_.substr(start, i - start));
    pos_ = i;
    return std::strtod(text.c_str(), nullptr);
  }
};

std::string num(double v) {
  if (v == std::numbers::e) return "e";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print(const Expr& e);

// Text that the factor rule reads back as exactly this node.
std::string print_factor(const Expr& e) {
  switch (e.op) {
    case Op::Var:
    case Op::Const:
    case Op::Log:
    case Op::Pow:
      return print(e);
    default:
      return "(" + print(e) + ")";
  }
}

std::string print(const Expr& e) {
  switch (e.op) {
    case Op::Const:
      return num(e.value);
    case Op::Var:
      return "t";
    case Op::Log:
      return "log(" + print(*e.kids[0]) + ")";
    case Op::Pow: {
      const Expr& b = *e.kids[0];
      bool bare = b.op == Op::Var || b.op == Op::Const || b.op == Op::Log;
      return (bare ? print(b) : "(" + print(b) + ")") + "^" + num(e.value);
    }
    case Op::Recip:
      return "1/" + print_factor(*e.kids[0]);
    case Op::Prod: {
      std::string out;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        const Expr& k = *e.kids[i];
        if (k.op == Op::Recip) {
          out += (i == 0 ? "1/" : "/") + print_factor(*k.kids[0]);
        } else {
          if (i > 0) out += "*";
          bool guard_one = i == 0 && k.op == Op::Const && k.value == 1.0 &&
                           e.kids.size() > 1 && e.kids[1]->op == Op::Recip;
          out += guard_one ? "(1)" : print_factor(k);
        }
      }
      return out;
    }
    case Op::Sum: {
      std::string out;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i > 0) out += "+";
        const Expr& k = *e.kids[i];
        out += k.op == Op::Sum ? "(" + print(k) + ")" : print(k);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).run(); }

ExprPtr parse_weight(std::string_view text) {
  ExprPtr e = parse_expr(text);
  for (double t : {1e-6, 1.0, 1e6}) {
    double lv = log_eval(*e, std::log(t));
    if (!std::isfinite(lv))
      throw std::domain_error("weight expression is not positive and finite at t=" + num(t));
  }
  return e;
}

std::string to_string(const Expr& e) { return print(e); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
  if ((a.op == Op::Const || a.op == Op::Pow) && a.value != b.value) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!structurally_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

double log_eval(const Expr& e, double log_t) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  switch (e.op) {
    case Op::Const:
      return e.value > 0 ? std::log(e.value) : nan;
    case Op::Var:
      return log_t;
    case Op::Pow:
      return e.value * log_eval(*e.kids[0], log_t);
    case Op::Log: {
      double inner = log_eval(*e.kids[0], log_t);
      return inner > 0 ? std::log(inner) : nan;
    }
    case Op::Recip:
      return -log_eval(*e.kids[0], log_t);
    case Op::Prod: {
      double s = 0;
      for (const auto& k : e.kids) s += log_eval(*k, log_t);
      return s;
    }
    case Op::Sum: {
      double m = -std::numeric_limits<double>::infinity();
      std::vector<double> ls;
      ls.reserve(e.kids.size());
      for (const auto& k : e.kids) {
        ls.push_back(log_eval(*k, log_t));
        if (std::isnan(ls.back())) return nan;
        m = std::max(m, ls.back());
      }
      if (!std::isfinite(m)) return m;
      double acc = 0;
      for (double l : ls) acc += std::exp(l - m);
      return m + std::log(acc);
    }
  }
  return nan;
}

ExprPtr substitute_recip(const ExprPtr& e) {
  switch (e->op) {
    case Op::Const:
      return e;
    case Op::Var:
      return make_recip(make_var());
    case Op::Pow:
      return make_pow(substitute_recip(e->kids[0]), e->value);
    case Op::Log:
      return make_log(substitute_recip(e->kids[0]));
    case Op::Recip:
      return make_recip(substitute_recip(e->kids[0]));
    case Op::Prod:
    case Op::Sum: {
      std::vector<ExprPtr> ks;
      for (const auto& k : e->kids) ks.push_back(substitute_recip(k));
      return e->op == Op::Prod ? make_prod(std::move(ks)) : make_sum(std::move(ks));
    }
  }
  return e;
}

}  // namespace mlab::weights
