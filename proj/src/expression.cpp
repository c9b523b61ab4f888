#include "cqfi/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cqfi {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  double parse() {
    const double v = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return v;
  }

 private:
  double sum() {
    double v = product();
    for (;;) {
      if (eat("+")) v += product();
      else if (eat("-")) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (eat("*") || eat("×")) {
        v *= unary();
      } else if (eat("/") || eat("÷")) {
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (eat("-")) return -unary();
    if (eat("+")) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (eat("(")) {
      const double v = sum();
      if (!eat(")")) fail("missing ')'");
      return implicit(v);
    }
    if (eat_pi()) return implicit(std::numbers::pi);
    const char* begin = text_.data() + pos_;
    double v = 0.0;
    const auto res = std::from_chars(begin, text_.data() + text_.size(), v);
    if (res.ec != std::errc{}) {
      fail(pos_ < text_.size() ? "expected a number at '" + std::string(text_.substr(pos_)) + "'"
                               : "unexpected end of input");
    }
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return implicit(v);
  }

  // "3pi", "2(pi + 1)"
  double implicit(double v) {
    skip_space();
    if (starts_with("(") || starts_with("pi") || starts_with("π")) return v * primary();
    return v;
  }

  bool eat_pi() { return eat("pi") || eat("π"); }

  bool starts_with(std::string_view token) const { return text_.substr(pos_).starts_with(token); }

  bool eat(std::string_view token) {
    skip_space();
    if (!starts_with(token)) return false;
    pos_ += token.size();
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("cannot read '" + std::string(text_) + "': " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

double parse_real_expression(std::string_view text) {
  const double v = Reader(text).parse();
  if (!std::isfinite(v)) throw std::invalid_argument("'" + std::string(text) + "' is not finite");
  return v;
}

}  // namespace cqfi
