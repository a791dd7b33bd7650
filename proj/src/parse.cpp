#include "circlab/parse.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "circlab/classify.hpp"
#include "circlab/error.hpp"

namespace circlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string_view strip_brackets(std::string_view s, char open, char close) {
  s = trim(s);
  if (!s.empty() && s.front() == open) {
    if (s.back() != close) throw ParseError("unbalanced '" + std::string(1, open) + "' in '" + std::string(s) + "'");
    s = s.substr(1, s.size() - 2);
  }
  return trim(s);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

// Recursive-descent reader for set expressions.
class SetReader {
 public:
  SetReader(std::string_view text, const std::shared_ptr<const DerivedSeq>& seq) : s_(text), seq_(seq) {}

  NatSet read_all() {
    NatSet out = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing text");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("set expression '" + std::string(s_) + "': " + why + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::uint64_t number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return parse_u64(s_.substr(start, pos_ - start));
  }

  NatSet binary(SetOp op) {
    expect('(');
    NatSet a = expr();
    expect(',');
    NatSet b = expr();
    expect(')');
    return set_algebra(op, a, b);
  }

  NatSet expr() {
    const std::string name = word();
    if (name == "evens" || name == "odds") {
      const std::uint64_t rem = name == "evens" ? 0 : 1;
      return NatSet::predicate([rem](std::uint64_t n) { return n % 2 == rem; }, std::nullopt,
                               Extent::infinite_coinfinite, name);
    }
    if (name == "squares") {
      return NatSet::predicate(
          [](std::uint64_t n) {
            auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
            while (r * r > n) --r;
            while ((r + 1) * (r + 1) <= n) ++r;
            return r * r == n;
          },
          std::nullopt, Extent::infinite_coinfinite, name);
    }
    if (name == "all") {
      return NatSet::predicate([](std::uint64_t) { return true; }, std::nullopt, Extent::cofinite, name);
    }
    if (name == "from") {
      expect(':');
      const std::uint64_t start = number();
      return NatSet::predicate([start](std::uint64_t n) { return n >= start; }, std::nullopt, Extent::cofinite,
                               "from:" + std::to_string(start));
    }
    if (name == "blocks") {
      expect(':');
      if (word() != "cube-gap") fail("unknown block construction");
      return cube_gap_set();
    }
    if (name == "fin") {
      expect(':');
      expect('{');
      std::vector<std::uint64_t> elements;
      if (!accept('}')) {
        do {
          elements.push_back(number());
        } while (accept(','));
        expect('}');
      }
      for (std::uint64_t v : elements) {
        if (v == 0) fail("elements start at 1");
      }
      return NatSet::finite(std::move(elements));
    }
    if (name == "ivl") {
      expect(':');
      std::vector<Interval> parts;
      do {
        expect('[');
        const std::uint64_t lo = number();
        expect(',');
        const std::uint64_t hi = number();
        expect(']');
        if (lo == 0 || lo > hi) fail("bad interval");
        parts.push_back({lo, hi});
      } while (accept('+'));
      return NatSet::intervals(std::move(parts));
    }
    if (name == "lift") {
      if (!seq_) fail("lift() needs a ratio spec");
      expect('(');
      NatSet inner = expr();
      expect(')');
      return lift(inner, seq_);
    }
    if (name == "shift") {
      expect('(');
      NatSet inner = expr();
      expect(',');
      const std::uint64_t m = number();
      expect(')');
      return translate(inner, m);
    }
    if (name == "union") return binary(SetOp::unite);
    if (name == "inter") return binary(SetOp::intersect);
    if (name == "diff") return binary(SetOp::subtract);
    fail("unknown set '" + name + "'");
  }

  std::string_view s_;
  const std::shared_ptr<const DerivedSeq>& seq_;
  std::size_t pos_ = 0;
};

}  // namespace

BigInt parse_bigint(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("expected an integer");
  std::size_t start = text.front() == '-' ? 1 : 0;
  if (start == text.size()) throw ParseError("expected an integer, got '" + std::string(text) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError("expected an integer, got '" + std::string(text) + "'");
    }
  }
  return BigInt(std::string(text), 10);
}

std::uint64_t parse_u64(std::string_view text) {
  const BigInt v = parse_bigint(text);
  if (!fits_u64(v)) throw ParseError("'" + std::string(trim(text)) + "' is not a nonnegative 64-bit integer");
  return to_u64(v);
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  const BigInt num = parse_bigint(text.substr(0, slash));
  const BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return make_rational(num, den);
}

std::vector<std::uint64_t> parse_u64_list(std::string_view text) {
  text = strip_brackets(text, '[', ']');
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  for (std::string_view item : split(text, ',')) out.push_back(parse_u64(item));
  return out;
}

std::vector<BigInt> parse_bigint_list(std::string_view text) {
  text = strip_brackets(text, '[', ']');
  std::vector<BigInt> out;
  if (text.empty()) return out;
  for (std::string_view item : split(text, ',')) out.push_back(parse_bigint(item));
  return out;
}

RatioSpec parse_ratio_spec(std::string_view text) {
  text = trim(text);
  if (text == "dlictrex") return RatioSpec::cube_gap_blocks();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("unknown ratio spec '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (kind == "const") return RatioSpec::constant(parse_bigint(arg));
  if (kind == "linear") return RatioSpec::linear(parse_bigint(arg));
  if (kind == "pow") return RatioSpec::power(parse_bigint(arg));
  if (kind == "list") {
    const auto bar = arg.find('|');
    if (bar == std::string_view::npos) throw ParseError("list spec needs a '|<tail spec>'");
    return RatioSpec::explicit_list(parse_bigint_list(arg.substr(0, bar)), parse_ratio_spec(arg.substr(bar + 1)));
  }
  if (kind == "file") {
    const std::string path(trim(arg));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read ratio file '" + path + "'");
    std::vector<BigInt> head;
    std::string line;
    std::optional<RatioSpec> tail;
    while (std::getline(in, line)) {
      std::string_view v = line;
      if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
      v = trim(v);
      if (v.empty()) continue;
      if (tail) throw ParseError("ratio file '" + path + "' has lines after its tail rule");
      if (starts_with(v, "tail:")) {
        tail = parse_ratio_spec(v.substr(5));
        continue;
      }
      head.push_back(parse_bigint(v));
    }
    if (!tail) throw ParseError("ratio file '" + path + "' must end with a 'tail:<spec>' line");
    return RatioSpec::explicit_list(std::move(head), *tail);
  }
  throw ParseError("unknown ratio spec kind '" + std::string(kind) + "'");
}

NatSet parse_set_expr(std::string_view text, const std::shared_ptr<const DerivedSeq>& seq) {
  return SetReader(trim(text), seq).read_all();
}

CirclePoint parse_digit_rule(std::string_view text, const std::shared_ptr<const DerivedSeq>& seq,
                             std::uint64_t digit_horizon) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("unknown digit rule '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (kind == "rat") return digits_from_rational(parse_rational(arg), seq, digit_horizon);
  if (kind == "finite") return CirclePoint::finite_digits(seq, parse_bigint_list(arg));
  if (kind == "periodic") return CirclePoint::periodic(seq, parse_bigint_list(arg));
  if (kind == "ones-on") return CirclePoint::ones_on(seq, parse_set_expr(arg, seq));
  if (kind == "max-on") return CirclePoint::max_on(seq, parse_set_expr(arg, seq));
  if (kind == "floor-div") {
    std::string_view body = trim(arg);
    if (!starts_with(body, "m=")) throw ParseError("floor-div rule needs 'm={n:m,...}'");
    body = strip_brackets(body.substr(2), '{', '}');
    std::map<std::uint64_t, BigInt> divisors;
    if (!body.empty()) {
      for (std::string_view item : split(body, ',')) {
        const auto sep = item.find(':');
        if (sep == std::string_view::npos) throw ParseError("floor-div entry '" + std::string(item) + "' needs n:m");
        const std::uint64_t n = parse_u64(item.substr(0, sep));
        if (!divisors.emplace(n, parse_bigint(item.substr(sep + 1))).second) {
          throw ParseError("floor-div index " + std::to_string(n) + " listed twice");
        }
      }
    }
    return CirclePoint::floor_div(seq, std::move(divisors));
  }
  throw ParseError("unknown digit rule kind '" + std::string(kind) + "'");
}

}  // namespace circlab
