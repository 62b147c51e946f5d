#include "mdp/specparse.hpp"

#include <charconv>
#include <cstdlib>
#include <vector>

#include "mdp/errors.hpp"

namespace mdp {

namespace {

// Cursor over the spec text; every throw carries the absolute position.
struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  bool try_consume(char c) {
    if (!done() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }

  bool try_keyword(std::string_view kw) {
    if (text.substr(pos, kw.size()) == kw) {
      pos += kw.size();
      return true;
    }
    return false;
  }

  void expect_keyword(std::string_view kw) {
    if (!try_keyword(kw))
      throw ParseError("expected '" + std::string(kw) + "'", pos);
  }

  std::int64_t integer() {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + pos)
      throw ParseError("expected an integer", pos);
    pos = static_cast<std::size_t>(ptr - text.data());
    return value;
  }

  std::uint64_t unsigned_integer() {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + pos)
      throw ParseError("expected an unsigned integer", pos);
    pos = static_cast<std::size_t>(ptr - text.data());
    return value;
  }

  double real() {
    // from_chars for double is incomplete on some toolchains; fall back to strtod.
    std::string buf(text.substr(pos));
    char* end = nullptr;
    double value = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str()) throw ParseError("expected a real number", pos);
    pos += static_cast<std::size_t>(end - buf.c_str());
    return value;
  }

  std::vector<std::int64_t> integer_list() {
    std::vector<std::int64_t> values;
    values.push_back(integer());
    while (try_consume(',')) values.push_back(integer());
    return values;
  }
};

DistributionSpec parse_iid_dist(Cursor& cur) {
  if (cur.try_keyword("two-point:")) {
    cur.expect_keyword("a=");
    std::int64_t a = cur.integer();
    cur.expect_keyword(",b=");
    std::int64_t b = cur.integer();
    cur.expect_keyword(",p=");
    double p = cur.real();
    return DistributionSpec::two_point(a, b, p);
  }
  if (cur.try_keyword("geometric:")) {
    cur.expect_keyword("p=");
    return DistributionSpec::geometric(cur.real());
  }
  if (cur.try_keyword("uniform:")) {
    cur.expect_keyword("lo=");
    std::int64_t lo = cur.integer();
    cur.expect_keyword(",hi=");
    std::int64_t hi = cur.integer();
    return DistributionSpec::bounded_uniform(lo, hi);
  }
  throw ParseError("unknown iid distribution (two-point|geometric|uniform)", cur.pos);
}

EnvironmentSpec parse_env_dist(Cursor& cur, std::uint64_t seed) {
  if (cur.try_keyword("two-point:")) {
    cur.expect_keyword("p1=");
    double p1 = cur.real();
    double p2;
    if (cur.try_keyword(",p2=")) {
      p2 = cur.real();
    } else {
      p2 = 1.0 - p1;  // complementary second atom unless given
    }
    cur.expect_keyword(",w=");
    double w = cur.real();
    return EnvironmentSpec::two_point(p1, p2, w, seed);
  }
  if (cur.try_keyword("uniform:")) {
    cur.expect_keyword("lo=");
    double lo = cur.real();
    cur.expect_keyword(",hi=");
    double hi = cur.real();
    return EnvironmentSpec::uniform(lo, hi, seed);
  }
  throw ParseError("unknown environment distribution (two-point|uniform)", cur.pos);
}

GapSequenceSpec parse_a_seq(Cursor& cur) {
  if (cur.try_keyword("const:")) return GapSequenceSpec::constant(cur.integer());
  if (cur.try_keyword("list:")) {
    auto values = cur.integer_list();
    cur.expect_keyword(";tail=");
    return GapSequenceSpec::explicit_list(std::move(values), cur.integer());
  }
  throw ParseError("rwre leading sequence must be const:<i> or list:<...>;tail=<v>", cur.pos);
}

}  // namespace

ParsedGaps parse_gap_spec(std::string_view text) {
  Cursor cur{text};
  ParsedGaps out;

  if (cur.try_keyword("const:")) {
    auto spec = GapSequenceSpec::constant(cur.integer());
    if (!cur.done()) throw ParseError("trailing input after const spec", cur.pos);
    out.provider = make_provider(spec);
    out.text = spec.to_text();
    return out;
  }
  if (cur.try_keyword("periodic:")) {
    auto spec = GapSequenceSpec::periodic(cur.integer_list());
    if (!cur.done()) throw ParseError("trailing input after periodic spec", cur.pos);
    out.provider = make_provider(spec);
    out.text = spec.to_text();
    return out;
  }
  if (cur.try_keyword("list:")) {
    auto values = cur.integer_list();
    cur.expect_keyword(";tail=");
    auto spec = GapSequenceSpec::explicit_list(std::move(values), cur.integer());
    if (!cur.done()) throw ParseError("trailing input after list spec", cur.pos);
    out.provider = make_provider(spec);
    out.text = spec.to_text();
    return out;
  }
  if (cur.try_keyword("iid:")) {
    auto dist = parse_iid_dist(cur);
    cur.expect_keyword(";seed=");
    auto spec = GapSequenceSpec::iid(dist, cur.unsigned_integer());
    if (!cur.done()) throw ParseError("trailing input after iid spec", cur.pos);
    out.provider = make_provider(spec);
    out.text = spec.to_text();
    return out;
  }
  if (cur.try_keyword("rwre:")) {
    cur.expect_keyword("dist=");
    // The seed is read at the end; parse the rest first, then re-run with it.
    std::size_t dist_pos = cur.pos;
    EnvironmentSpec env = parse_env_dist(cur, 0);
    cur.expect_keyword(";a=");
    GapSequenceSpec a_seq = parse_a_seq(cur);
    cur.expect_keyword(";b=");
    std::int64_t b = cur.integer();
    cur.expect_keyword(";len=");
    std::int64_t length = cur.integer();
    cur.expect_keyword(";seed=");
    std::uint64_t seed = cur.unsigned_integer();
    if (!cur.done()) throw ParseError("trailing input after rwre spec", cur.pos);
    env.seed = seed;
    (void)dist_pos;
    RwreGapParams params{env, a_seq, b};
    Rng rng(seed, /*stream=*/1);  // walk stream; environment uses its own tag
    out.rwre = make_rwre_gaps(params, length, rng);
    out.provider = out.rwre->provider;
    out.text = std::string(text);
    return out;
  }
  throw ParseError("unknown gap spec kind (const|periodic|list|iid|rwre)", cur.pos);
}

EnvironmentSpec parse_env_spec(std::string_view text, std::uint64_t seed) {
  Cursor cur{text};
  EnvironmentSpec env = parse_env_dist(cur, seed);
  if (!cur.done()) throw ParseError("trailing input after environment spec", cur.pos);
  return env;
}

GapSequenceSpec parse_leading_seq_spec(std::string_view text) {
  Cursor cur{text};
  GapSequenceSpec spec = parse_a_seq(cur);
  if (!cur.done()) throw ParseError("trailing input after leading sequence", cur.pos);
  return spec;
}

}  // namespace mdp
