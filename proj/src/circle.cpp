#include "multibrot/circle.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

namespace multibrot {

void require_degree(int d) {
  if (d < 2) throw DomainError("degree must be at least 2, got " + std::to_string(d));
}

Angle::Angle(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw DomainError("angle with zero denominator");
  if (den_ < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  num_ %= den_;
  if (num_ < 0) num_ += den_;
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Angle Angle::full_turn() {
  Angle a;
  a.num_ = 1;
  a.full_turn_ = true;
  return a;
}

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  std::size_t start = 0;
  while (start < s.size() && s[start] == ' ') ++start;
  std::size_t end = s.size();
  while (end > start && s[end - 1] == ' ') --end;
  s = s.substr(start, end - start);
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    throw DomainError("cannot parse angle '" + std::string(whole) + "' (expected p/q)");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

}  // namespace

Angle Angle::parse(std::string_view text, bool allow_full_turn) {
  auto slash = text.find('/');
  BigInt p, q = 1;
  if (slash == std::string_view::npos) {
    p = parse_integer(text, text);
  } else {
    p = parse_integer(text.substr(0, slash), text);
    q = parse_integer(text.substr(slash + 1), text);
  }
  if (q == 0) throw DomainError("angle '" + std::string(text) + "' has zero denominator");
  if (allow_full_turn && p == q) return full_turn();
  return Angle(p, q);
}

Rational Angle::value() const { return Rational(num_, den_); }

double Angle::to_double() const { return static_cast<double>(value()); }

std::string Angle::str() const { return num_.str() + "/" + den_.str(); }

std::strong_ordering Angle::operator<=>(const Angle& other) const {
  if (full_turn_ != other.full_turn_) return full_turn_ ? std::strong_ordering::greater : std::strong_ordering::less;
  BigInt lhs = num_ * other.den_;
  BigInt rhs = other.num_ * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Angle operator+(const Angle& a, const Angle& b) {
  return Angle(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

Angle operator-(const Angle& a, const Angle& b) {
  return Angle(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
}

Angle angle_from_rational(const Rational& r) {
  return Angle(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

Arc::Arc(Angle lo_, Angle hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.is_full_turn() || hi.is_full_turn()) {
    lo = lo.is_full_turn() ? Angle() : lo;
    hi = hi.is_full_turn() ? Angle() : hi;
  }
  if (lo == hi) throw DomainError("degenerate arc at " + lo.str());
}

std::string Arc::str() const { return "(" + lo.str() + "," + hi.str() + ")"; }

Angle map_d(const Angle& a, int d) {
  require_degree(d);
  return Angle(a.num() * d, a.den());
}

Angle map_d_pow(const Angle& a, int d, int k) {
  require_degree(d);
  if (k < 0) throw DomainError("negative iterate count");
  BigInt m = boost::multiprecision::powm(BigInt(d), BigInt(k), a.den());
  return Angle(a.num() * m, a.den());
}

OrbitData orbit_data(const Angle& a, int d) {
  require_degree(d);
  std::map<Angle, int> seen;
  std::vector<Angle> path;
  Angle x = a.is_full_turn() ? Angle() : a;
  while (true) {
    auto [it, inserted] = seen.emplace(x, static_cast<int>(path.size()));
    if (!inserted) {
      OrbitData out;
      out.preperiod = it->second;
      out.period = static_cast<int>(path.size()) - it->second;
      out.orbit.assign(path.begin() + it->second, path.end());
      return out;
    }
    path.push_back(x);
    x = map_d(x, d);
  }
}

Rational cyclic_distance(const Angle& a, const Angle& b) {
  Rational r = b.value() - a.value();
  if (b.is_full_turn()) r = 1 - a.value();
  if (a.is_full_turn()) r = b.value();
  if (r < 0) r += 1;
  if (r >= 1) r -= 1;
  return r;
}

Rational arc_length(const Arc& x) { return cyclic_distance(x.lo, x.hi); }

bool arc_contains(const Arc& x, const Angle& a) {
  Rational t = cyclic_distance(x.lo, a);
  return t > 0 && t < arc_length(x);
}

bool arc_within(const Arc& inner, const Arc& outer) {
  Rational offset = cyclic_distance(outer.lo, inner.lo);
  return offset + arc_length(inner) <= arc_length(outer);
}

bool cyclic_order_preserved(const std::vector<Angle>& before, const std::vector<Angle>& after) {
  if (before.size() != after.size()) throw DomainError("cyclic_order_preserved: lists differ in length");
  auto check_distinct = [](const std::vector<Angle>& v) {
    if (sorted_unique(v).size() != v.size()) throw DomainError("cyclic_order_preserved: duplicate angles");
  };
  check_distinct(before);
  check_distinct(after);
  const std::size_t k = before.size();
  if (k <= 2) return true;

  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return before[i] < before[j]; });
  std::vector<Angle> sorted_after = sorted_unique(after);
  auto rank = [&](const Angle& x) {
    return static_cast<std::size_t>(std::lower_bound(sorted_after.begin(), sorted_after.end(), x) - sorted_after.begin());
  };
  std::size_t first = rank(after[idx[0]]);
  for (std::size_t i = 1; i < k; ++i) {
    if (rank(after[idx[i]]) != (first + i) % k) return false;
  }
  return true;
}

std::vector<Angle> sorted_unique(std::vector<Angle> angles) {
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  return angles;
}

bool unlinked(const std::vector<Angle>& a, const std::vector<Angle>& b) {
  if (a.empty() || b.empty()) throw DomainError("unlinked: empty angle set");
  std::vector<Angle> sa = sorted_unique(a);
  for (const Angle& x : b) {
    if (std::binary_search(sa.begin(), sa.end(), x)) throw DomainError("unlinked: sets share angle " + x.str());
  }
  auto gap = [&](const Angle& x) {
    auto below = static_cast<std::size_t>(std::lower_bound(sa.begin(), sa.end(), x) - sa.begin());
    return below % sa.size();
  };
  std::size_t g = gap(b.front());
  return std::all_of(b.begin(), b.end(), [&](const Angle& x) { return gap(x) == g; });
}

std::vector<Arc> complementary_arcs(const std::vector<Angle>& sorted) {
  std::vector<Arc> arcs;
  if (sorted.size() < 2) return arcs;
  arcs.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) arcs.emplace_back(sorted[i], sorted[(i + 1) % sorted.size()]);
  return arcs;
}

BigInt period_denominator(int d, int n) {
  require_degree(d);
  if (n < 1) throw DomainError("period must be positive");
  return boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(n)) - 1;
}

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int k = 1; k <= n; ++k)
    if (n % k == 0) out.push_back(k);
  return out;
}

std::vector<BigInt> exact_period_numerators(int d, int n) {
  const BigInt D = period_denominator(d, n);
  // a/D has period dividing k | n exactly when a is a multiple of D / (d^k - 1).
  std::vector<BigInt> steps;
  for (int k : divisors(n))
    if (k < n) steps.push_back(D / period_denominator(d, k));
  std::vector<BigInt> out;
  for (BigInt a = 0; a < D; ++a) {
    bool lower = std::any_of(steps.begin(), steps.end(), [&](const BigInt& s) { return a % s == 0; });
    if (!lower) out.push_back(a);
  }
  return out;
}

std::vector<Angle> exact_period_angles(int d, int n) {
  const BigInt D = period_denominator(d, n);
  std::vector<Angle> out;
  for (const BigInt& a : exact_period_numerators(d, n)) out.emplace_back(a, D);
  return out;
}

}  // namespace multibrot
