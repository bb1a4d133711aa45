#include <stickcert/invariants.hpp>

#include <algorithm>
#include <cctype>
#include <future>
#include <numeric>
#include <thread>
#include <vector>

namespace stickcert::invariants {

LaurentPoly::LaurentPoly(BigInt constant) { add_term(0, constant); }

LaurentPoly LaurentPoly::monomial(BigInt coeff, int exponent) {
  LaurentPoly p;
  p.add_term(exponent, coeff);
  return p;
}

void LaurentPoly::add_term(int e, const BigInt& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

BigInt LaurentPoly::coeff(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? BigInt(0) : it->second;
}

int LaurentPoly::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int LaurentPoly::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_) out.add_term(e, -c);
  return out;
}

LaurentPoly LaurentPoly::inverted() const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_) out.add_term(-e, c);
  return out;
}

LaurentPoly LaurentPoly::normalized() const {
  if (terms_.empty()) return {};
  const int shift = min_exponent();
  const bool flip = terms_.rbegin()->second < 0;
  LaurentPoly out;
  for (const auto& [e, c] : terms_) out.add_term(e - shift, flip ? BigInt(-c) : c);
  return out;
}

Rational LaurentPoly::evaluate(const BigInt& x) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    if (e < 0 && x.is_zero()) throw std::domain_error("negative power of zero");
    BigInt power = pow(x, static_cast<unsigned>(std::abs(e)));
    sum += e >= 0 ? Rational(c * power) : make_rational(c, power);
  }
  return sum;
}

std::string to_string(const LaurentPoly& p, char var) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    BigInt mag = abs(c);
    if (first) {
      out += c < 0 ? "-" : "";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    out += mag.str();
    if (e == 1) {
      out += std::string("*") + var;
    } else if (e != 0) {
      out += std::string("*") + var + "^" + std::to_string(e);
    }
    first = false;
  }
  return out;
}

LaurentPoly parse_laurent(std::string_view text, char var) {
  LaurentPoly p;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto digits = [&](std::string_view what) {
    std::size_t b = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (b == i) throw ParseError("expected " + std::string(what) + " at offset " + std::to_string(b));
    return std::string(text.substr(b, i - b));
  };
  skip();
  if (text.substr(i) == "0") return p;
  bool first = true;
  while (true) {
    skip();
    if (i >= text.size()) break;
    int sign = 1;
    if (text[i] == '-' || text[i] == '+') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      throw ParseError("expected '+' or '-' at offset " + std::to_string(i));
    }
    BigInt c(digits("coefficient"));
    int e = 0;
    if (i < text.size() && text[i] == '*') {
      ++i;
      if (i >= text.size() || text[i] != var) throw ParseError(std::string("expected variable ") + var);
      ++i;
      e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        int esign = 1;
        if (i < text.size() && text[i] == '-') {
          esign = -1;
          ++i;
        }
        e = esign * std::stoi(digits("exponent"));
      }
    }
    p += LaurentPoly::monomial(sign * c, e);
    first = false;
  }
  if (first) throw ParseError("empty polynomial");
  return p;
}

namespace {

using Matrix = std::vector<std::vector<BigInt>>;

BigInt bareiss_determinant(Matrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Coefficients (ascending) of the unique polynomial through the points.
std::vector<Rational> interpolate(const std::vector<BigInt>& xs, const std::vector<BigInt>& ys) {
  const std::size_t n = xs.size();
  std::vector<Rational> dd(ys.begin(), ys.end());
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) dd[i] = (dd[i] - dd[i - 1]) / Rational(xs[i] - xs[i - level]);
  // Expand the Newton form from the innermost factor outwards.
  std::vector<Rational> coeffs{dd[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<Rational> next(coeffs.size() + 1, Rational(0));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      next[j + 1] += coeffs[j];
      next[j] -= coeffs[j] * Rational(xs[k]);
    }
    next[0] += dd[k];
    coeffs = std::move(next);
  }
  return coeffs;
}

}  // namespace

LaurentPoly alexander(const diagram::Diagram& d) {
  const auto pres = diagram::wirtinger(d);
  const int c = static_cast<int>(pres.relations.size());
  if (c <= 1) return LaurentPoly(1);

  // Each entry is a + b*t. Positive relation out = o in o^-1 differentiates to
  // (1 - t) at o, t at in, -1 at out; negative rows are scaled by t.
  struct Linear {
    int a = 0, b = 0;
  };
  std::vector<std::vector<Linear>> rows(c, std::vector<Linear>(pres.n_arcs));
  for (int r = 0; r < c; ++r) {
    const auto& rel = pres.relations[r];
    auto& row = rows[r];
    if (rel.sign > 0) {
      row[rel.over].a += 1;
      row[rel.over].b -= 1;
      row[rel.incoming].b += 1;
      row[rel.outgoing].a -= 1;
    } else {
      row[rel.over].a -= 1;
      row[rel.over].b += 1;
      row[rel.incoming].a += 1;
      row[rel.outgoing].b -= 1;
    }
  }

  const int size = c - 1;
  std::vector<BigInt> xs, ys;
  for (int x = -c; x <= c; ++x) {
    Matrix m(size, std::vector<BigInt>(size));
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) m[i][j] = BigInt(rows[i][j].a) + BigInt(rows[i][j].b) * x;
    xs.emplace_back(x);
    ys.push_back(bareiss_determinant(std::move(m)));
  }
  auto coeffs = interpolate(xs, ys);
  LaurentPoly p;
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    if (coeffs[e] == 0) continue;
    if (denominator(coeffs[e]) != 1) throw std::logic_error("Alexander interpolation produced a non-integer coefficient");
    if (static_cast<int>(e) > size) throw std::logic_error("Alexander determinant exceeds its degree bound");
    p += LaurentPoly::monomial(numerator(coeffs[e]), static_cast<int>(e));
  }
  if (p.is_zero()) throw std::logic_error("Alexander polynomial vanished; presentation is not a knot");
  return p.normalized();
}

BigInt determinant(const diagram::Diagram& d) {
  Rational v = alexander(d).evaluate(-1);
  return abs(numerator(v));
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; static_cast<long long>(q) * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

ColoringCount count_colorings(const diagram::Diagram& d, int p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  const auto pres = diagram::wirtinger(d);
  const int cols = pres.n_arcs;
  const long long mod = p;
  std::vector<std::vector<long long>> m;
  for (const auto& rel : pres.relations) {
    std::vector<long long> row(cols, 0);
    row[rel.over] += 2;
    row[rel.incoming] -= 1;
    row[rel.outgoing] -= 1;
    for (auto& v : row) v = ((v % mod) + mod) % mod;
    m.push_back(std::move(row));
  }
  auto inverse = [mod](long long a) {
    long long result = 1, e = mod - 2;
    a %= mod;
    while (e > 0) {
      if (e & 1) result = result * a % mod;
      a = a * a % mod;
      e >>= 1;
    }
    return result;
  };
  int rank = 0;
  for (int col = 0; col < cols && rank < static_cast<int>(m.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    const long long inv = inverse(m[rank][col]);
    for (auto& v : m[rank]) v = v * inv % mod;
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const long long f = m[r][col];
      for (int j = 0; j < cols; ++j) m[r][j] = ((m[r][j] - f * m[rank][j]) % mod + mod) % mod;
    }
    ++rank;
  }
  ColoringCount out;
  out.p = p;
  out.nullity = cols - rank;
  out.count = pow(BigInt(p), static_cast<unsigned>(out.nullity));
  return out;
}

namespace {

// histogram[a][loops]: number of states with `a` A-smoothings and `loops` circles.
using StateHistogram = std::vector<std::vector<std::uint64_t>>;

StateHistogram bracket_states(const std::vector<diagram::Crossing>& cs, std::uint64_t begin, std::uint64_t end) {
  const int c = static_cast<int>(cs.size());
  const int labels = 2 * c;
  StateHistogram hist(c + 1, std::vector<std::uint64_t>(labels + 2, 0));
  std::vector<int> parent(labels + 1);
  for (std::uint64_t state = begin; state < end; ++state) {
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int loops = labels;
    auto join = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[a] = b;
        --loops;
      }
    };
    int a_count = 0;
    for (int k = 0; k < c; ++k) {
      const auto& s = cs[k].slots;
      if (((state >> k) & 1) == 0) {
        ++a_count;
        join(s[0], s[1]);
        join(s[2], s[3]);
      } else {
        join(s[0], s[3]);
        join(s[1], s[2]);
      }
    }
    ++hist[a_count][loops];
  }
  return hist;
}

}  // namespace

LaurentPoly raw_bracket(const diagram::Diagram& d) {
  diagram::require_valid(d);
  const auto& cs = d.crossings();
  const int c = d.n_crossings();
  if (c == 0) return LaurentPoly(1);
  if (c > 40) throw std::invalid_argument("bracket state sum limited to 40 crossings");

  const std::uint64_t states = std::uint64_t{1} << c;
  const unsigned workers = c < 12 ? 1u : std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunk = (states + workers - 1) / workers;
  std::vector<std::future<StateHistogram>> parts;
  for (std::uint64_t b = 0; b < states; b += chunk)
    parts.push_back(std::async(std::launch::async, bracket_states, std::cref(cs), b, std::min(states, b + chunk)));
  StateHistogram hist(c + 1, std::vector<std::uint64_t>(2 * c + 2, 0));
  for (auto& f : parts) {
    auto h = f.get();
    for (int a = 0; a <= c; ++a)
      for (std::size_t l = 0; l < h[a].size(); ++l) hist[a][l] += h[a][l];
  }

  const LaurentPoly loop_value = LaurentPoly::monomial(-1, 2) + LaurentPoly::monomial(-1, -2);
  std::vector<LaurentPoly> loop_powers{LaurentPoly(1)};
  for (int l = 1; l <= 2 * c; ++l) loop_powers.push_back(loop_powers.back() * loop_value);

  LaurentPoly total;
  for (int a = 0; a <= c; ++a)
    for (std::size_t l = 1; l < hist[a].size(); ++l)
      if (hist[a][l] != 0) total += LaurentPoly::monomial(BigInt(hist[a][l]), a - (c - a)) * loop_powers[l - 1];
  return total;
}

std::optional<LaurentPoly> kauffman_bracket(const diagram::Diagram& d, int crossing_cap) {
  const auto s = diagram::simplify(d);
  if (s.n_crossings() > crossing_cap) return std::nullopt;
  const int w = s.writhe();
  const BigInt sign = (w % 2 == 0) ? 1 : -1;
  return LaurentPoly::monomial(sign, -3 * w) * raw_bracket(s);
}

}  // namespace stickcert::invariants
