#pragma once

#include <stickcert/diagram.hpp>
#include <stickcert/numeric.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace stickcert::invariants {

/// Integer Laurent polynomial. Zero coefficients are never stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(BigInt constant);  // NOLINT: implicit from integers is convenient in tests
  LaurentPoly(int constant) : LaurentPoly(BigInt(constant)) {}
  static LaurentPoly monomial(BigInt coeff, int exponent);

  const std::map<int, BigInt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  BigInt coeff(int exponent) const;
  int min_exponent() const;  // 0 for the zero polynomial
  int max_exponent() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly operator-() const;

  /// x -> x^-1.
  LaurentPoly inverted() const;
  /// Multiplied by +-x^k so the lowest exponent is 0 and the leading coefficient is positive.
  LaurentPoly normalized() const;
  /// Value at an integer point; exact. Throws on x = 0 with negative exponents.
  Rational evaluate(const BigInt& x) const;

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  void add_term(int e, const BigInt& c);
  std::map<int, BigInt> terms_;
};

/// Ascending exponents: "1 - 1*t + 1*t^2". The zero polynomial is "0".
std::string to_string(const LaurentPoly& p, char var = 't');
LaurentPoly parse_laurent(std::string_view text, char var = 't');

/// Normalized Alexander polynomial via Fox calculus on the Wirtinger presentation.
LaurentPoly alexander(const diagram::Diagram& d);

BigInt determinant(const diagram::Diagram& d);

struct ColoringCount {
  int p = 0;
  BigInt count;  // p^(nullity)
  int nullity = 0;
};

/// Fox p-colorings (arc labels mod p with 2*over = in + out), counted by rank over F_p.
ColoringCount count_colorings(const diagram::Diagram& d, int p);

bool is_prime(int p);

/// <D> in the variable A, unnormalized, with <O> = 1.
LaurentPoly raw_bracket(const diagram::Diagram& d);

/// (-A^3)^(-writhe) <simplify(D)>, or nullopt if simplify(D) has more than
/// crossing_cap crossings.
std::optional<LaurentPoly> kauffman_bracket(const diagram::Diagram& d, int crossing_cap = 24);

}  // namespace stickcert::invariants
