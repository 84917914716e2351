#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace warpite {

using Rational = boost::multiprecision::cpp_rational;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// A real number of the form q or q*pi, enough to place boundary points exactly.
struct ExactReal {
    Rational coeff;
    bool times_pi = false;

    double value() const;
    std::string str() const;
    bool operator==(const ExactReal& o) const { return coeff == o.coeff && times_pi == o.times_pi; }
};

// Accepts "3/4", "0.5", "pi", "2*pi", "pi/2", "3*pi/4".
ExactReal parse_exact_real(const std::string& text);

// Polynomial with rational coefficients, c[k] multiplies r^k.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs);
    static RationalPolynomial constant(const Rational& c);
    static RationalPolynomial monomial(const Rational& c, int k);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const;

    RationalPolynomial derivative(int order = 1) const;
    RationalPolynomial operator+(const RationalPolynomial& o) const;
    RationalPolynomial operator-(const RationalPolynomial& o) const;
    RationalPolynomial operator*(const RationalPolynomial& o) const;
    bool operator==(const RationalPolynomial& o) const { return c_ == o.c_; }

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    std::vector<double> coeffs_double() const;

    // Exact value at x when representable as a rational (x rational or p constant).
    std::optional<Rational> exact_at(const ExactReal& x) const;
    // Decides p(x) == 0 exactly; for x = q*pi uses transcendence of pi.
    bool vanishes_at(const ExactReal& x) const;

    std::string str(const std::string& var = "r") const;

private:
    void trim();
    std::vector<Rational> c_;
};

// Horner evaluation on double coefficients.
inline double horner(const std::vector<double>& c, double x) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

}  // namespace warpite
