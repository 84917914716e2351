#pragma once

#include "warpite/exact.hpp"

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace warpite::sym {

// Variables are interned by name; ids are process-local, printing always sorts by name.
int var_id(const std::string& name);
const std::string& var_name(int id);

// Product of variables with integer (possibly negative) exponents.
struct Monomial {
    std::vector<std::pair<int, int>> e;  // (var id, exponent), sorted by id, exponents nonzero

    Monomial operator*(const Monomial& o) const;
    Monomial inverse() const;
    int exponent(int var) const;
    Monomial without(int var) const;
    bool operator<(const Monomial& o) const { return e < o.e; }
    bool operator==(const Monomial& o) const { return e == o.e; }
    std::string str() const;
};

using NumericEnv = std::map<std::string, double>;
using ComplexEnv = std::map<std::string, std::complex<double>>;

// Laurent polynomial with rational coefficients.
class Poly {
public:
    Poly() = default;
    Poly(long c);  // NOLINT: integer literals as constants
    explicit Poly(const Rational& c);
    static Poly var(const std::string& name, int exponent = 1);
    static Poly monomial(const Rational& c, const Monomial& m);

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    std::optional<Rational> constant_value() const;
    bool is_monomial() const { return t_.size() == 1; }
    const std::map<Monomial, Rational>& terms() const { return t_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly scaled(const Rational& c) const;
    Poly pow(int k) const;  // k < 0 only for monomials
    bool operator==(const Poly& o) const { return t_ == o.t_; }
    bool operator!=(const Poly& o) const { return t_ != o.t_; }

    int max_exponent(int var) const;
    int min_exponent(int var) const;
    // Replaces var by value; negative powers of var require value to be a monomial.
    Poly subs(const std::string& var, const Poly& value) const;
    // Terms grouped by the exponent of var, with var removed.
    std::map<int, Poly> split_by(const std::string& var) const;

    double eval(const NumericEnv& env) const;
    std::complex<double> eval(const ComplexEnv& env) const;
    std::string str() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> t_;
};

// var^2 = value, used to put radicals into canonical form.
struct Relation {
    std::string var;
    Poly square;
};
using Relations = std::vector<Relation>;

// Clears negative powers of related variables, then reduces var^k (k >= 2) via the relations.
Poly reduce(const Poly& p, const Relations& rel);
// Canonical zero test modulo the relations (negative powers cleared by a monomial factor first).
bool is_zero_mod(const Poly& p, const Relations& rel);

class RatFunc {
public:
    RatFunc() : num_(0), den_(1) {}
    RatFunc(const Poly& num) : num_(num), den_(1) {}  // NOLINT
    RatFunc(const Poly& num, const Poly& den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc operator-() const { return RatFunc(-num_, den_); }

    bool equals(const RatFunc& o, const Relations& rel = {}) const;
    bool is_zero(const Relations& rel = {}) const { return is_zero_mod(num_, rel); }
    double eval(const NumericEnv& env) const { return num_.eval(env) / den_.eval(env); }
    std::complex<double> eval(const ComplexEnv& env) const { return num_.eval(env) / den_.eval(env); }
    std::string str() const;

private:
    void normalize();
    Poly num_, den_;
};

}  // namespace warpite::sym
