#include "warpite/exact.hpp"

#include "warpite/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cctype>

namespace warpite {

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
    return out;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
    std::string s = strip(raw);
    if (s.empty()) fail(ErrorKind::InvalidInput, "empty rational literal");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Rational num = parse_rational(s.substr(0, slash));
            Rational den = parse_rational(s.substr(slash + 1));
            if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator in '" + raw + "'");
            return num / den;
        }
        bool neg = false;
        std::size_t pos = 0;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            pos = 1;
        }
        std::string mant = s.substr(pos);
        int exp10 = 0;
        auto e = mant.find_first_of("eE");
        if (e != std::string::npos) {
            exp10 = std::stoi(mant.substr(e + 1));
            mant = mant.substr(0, e);
        }
        auto dot = mant.find('.');
        std::string digits = mant;
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            exp10 -= static_cast<int>(mant.size() - dot - 1);
        }
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
            fail(ErrorKind::InvalidInput, "malformed rational literal '" + raw + "'");
        boost::multiprecision::cpp_int n(digits);
        Rational q(n);
        boost::multiprecision::cpp_int ten = 10;
        boost::multiprecision::cpp_int scale = boost::multiprecision::pow(ten, static_cast<unsigned>(std::abs(exp10)));
        if (exp10 > 0) q *= Rational(scale);
        if (exp10 < 0) q /= Rational(scale);
        return neg ? Rational(-q) : q;
    } catch (const std::invalid_argument&) {
        fail(ErrorKind::InvalidInput, "malformed rational literal '" + raw + "'");
    } catch (const std::out_of_range&) {
        fail(ErrorKind::InvalidInput, "malformed rational literal '" + raw + "'");
    }
}

std::string to_string(const Rational& q) {
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

double ExactReal::value() const {
    double v = to_double(coeff);
    return times_pi ? v * boost::math::constants::pi<double>() : v;
}

std::string ExactReal::str() const {
    if (!times_pi) return to_string(coeff);
    if (coeff == 1) return "pi";
    auto num = boost::multiprecision::numerator(coeff);
    auto den = boost::multiprecision::denominator(coeff);
    std::string s = (num == 1 ? std::string("pi") : num.str() + "*pi");
    if (den != 1) s += "/" + den.str();
    return s;
}

ExactReal parse_exact_real(const std::string& raw) {
    std::string s = strip(raw);
    auto p = s.find("pi");
    if (p == std::string::npos) return {parse_rational(s), false};
    std::string before = s.substr(0, p);
    std::string after = s.substr(p + 2);
    Rational c = 1;
    if (!before.empty()) {
        if (before.back() == '*') before.pop_back();
        if (before == "-") c = -1;
        else if (!before.empty()) c = parse_rational(before);
    }
    if (!after.empty()) {
        if (after[0] != '/') fail(ErrorKind::InvalidInput, "malformed pi multiple '" + raw + "'");
        c /= parse_rational(after.substr(1));
    }
    return {c, true};
}

RationalPolynomial::RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RationalPolynomial RationalPolynomial::constant(const Rational& c) { return RationalPolynomial({c}); }

RationalPolynomial RationalPolynomial::monomial(const Rational& c, int k) {
    std::vector<Rational> v(static_cast<std::size_t>(k) + 1, Rational(0));
    v[k] = c;
    return RationalPolynomial(std::move(v));
}

void RationalPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPolynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
    return c_[k];
}

RationalPolynomial RationalPolynomial::derivative(int order) const {
    std::vector<Rational> d = c_;
    for (int o = 0; o < order && !d.empty(); ++o) {
        std::vector<Rational> next;
        for (std::size_t k = 1; k < d.size(); ++k) next.push_back(d[k] * static_cast<long>(k));
        d = std::move(next);
    }
    return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::operator+(const RationalPolynomial& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
    return RationalPolynomial(std::move(r));
}

RationalPolynomial RationalPolynomial::operator-(const RationalPolynomial& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] -= o.c_[k];
    return RationalPolynomial(std::move(r));
}

RationalPolynomial RationalPolynomial::operator*(const RationalPolynomial& o) const {
    if (c_.empty() || o.c_.empty()) return {};
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return RationalPolynomial(std::move(r));
}

Rational RationalPolynomial::eval(const Rational& x) const {
    Rational s = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * x + *it;
    return s;
}

double RationalPolynomial::eval(double x) const { return horner(coeffs_double(), x); }

std::vector<double> RationalPolynomial::coeffs_double() const {
    std::vector<double> d;
    d.reserve(c_.size());
    for (const auto& q : c_) d.push_back(to_double(q));
    return d;
}

std::optional<Rational> RationalPolynomial::exact_at(const ExactReal& x) const {
    if (!x.times_pi) return eval(x.coeff);
    if (degree() <= 0) return coeff(0);
    if (x.coeff == 0) return coeff(0);
    return std::nullopt;
}

bool RationalPolynomial::vanishes_at(const ExactReal& x) const {
    if (!x.times_pi || x.coeff == 0) return eval(x.coeff) == 0;
    // p(q*pi) = sum c_k q^k pi^k is zero only if every coefficient is.
    return is_zero();
}

std::string RationalPolynomial::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        std::string term = to_string(c_[k]);
        if (k >= 1) term += "*" + var;
        if (k >= 2) term += "^" + std::to_string(k);
        if (!out.empty()) out += (term[0] == '-') ? " - " + term.substr(1) : " + " + term;
        else out = term;
    }
    return out;
}

}  // namespace warpite
