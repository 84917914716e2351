#include "warpite/symbolic_algebra.hpp"

#include "warpite/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace warpite::sym {

namespace {

struct Interner {
    std::mutex mu;
    std::unordered_map<std::string, int> ids;
    std::deque<std::string> names;
};

Interner& interner() {
    static Interner in;
    return in;
}

std::vector<std::pair<std::string, int>> named(const Monomial& m) {
    std::vector<std::pair<std::string, int>> v;
    for (auto [id, e] : m.e) v.emplace_back(var_name(id), e);
    std::sort(v.begin(), v.end());
    return v;
}

template <class Env, class T>
T eval_monomial(const Monomial& m, const std::vector<T>& vals) {
    T r(1.0);
    for (std::size_t i = 0; i < m.e.size(); ++i) {
        const T x = vals[i];
        int e = m.e[i].second;
        T f = std::pow(x, std::abs(e));
        r *= (e < 0) ? T(1.0) / f : f;
    }
    return r;
}

}  // namespace

int var_id(const std::string& name) {
    auto& in = interner();
    std::lock_guard<std::mutex> lock(in.mu);
    auto it = in.ids.find(name);
    if (it != in.ids.end()) return it->second;
    int id = static_cast<int>(in.names.size());
    in.names.push_back(name);
    in.ids.emplace(name, id);
    return id;
}

const std::string& var_name(int id) {
    auto& in = interner();
    std::lock_guard<std::mutex> lock(in.mu);
    return in.names.at(id);
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < e.size() || j < o.e.size()) {
        if (j == o.e.size() || (i < e.size() && e[i].first < o.e[j].first)) {
            r.e.push_back(e[i++]);
        } else if (i == e.size() || o.e[j].first < e[i].first) {
            r.e.push_back(o.e[j++]);
        } else {
            int s = e[i].second + o.e[j].second;
            if (s != 0) r.e.emplace_back(e[i].first, s);
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::inverse() const {
    Monomial r = *this;
    for (auto& p : r.e) p.second = -p.second;
    return r;
}

int Monomial::exponent(int var) const {
    for (auto [id, x] : e)
        if (id == var) return x;
    return 0;
}

Monomial Monomial::without(int var) const {
    Monomial r;
    for (auto p : e)
        if (p.first != var) r.e.push_back(p);
    return r;
}

std::string Monomial::str() const {
    std::string s;
    for (auto& [name, x] : named(*this)) {
        if (!s.empty()) s += "*";
        s += name;
        if (x != 1) s += "^" + std::to_string(x);
    }
    return s;
}

Poly::Poly(long c) {
    if (c != 0) t_.emplace(Monomial{}, Rational(c));
}

Poly::Poly(const Rational& c) {
    if (c != 0) t_.emplace(Monomial{}, c);
}

Poly Poly::var(const std::string& name, int exponent) {
    Poly p;
    Monomial m;
    if (exponent != 0) m.e.emplace_back(var_id(name), exponent);
    p.t_.emplace(m, Rational(1));
    return p;
}

Poly Poly::monomial(const Rational& c, const Monomial& m) {
    Poly p;
    if (c != 0) p.t_.emplace(m, c);
    return p;
}

bool Poly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.e.empty()); }

std::optional<Rational> Poly::constant_value() const {
    if (t_.empty()) return Rational(0);
    if (is_constant()) return t_.begin()->second;
    return std::nullopt;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& kv : r.t_) kv.second = -kv.second;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : t_)
        for (const auto& [m2, c2] : o.t_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return {};
    Poly r = *this;
    for (auto& kv : r.t_) kv.second *= c;
    return r;
}

Poly Poly::pow(int k) const {
    if (k < 0) {
        if (!is_monomial()) fail(ErrorKind::InvalidInput, "negative power of a non-monomial");
        const auto& [m, c] = *t_.begin();
        Poly inv = Poly::monomial(Rational(1) / c, m.inverse());
        return inv.pow(-k);
    }
    Poly r(1L), b = *this;
    while (k > 0) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

int Poly::max_exponent(int var) const {
    int mx = 0;
    bool first = true;
    for (const auto& kv : t_) {
        int e = kv.first.exponent(var);
        mx = first ? e : std::max(mx, e);
        first = false;
    }
    return mx;
}

int Poly::min_exponent(int var) const {
    int mn = 0;
    bool first = true;
    for (const auto& kv : t_) {
        int e = kv.first.exponent(var);
        mn = first ? e : std::min(mn, e);
        first = false;
    }
    return mn;
}

Poly Poly::subs(const std::string& var, const Poly& value) const {
    const int id = var_id(var);
    Poly r;
    std::map<int, Poly> powers;
    for (const auto& [m, c] : t_) {
        int e = m.exponent(id);
        auto it = powers.find(e);
        if (it == powers.end()) it = powers.emplace(e, value.pow(e)).first;
        r += Poly::monomial(c, m.without(id)) * it->second;
    }
    return r;
}

std::map<int, Poly> Poly::split_by(const std::string& var) const {
    const int id = var_id(var);
    std::map<int, Poly> out;
    for (const auto& [m, c] : t_) out[m.exponent(id)].add_term(m.without(id), c);
    return out;
}

double Poly::eval(const NumericEnv& env) const {
    double s = 0;
    for (const auto& [m, c] : t_) {
        std::vector<double> vals;
        for (auto [id, e] : m.e) {
            auto it = env.find(var_name(id));
            if (it == env.end()) fail(ErrorKind::InvalidInput, "no value bound for symbol '" + var_name(id) + "'");
            vals.push_back(it->second);
        }
        s += to_double(c) * eval_monomial<NumericEnv, double>(m, vals);
    }
    return s;
}

std::complex<double> Poly::eval(const ComplexEnv& env) const {
    std::complex<double> s = 0;
    for (const auto& [m, c] : t_) {
        std::vector<std::complex<double>> vals;
        for (auto [id, e] : m.e) {
            auto it = env.find(var_name(id));
            if (it == env.end()) fail(ErrorKind::InvalidInput, "no value bound for symbol '" + var_name(id) + "'");
            vals.push_back(it->second);
        }
        s += to_double(c) * eval_monomial<ComplexEnv, std::complex<double>>(m, vals);
    }
    return s;
}

std::string Poly::str() const {
    if (t_.empty()) return "0";
    std::vector<std::pair<std::string, Rational>> terms;
    for (const auto& [m, c] : t_) terms.emplace_back(m.str(), c);
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (const auto& [ms, c] : terms) {
        const bool neg = c < 0;
        const Rational a = neg ? Rational(-c) : c;
        std::string body;
        if (ms.empty()) body = to_string(a);
        else if (a == 1) body = ms;
        else body = to_string(a) + "*" + ms;
        if (out.empty()) out = neg ? "-" + body : body;
        else out += neg ? " - " + body : " + " + body;
    }
    return out;
}

Poly reduce(const Poly& p, const Relations& rel) {
    Poly cur = p;
    for (;;) {
        bool changed = false;
        Poly next;
        for (const auto& [m, c] : cur.terms()) {
            bool done = false;
            for (const auto& r : rel) {
                const int id = var_id(r.var);
                const int e = m.exponent(id);
                if (e >= 2) {
                    Monomial rest = m.without(id);
                    if (e % 2) rest = rest * Monomial{{{id, 1}}};
                    next += Poly::monomial(c, rest) * r.square.pow(e / 2);
                    done = changed = true;
                    break;
                }
            }
            if (!done) next += Poly::monomial(c, m);
        }
        cur = std::move(next);
        if (!changed) return cur;
    }
}

bool is_zero_mod(const Poly& p, const Relations& rel) {
    if (p.is_zero()) return true;
    Poly q = p;
    for (const auto& r : rel) {
        const int mn = q.min_exponent(var_id(r.var));
        if (mn < 0) q = q * Poly::var(r.var, 2 * ((-mn + 1) / 2));
    }
    return reduce(q, rel).is_zero();
}

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
    if (den_.is_zero()) fail(ErrorKind::InvalidInput, "rational function with zero denominator");
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = Poly(1L);
        return;
    }
    if (den_.is_monomial()) {
        num_ = num_ * den_.pow(-1);
        den_ = Poly(1L);
    }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.num_.is_zero()) fail(ErrorKind::InvalidInput, "division by zero rational function");
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

bool RatFunc::equals(const RatFunc& o, const Relations& rel) const {
    return is_zero_mod(num_ * o.den_ - o.num_ * den_, rel);
}

std::string RatFunc::str() const {
    if (den_ == Poly(1L)) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace warpite::sym
