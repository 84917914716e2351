#include "oracles.hpp"

#include "warpite/errors.hpp"
#include "warpite/ite.hpp"
#include "warpite/symbolic.hpp"

#include <doctest.h>

#include <cmath>
#include <utility>

using namespace warpite;

namespace {

WarpedManifold cylinder(Rational n) {
    return WarpedManifold(2, RadialDomain::shell({0, false}, {1, true}), RationalPolynomial({1}),
                          RationalPolynomial({n}));
}

WarpedManifold disk(std::vector<Rational> n) {
    return WarpedManifold(2, RadialDomain::cap({1, false}), RationalPolynomial({0, 1}), RationalPolynomial(n));
}

ManifoldPair cylinder_pair() { return validate_pair(cylinder(1), cylinder(4), {0, 0}); }

bool same_records(const std::vector<ITERecord>& a, const std::vector<ITERecord>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].lambda != b[i].lambda || a[i].kind != b[i].kind || a[i].modes != b[i].modes ||
            a[i].multiplicity != b[i].multiplicity)
            return false;
    return true;
}

}  // namespace

TEST_CASE("cylinder pair ITEs match the closed-form branches") {
    const double a = 0.1, b = 19.9;
    const auto ites = find_ites(cylinder_pair(), a, b, 60);
    std::vector<std::pair<int, double>> found_reg, expected_reg, found_sing, expected_sing;
    for (const auto& r : ites)
        for (int l : r.modes) (r.kind == ITEKind::Regular ? found_reg : found_sing).emplace_back(l, r.lambda);
    for (int l = 0; l * l < 4 * b; ++l)
        for (const auto& x : oracle::cylinder_pair_roots(l, a, b))
            (x.singular ? expected_sing : expected_reg).emplace_back(l, x.lambda);
    for (auto* v : {&found_reg, &expected_reg, &found_sing, &expected_sing}) std::sort(v->begin(), v->end());
    for (auto [found, expected] : {std::pair{&found_reg, &expected_reg}, std::pair{&found_sing, &expected_sing}}) {
        REQUIRE(found->size() == expected->size());
        for (size_t i = 0; i < found->size(); ++i) {
            CHECK((*found)[i].first == (*expected)[i].first);
            CHECK((*found)[i].second == doctest::Approx((*expected)[i].second).epsilon(1e-8));
        }
    }
    CHECK(expected_sing.size() == 2);
}

TEST_CASE("singular ITEs are the parallel-data coincidences") {
    const auto sing = find_singular_ites(cylinder_pair(), 0.1, 19.9, 60);
    const auto expected = oracle::cylinder_pair_coincidences(19, true);
    REQUIRE(sing.size() == expected.size());
    size_t i = 0;
    for (const auto& [lam, mult] : expected) {
        CHECK(sing[i].lambda == doctest::Approx(static_cast<double>(lam)).epsilon(1e-9));
        CHECK(sing[i].multiplicity == mult);
        CHECK(sing[i].kind == ITEKind::Singular);
        ++i;
    }
}

TEST_CASE("ITE search is independent of the thread count") {
    const auto pair = cylinder_pair();
    SearchOptions one, many;
    many.threads = 4;
    CHECK(same_records(find_ites(pair, 0.1, 20, 60, one), find_ites(pair, 0.1, 20, 60, many)));
}

TEST_CASE("records are sorted and have vanishing mu") {
    const auto pair = validate_pair(disk({1}), disk({2}), {0});
    const auto ites = find_ites(pair, 0.1, 100, 80);
    REQUIRE(!ites.empty());
    for (size_t i = 0; i < ites.size(); ++i) {
        if (i) CHECK(ites[i - 1].lambda <= ites[i].lambda);
        const auto& r = ites[i];
        CHECK(r.multiplicity == 2 * static_cast<long long>(r.modes.size()) - (r.modes.front() == 0 ? 1 : 0));
        if (r.kind == ITEKind::Regular && !r.at_pole) {
            const auto mu = mu_mode(pair, r.lambda, r.modes.front());
            double best = 1e300;
            for (double v : mu.values) best = std::min(best, std::abs(v));
            CHECK(best < 1e-6 * std::max(1.0, r.lambda));
        }
    }
}

TEST_CASE("counting function counts multiplicities in (alpha, lambda]") {
    const auto pair = cylinder_pair();
    const auto ites = find_ites(pair, 0.2, 20, 60);
    long long n = 0;
    for (const auto& r : ites)
        if (r.lambda <= 10) n += r.multiplicity;
    CHECK(counting_function(ites, 10) == n);
    CHECK(counting_function(pair, 0.2, 10, 60) == n);
    CHECK_THROWS_AS(counting_function(pair, 0.5, 10, 60), Error);
    CHECK(lowest_dirichlet(pair) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("certified mode is past every sign change") {
    const auto pair = validate_pair(disk({1}), disk({2}), {0});
    const int lc = certified_mode(pair, 0.1, 50, 80);
    CHECK(lc >= 1);
    CHECK(tail_certifies(pair, 50, lc));
}
