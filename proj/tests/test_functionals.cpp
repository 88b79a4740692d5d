#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "ergocert/errors.hpp"
#include "ergocert/functionals.hpp"

using namespace ergocert;

namespace {

Functional counting(std::size_t m, std::size_t n, std::size_t state) {
    return Functional::occupation(m, n, {state});
}

Functional random_tabulated(std::mt19937_64& gen, std::size_t m, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t count = 1;
    for (std::size_t k = 0; k < n; ++k) count *= m;
    std::vector<double> values(count);
    for (double& v : values) v = u(gen);
    return Functional::tabulated(m, n, std::move(values));
}

} // namespace

TEST_CASE("evaluation per kind") {
    const Functional add = counting(2, 3, 1);
    CHECK(add.evaluate(std::vector<std::size_t>{0, 1, 1}) == 2.0);
    CHECK(add.kind() == FunctionalKind::Occupation);

    const Functional occ = counting(2, 3, 0);
    CHECK(occ.evaluate(std::vector<std::size_t>{0, 1, 0}) == 2.0);

    const Functional tab = Functional::tabulated(2, 1, {3.0, 7.0});
    CHECK(tab.evaluate(std::vector<std::size_t>{1}) == 7.0);
    CHECK(tab.evaluate(std::vector<std::size_t>{0}) == 3.0);

    try {
        add.evaluate(std::vector<std::size_t>{0, 1});
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LengthMismatch);
    }
    try {
        add.evaluate(std::vector<std::size_t>{0, 1, 5});
        FAIL("expected IndexOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IndexOutOfRange);
    }
}

TEST_CASE("tabulated index order puts x_0 most significant") {
    // values[x0 * m + x1] on m = 2, n = 2
    const Functional tab = Functional::tabulated(2, 2, {0.0, 1.0, 2.0, 3.0});
    CHECK(tab.evaluate(std::vector<std::size_t>{0, 1}) == 1.0);
    CHECK(tab.evaluate(std::vector<std::size_t>{1, 0}) == 2.0);
}

TEST_CASE("bd_check accepts valid c and pinpoints violations") {
    const Functional f = counting(2, 3, 1);
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK_FALSE(bd_check(f, ones).has_value());

    const std::vector<double> half{0.5, 0.5, 0.5};
    const auto v = bd_check(f, half);
    REQUIRE(v.has_value());
    CHECK(v->excess == doctest::Approx(0.5));
    // first violation in scan order: all-zero tuple, coordinate 0, flip to 1
    CHECK(v->coordinate == 0);
    CHECK(v->tuple == std::vector<std::size_t>{0, 0, 0});
    CHECK(v->replacement == 1);

    const Functional constant = Functional::tabulated(2, 2, {4.0, 4.0, 4.0, 4.0});
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_FALSE(bd_check(constant, zeros).has_value());
}

TEST_CASE("bd_check refuses unenumerable sizes") {
    const Functional f = counting(10, 7, 1); // 10^7 tuples
    try {
        bd_check(f, std::vector<double>(7, 1.0));
        FAIL("expected TooLargeToEnumerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLargeToEnumerate);
    }
}

TEST_CASE("minimal_c on closed forms") {
    CHECK(minimal_c(counting(2, 4, 1)) == std::vector<double>{1.0, 1.0, 1.0, 1.0});

    // f = 3 x_0 on {0,1}^2
    const Functional f = Functional::tabulated(2, 2, {0.0, 0.0, 3.0, 3.0});
    CHECK(minimal_c(f) == std::vector<double>{3.0, 0.0});

    // sup over {g, -g} with g = 1{state = 1}: equals the counting functional
    const Functional sup =
        Functional::sup_of_class(2, 3, {{0.0, 1.0}, {0.0, -1.0}});
    CHECK(minimal_c(sup) == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("minimal_c is tight") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t m = 2 + gen() % 2;
        const std::size_t n = 2 + gen() % 2;
        const Functional f = random_tabulated(gen, m, n);
        const std::vector<double> c = minimal_c(f);
        CHECK_FALSE(bd_check(f, c).has_value());
        for (std::size_t i = 0; i < n; ++i) {
            if (c[i] <= 1e-3) continue;
            std::vector<double> shaved = c;
            shaved[i] -= 1e-3;
            const auto v = bd_check(f, shaved);
            REQUIRE(v.has_value());
            CHECK(v->coordinate == i);
        }
    }
}

TEST_CASE("scaling multiplies the sensitivity vector") {
    std::mt19937_64 gen(21);
    const Functional f = random_tabulated(gen, 2, 3);
    const Functional g = f.scaled(2.5);
    const std::vector<double> cf = minimal_c(f);
    const std::vector<double> cg = minimal_c(g);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cg[i] == doctest::Approx(2.5 * cf[i]).epsilon(1e-12));
        CHECK(g.c()[i] == doctest::Approx(2.5 * f.c()[i]).epsilon(1e-15));
    }
    CHECK(g.evaluate(std::vector<std::size_t>{1, 0, 1}) ==
          doctest::Approx(2.5 * f.evaluate(std::vector<std::size_t>{1, 0, 1})).epsilon(1e-15));
}

TEST_CASE("sup of a class with common c stays bounded-difference") {
    const std::vector<std::vector<double>> members{{0.0, 1.0, 0.5}, {1.0, 0.0, 0.5}, {0.5, 0.5, 0.0}};
    const Functional sup = Functional::sup_of_class(3, 4, members);
    CHECK(sup.c() == std::vector<double>{1.0, 1.0, 1.0, 1.0});
    CHECK_FALSE(bd_check(sup, sup.c()).has_value());
}

TEST_CASE("constructors derive c and validate explicit overrides") {
    const Functional occ = Functional::occupation(3, 2, {0, 2}, {2.0, -1.5});
    CHECK(occ.c() == std::vector<double>{2.0, 1.5});

    // looser explicit c is fine
    const Functional loose = Functional::occupation(2, 2, {1}, {}, std::vector<double>{2.0, 2.0});
    CHECK(loose.c() == std::vector<double>{2.0, 2.0});
    CHECK_FALSE(bd_check(loose, loose.c()).has_value());

    // tighter-than-valid explicit c is rejected
    try {
        Functional::occupation(2, 2, {1}, {}, std::vector<double>{0.5, 1.0});
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
    try {
        Functional::tabulated(2, 2, {0.0, 1.0, 2.0, 3.0}, std::vector<double>{1.0, 0.5});
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }

    // tabulated without c falls back to the minimal vector
    const Functional tab = Functional::tabulated(2, 2, {0.0, 1.0, 2.0, 3.0});
    CHECK(tab.c() == std::vector<double>{2.0, 1.0});
}
