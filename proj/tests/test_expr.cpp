#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "semicl/expr.hpp"

using namespace semicl;

namespace {

double ev(const std::string& s, double x = 0, double x2 = 0) { return eval_expr(parse_expr(s), {x, x2}); }

// Random expression generator for the round-trip property.
std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 2);
    std::uniform_real_distribution<double> num(0.1, 3.0);
    switch (pick(rng)) {
        case 0: return "x1";
        case 1: return "x2";
        case 2: return std::to_string(num(rng));
        case 3: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
        case 4: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
        case 6: return "-" + random_expr(rng, depth - 1);
        case 7: return "sin(" + random_expr(rng, depth - 1) + ")";
        case 8: return "exp(cos(" + random_expr(rng, depth - 1) + "))";
        default: return "(" + random_expr(rng, depth - 1) + ")^2";
    }
}

}  // namespace

TEST_SUITE("potential_parser") {
    TEST_CASE("basic evaluation") {
        CHECK(ev("x^2 - 1", 2) == 3);
        CHECK(ev("sin(x)", 0) == 0);
        CHECK(ev("-(x1) * (1 + 0.5*sin(x2))", 2, 0) == -2);
        CHECK(ev("abs(x) + sqrt(4)", -3) == 5);
        CHECK(ev("exp(0) + cos(0)") == 2);
        CHECK(ev("x", 1.5) == ev("x1", 1.5));
    }

    TEST_CASE("precedence and associativity") {
        CHECK(ev("2+3*4") == 14);
        CHECK(ev("2^3^2") == 512);
        CHECK(ev("-2^2") == -4);
        CHECK(ev("8/4/2") == 1);
        CHECK(ev("10-4-3") == 3);
        CHECK(ev(" 2 *\t( 3+ 4 ) ") == 14);
        CHECK(ev("1.5e1 + .5") == 15.5);
    }

    TEST_CASE("syntax errors carry offset and expectation") {
        try {
            parse_expr("x +");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.offset() == 3);
            CHECK_FALSE(e.expected().empty());
        }
        CHECK_THROWS_AS(parse_expr(""), ParseError);
        CHECK_THROWS_AS(parse_expr("(x"), ParseError);
        CHECK_THROWS_AS(parse_expr("2x"), ParseError);  // no implicit multiplication
        CHECK_THROWS_AS(parse_expr("x ) "), ParseError);
    }

    TEST_CASE("unknown identifiers") {
        try {
            parse_expr("1 + y");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.offset() == 4);
            CHECK(std::string(e.what()).find("y") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_expr("tan(x)"), ParseError);
    }

    TEST_CASE("domain errors name the subexpression") {
        try {
            ev("1 + sqrt(x)", -1);
            FAIL("expected a domain error");
        } catch (const EvalDomainError& e) {
            CHECK(e.subexpression().find("sqrt") != std::string::npos);
        }
        CHECK_THROWS_AS(ev("1/(x - 1)", 1), EvalDomainError);
    }

    TEST_CASE("variable usage") {
        CHECK(parse_expr("3").max_variable() == 0);
        CHECK(parse_expr("x*2").max_variable() == 1);
        CHECK(parse_expr("x1 + x2").max_variable() == 2);
    }

    TEST_CASE("round trip through to_string") {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> coord(-2, 2);
        for (int k = 0; k < 50; ++k) {
            const std::string src = random_expr(rng, 4);
            CAPTURE(src);
            const Expr a = parse_expr(src);
            const Expr b = parse_expr(a.to_string());
            CHECK(b.to_string() == a.to_string());
            for (int i = 0; i < 100; ++i) {
                const Point p{coord(rng), coord(rng)};
                CHECK(eval_expr(a, p) == eval_expr(b, p));
            }
        }
    }

    TEST_CASE("finite-difference gradient") {
        const Expr e = parse_expr("x1^2 * x2 + sin(x2)");
        const Point g = gradient_fd(e, {1.5, 0.5});
        CHECK(g[0] == doctest::Approx(1.5).epsilon(1e-7));
        CHECK(g[1] == doctest::Approx(2.25 + std::cos(0.5)).epsilon(1e-7));
    }
}
