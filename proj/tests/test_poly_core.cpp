#include "doctest.h"

#include "eucalc/groebner.hpp"
#include "eucalc/ideal.hpp"

#include <random>

using namespace eucalc;

namespace {

VariableContext ctx(std::initializer_list<const char*> names) {
    std::vector<std::string> v(names.begin(), names.end());
    return VariableContext(v);
}

Polynomial P(const VariableContext& c, const char* s) { return Polynomial::parse(c, s); }

Ideal I(const VariableContext& c, std::initializer_list<const char*> gens) {
    std::vector<std::string> v(gens.begin(), gens.end());
    return Ideal::parse(c, v);
}

Polynomial random_poly(const VariableContext& c, std::mt19937& rng, int terms, int max_deg) {
    std::uniform_int_distribution<int> coef(-4, 4), deg(0, max_deg);
    std::vector<Term> out;
    for (int i = 0; i < terms; ++i) {
        Term t{Monomial{}, BigRational(coef(rng))};
        for (std::size_t v = 0; v < c.arity(); ++v) t.monomial.exp[v] = static_cast<std::uint16_t>(deg(rng));
        out.push_back(t);
    }
    return Polynomial(c, out);
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
    CHECK(parse_rational("6/4") == BigRational(3, 2));
    CHECK(to_string(parse_rational("-0/5")) == "0");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("1.5"));
    CHECK_THROWS(parse_rational("3/-4"));
}

TEST_CASE("polynomial parsing and printing round trip") {
    auto c = ctx({"x", "y", "z"});
    auto p = P(c, "(x + 2*y)^2 - 3/4*x*z + 1");
    CHECK(P(c, p.to_string().c_str()) == p);
    CHECK(p == P(c, "x^2 + 4*x*y + 4*y^2 - 3/4*x*z + 1"));
    CHECK(P(c, "-x^0") == Polynomial(c, BigRational(-1)));
}

TEST_CASE("parser rejects implicit multiplication and unknown names") {
    auto c = ctx({"x", "y"});
    try {
        (void)P(c, "x y");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'y'") != std::string::npos);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(P(c, "q + 1"), ParseError);
    CHECK_THROWS_AS(P(c, "2x"), ParseError);
    CHECK_THROWS_AS(P(c, "x^-1"), ParseError);
}

TEST_CASE("arithmetic identities") {
    auto c = ctx({"x", "y"});
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto a = random_poly(c, rng, 4, 3), b = random_poly(c, rng, 4, 3), d = random_poly(c, rng, 3, 2);
        CHECK((a + b) * d == a * d + b * d);
        CHECK(a * b == b * a);
        if (!b.is_zero()) {
            auto q = divide_exact(a * b, b);
            REQUIRE(q.has_value());
            CHECK(*q == a);
        }
        // Product rule for the derivative.
        CHECK((a * b).derivative(0) == a.derivative(0) * b + a * b.derivative(0));
    }
    CHECK_FALSE(divide_exact(P(c, "x^2 + 1"), P(c, "x + 1")).has_value());
}

TEST_CASE("groebner basis examples") {
    auto c = ctx({"x", "y"});
    auto gb = groebner_basis(I(c, {"x + y", "x - y"}), MonomialOrder::grevlex());
    REQUIRE(gb.size() == 2);
    CHECK(gb[0] == P(c, "x"));
    CHECK(gb[1] == P(c, "y"));

    auto cusp = groebner_basis(I(c, {"y^2 - x^3"}), MonomialOrder::grevlex());
    REQUIRE(cusp.size() == 1);
    CHECK(cusp[0] == P(c, "x^3 - y^2"));

    CHECK(groebner_basis(Ideal(c), MonomialOrder::grevlex()).empty());
    CHECK(Ideal(c, {P(c, "x"), P(c, "x - 1")}).is_unit());
}

TEST_CASE("twisted cubic: lex basis contains the elimination relation") {
    auto c = ctx({"x", "y", "z"});
    auto ideal = I(c, {"y - x^2", "z - x^3"});
    auto gb = groebner_basis(ideal, MonomialOrder::lex());
    // Oracle: y^3 - z^2 vanishes on the parametrisation (t, t^2, t^3).
    auto rel = P(c, "y^3 - z^2");
    std::vector<Polynomial> param{P(c, "x"), P(c, "x^2"), P(c, "x^3")};
    CHECK(rel.compose(param).is_zero());
    bool found = false;
    for (const auto& g : gb) {
        if ((g.support() & 1u) == 0) found = found || g == rel || g == -rel;
    }
    CHECK(found);
}

TEST_CASE("normal form and membership") {
    auto c = ctx({"x", "y"});
    CHECK(normal_form(P(c, "x^2"), I(c, {"x"})).is_zero());
    CHECK(normal_form(P(c, "y"), I(c, {"x"})) == P(c, "y"));
}

TEST_CASE("quotients and saturation") {
    auto c = ctx({"x", "y"});
    CHECK(saturate(I(c, {"x*y"}), I(c, {"x"})) == I(c, {"y"}));
    CHECK(saturate(I(c, {"x"}), I(c, {"y"})) == I(c, {"x"}));
    CHECK(ideal_quotient(I(c, {"x*y"}), I(c, {"x"})) == I(c, {"y"}));
    CHECK(ideal_quotient(I(c, {"x^2"}), I(c, {"x"})) == I(c, {"x"}));
    // Oracle: quotient of principal ideals divides by the gcd.
    auto num = P(c, "x*y*(x + y)"), den = P(c, "x*y");
    CHECK(ideal_quotient(Ideal(c, {num}), Ideal(c, {den})) == Ideal(c, {*divide_exact(num, den)}));
    CHECK(intersect(I(c, {"x"}), I(c, {"y"})) == I(c, {"x*y"}));
}

TEST_CASE("elimination") {
    auto c = ctx({"x", "y", "z"});
    std::vector<std::size_t> y{1}, x{0};
    CHECK(eliminate(I(c, {"y - x^2"}), y).is_zero());
    CHECK(eliminate(I(c, {"y - x^2", "z - x^3"}), x) == I(c, {"y^3 - z^2"}));
    auto cw = VariableContext::cotangent({"x", "y", "z"});
    std::vector<std::size_t> ws{3, 4, 5};
    CHECK(eliminate(I(cw, {"x", "y", "z", "w0 - 1", "w1", "w2"}), ws) == I(cw, {"x", "y", "z"}));
}

TEST_CASE("dimension and colength") {
    auto c = ctx({"x", "y"});
    CHECK(krull_dimension(I(c, {"x", "y"})) == 0);
    CHECK(krull_dimension(I(c, {"x*y"})) == 1);
    CHECK(krull_dimension(Ideal(c)) == 2);
    CHECK_THROWS_AS(krull_dimension(Ideal::unit(c)), Error);
    CHECK(colength(I(c, {"x", "y"})) == 1);
    CHECK(colength(I(c, {"x^3", "y"})) == 3);
    // Oracle: Jacobian ideal of y^2 - x^3 computed by differentiation.
    auto cusp = P(c, "y^2 - x^3");
    CHECK(colength(Ideal(c, {cusp.derivative(0), cusp.derivative(1)})) == 2);
    CHECK_THROWS_AS(colength(I(c, {"x*y"})), Error);
}

TEST_CASE("local colength") {
    auto c1 = ctx({"x"});
    RationalPoint o1{BigRational(0)};
    CHECK(local_colength(I(c1, {"x*(x - 1)"}), o1) == 1);
    auto c = ctx({"x", "y"});
    RationalPoint o{BigRational(0), BigRational(0)};
    CHECK(local_colength(I(c, {"y^2 - x^3", "y"}), o) == 3);
    CHECK(local_colength(I(c, {"x", "y"}), o) == 1);
    RationalPoint off{BigRational(1), BigRational(1)};
    CHECK_THROWS_AS(local_colength(I(c, {"x", "y"}), off), Error);
    CHECK_THROWS_AS(local_colength(I(c, {"x*y"}), o), Error);
}

TEST_CASE("property: generators reduce to zero against every basis") {
    auto c = ctx({"x", "y", "z"});
    std::mt19937 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        Ideal ideal(c, {random_poly(c, rng, 3, 2), random_poly(c, rng, 3, 2)});
        for (auto ord : {MonomialOrder::grevlex(), MonomialOrder::lex(), MonomialOrder::eliminating(1u)}) {
            const auto& gb = groebner_basis(ideal, ord);
            for (const auto& g : ideal.generators()) CHECK(reduce(g, gb, ord).is_zero());
            // Reduced: no leading monomial divides a monomial of another element.
            for (std::size_t i = 0; i < gb.size(); ++i) {
                CHECK(gb[i].leading_term(ord).coeff == 1);
                for (std::size_t j = 0; j < gb.size(); ++j) {
                    if (i == j) continue;
                    for (const auto& t : gb[j].terms()) {
                        CHECK_FALSE(gb[i].leading_term(ord).monomial.divides(t.monomial, c.arity()));
                    }
                }
            }
        }
        auto p = random_poly(c, rng, 5, 3);
        auto nf = normal_form(p, ideal);
        CHECK(normal_form(nf, ideal) == nf);
        CHECK(ideal.contains(p - nf));
    }
}

TEST_CASE("property: saturation grows and is idempotent") {
    auto c = ctx({"x", "y"});
    std::vector<std::pair<Ideal, Ideal>> cases{
        {I(c, {"x^2*y", "x*y^2"}), I(c, {"x"})},
        {I(c, {"x*(x - 1)*y"}), I(c, {"x", "y"})},
        {I(c, {"x^3 - y^2", "x*y"}), I(c, {"y"})},
    };
    for (const auto& [a, b] : cases) {
        Ideal s = saturate(a, b);
        CHECK(s.contains(a));
        CHECK(saturate(s, b) == s);
    }
}

TEST_CASE("property: elimination is independent of the generating set") {
    auto c = ctx({"x", "y", "z"});
    auto a = I(c, {"y - x^2", "z - x^3"});
    auto b = I(c, {"y - x^2", "z - x*y", "z + y - x^3 - x^2"});
    REQUIRE(a == b);
    std::vector<std::size_t> x{0};
    CHECK(eliminate(a, x) == eliminate(b, x));
}

TEST_CASE("property: colength is independent of the order") {
    auto c = ctx({"x", "y"});
    for (auto ideal : {I(c, {"x^2 - y", "y^3 - x*y"}), I(c, {"x^3", "y^2 - x*y"}), I(c, {"x^2 + y^2 - 1", "x - y"})}) {
        std::size_t gre = colength(ideal);
        // Count standard monomials of the lex basis by hand.
        const auto& lex = ideal.basis(MonomialOrder::lex());
        std::size_t count = 0;
        for (unsigned a = 0; a < 20; ++a) {
            for (unsigned b = 0; b < 20; ++b) {
                Monomial m;
                m.exp[0] = static_cast<std::uint16_t>(a);
                m.exp[1] = static_cast<std::uint16_t>(b);
                bool standard = true;
                for (const auto& g : lex) standard = standard && !g.leading_term(MonomialOrder::lex()).monomial.divides(m, 2);
                count += standard;
            }
        }
        CHECK(gre == count);
    }
}

TEST_CASE("property: local colengths add up to the colength") {
    auto c = ctx({"x", "y"});
    auto ideal = I(c, {"x*(x - 1)", "y"});
    RationalPoint p0{BigRational(0), BigRational(0)}, p1{BigRational(1), BigRational(0)};
    CHECK(local_colength(ideal, p0) + local_colength(ideal, p1) == colength(ideal));
    auto fat = I(c, {"x^2*(x - 1)", "y^2 - x*y"});
    RationalPoint p2{BigRational(1), BigRational(1)};
    CHECK(local_colength(fat, p0) == 4);
    CHECK(local_colength(fat, p0) + local_colength(fat, p1) + local_colength(fat, p2) == colength(fat));
}

TEST_CASE("radical membership") {
    auto c = ctx({"x", "y"});
    CHECK(radical_contains(I(c, {"x^3"}), P(c, "x")));
    CHECK_FALSE(radical_contains(I(c, {"x^3"}), P(c, "y")));
    CHECK(same_radical(I(c, {"x^2", "y"}), I(c, {"x", "y^5"})));
}
