#include "doctest.h"

#include "eucalc/conormal.hpp"

#include <random>

using namespace eucalc;

namespace {

Ideal I(const VariableContext& c, std::initializer_list<const char*> gens) {
    std::vector<std::string> v(gens.begin(), gens.end());
    return Ideal::parse(c, v);
}

VarietyPresentation variety(const VariableContext& base, std::initializer_list<const char*> gens) {
    std::vector<Polynomial> g;
    for (const char* s : gens) g.push_back(Polynomial::parse(base, s));
    return VarietyPresentation(base, g);
}

ComponentCycle single(const Ideal& prime) {
    ComponentCycle c(prime.context());
    c.add(CycleComponent{prime, 1, krull_dimension(prime), true});
    return c;
}

// Reduced basis elements are homogeneous in the covector block.
bool conical(const Ideal& ideal) {
    const auto& ctx = ideal.context();
    for (const auto& g : ideal.basis()) {
        std::optional<unsigned> deg;
        for (const auto& t : g.terms()) {
            unsigned d = 0;
            for (std::size_t i = 0; i < ctx.base_arity(); ++i) d += t.monomial.exp[ctx.cotangent_index(i)];
            if (deg && *deg != d) return false;
            deg = d;
        }
    }
    return true;
}

void check_invariants(const ComponentCycle& cyc) {
    const int top = static_cast<int>(cyc.context().base_arity());
    for (const auto& c : cyc.components()) {
        CHECK(krull_dimension(c.prime) == top);
        CHECK(conical(c.prime));
        CHECK(c.multiplicity == 1);
    }
}

}  // namespace

TEST_CASE("conormal of a pair of planes") {
    VariableContext base({"x", "y", "z"});
    auto cot = VariableContext::cotangent(base.names());
    auto cyc = conormal_cycle(variety(base, {"x*y"}));
    CHECK(cyc == single(I(cot, {"x", "w1", "w2"})) + single(I(cot, {"y", "w0", "w2"})));
    check_invariants(cyc);
}

TEST_CASE("conormal of the cusp cylinder") {
    VariableContext base({"t", "x", "y"});
    auto cot = VariableContext::cotangent(base.names());
    auto cyc = conormal_cycle(variety(base, {"y^2 - x^3"}));
    REQUIRE(cyc.components().size() == 1);
    CHECK(same_radical(cyc.components()[0].prime, I(cot, {"y^2 - x^3", "w0", "2*w1*y + 3*w2*x^2", "4*w1^2 - 9*w2^2*x"})));
    CHECK(cyc.verified());
    check_invariants(cyc);
}

TEST_CASE("conormal of a hyperplane and of affine space") {
    VariableContext xy({"x", "y"});
    auto cot = VariableContext::cotangent(xy.names());
    CHECK(conormal_cycle(variety(xy, {"x"})) == single(I(cot, {"x", "w1"})));
    auto whole = conormal_cycle(variety(xy, {}));
    CHECK(whole == single(I(cot, {"w0", "w1"})));
    check_invariants(whole);
    // A twisted cubic, codimension two.
    VariableContext xyz({"x", "y", "z"});
    auto curve = conormal_cycle(variety(xyz, {"y - x^2", "z - x^3"}));
    check_invariants(curve);
}

TEST_CASE("graph of the differential") {
    VariableContext xyz({"x", "y", "z"});
    auto c3 = VariableContext::cotangent(xyz.names());
    CHECK(im_df_ideal(Polynomial::parse(xyz, "x + y^2 + y*z"), c3) == I(c3, {"w0 - 1", "w1 - 2*y - z", "w2 - y"}));
    VariableContext txy({"t", "x", "y"});
    auto ct = VariableContext::cotangent(txy.names());
    CHECK(im_df_ideal(Polynomial::parse(txy, "2*y - 3*t*x + t^3"), ct) == I(ct, {"w0 + 3*(x - t^2)", "w1 + 3*t", "w2 - 2"}));
    CHECK(im_df_ideal(Polynomial::parse(txy, "t"), ct) == I(ct, {"w0 - 1", "w1", "w2"}));
}

TEST_CASE("conormal-regular critical locus") {
    VariableContext xyz({"x", "y", "z"});
    auto planes = cnr_critical_locus(variety(xyz, {"x*y"}), Polynomial::parse(xyz, "x + y^2 + y*z"));
    CHECK(planes.combined == I(xyz, {"x", "y", "z"}));
    REQUIRE(planes.per_component.size() == 2);
    CHECK((planes.per_component[0].is_unit() != planes.per_component[1].is_unit()));

    VariableContext txy({"t", "x", "y"});
    auto cusp = cnr_critical_locus(variety(txy, {"y^2 - x^3"}), Polynomial::parse(txy, "2*y - 3*t*x + t^3"));
    CHECK(same_radical(cusp.combined, I(txy, {"x - t^2", "y - t^3"})));

    VariableContext xy({"x", "y"});
    auto smooth = cnr_critical_locus(variety(xy, {}), Polynomial::parse(xy, "x^2 + y^2"));
    CHECK(smooth.combined == I(xy, {"x", "y"}));
    // Smooth ambient space: the ordinary critical locus.
    auto f = Polynomial::parse(xy, "x^3 - 3*x*y + y^3");
    CHECK(cnr_critical_locus(variety(xy, {}), f).combined == Ideal(xy, {f.derivative(0), f.derivative(1)}));
}

TEST_CASE("property: a random linear form has no critical point at a non-isolated point") {
    for (std::uint64_t seed : {1u, 2u}) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> d(-5, 5);
        auto linear = [&](const VariableContext& c) {
            Polynomial l(c, BigRational(d(rng)));
            for (std::size_t i = 0; i < c.arity(); ++i) {
                int a = d(rng);
                if (a == 0) a = 1;
                l += Polynomial::variable(c, i) * BigRational(a);
            }
            return l;
        };
        VariableContext xyz({"x", "y", "z"});
        CHECK_FALSE(cnr_critical_locus(variety(xyz, {"x*y"}), linear(xyz)).combined.vanishes_at(RationalPoint(3, BigRational(0))));
        VariableContext txy({"t", "x", "y"});
        CHECK_FALSE(
            cnr_critical_locus(variety(txy, {"y^2 - x^3"}), linear(txy)).combined.vanishes_at(RationalPoint(3, BigRational(0))));
    }
}

TEST_CASE("supplied components are checked against the equations") {
    VariableContext xy({"x", "y"});
    ComponentCycle wrong(xy);
    wrong.add(CycleComponent{I(xy, {"x - 1"}), 1, 1, true});
    CHECK_THROWS_AS(VarietyPresentation(xy, {Polynomial::parse(xy, "x*y")}, wrong), Error);
    CHECK_THROWS_AS(VarietyPresentation(xy, {Polynomial(xy)}), Error);
    CHECK(determinant({{Polynomial::parse(xy, "x"), Polynomial::parse(xy, "y")},
                       {Polynomial::parse(xy, "1"), Polynomial::parse(xy, "x")}}) == Polynomial::parse(xy, "x^2 - y"));
}
