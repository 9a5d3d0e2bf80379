#include "doctest.h"

#include "eucalc/levogel.hpp"

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

ComponentCycle single(const Ideal& prime, long m = 1) {
    ComponentCycle c(prime.context());
    c.add(CycleComponent{prime, m, krull_dimension(prime), true});
    return c;
}

RationalPoint origin(std::size_t n) { return RationalPoint(n, BigRational(0)); }

// Γ̂^{k+1}·V(w_k - df/dz_k) = Γ̂^k + Λ̂^k at every level, and Γ̂^top + Λ̂^top is the conormal.
void check_conservation(const LeVogelTower& tower, const ComponentCycle& conormal, const Polynomial& f) {
    const auto& cot = conormal.context();
    CHECK(tower.gamma.at(tower.top_dim) + tower.lambda_hat.at(tower.top_dim) == conormal);
    const Polynomial fc = f.rename_into(cot);
    const Ideal graph = im_df_ideal(f, cot);
    for (int k = tower.top_dim - 1; k >= 0; --k) {
        const auto i = static_cast<std::size_t>(k);
        const Polynomial hyper = Polynomial::variable(cot, cot.cotangent_index(i)) - fc.derivative(i);
        const auto& above = tower.gamma.at(k + 1);
        const auto cut = above.is_zero() ? above : intersect_hypersurface(above, hyper);
        CHECK(cut == tower.gamma.at(k) + tower.lambda_hat.at(k));
        for (const auto& c : tower.gamma.at(k).components()) CHECK_FALSE(c.prime.contains(graph));
        for (const auto& c : tower.lambda_hat.at(k).components()) CHECK(c.prime.contains(graph));
    }
}

long jacobian_colength(const Polynomial& f, const RationalPoint& p) {
    std::vector<Polynomial> partials;
    for (std::size_t i = 0; i < f.context().arity(); ++i) partials.push_back(f.derivative(i));
    return static_cast<long>(local_colength(Ideal(f.context(), partials), p));
}

}  // namespace

TEST_CASE("tower of the cusp cylinder") {
    VariableContext txy({"t", "x", "y"});
    auto cot = VariableContext::cotangent(txy.names());
    auto X = variety(txy, {"y^2 - x^3"});
    auto f = Polynomial::parse(txy, "2*y - 3*t*x + t^3");
    auto conormal = conormal_cycle(X);
    auto tower = build_tower(conormal, f);
    CHECK(tower.top_dim == 3);
    CHECK(tower.lambda_hat.at(3).is_zero());
    CHECK(tower.lambda_hat.at(2).is_zero());
    CHECK(tower.gamma.at(2) == single(I(cot, {"27*y + w1^3", "9*x - w1^2", "w0", "w2 - 2"})));
    CHECK(tower.gamma.at(1).is_zero());
    CHECK(tower.lambda_hat.at(1) == single(I(cot, {"y - t^3", "x - t^2", "w0", "w1 + 3*t", "w2 - 2"})));
    CHECK(tower.lambda.at(1) == single(I(txy, {"y - t^3", "x - t^2"})));
    CHECK(tower.lambda_hat.at(0).is_zero());
    CHECK(tower.verified());
    check_conservation(tower, conormal, f);

    auto numbers = levogel_numbers(tower, origin(3), 1);
    CHECK(numbers.values.at(1) == 1);
    for (const auto& [k, v] : numbers.values) {
        if (k != 1) CHECK(v == 0);
    }
    CHECK(relative_euler_obstruction_geometric(X, f, origin(3)) == -1);
}

TEST_CASE("tower in the smooth plane") {
    VariableContext xy({"x", "y"});
    auto cot = VariableContext::cotangent(xy.names());
    auto f = Polynomial::parse(xy, "x^2 + y^2");
    auto conormal = conormal_cycle(variety(xy, {}));
    auto tower = build_tower(conormal, f);
    CHECK(tower.lambda_hat.at(0) == single(I(cot, {"x", "y", "w0", "w1"})));
    for (int k = 1; k <= 2; ++k) CHECK(tower.lambda_hat.at(k).is_zero());
    check_conservation(tower, conormal, f);
    auto numbers = levogel_numbers(tower, origin(2), 0);
    CHECK(numbers.values.at(0) == 1);

    // A submersion on a line: the tower never meets the graph.
    auto line = build_tower(variety(xy, {"x"}), Polynomial::parse(xy, "y"));
    for (const auto& [k, c] : line.lambda_hat) CHECK(c.is_zero());
    auto zeros = levogel_numbers(line, origin(2), std::nullopt);
    for (const auto& [k, v] : zeros.values) CHECK(v == 0);

    // Constant function on affine space: everything lies in the zero section.
    auto flat = build_tower(conormal, Polynomial::parse(xy, "5"));
    CHECK(flat.lambda_hat.at(2) == conormal);
}

TEST_CASE("relative Euler obstruction on smooth space equals the Milnor number") {
    VariableContext xy({"x", "y"});
    for (const char* text : {"x^2 + y^3", "x^3 + y^3", "x^2 + y^2", "x^2*y + y^4"}) {
        auto f = Polynomial::parse(xy, text);
        const long mu = jacobian_colength(f, origin(2));
        INFO(text);
        CHECK(relative_euler_obstruction_geometric(variety(xy, {}), f, origin(2)) == mu);
        CHECK(isolated_cnr_euler(variety(xy, {}), f, origin(2)) == mu);
    }
}

TEST_CASE("pair of planes with an isolated critical point") {
    VariableContext xyz({"x", "y", "z"});
    auto cot = VariableContext::cotangent(xyz.names());
    auto X = variety(xyz, {"x*y"});
    auto f = Polynomial::parse(xyz, "x + y^2 + y*z");
    const auto lifted = lifted_point(f, origin(3));
    const auto meet_graph = im_df_ideal(f, cot);
    const auto conormal = conormal_cycle(X);
    for (const auto& c : conormal.components()) {
        const Ideal meet = c.prime + meet_graph;
        CHECK(meet.is_unit() == !(c.prime == I(cot, {"x", "w1", "w2"})));
        CHECK(meet.vanishes_at(lifted) == !meet.is_unit());
    }
    CHECK(isolated_cnr_euler(X, f, origin(3)) == 1);
    CHECK(relative_euler_obstruction_geometric(X, f, origin(3)) == 1);
}

TEST_CASE("a submersion has vanishing relative Euler obstruction") {
    VariableContext xy({"x", "y"});
    CHECK(isolated_cnr_euler(variety(xy, {}), Polynomial::parse(xy, "x + 2*y"), origin(2)) == 0);
    CHECK(relative_euler_obstruction_geometric(variety(xy, {}), Polynomial::parse(xy, "x + 2*y"), origin(2)) == 0);
}

TEST_CASE("constant functions are reported, not computed") {
    VariableContext xyz({"x", "y", "z"});
    auto report = relative_euler_obstruction_report(variety(xyz, {"x*y"}), Polynomial::parse(xyz, "3"), origin(3));
    CHECK(report.constant_function);
    CHECK_FALSE(report.value.has_value());
    // Constant on the variety, though not as a polynomial.
    auto on_plane = relative_euler_obstruction_report(variety(xyz, {"x"}), Polynomial::parse(xyz, "x^2"), origin(3));
    CHECK(on_plane.constant_function);
}

TEST_CASE("prepolarity checks") {
    VariableContext txy({"t", "x", "y"});
    auto cusp = prepolar_check_restricted(variety(txy, {"y^2 - x^3"}), Polynomial::parse(txy, "2*y - 3*t*x + t^3"), origin(3));
    CHECK(cusp.status == PrepolarStatus::verified);

    VariableContext xyz({"x", "y", "z"});
    auto planes = prepolar_check_restricted(variety(xyz, {"x*y"}), Polynomial::parse(xyz, "z"), origin(3));
    CHECK(planes.status == PrepolarStatus::refuted);
    CHECK(planes.reason.find("(x, y)") != std::string::npos);

    VariableContext xy({"x", "y"});
    for (const char* text : {"x^2 + y^2", "x^2 + y^3"}) {
        CHECK(prepolar_check_restricted(variety(xy, {}), Polynomial::parse(xy, text), origin(2)).status ==
              PrepolarStatus::verified);
    }
    // Two-dimensional singular locus: out of scope.
    VariableContext four({"a", "b", "c", "d"});
    CHECK(prepolar_check_restricted(variety(four, {"a*b"}), Polynomial::parse(four, "c"), origin(4)).status ==
          PrepolarStatus::inapplicable);
}

TEST_CASE("property: generic linear forms have vanishing relative Euler obstruction") {
    VariableContext xyz({"x", "y", "z"});
    VariableContext txy({"t", "x", "y"});
    for (std::uint64_t seed : {11u, 12u}) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> d(1, 7);
        auto linear = [&](const VariableContext& c) {
            Polynomial l(c, BigRational(d(rng)));
            for (std::size_t i = 0; i < c.arity(); ++i) l += Polynomial::variable(c, i) * BigRational(d(rng) * (rng() % 2 ? 1 : -1));
            return l;
        };
        CHECK(relative_euler_obstruction_geometric(variety(xyz, {"x*y"}), linear(xyz), origin(3)) == 0);
        CHECK(relative_euler_obstruction_geometric(variety(txy, {"y^2 - x^3"}), linear(txy), origin(3)) == 0);
    }
}

TEST_CASE("property: isolated intersection numbers do not depend on the coordinates") {
    VariableContext xyz({"x", "y", "z"});
    const auto f = Polynomial::parse(xyz, "x + y^2 + y*z");
    const auto g = Polynomial::parse(xyz, "x*y");
    const long reference = isolated_cnr_euler(variety(xyz, {"x*y"}), f, origin(3));
    for (std::uint64_t seed : {3u, 4u}) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> d(-2, 2);
        // Unipotent upper-triangular change of coordinates with random entries.
        std::vector<Polynomial> images;
        for (std::size_t i = 0; i < 3; ++i) {
            Polynomial img = Polynomial::variable(xyz, i);
            for (std::size_t j = i + 1; j < 3; ++j) img += Polynomial::variable(xyz, j) * BigRational(d(rng));
            images.push_back(img);
        }
        auto moved = VarietyPresentation(xyz, {g.compose(images)});
        CHECK(isolated_cnr_euler(moved, f.compose(images), origin(3)) == reference);
    }
}

TEST_CASE("Sebastiani-Thom on the cusp cylinder") {
    VariableContext xyz({"x", "y", "z"});
    auto X = variety(xyz, {"y^2 - x^3"});
    auto report = relative_euler_obstruction_report(X, Polynomial::parse(xyz, "y + z^2"), origin(3));
    REQUIRE(report.value.has_value());
    CHECK(*report.value == 1);
}
