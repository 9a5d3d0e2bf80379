// Acceptance checks 1-8: one PASS/FAIL line each; exit status 1 if any fails.
#include "eucalc/cli.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace eucalc;

namespace {

struct Check {
    std::ostringstream failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures << "\n    failed: " << what;
    }
};

Ideal I(const VariableContext& c, std::initializer_list<const char*> gens) {
    return Ideal::parse(c, std::vector<std::string>(gens.begin(), gens.end()));
}

Polynomial P(const VariableContext& c, const char* text) { return Polynomial::parse(c, text); }

VarietyPresentation variety(const VariableContext& base, std::initializer_list<const char*> gens) {
    std::vector<Polynomial> g;
    for (const char* s : gens) g.push_back(P(base, s));
    return VarietyPresentation(base, g);
}

ComponentCycle single(const Ideal& prime, long m = 1) {
    ComponentCycle c(prime.context());
    c.add(CycleComponent{prime, m, krull_dimension(prime), true});
    return c;
}

RationalPoint origin(std::size_t n) { return RationalPoint(n, BigRational(0)); }

// Colength of an ideal generated by monomials in two variables, counted directly.
long monomial_colength(const std::vector<Polynomial>& gens) {
    std::vector<std::pair<unsigned, unsigned>> lead;
    for (const auto& g : gens) {
        if (g.size() != 1) throw Error("oracle expects monomial generators");
        const auto& m = g.terms().front().monomial;
        lead.emplace_back(m.exp[0], m.exp[1]);
    }
    long count = 0;
    for (unsigned i = 0; i < 64; ++i) {
        for (unsigned j = 0; j < 64; ++j) {
            const bool divisible = std::any_of(lead.begin(), lead.end(), [&](auto e) { return e.first <= i && e.second <= j; });
            if (!divisible) ++count;
        }
    }
    return count;
}

// Order of vanishing in t of g(t^2, t^3).
long order_on_cusp(const Polynomial& g) {
    const VariableContext t({"t"});
    const std::vector<Polynomial> images{P(t, "t^2"), P(t, "t^3")};
    const Polynomial h = g.compose(images);
    long order = -1;
    for (const auto& term : h.terms()) {
        const long e = term.monomial.exp[0];
        if (order < 0 || e < order) order = e;
    }
    return order;
}

Polynomial random_affine(const VariableContext& c, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(1, 9);
    Polynomial l(c, BigRational(d(rng)));
    for (std::size_t i = 0; i < c.arity(); ++i) l += Polynomial::variable(c, i) * BigRational(d(rng) * (rng() % 2 ? 1 : -1));
    return l;
}

struct Fixture {
    StratifiedSpace space;
    LinkData links;
};

Fixture poset(std::vector<Stratum> strata, const std::vector<std::pair<std::string, std::string>>& closure,
              const std::vector<std::tuple<std::string, std::string, long>>& chi) {
    Fixture f{StratifiedSpace(std::move(strata), closure), LinkData(StratifiedSpace())};
    f.links = LinkData(f.space);
    for (const auto& [a, b, v] : chi) f.links.set(f.space.index_of(a), f.space.index_of(b), BigInt(v));
    return f;
}

Fixture node() {
    return poset({{"0", 0, false, {}}, {"b1", 1, true, 1}, {"b2", 1, true, 1}}, {{"0", "b1"}, {"0", "b2"}},
                 {{"0", "b1", 1}, {"0", "b2", 1}});
}

Fixture plane_pair() {
    return poset({{"0", 0, false, {}}, {"axis", 1, false, {}}, {"P1", 2, true, 2}, {"P2", 2, true, 2}},
                 {{"0", "axis"}, {"axis", "P1"}, {"axis", "P2"}},
                 {{"0", "axis", 1}, {"0", "P1", 0}, {"0", "P2", 0}, {"axis", "P1", 1}, {"axis", "P2", 1}});
}

Fixture random_poset(std::mt19937_64& rng) {
    auto draw = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::vector<Stratum> strata;
    for (int dim = 0; dim <= 2; ++dim) {
        for (int i = draw(1, 3); i > 0; --i) strata.push_back({"s" + std::to_string(dim) + std::to_string(i), dim, false, {}});
    }
    std::vector<std::pair<std::string, std::string>> closure;
    for (auto& a : strata) {
        for (const auto& b : strata) {
            if (a.dim < b.dim && draw(0, 1)) closure.emplace_back(a.name, b.name);
        }
    }
    for (auto& a : strata) {
        const bool up = std::any_of(closure.begin(), closure.end(), [&](const auto& p) { return p.first == a.name; });
        if (!up) {
            a.component_open = true;
            a.component_dim = a.dim;
        }
    }
    Fixture f{StratifiedSpace(strata, closure), LinkData(StratifiedSpace())};
    f.links = LinkData(f.space);
    for (const auto& [a, b] : f.space.closure_pairs()) f.links.set(a, b, BigInt(draw(-4, 4)));
    return f;
}

void criterion1(Check& c) {
    const VariableContext txy({"t", "x", "y"});
    const auto cot = VariableContext::cotangent(txy.names());
    const auto X = variety(txy, {"y^2 - x^3"});
    const auto f = P(txy, "2*y - 3*t*x + t^3");
    const auto conormal = conormal_cycle(X);
    c.expect(conormal.components().size() == 1 &&
                 same_radical(conormal.components().front().prime,
                              I(cot, {"y^2 - x^3", "w0", "2*w1*y + 3*w2*x^2", "4*w1^2 - 9*w2^2*x"})),
             "conormal radical");
    const auto gamma2 = I(cot, {"27*y + w1^3", "9*x - w1^2", "w0", "w2 - 2"});
    const auto split = decompose_ideal(I(cot, {"y^2 - x^3", "w0", "w1*y + 3*x^2", "w2 - 2"}));
    c.expect(split == single(gamma2) + single(I(cot, {"x", "y", "w0", "w2 - 2"}), 3), "decomposition with multiplicity 3");
    const auto tower = build_tower(conormal, f);
    c.expect(tower.gamma.at(2) == single(gamma2), "gamma-hat 2");
    c.expect(tower.lambda_hat.at(1) == single(I(cot, {"y - t^3", "x - t^2", "w0", "w1 + 3*t", "w2 - 2"})), "lambda-hat 1");
    c.expect(tower.lambda.at(1) == single(I(txy, {"y - t^3", "x - t^2"})), "lambda 1");
    const auto numbers = levogel_numbers(tower, origin(3), 1);
    c.expect(numbers.values.at(1) == 1, "lambda^1 = 1");
    c.expect(relative_euler_obstruction_geometric(X, f, origin(3)) == -1, "Eu = -1");
    c.expect(prepolar_check_restricted(X, f, origin(3)).status == PrepolarStatus::verified, "prepolar verified");
}

void criterion2(Check& c) {
    const VariableContext xyz({"x", "y", "z"});
    const auto cot = VariableContext::cotangent(xyz.names());
    const auto X = variety(xyz, {"x*y"});
    const auto f = P(xyz, "x + y^2 + y*z");
    c.expect(same_radical(cnr_critical_locus(X, f).combined, I(xyz, {"x", "y", "z"})), "sigma_cnr = {0}");
    const auto graph = im_df_ideal(f, cot);
    int meeting = 0;
    const auto conormal = conormal_cycle(X);
    for (const auto& comp : conormal.components()) {
        if ((comp.prime + graph).is_unit()) continue;
        ++meeting;
        c.expect(comp.prime == I(cot, {"x", "w1", "w2"}), "only V(x, w1, w2) meets im(df)");
    }
    c.expect(meeting == 1, "exactly one conormal component meets im(df)");
    c.expect(isolated_cnr_euler(X, f, origin(3)) == 1, "isolated formula = 1");
    c.expect(relative_euler_obstruction_geometric(X, f, origin(3)) == 1, "tower = 1");
}

void criterion3(Check& c) {
    const VariableContext xy({"x", "y"});
    const auto plane = variety(xy, {});
    for (const auto& [text, expected] : std::vector<std::pair<const char*, long>>{{"x^2 + y^3", 2}, {"x^3 + y^3", 4}}) {
        const auto f = P(xy, text);
        const long mu = monomial_colength({f.derivative(0), f.derivative(1)});
        c.expect(mu == expected, std::string("oracle Milnor number of ") + text);
        c.expect(relative_euler_obstruction_geometric(plane, f, origin(2)) == mu, std::string("Eu = mu for ") + text);
    }
}

void criterion4(Check& c) {
    const VariableContext xyz({"x", "y", "z"});
    const VariableContext txy({"t", "x", "y"});
    for (std::uint64_t seed : {1u, 2u}) {
        std::mt19937_64 rng(seed);
        const auto l1 = random_affine(xyz, rng);
        c.expect(relative_euler_obstruction_geometric(variety(xyz, {"x*y"}), l1, origin(3)) == 0,
                 "V(xy), f = " + l1.to_string());
        const auto l2 = random_affine(txy, rng);
        c.expect(relative_euler_obstruction_geometric(variety(txy, {"y^2 - x^3"}), l2, origin(3)) == 0,
                 "cusp x C, f = " + l2.to_string());
    }
}

void criterion5(Check& c) {
    const auto n = node();
    c.expect(euler_obstruction_links(n.space, n.links).values[0] == 2, "node Eu = 2");
    const auto p = plane_pair();
    const auto eu = euler_obstruction_links(p.space, p.links);
    c.expect(eu.values[0] == 2, "V(xy) Eu = 2");
    BigInt link_chi = 0;
    for (std::size_t s = 1; s < p.space.size(); ++s) link_chi += p.links.get(0, s);
    // One curve stratum (the axis, multiplicity 1) along which X has multiplicity 2.
    c.expect(eu.values[0] == link_chi + 1 * (2 - 1), "surface formula");

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> value(-20, 20);
    std::vector<Fixture> all{node(), plane_pair()};
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_poset(rng);
        ConstructibleFunction alpha;
        for (std::size_t s = 0; s < f.space.size(); ++s) alpha.values.emplace_back(value(rng));
        c.expect(function_from_cc(f.space, f.links, cc_of_function(f.space, f.links, alpha)) == alpha,
                 "BDK round trip, trial " + std::to_string(trial));
        all.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        c.expect(characteristic_function(all[i].space, all[i].links) == euler_obstruction_links(all[i].space, all[i].links),
                 "characteristic function = Eu on poset " + std::to_string(i));
    }
}

void criterion6(Check& c) {
    const auto file = cli::load_problem(EUCALC_DATA_DIR "/cusp_line.strat.json");
    const auto& s = file.stratified->file;
    const BigInt combinatorial = relative_euler_obstruction_chi(s.space, s.links, *s.milnor);
    const auto geo = cli::load_problem(EUCALC_DATA_DIR "/cusp_line.json");
    const auto& g = *geo.geometric;
    const long geometric = relative_euler_obstruction_geometric(VarietyPresentation(g.context, g.generators), g.function, g.point);
    c.expect(geometric == -1, "geometric value -1");
    c.expect(combinatorial == geometric, "link/Milnor data agree with the tower");
}

void criterion7(Check& c) {
    const VariableContext xy({"x", "y"});
    const auto cusp = P(xy, "y^2 - x^3");
    long mult = -1;
    for (const auto& t : cusp.terms()) {
        const long d = t.monomial.total_degree(2);
        if (mult < 0 || d < mult) mult = d;
    }
    const long meet = order_on_cusp(P(xy, "y"));
    const long b = 2;
    c.expect(mult == 2 && meet == 3, "multiplicity 2 and intersection number 3");
    const BigInt product = product_relative_euler(BigInt(mult - meet), BigInt(1 - b));
    c.expect(product == 1, "product formula gives 1");
    const VariableContext xyz({"x", "y", "z"});
    c.expect(relative_euler_obstruction_geometric(variety(xyz, {"y^2 - x^3"}), P(xyz, "y + z^2"), origin(3)) == product,
             "geometric pipeline on the cylinder");
}

void criterion8(Check& c) {
    std::mt19937_64 rng(88);
    std::uniform_int_distribution<int> value(-50, 50);
    for (int trial = 0; trial < 50; ++trial) {
        CCCoefficients v;
        for (int i = 0; i < 5; ++i) v.coeffs.emplace_back(value(rng));
        CCCoefficients negated = v;
        for (auto& x : negated.coeffs) x = -x;
        const long j = value(rng);
        c.expect(shift(v, j) == (j % 2 ? negated : v), "shift sign rule");
    }

    const auto p = plane_pair();
    const auto y = closed_indicator(p.space, {"P1"});
    const auto z = closed_indicator(p.space, {"P2"});
    const auto meet = closed_indicator(p.space, {"axis"});
    const auto whole = constant_function(p.space, 1);
    c.expect(union_function(y, z, meet) == whole, "union of stalk functions");
    auto sum = add(cc_of_function(p.space, p.links, y), cc_of_function(p.space, p.links, z));
    sum = add(sum, shift(cc_of_function(p.space, p.links, meet), 1));
    c.expect(sum == cc_of_function(p.space, p.links, whole), "union of coefficients");

    const auto n = node();
    const auto nn = product(n.space, n.links, n.space, n.links);
    for (int trial = 0; trial < 30; ++trial) {
        ConstructibleFunction a, b;
        for (int i = 0; i < 3; ++i) {
            a.values.emplace_back(value(rng));
            b.values.emplace_back(value(rng));
        }
        c.expect(cc_of_function(nn.space, nn.links, product_function(nn, a, b)) ==
                     product_coefficients(nn, cc_of_function(n.space, n.links, a), cc_of_function(n.space, n.links, b)),
                 "product coefficients multiply");
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"cusp x C end to end", criterion1},
        {"V(xy) with an isolated critical point", criterion2},
        {"Milnor identity on the plane", criterion3},
        {"generic affine-linear functions vanish", criterion4},
        {"combinatorial suite", criterion5},
        {"link data against the tower", criterion6},
        {"Sebastiani-Thom product", criterion7},
        {"characteristic cycle algebra", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(check);
        } catch (const std::exception& e) {
            check.failures << "\n    error: " << e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::string detail = check.failures.str();
        if (!detail.empty()) ++failed;
        std::cout << "criterion " << i + 1 << ": " << (detail.empty() ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << " (" << std::fixed << std::setprecision(2) << seconds << " s)" << detail << "\n";
    }
    return failed == 0 ? 0 : 1;
}
