#include "eucalc/cycles.hpp"

#include "eucalc/factor.hpp"

#include <algorithm>
#include <optional>
#include <random>

namespace eucalc {

namespace {

// Triangular description of a certified prime: variables solved one at a
// time (v = expression in the remaining variables), then at most one
// irreducible residual equation.
struct Chart {
    std::vector<std::pair<std::size_t, Polynomial>> solved;
    std::optional<Polynomial> residual;
};

// g = c*v + r with c a nonzero constant and v absent from r.
std::optional<std::pair<std::size_t, Polynomial>> solvable_variable(const Polynomial& g) {
    const std::size_t n = g.context().arity();
    for (std::size_t v = 0; v < n; ++v) {
        if (g.degree_in(v) != 1) continue;
        BigRational c(0);
        bool ok = true;
        std::vector<Term> rest;
        for (const auto& t : g.terms()) {
            if (t.monomial.exp[v] == 0) {
                rest.push_back(t);
            } else if (t.monomial.total_degree(n) == 1) {
                c = t.coeff;
            } else {
                ok = false;
                break;
            }
        }
        if (!ok || c == 0) continue;
        return std::make_pair(v, Polynomial(g.context(), std::move(rest)) * BigRational(-1 / c));
    }
    return std::nullopt;
}

bool irreducible(const Polynomial& h) {
    const Factorization f = factor(h);
    return f.complete && f.factors.size() == 1 && f.factors.front().second == 1;
}

std::optional<Chart> certify_prime(const Ideal& ideal) {
    if (ideal.is_unit()) return std::nullopt;
    const auto& ctx = ideal.context();
    Chart chart;
    std::vector<Polynomial> gens = ideal.basis();
    for (;;) {
        std::optional<std::pair<std::size_t, Polynomial>> pick;
        std::size_t pick_index = 0;
        for (std::size_t i = 0; i < gens.size() && !pick; ++i) {
            pick = solvable_variable(gens[i]);
            pick_index = i;
        }
        if (!pick) break;
        const auto [v, expr] = *pick;
        std::vector<Polynomial> next;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (i == pick_index) continue;
            Polynomial s = gens[i].substitute(v, expr);
            if (!s.is_zero()) next.push_back(std::move(s));
        }
        chart.solved.emplace_back(v, expr);
        gens = Ideal(ctx, next).basis();
        if (gens.size() == 1 && gens.front().is_constant()) return std::nullopt;
    }
    if (gens.empty()) return chart;
    if (gens.size() == 1 && irreducible(gens.front())) {
        chart.residual = gens.front();
        return chart;
    }
    return std::nullopt;
}

// g = a*v + rest with a, rest free of v; requires degree one in v.
std::pair<Polynomial, Polynomial> split_linear(const Polynomial& g, std::size_t v) {
    std::vector<Term> a, rest;
    for (auto t : g.terms()) {
        if (t.monomial.exp[v] == 1) {
            t.monomial.exp[v] = 0;
            a.push_back(std::move(t));
        } else {
            rest.push_back(std::move(t));
        }
    }
    return {Polynomial(g.context(), std::move(a)), Polynomial(g.context(), std::move(rest))};
}

// Birational certificate: an irreducible h(u) in the ideal, and for each other
// variable v an element a(u)*v + b(u) with h not dividing a, such that the
// ideal equals ((h, a*v + b, ...) : (prod a)^inf). That saturation is the
// kernel of the map to the function field of V(h), hence prime.
bool certify_birational(const Ideal& ideal) {
    if (ideal.is_unit()) return false;
    const auto& ctx = ideal.context();
    const std::size_t n = ctx.arity();
    std::uint32_t used = 0;
    for (const auto& g : ideal.basis()) used |= g.support();
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < n; ++v) {
        if (used >> v & 1u) vars.push_back(v);
    }
    const int d = krull_dimension(ideal) - static_cast<int>(n - vars.size());
    if (d < 0) return false;
    const std::size_t k = static_cast<std::size_t>(d) + 1;
    if (k >= vars.size()) return false;

    std::vector<bool> pick(vars.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    int budget = 40;
    do {
        std::uint32_t others = 0;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (!pick[i]) {
                others |= 1u << vars[i];
                rest.push_back(vars[i]);
            }
        }
        const Ideal projected = eliminate_mask(ideal, others);
        const auto& hyp = projected.basis();
        if (hyp.size() != 1 || !irreducible(hyp.front())) continue;
        const Polynomial& h = hyp.front();
        std::vector<Polynomial> gens{h};
        Polynomial denominator(ctx, BigRational(1));
        bool ok = true;
        for (auto v : rest) {
            const Ideal pair = eliminate_mask(ideal, others & ~(1u << v));
            bool found = false;
            for (const auto& g : pair.basis()) {
                if (g.degree_in(v) != 1) continue;
                const auto [a, b] = split_linear(g, v);
                if (a.degree_in(v) != 0 || b.degree_in(v) != 0 || divide_exact(a, h)) continue;
                gens.push_back(g);
                denominator *= a;
                found = true;
                break;
            }
            if (!found) {
                ok = false;
                break;
            }
        }
        if (ok && saturate(Ideal(ctx, gens), denominator) == ideal) return true;
    } while (--budget > 0 && std::prev_permutation(pick.begin(), pick.end()));
    return false;
}

BigRational draw(std::mt19937_64& rng, int range) {
    std::uniform_int_distribution<int> d(-range, range);
    return BigRational(d(rng));
}

// Random rational point of the chart, if one is available.
std::optional<RationalPoint> chart_point(const Chart& chart, const VariableContext& ctx, std::mt19937_64& rng) {
    const std::size_t n = ctx.arity();
    std::vector<bool> eliminated(n, false);
    for (const auto& [v, e] : chart.solved) eliminated[v] = true;
    for (int attempt = 0; attempt < 80; ++attempt) {
        RationalPoint q(n, BigRational(0));
        // Small coordinates first: non-linear residuals rarely have rational
        // points above large random values.
        const int range = chart.residual && attempt % 2 == 0 ? 2 : 12;
        for (std::size_t i = 0; i < n; ++i) {
            if (!eliminated[i]) q[i] = attempt % 4 == 3 ? draw(rng, 6) / BigRational(1 + attempt % 5) : draw(rng, range);
        }
        if (chart.residual) {
            const Polynomial& h = *chart.residual;
            // Solve for the variable of lowest positive degree; other
            // coordinates stay random. Non-linear cases need a rational root.
            std::size_t u = n;
            for (std::size_t v = 0; v < n; ++v) {
                if (h.degree_in(v) > 0 && (u == n || h.degree_in(v) < h.degree_in(u))) u = v;
            }
            IntPoly restricted(h.degree_in(u) + 1, BigInt(0));
            BigInt den(1);
            std::vector<BigRational> coeffs(h.degree_in(u) + 1, BigRational(0));
            for (const auto& t : h.terms()) {
                BigRational value = t.coeff;
                for (std::size_t v = 0; v < n; ++v) {
                    if (v == u) continue;
                    for (unsigned k = 0; k < t.monomial.exp[v]; ++k) value *= q[v];
                }
                coeffs[t.monomial.exp[u]] += value;
            }
            for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
            for (std::size_t k = 0; k < coeffs.size(); ++k) restricted[k] = BigInt(coeffs[k] * den);
            while (!restricted.empty() && restricted.back() == 0) restricted.pop_back();
            if (restricted.size() < 2) continue;
            bool complete = true;
            std::optional<BigRational> root;
            if (restricted.size() == 2) {
                root = BigRational(-restricted[0], restricted[1]);
            } else {
                for (const auto& [g, m] : factor_univariate(restricted, complete)) {
                    if (g.size() == 2) {
                        root = BigRational(-g[0], g[1]);
                        break;
                    }
                }
            }
            if (!root) continue;
            root->canonicalize();
            q[u] = *root;
        }
        for (auto it = chart.solved.rbegin(); it != chart.solved.rend(); ++it) q[it->first] = it->second.evaluate(q);
        return q;
    }
    return std::nullopt;
}

std::vector<Polynomial> random_slices(const VariableContext& ctx, int count, const RationalPoint* through,
                                      std::mt19937_64& rng) {
    const std::size_t n = ctx.arity();
    std::vector<Polynomial> out;
    for (int k = 0; k < count; ++k) {
        Polynomial l(ctx);
        for (std::size_t i = 0; i < n; ++i) {
            Polynomial zi = Polynomial::variable(ctx, i);
            if (through) zi -= Polynomial(ctx, (*through)[i]);
            l += zi * draw(rng, 6);
        }
        if (!through) l += Polynomial(ctx, draw(rng, 9));
        if (l.is_constant()) {
            --k;
            continue;
        }
        out.push_back(std::move(l));
    }
    return out;
}

Ideal with(const Ideal& ideal, const std::vector<Polynomial>& extra) {
    auto gens = ideal.generators();
    gens.insert(gens.end(), extra.begin(), extra.end());
    return Ideal(ideal.context(), std::move(gens));
}

// The value at a point only bounds the generic multiplicity from above, so
// take the smallest of two readings at points off the other components.
std::optional<long> local_estimate(const Ideal& ideal, const Ideal& prime, int dim, const Chart& chart,
                                   const std::vector<Ideal>& others, std::mt19937_64& rng) {
    std::optional<long> best;
    int readings = 0;
    for (int attempt = 0; attempt < 8 && readings < 2; ++attempt) {
        auto q = chart_point(chart, ideal.context(), rng);
        if (!q) break;
        if (std::any_of(others.begin(), others.end(), [&](const Ideal& o) { return o.vanishes_at(*q); })) continue;
        const auto slices = random_slices(ideal.context(), dim, &*q, rng);
        try {
            const std::size_t base = local_colength(with(prime, slices), *q);
            if (base != 1) continue;
            const long m = static_cast<long>(local_colength(with(ideal, slices), *q));
            best = best ? std::min(*best, m) : m;
            ++readings;
        } catch (const Error&) {
            continue;
        }
    }
    return best;
}

std::optional<long> global_estimate(const Ideal& ideal, const Ideal& prime, int dim, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto slices = random_slices(ideal.context(), dim, nullptr, rng);
        const Ideal cut = with(prime, slices);
        if (cut.is_unit()) continue;
        const Ideal sliced = with(ideal, slices);
        try {
            const Ideal others = saturate(sliced, cut);
            const Ideal here = saturate(sliced, others);
            const std::size_t total = colength(here), base = colength(cut);
            if (base == 0 || total % base != 0) continue;
            return static_cast<long>(total / base);
        } catch (const Error&) {
            continue;
        }
    }
    return std::nullopt;
}

long multiplicity_along(const Ideal& ideal, const Ideal& prime, int dim, const std::optional<Chart>& chart,
                        const std::vector<Ideal>& others, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 17);
    if (chart) {
        if (auto m = local_estimate(ideal, prime, dim, *chart, others, rng)) return *m;
    }
    if (auto m = global_estimate(ideal, prime, dim, rng)) return *m;
    throw Error("could not compute the multiplicity of " + ideal.to_string() + " along " + prime.to_string());
}

}  // namespace

bool ComponentCycle::verified() const noexcept {
    return std::all_of(components_.begin(), components_.end(), [](const CycleComponent& c) { return c.verified; });
}

long ComponentCycle::total_multiplicity() const noexcept {
    long s = 0;
    for (const auto& c : components_) s += c.multiplicity;
    return s;
}

void ComponentCycle::add(CycleComponent component) {
    if (!(component.prime.context() == context_)) throw Error("cycle component lives in a different context");
    if (component.multiplicity == 0) return;
    for (auto it = components_.begin(); it != components_.end(); ++it) {
        if (it->prime == component.prime) {
            it->multiplicity += component.multiplicity;
            it->verified = it->verified && component.verified;
            if (it->multiplicity == 0) components_.erase(it);
            return;
        }
    }
    component.prime = component.prime.reduced();
    components_.push_back(std::move(component));
}

ComponentCycle ComponentCycle::operator+(const ComponentCycle& other) const {
    ComponentCycle out = *this;
    for (const auto& c : other.components_) out.add(c);
    return out;
}

ComponentCycle ComponentCycle::scaled(long factor) const {
    ComponentCycle out(context_);
    for (auto c : components_) {
        c.multiplicity *= factor;
        out.add(std::move(c));
    }
    return out;
}

bool ComponentCycle::operator==(const ComponentCycle& other) const {
    if (!(context_ == other.context_) || components_.size() != other.components_.size()) return false;
    for (const auto& c : components_) {
        const bool match = std::any_of(other.components_.begin(), other.components_.end(), [&](const CycleComponent& d) {
            return d.multiplicity == c.multiplicity && d.prime == c.prime;
        });
        if (!match) return false;
    }
    return true;
}

std::string ComponentCycle::to_string() const {
    if (components_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) out += " + ";
        out += std::to_string(components_[i].multiplicity) + "*V" + components_[i].prime.to_string();
    }
    return out;
}

std::vector<std::pair<Ideal, bool>> minimal_primes(const Ideal& ideal) {
    std::vector<std::pair<Ideal, bool>> leaves;
    std::vector<Ideal> work{ideal.reduced()};
    std::vector<Ideal> seen;
    while (!work.empty()) {
        Ideal current = work.back();
        work.pop_back();
        if (current.is_unit()) continue;
        if (std::any_of(seen.begin(), seen.end(), [&](const Ideal& s) { return s == current; })) continue;
        seen.push_back(current);
        if (certify_prime(current)) {
            leaves.emplace_back(current, true);
            continue;
        }
        bool split = false;
        for (const auto& order : {MonomialOrder::grevlex(), MonomialOrder::lex()}) {
            for (const auto& g : current.basis(order)) {
                const Factorization fac = factor(g);
                if (fac.factors.size() == 1 && fac.factors.front().second == 1) continue;
                for (const auto& [f, mult] : fac.factors) {
                    if (current.contains(f)) continue;
                    const Ideal away = saturate(current, f);
                    if (away.is_unit()) {
                        work.push_back((current + f).reduced());
                        split = true;
                    } else if (!(away == current)) {
                        work.push_back(away);
                        work.push_back((current + f).reduced());
                        split = true;
                    }
                    if (split) break;
                }
                if (split) break;
            }
            if (split) break;
        }
        if (!split) leaves.emplace_back(current, certify_birational(current));
    }
    // Drop duplicates and non-minimal leaves.
    std::vector<std::pair<Ideal, bool>> out;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < leaves.size() && !redundant; ++j) {
            if (i == j) continue;
            if (leaves[i].first.contains(leaves[j].first)) {
                // leaves[j] ⊆ leaves[i]: keep only the smaller one (first occurrence on ties)
                redundant = !(leaves[j].first.contains(leaves[i].first)) || j < i;
            }
        }
        if (!redundant) out.push_back(leaves[i]);
    }
    return out;
}

ComponentCycle decompose_ideal(const Ideal& ideal, const DecomposeOptions& options) {
    if (ideal.is_unit()) throw Error("cannot decompose the unit ideal (empty variety)");
    ComponentCycle out(ideal.context());
    // Hypersurfaces: components and multiplicities come straight from the factorization.
    if (const auto& gb = ideal.basis(); gb.size() == 1) {
        const Factorization fac = factor(gb.front());
        if (fac.complete) {
            const int dim = static_cast<int>(ideal.context().arity()) - 1;
            for (const auto& [f, m] : fac.factors) out.add(CycleComponent{Ideal(ideal.context(), {f}), static_cast<long>(m), dim, true});
            return out;
        }
    }
    const auto primes = minimal_primes(ideal);
    for (const auto& [prime, certified] : primes) {
        std::vector<Ideal> others;
        for (const auto& [other, c] : primes) {
            if (!(other == prime)) others.push_back(other);
        }
        const int dim = krull_dimension(prime);
        std::optional<Chart> chart = certified ? certify_prime(prime) : std::nullopt;
        long mult = 1;
        if (!(prime == ideal)) {
            const long a = multiplicity_along(ideal, prime, dim, chart, others, options.seed);
            const long b = multiplicity_along(ideal, prime, dim, chart, others, options.seed + 1);
            if (a != b) {
                throw Error("multiplicity of " + ideal.to_string() + " along " + prime.to_string() +
                            " differs between seeds (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
            }
            mult = a;
        }
        out.add(CycleComponent{prime, mult, dim, certified});
    }
    return out;
}

ComponentCycle intersect_hypersurface(const ComponentCycle& cycle, const Polynomial& h, const DecomposeOptions& options) {
    ComponentCycle out(cycle.context());
    for (const auto& c : cycle.components()) {
        if (c.prime.contains(h)) {
            throw Error("improper intersection: component V" + c.prime.to_string() + " lies inside V(" + h.to_string() +
                        ")");
        }
        const Ideal cut = c.prime + h;
        if (cut.is_unit()) continue;
        ComponentCycle piece = decompose_ideal(cut, options);
        for (auto comp : piece.components()) {
            comp.multiplicity *= c.multiplicity;
            comp.verified = comp.verified && c.verified;
            out.add(std::move(comp));
        }
    }
    return out;
}

std::pair<ComponentCycle, ComponentCycle> split_by_subvariety(const ComponentCycle& cycle, const Ideal& subvariety) {
    ComponentCycle inside(cycle.context()), outside(cycle.context());
    for (const auto& c : cycle.components()) {
        if (c.prime.contains(subvariety)) inside.add(c);
        else outside.add(c);
    }
    return {inside, outside};
}

ComponentCycle pushforward_section(const ComponentCycle& cycle, const Polynomial& function) {
    const auto& ctx = cycle.context();
    if (!ctx.has_cotangent_split()) throw Error("pushforward needs a cotangent context");
    const VariableContext base = ctx.base_context();
    const std::size_t n = ctx.base_arity();
    const Polynomial f = function.rename_into(ctx);
    std::vector<Polynomial> partials;
    for (std::size_t i = 0; i < n; ++i) partials.push_back(f.derivative(i));

    std::uint32_t wmask = 0;
    for (std::size_t i = 0; i < n; ++i) wmask |= 1u << ctx.cotangent_index(i);

    ComponentCycle out(base);
    for (const auto& c : cycle.components()) {
        for (std::size_t i = 0; i < n; ++i) {
            const Polynomial w = Polynomial::variable(ctx, ctx.cotangent_index(i));
            if (!c.prime.contains(w - partials[i])) {
                throw Error("component V" + c.prime.to_string() + " does not lie on the graph of d(" +
                            function.to_string() + ")");
            }
        }
        std::vector<Polynomial> gens;
        for (const auto& g : c.prime.basis()) {
            Polynomial s = g;
            for (std::size_t i = 0; i < n; ++i) s = s.substitute(ctx.cotangent_index(i), partials[i]);
            if (!s.is_zero()) gens.push_back(std::move(s));
        }
        const Ideal projected = eliminate_mask(Ideal(ctx, gens), wmask).rename_into(base);
        out.add(CycleComponent{projected, c.multiplicity, c.dim, c.verified});
    }
    return out;
}

long local_intersection_number(const ComponentCycle& cycle, const std::vector<Polynomial>& slices,
                               std::span<const BigRational> point) {
    for (const auto& s : slices) {
        if (!s.is_affine_linear()) throw Error("slice " + s.to_string() + " is not affine-linear");
    }
    long total = 0;
    for (const auto& c : cycle.components()) {
        const Ideal cut = with(c.prime, slices);
        if (!cut.vanishes_at(point)) continue;
        std::size_t local;
        try {
            local = local_colength(cut, point);
        } catch (const Error& e) {
            throw Error("improper slicing of component V" + c.prime.to_string() + ": " + e.what());
        }
        total += c.multiplicity * static_cast<long>(local);
    }
    return total;
}

nlohmann::json cycle_to_json(const ComponentCycle& cycle, const MonomialOrder& order) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : cycle.components()) {
        nlohmann::json gens = nlohmann::json::array();
        for (const auto& g : c.prime.basis(order)) gens.push_back(g.to_string());
        out.push_back({{"generators", gens}, {"multiplicity", c.multiplicity}, {"dim", c.dim}, {"verified", c.verified}});
    }
    return out;
}

ComponentCycle cycle_from_json(const VariableContext& context, const nlohmann::json& data) {
    if (!data.is_array()) throw Error("a cycle must be a JSON array of components");
    ComponentCycle out(context);
    for (const auto& item : data) {
        std::vector<std::string> gens = item.at("generators").get<std::vector<std::string>>();
        Ideal prime = Ideal::parse(context, gens);
        const long m = item.at("multiplicity").get<long>();
        const int dim = item.contains("dim") ? item.at("dim").get<int>() : krull_dimension(prime);
        const bool verified = item.contains("verified") ? item.at("verified").get<bool>() : true;
        out.add(CycleComponent{prime, m, dim, verified});
    }
    return out;
}

}  // namespace eucalc
