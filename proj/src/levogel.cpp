#include "eucalc/levogel.hpp"

#include <algorithm>

namespace eucalc {

namespace {

ComponentCycle through(const ComponentCycle& cycle, std::span<const BigRational> point) {
    ComponentCycle out(cycle.context());
    for (const auto& c : cycle.components()) {
        if (c.prime.vanishes_at(point)) out.add(c);
    }
    return out;
}

std::vector<Polynomial> coordinate_slices(const VariableContext& ctx, std::span<const BigRational> point,
                                          std::size_t count) {
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(Polynomial::variable(ctx, i) - Polynomial(ctx, point[i]));
    return out;
}

std::vector<std::vector<Polynomial>> gradient_rows(const std::vector<Polynomial>& polys, std::size_t n) {
    std::vector<std::vector<Polynomial>> rows;
    for (const auto& g : polys) {
        std::vector<Polynomial> row;
        for (std::size_t i = 0; i < n; ++i) row.push_back(g.derivative(i));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Polynomial> all_minors(const std::vector<std::vector<Polynomial>>& rows, std::size_t size) {
    std::vector<Polynomial> out;
    if (rows.empty() || size == 0 || size > rows.size() || size > rows.front().size()) return out;
    const std::size_t nr = rows.size(), nc = rows.front().size();
    std::vector<bool> rsel(nr, false), csel(nc, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(size), true);
    do {
        std::fill(csel.begin(), csel.end(), false);
        std::fill(csel.begin(), csel.begin() + static_cast<long>(size), true);
        do {
            std::vector<std::vector<Polynomial>> m;
            for (std::size_t i = 0; i < nr; ++i) {
                if (!rsel[i]) continue;
                std::vector<Polynomial> row;
                for (std::size_t j = 0; j < nc; ++j) {
                    if (csel[j]) row.push_back(rows[i][j]);
                }
                m.push_back(std::move(row));
            }
            Polynomial d = determinant(m);
            if (!d.is_zero()) out.push_back(std::move(d));
        } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    return out;
}

Ideal with(const Ideal& ideal, const std::vector<Polynomial>& extra) {
    auto gens = ideal.generators();
    gens.insert(gens.end(), extra.begin(), extra.end());
    return Ideal(ideal.context(), std::move(gens));
}

// Locus stays away from p except possibly at p itself.
bool punctured_empty(const Ideal& locus, std::span<const BigRational> point) {
    if (!locus.vanishes_at(point)) return true;
    return !saturate(locus, Ideal::maximal(locus.context(), point)).vanishes_at(point);
}

std::string slice_text(const VariableContext& ctx, std::span<const BigRational> point, std::size_t count) {
    std::string s = "V(";
    for (std::size_t i = 0; i < count; ++i) {
        if (i) s += ", ";
        s += (Polynomial::variable(ctx, i) - Polynomial(ctx, point[i])).to_string();
    }
    return s + ")";
}

}  // namespace

bool LeVogelTower::verified() const {
    for (const auto* m : {&gamma, &lambda_hat, &lambda}) {
        for (const auto& [k, c] : *m) {
            if (!c.verified()) return false;
        }
    }
    return true;
}

RationalPoint lifted_point(const Polynomial& function, std::span<const BigRational> point) {
    const std::size_t n = function.context().arity();
    if (point.size() != n) throw Error("point has the wrong number of coordinates");
    RationalPoint out(point.begin(), point.end());
    for (std::size_t i = 0; i < n; ++i) out.push_back(function.derivative(i).evaluate(point));
    return out;
}

LeVogelTower build_tower(const ComponentCycle& conormal, const Polynomial& function, const TowerOptions& options) {
    const VariableContext& cot = conormal.context();
    if (!cot.has_cotangent_split()) throw Error("the tower lives in a cotangent context");
    const int top = static_cast<int>(cot.base_arity());
    const Polynomial f = function.rename_into(cot);
    const Ideal graph = im_df_ideal(function, cot);
    std::optional<RationalPoint> lifted;
    if (options.localize_at) lifted = lifted_point(function, *options.localize_at);
    auto localize = [&](const ComponentCycle& c) { return lifted ? through(c, *lifted) : c; };

    LeVogelTower tower;
    tower.top_dim = top;
    auto [in, out] = split_by_subvariety(conormal, graph);
    tower.gamma.emplace(top, localize(out));
    tower.lambda_hat.emplace(top, in);
    for (int k = top - 1; k >= 0; --k) {
        const ComponentCycle& above = tower.gamma.at(k + 1);
        if (above.is_zero()) {
            tower.gamma.emplace(k, ComponentCycle(cot));
            tower.lambda_hat.emplace(k, ComponentCycle(cot));
            continue;
        }
        const auto idx = static_cast<std::size_t>(k);
        const Polynomial hyper = Polynomial::variable(cot, cot.cotangent_index(idx)) - f.derivative(idx);
        const ComponentCycle cut = intersect_hypersurface(above, hyper, options.decompose);
        auto [lam, gam] = split_by_subvariety(cut, graph);
        tower.gamma.emplace(k, localize(gam));
        tower.lambda_hat.emplace(k, lam);
    }
    for (const auto& [k, c] : tower.lambda_hat) tower.lambda.emplace(k, pushforward_section(c, function));
    return tower;
}

LeVogelTower build_tower(const VarietyPresentation& variety, const Polynomial& function, const TowerOptions& options) {
    return build_tower(conormal_cycle(variety, options.decompose), function, options);
}

LeVogelNumbers levogel_numbers(const LeVogelTower& tower, std::span<const BigRational> point,
                               std::optional<int> critical_dim) {
    LeVogelNumbers out;
    out.point.assign(point.begin(), point.end());
    out.critical_dim = critical_dim;
    for (const auto& [k, cycle] : tower.lambda) {
        const auto slices = coordinate_slices(cycle.context(), point, static_cast<std::size_t>(k));
        const long value = local_intersection_number(cycle, slices, point);
        if (value != 0 && (!critical_dim || k > *critical_dim)) {
            throw Error("Le-Vogel number in dimension " + std::to_string(k) +
                        " is nonzero above the dimension of the critical locus");
        }
        out.values[k] = value;
    }
    return out;
}

std::optional<int> local_dimension(const Ideal& ideal, std::span<const BigRational> point) {
    if (!ideal.vanishes_at(point)) return std::nullopt;
    std::optional<int> best;
    for (const auto& [prime, certified] : minimal_primes(ideal)) {
        if (!prime.vanishes_at(point)) continue;
        const int d = krull_dimension(prime);
        best = best ? std::max(*best, d) : d;
    }
    return best;
}

std::string to_string(PrepolarStatus status) {
    switch (status) {
        case PrepolarStatus::verified: return "verified";
        case PrepolarStatus::refuted: return "refuted";
        case PrepolarStatus::inapplicable: return "inapplicable";
    }
    return "inapplicable";
}

Ideal singular_locus(const VarietyPresentation& variety, const DecomposeOptions& options) {
    const auto& ctx = variety.context();
    const std::size_t n = ctx.arity();
    const ComponentCycle comps = variety.components(options);
    std::vector<Ideal> pieces;
    const auto& list = comps.components();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Ideal& prime = list[i].prime;
        const std::size_t codim = n - static_cast<std::size_t>(krull_dimension(prime));
        if (codim > 0) {
            const auto& gens = prime.basis();
            pieces.push_back(with(prime, all_minors(gradient_rows(gens, n), codim)));
        }
        for (std::size_t j = i + 1; j < list.size(); ++j) pieces.push_back(prime + list[j].prime);
    }
    Ideal out = Ideal::unit(ctx);
    bool first = true;
    for (const auto& p : pieces) {
        if (p.is_unit()) continue;
        out = first ? p : intersect(out, p);
        first = false;
    }
    return out;
}

PrepolarVerdict prepolar_check_restricted(const VarietyPresentation& variety, const Polynomial& function,
                                          std::span<const BigRational> point, const DecomposeOptions& options) {
    const auto& ctx = variety.context();
    const std::size_t n = ctx.arity();
    const Ideal sing = singular_locus(variety, options);
    const Ideal critical = cnr_critical_locus(variety, function, options).combined;
    const Ideal sigma = intersect(sing, critical);

    if (auto d = local_dimension(sigma, point); d && *d > 1) {
        return {PrepolarStatus::inapplicable, "the singular and critical loci have dimension " + std::to_string(*d) +
                                                  " at the point"};
    }
    const Polynomial first = Polynomial::variable(ctx, 0) - Polynomial(ctx, point[0]);
    if (sigma.vanishes_at(point)) {
        for (const auto& [prime, certified] : minimal_primes(sigma)) {
            if (!prime.vanishes_at(point) || krull_dimension(prime) < 1) continue;
            if (prime.contains(first)) {
                return {PrepolarStatus::refuted, "V(" + first.to_string() + ") contains the component V" +
                                                     prime.to_string() + " of the singular and critical locus"};
            }
        }
    }

    const ComponentCycle comps = variety.components(options);
    int dim = -1;
    for (const auto& c : comps.components()) {
        if (c.prime.vanishes_at(point)) dim = std::max(dim, krull_dimension(c.prime));
    }
    std::vector<Polynomial> fgrad;
    for (std::size_t j = 0; j < n; ++j) fgrad.push_back(function.derivative(j));
    for (int i = 0; i < dim; ++i) {
        const auto count = static_cast<std::size_t>(i) + 1;
        const auto slices = coordinate_slices(ctx, point, count);
        for (const auto& c : comps.components()) {
            if (!c.prime.vanishes_at(point)) continue;
            const std::size_t codim = n - static_cast<std::size_t>(krull_dimension(c.prime));
            auto rows = gradient_rows(c.prime.basis(), n);
            for (const auto& s : gradient_rows(slices, n)) rows.push_back(s);
            const Ideal sliced = with(c.prime, slices);

            const Ideal bad = saturate(with(sliced, all_minors(rows, codim + count)), sing);
            if (!punctured_empty(bad, point)) {
                return {PrepolarStatus::refuted,
                        slice_text(ctx, point, count) + " is not transverse to the regular part near the point"};
            }
            rows.push_back(fgrad);
            const Ideal crit = saturate(with(sliced, all_minors(rows, codim + count + 1)), sing);
            if (!punctured_empty(crit, point)) {
                return {PrepolarStatus::refuted, "the function has critical points on the regular part of " +
                                                     slice_text(ctx, point, count) + " near the point"};
            }
        }
    }
    return {PrepolarStatus::verified, ""};
}

GeometricEuReport relative_euler_obstruction_report(const VarietyPresentation& variety, const Polynomial& function,
                                                    std::span<const BigRational> point,
                                                    const DecomposeOptions& options) {
    const auto& ctx = variety.context();
    if (point.size() != ctx.arity()) throw Error("point has the wrong number of coordinates");
    if (!variety.ideal().vanishes_at(point)) throw Error("the point does not lie on the variety");
    const Polynomial f = function.rename_into(ctx) - Polynomial(ctx, function.rename_into(ctx).evaluate(point));

    GeometricEuReport report;
    if (f.is_zero() || radical_contains(variety.ideal(), f)) {
        report.constant_function = true;
        report.prepolar = {PrepolarStatus::inapplicable, "the function is constant on the variety"};
        return report;
    }
    const ComponentCycle comps = variety.components(options);
    report.decomposition_verified = comps.verified();
    long total = 0;
    for (const auto& c : comps.components()) {
        if (!c.prime.vanishes_at(point)) continue;
        ComponentCycle alone(ctx);
        alone.add(c);
        const VarietyPresentation sub(ctx, c.prime.basis(), alone);
        const auto pieces = conormal_pieces(sub, options);
        const auto s = local_dimension(cnr_critical_locus(pieces, f).combined, point);
        TowerOptions topts{options, RationalPoint(point.begin(), point.end())};
        LeVogelTower tower = build_tower(conormal_cycle(sub, options), f, topts);
        LeVogelNumbers numbers = levogel_numbers(tower, point, s);
        long alternating = 0;
        for (const auto& [k, v] : numbers.values) alternating += (k % 2 ? -v : v);
        const int dim = krull_dimension(c.prime);
        const long value = dim % 2 ? -alternating : alternating;
        total += value;
        report.decomposition_verified = report.decomposition_verified && tower.verified();
        report.components.push_back(ComponentContribution{c.prime, dim, std::move(tower), std::move(numbers), value});
    }
    report.value = total;
    report.prepolar = prepolar_check_restricted(variety, f, point, options);
    return report;
}

long relative_euler_obstruction_geometric(const VarietyPresentation& variety, const Polynomial& function,
                                          std::span<const BigRational> point, const DecomposeOptions& options) {
    const auto report = relative_euler_obstruction_report(variety, function, point, options);
    if (!report.value) throw Error("the function is constant near the point; Eu_p f equals Eu_p X");
    return *report.value;
}

long isolated_cnr_euler(const VarietyPresentation& variety, const Polynomial& function,
                        std::span<const BigRational> point, const DecomposeOptions& options) {
    const auto& ctx = variety.context();
    const Polynomial f = function.rename_into(ctx);
    const RationalPoint lifted = lifted_point(f, point);
    long total = 0;
    for (const auto& piece : conormal_pieces(variety, options)) {
        if (!piece.component.vanishes_at(point)) continue;
        const Ideal meet = piece.conormal + im_df_ideal(f, piece.conormal.context());
        if (!meet.vanishes_at(lifted)) continue;
        long m = 0;
        try {
            m = static_cast<long>(local_colength(meet, lifted));
        } catch (const Error&) {
            throw Error("conormal of V" + piece.component.to_string() +
                        " meets im(df) in a set that is not isolated at the lifted point");
        }
        total += piece.component_dim % 2 ? -m : m;
    }
    return total;
}

}  // namespace eucalc
