#include "eucalc/groebner.hpp"

#include <algorithm>

namespace eucalc {

namespace {

// Terms sorted by descending order; leading term first.
using TermList = std::vector<Term>;

struct Engine {
    const MonomialOrder& order;
    std::size_t n;

    int cmp(const Monomial& a, const Monomial& b) const { return order.compare(a, b, n); }

    // h[start..] - coeff * mult * g, where g[0] * coeff * mult cancels h[start].
    TermList sub_mul(const TermList& h, std::size_t start, const BigRational& coeff, const Monomial& mult,
                     const TermList& g) const {
        TermList out;
        out.reserve(h.size() - start + g.size());
        std::size_t i = start, j = 0;
        Monomial gm;
        bool have_g = false;
        auto load_g = [&]() {
            if (j < g.size()) {
                gm = g[j].monomial * mult;
                have_g = true;
            } else {
                have_g = false;
            }
        };
        load_g();
        while (i < h.size() || have_g) {
            int c;
            if (i == h.size()) c = -1;
            else if (!have_g) c = 1;
            else c = cmp(h[i].monomial, gm);
            if (c > 0) {
                out.push_back(h[i++]);
            } else if (c < 0) {
                out.push_back(Term{gm, -(coeff * g[j].coeff)});
                ++j;
                load_g();
            } else {
                BigRational v = h[i].coeff - coeff * g[j].coeff;
                if (v != 0) out.push_back(Term{gm, std::move(v)});
                ++i;
                ++j;
                load_g();
            }
        }
        return out;
    }

    const TermList* find_reducer(const Monomial& m, const std::vector<TermList>& basis,
                                 const std::vector<std::size_t>& active) const {
        for (std::size_t idx : active) {
            if (basis[idx].front().monomial.divides(m, n)) return &basis[idx];
        }
        return nullptr;
    }

    // Full reduction; result is not normalised.
    TermList reduce_full(TermList h, const std::vector<TermList>& basis, const std::vector<std::size_t>& active) const {
        TermList out;
        std::size_t start = 0;
        while (start < h.size()) {
            const Term& t = h[start];
            const TermList* g = find_reducer(t.monomial, basis, active);
            if (!g) {
                out.push_back(t);
                ++start;
                continue;
            }
            const BigRational coeff = t.coeff / g->front().coeff;
            const Monomial mult = t.monomial / g->front().monomial;
            h = sub_mul(h, start, coeff, mult, *g);
            start = 0;
        }
        return out;
    }

    void make_monic(TermList& p) const {
        if (p.empty() || p.front().coeff == 1) return;
        const BigRational inv = 1 / p.front().coeff;
        for (auto& t : p) t.coeff *= inv;
    }

    TermList spoly(const TermList& f, const TermList& g) const {
        const Monomial l = Monomial::lcm(f.front().monomial, g.front().monomial, n);
        // Both monic: S = (l/lt f) f - (l/lt g) g
        TermList lhs;
        lhs.reserve(f.size());
        const Monomial mf = l / f.front().monomial;
        for (const auto& t : f) lhs.push_back(Term{t.monomial * mf, t.coeff});
        return sub_mul(lhs, 0, BigRational(1), l / g.front().monomial, g);
    }
};

struct Pair {
    std::size_t i, j;
    Monomial lcm;
};

}  // namespace

std::vector<Polynomial> buchberger(const VariableContext& context, const std::vector<Polynomial>& generators,
                                   const MonomialOrder& order) {
    Engine eng{order, context.arity()};
    std::vector<TermList> basis;
    std::vector<std::size_t> active;
    std::vector<Pair> pairs;
    bool unit = false;

    auto update = [&](TermList h) {
        const std::size_t hi = basis.size();
        basis.push_back(std::move(h));
        const Monomial& lh = basis[hi].front().monomial;
        const std::size_t n = eng.n;

        std::vector<Pair> candidates;
        for (std::size_t g : active) candidates.push_back(Pair{g, hi, Monomial::lcm(basis[g].front().monomial, lh, n)});

        // Chain criterion among the new pairs (Gebauer–Möller).
        std::vector<Pair> kept;
        for (std::size_t a = 0; a < candidates.size(); ++a) {
            const auto& p = candidates[a];
            bool keep = basis[p.i].front().monomial.coprime(lh, n);
            if (!keep) {
                keep = true;
                for (std::size_t b = a + 1; b < candidates.size() && keep; ++b) {
                    if (candidates[b].lcm.divides(p.lcm, n)) keep = false;
                }
                for (const auto& q : kept) {
                    if (keep && q.lcm.divides(p.lcm, n)) keep = false;
                }
            }
            if (keep) kept.push_back(p);
        }
        // Drop coprime pairs (product criterion).
        std::erase_if(kept, [&](const Pair& p) { return basis[p.i].front().monomial.coprime(lh, n); });

        // Old pairs made redundant by the new leading term.
        std::erase_if(pairs, [&](const Pair& p) {
            if (!lh.divides(p.lcm, n)) return false;
            const Monomial li = Monomial::lcm(basis[p.i].front().monomial, lh, n);
            const Monomial lj = Monomial::lcm(basis[p.j].front().monomial, lh, n);
            return !(li == p.lcm) && !(lj == p.lcm);
        });
        pairs.insert(pairs.end(), kept.begin(), kept.end());

        std::erase_if(active, [&](std::size_t g) { return lh.divides(basis[g].front().monomial, n); });
        active.push_back(hi);
    };

    auto add = [&](TermList h) {
        h = eng.reduce_full(std::move(h), basis, active);
        if (h.empty()) return;
        eng.make_monic(h);
        if (h.front().monomial.total_degree(eng.n) == 0) {
            unit = true;
            return;
        }
        update(std::move(h));
    };

    for (const auto& g : generators) {
        if (!(g.context() == context)) throw Error("generator context mismatch in Gröbner basis computation");
        if (g.is_zero()) continue;
        add(sorted_terms(g, order));
        if (unit) break;
    }

    while (!unit && !pairs.empty()) {
        auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
            const int c = eng.cmp(a.lcm, b.lcm);
            if (c != 0) return c < 0;
            return a.j < b.j;
        });
        const Pair p = *best;
        pairs.erase(best);
        add(eng.spoly(basis[p.i], basis[p.j]));
    }

    if (unit) return {Polynomial(context, BigRational(1))};

    // Inter-reduce the minimal basis.
    std::vector<TermList> reduced;
    for (std::size_t a = 0; a < active.size(); ++a) {
        std::vector<std::size_t> others;
        for (std::size_t b = 0; b < active.size(); ++b) {
            if (b != a) others.push_back(active[b]);
        }
        const TermList& g = basis[active[a]];
        TermList tail(g.begin() + 1, g.end());
        TermList r = eng.reduce_full(std::move(tail), basis, others);
        r.insert(r.begin(), g.front());
        reduced.push_back(std::move(r));
    }
    std::sort(reduced.begin(), reduced.end(),
              [&](const TermList& a, const TermList& b) { return eng.cmp(a.front().monomial, b.front().monomial) > 0; });
    std::vector<Polynomial> out;
    out.reserve(reduced.size());
    for (auto& r : reduced) out.emplace_back(context, std::move(r));
    return out;
}

Polynomial reduce(const Polynomial& p, const std::vector<Polynomial>& basis, const MonomialOrder& order) {
    Engine eng{order, p.context().arity()};
    std::vector<TermList> sorted;
    std::vector<std::size_t> active;
    sorted.reserve(basis.size());
    for (const auto& g : basis) {
        if (g.is_zero()) continue;
        active.push_back(sorted.size());
        auto t = sorted_terms(g, order);
        eng.make_monic(t);
        sorted.push_back(std::move(t));
    }
    return Polynomial(p.context(), eng.reduce_full(sorted_terms(p, order), sorted, active));
}

}  // namespace eucalc
