#include "eucalc/ideal.hpp"

#include "eucalc/groebner.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace eucalc {

namespace {

// Context with one extra variable in front; index_map sends old i to i+1.
struct TaggedContext {
    VariableContext context;
    std::vector<std::size_t> forward;   // old -> new
    std::vector<std::size_t> backward;  // new -> old (tag maps nowhere)
};

TaggedContext with_tag(const VariableContext& ctx) {
    if (ctx.arity() + 1 > kMaxVariables) throw Error("too many variables for an auxiliary elimination");
    std::string tag = "_tag";
    while (ctx.index_of(tag)) tag += "_";
    std::vector<std::string> names{tag};
    for (const auto& n : ctx.names()) names.push_back(n);
    TaggedContext out{VariableContext(std::move(names)), {}, {kMaxVariables}};
    for (std::size_t i = 0; i < ctx.arity(); ++i) {
        out.forward.push_back(i + 1);
        out.backward.push_back(i);
    }
    return out;
}

std::vector<Polynomial> nonzero(const std::vector<Polynomial>& gens) {
    std::vector<Polynomial> out;
    for (const auto& g : gens) {
        if (!g.is_zero()) out.push_back(g);
    }
    return out;
}

void require_same(const Ideal& a, const Ideal& b) {
    if (!(a.context() == b.context())) throw Error("ideals live in different variable contexts");
}

// All monomials of total degree `deg` in `n` variables.
void monomials_of_degree(std::size_t n, unsigned deg, std::vector<Monomial>& out) {
    Monomial m;
    auto rec = [&](auto&& self, std::size_t var, unsigned left) -> void {
        if (var + 1 == n) {
            m.exp[var] = static_cast<std::uint16_t>(left);
            out.push_back(m);
            m.exp[var] = 0;
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            m.exp[var] = static_cast<std::uint16_t>(e);
            self(self, var + 1, left - e);
        }
        m.exp[var] = 0;
    };
    if (n == 0) return;
    rec(rec, 0, deg);
}

}  // namespace

Ideal::Ideal(VariableContext context) : context_(std::move(context)), cache_(std::make_shared<Cache>()) {}

Ideal::Ideal(VariableContext context, std::vector<Polynomial> generators)
    : context_(std::move(context)), generators_(nonzero(generators)), cache_(std::make_shared<Cache>()) {
    for (const auto& g : generators_) {
        if (!(g.context() == context_)) throw Error("generator '" + g.to_string() + "' has a different context");
    }
}

Ideal Ideal::parse(const VariableContext& context, const std::vector<std::string>& generators) {
    std::vector<Polynomial> gens;
    for (const auto& s : generators) gens.push_back(Polynomial::parse(context, s));
    return Ideal(context, std::move(gens));
}

Ideal Ideal::unit(const VariableContext& context) { return Ideal(context, {Polynomial(context, BigRational(1))}); }

Ideal Ideal::maximal(const VariableContext& context, std::span<const BigRational> p) {
    if (p.size() != context.arity()) throw Error("point has the wrong number of coordinates");
    std::vector<Polynomial> gens;
    for (std::size_t i = 0; i < p.size(); ++i) {
        gens.push_back(Polynomial::variable(context, i) - Polynomial(context, p[i]));
    }
    return Ideal(context, std::move(gens));
}

const std::vector<Polynomial>& Ideal::basis(const MonomialOrder& order) const {
    std::lock_guard lock(cache_->mutex);
    for (const auto& [ord, b] : cache_->bases) {
        if (ord == order) return *b;
    }
    auto b = std::make_unique<std::vector<Polynomial>>(buchberger(context_, generators_, order));
    cache_->bases.emplace_back(order, std::move(b));
    return *cache_->bases.back().second;
}

bool Ideal::is_unit() const {
    const auto& b = basis();
    return b.size() == 1 && b.front().is_constant();
}

bool Ideal::is_zero() const { return generators_.empty(); }

bool Ideal::contains(const Polynomial& p) const {
    if (p.is_zero()) return true;
    return reduce(p, basis(), MonomialOrder::grevlex()).is_zero();
}

bool Ideal::contains(const Ideal& other) const {
    require_same(*this, other);
    return std::all_of(other.generators().begin(), other.generators().end(),
                       [&](const Polynomial& g) { return contains(g); });
}

bool Ideal::vanishes_at(std::span<const BigRational> p) const {
    return std::all_of(generators_.begin(), generators_.end(), [&](const Polynomial& g) { return g.evaluate(p) == 0; });
}

Ideal Ideal::operator+(const Ideal& other) const {
    require_same(*this, other);
    auto gens = generators_;
    gens.insert(gens.end(), other.generators_.begin(), other.generators_.end());
    return Ideal(context_, std::move(gens));
}

Ideal Ideal::operator+(const Polynomial& p) const {
    auto gens = generators_;
    gens.push_back(p);
    return Ideal(context_, std::move(gens));
}

bool Ideal::operator==(const Ideal& other) const {
    if (!(context_ == other.context_)) return false;
    const auto& a = basis();
    const auto& b = other.basis();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] == b[i])) return false;
    }
    return true;
}

Ideal Ideal::reduced() const { return Ideal(context_, basis()); }

Ideal Ideal::translate(std::span<const BigRational> shift) const {
    std::vector<Polynomial> gens;
    for (const auto& g : generators_) gens.push_back(g.translate(shift));
    return Ideal(context_, std::move(gens));
}

Ideal Ideal::rename_into(const VariableContext& target) const {
    std::vector<Polynomial> gens;
    for (const auto& g : generators_) gens.push_back(g.rename_into(target));
    return Ideal(target, std::move(gens));
}

std::string Ideal::to_string() const {
    const auto& b = basis();
    if (b.empty()) return "(0)";
    std::string out = "(";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) out += ", ";
        out += b[i].to_string();
    }
    return out + ")";
}

const std::vector<Polynomial>& groebner_basis(const Ideal& ideal, const MonomialOrder& order) {
    return ideal.basis(order);
}

Polynomial normal_form(const Polynomial& p, const Ideal& ideal, const MonomialOrder& order) {
    if (!(p.context() == ideal.context())) throw Error("polynomial and ideal live in different contexts");
    return reduce(p, ideal.basis(order), order);
}

Ideal intersect(const Ideal& a, const Ideal& b) {
    require_same(a, b);
    const auto& ctx = a.context();
    if (a.is_zero() || b.is_zero()) return Ideal(ctx);
    if (a.is_unit()) return b;
    if (b.is_unit()) return a;
    const TaggedContext tc = with_tag(ctx);
    const Polynomial t = Polynomial::variable(tc.context, 0);
    const Polynomial one_minus_t = Polynomial(tc.context, BigRational(1)) - t;
    std::vector<Polynomial> gens;
    for (const auto& g : a.basis()) gens.push_back(t * g.embed(tc.context, tc.forward));
    for (const auto& g : b.basis()) gens.push_back(one_minus_t * g.embed(tc.context, tc.forward));
    const auto gb = buchberger(tc.context, gens, MonomialOrder::eliminating(1u));
    std::vector<Polynomial> out;
    for (const auto& g : gb) {
        if ((g.support() & 1u) == 0) out.push_back(g.embed(ctx, tc.backward));
    }
    return Ideal(ctx, std::move(out));
}

Ideal ideal_quotient(const Ideal& ideal, const Polynomial& by) {
    const auto& ctx = ideal.context();
    if (by.is_zero() || ideal.contains(by)) return Ideal::unit(ctx);
    if (by.is_constant()) return ideal;
    const Ideal meet = intersect(ideal, Ideal(ctx, {by}));
    std::vector<Polynomial> out;
    for (const auto& g : meet.basis()) {
        auto q = divide_exact(g, by);
        if (!q) throw Error("internal: intersection element not divisible by the quotient polynomial");
        out.push_back(std::move(*q));
    }
    return Ideal(ctx, std::move(out));
}

Ideal ideal_quotient(const Ideal& ideal, const Ideal& by) {
    require_same(ideal, by);
    if (by.is_zero()) return Ideal::unit(ideal.context());
    std::optional<Ideal> acc;
    for (const auto& g : by.basis()) {
        Ideal q = ideal_quotient(ideal, g);
        acc = acc ? intersect(*acc, q) : q;
        if (acc->basis() == ideal.basis()) break;  // already as small as it can get
    }
    return *acc;
}

Ideal saturate(const Ideal& ideal, const Polynomial& by) {
    const auto& ctx = ideal.context();
    if (by.is_zero() || ideal.contains(by)) return Ideal::unit(ctx);
    if (by.is_constant()) return ideal;
    Ideal current = ideal.reduced();
    for (;;) {
        Ideal next = ideal_quotient(current, by);
        if (next == current) return current;
        current = next.reduced();
    }
}

Ideal saturate(const Ideal& ideal, const Ideal& by) {
    require_same(ideal, by);
    if (by.is_zero()) return Ideal::unit(ideal.context());
    std::optional<Ideal> acc;
    for (const auto& g : by.basis()) {
        Ideal s = saturate(ideal, g);
        acc = acc ? intersect(*acc, s) : s;
    }
    return acc->reduced();
}

Ideal eliminate_mask(const Ideal& ideal, std::uint32_t mask) {
    const auto& gb = ideal.basis(MonomialOrder::eliminating(mask));
    std::vector<Polynomial> out;
    for (const auto& g : gb) {
        if ((g.support() & mask) == 0) out.push_back(g);
    }
    return Ideal(ideal.context(), std::move(out));
}

Ideal eliminate(const Ideal& ideal, std::span<const std::size_t> variables) {
    std::uint32_t mask = 0;
    for (std::size_t v : variables) {
        if (v >= ideal.context().arity()) throw Error("elimination variable out of range");
        mask |= 1u << v;
    }
    return eliminate_mask(ideal, mask);
}

int krull_dimension(const Ideal& ideal) {
    if (ideal.is_unit()) throw Error("dimension of the unit ideal (empty variety) is undefined");
    const std::size_t n = ideal.context().arity();
    std::vector<std::uint32_t> lead_supports;
    for (const auto& g : ideal.basis()) {
        std::uint32_t s = 0;
        const auto& m = g.leading_term(MonomialOrder::grevlex()).monomial;
        for (std::size_t i = 0; i < n; ++i) {
            if (m.exp[i]) s |= 1u << i;
        }
        lead_supports.push_back(s);
    }
    // U is independent when no leading monomial lives entirely in U.
    int best = 0;
    const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    for (std::uint32_t u = full;; --u) {
        const int size = std::popcount(u);
        if (size > best) {
            bool ok = true;
            for (std::uint32_t s : lead_supports) {
                if ((s & ~u) == 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) best = size;
        }
        if (u == 0 || best == static_cast<int>(n)) break;
    }
    return best;
}

std::size_t colength(const Ideal& ideal) {
    if (ideal.is_unit()) return 0;
    const std::size_t n = ideal.context().arity();
    std::vector<Monomial> leads;
    for (const auto& g : ideal.basis()) leads.push_back(g.leading_term(MonomialOrder::grevlex()).monomial);
    // Zero-dimensional iff every variable has a pure power among the leading terms.
    for (std::size_t i = 0; i < n; ++i) {
        const bool pure = std::any_of(leads.begin(), leads.end(), [&](const Monomial& m) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && m.exp[j]) return false;
            }
            return m.exp[i] > 0;
        });
        if (!pure) throw Error("colength requires a zero-dimensional ideal; " + ideal.to_string() + " is not");
    }
    auto standard = [&](const Monomial& m) {
        return std::none_of(leads.begin(), leads.end(), [&](const Monomial& l) { return l.divides(m, n); });
    };
    std::unordered_set<Monomial, MonomialHash> seen{Monomial{}};
    std::vector<Monomial> stack{Monomial{}};
    while (!stack.empty()) {
        const Monomial m = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < n; ++i) {
            Monomial next = m;
            ++next.exp[i];
            if (standard(next) && seen.insert(next).second) stack.push_back(next);
        }
    }
    return seen.size();
}

std::size_t local_colength(const Ideal& ideal, std::span<const BigRational> p) {
    const auto& ctx = ideal.context();
    const std::size_t n = ctx.arity();
    if (p.size() != n) throw Error("point has the wrong number of coordinates");
    if (!ideal.vanishes_at(p)) throw Error("point does not lie on the variety of " + ideal.to_string());

    const Ideal at_origin = ideal.translate(p);
    const RationalPoint origin(n, BigRational(0));
    const Ideal max = Ideal::maximal(ctx, origin);

    // Components away from the origin survive saturation by m; the origin is
    // isolated iff they no longer pass through it.
    const Ideal away = saturate(at_origin, max);
    const Polynomial* witness = nullptr;
    for (const auto& g : away.basis()) {
        if (g.constant_term() != 0) {
            witness = &g;
            break;
        }
    }
    if (!witness) throw Error("point is not isolated in the variety of " + ideal.to_string());
    const Ideal primary = witness->is_constant() ? at_origin : saturate(at_origin, *witness);

    unsigned bound = 0;
    for (const auto& g : ideal.generators()) bound = std::max(bound, g.total_degree());

    // colength(I + m^N) is non-decreasing in N and reaches colength(primary)
    // once m^N lies in the primary component; containment settles both N and 2N.
    auto power_contained = [&](unsigned deg) {
        std::vector<Monomial> mons;
        monomials_of_degree(n, deg, mons);
        for (const auto& m : mons) {
            if (!primary.contains(Polynomial(ctx, std::vector<Term>{Term{m, BigRational(1)}}))) return false;
        }
        return true;
    };
    for (unsigned N = 1;; N *= 2) {
        if (N > bound && power_contained(N)) return colength(primary);
        if (N > (1u << 14)) throw Error("local colength did not stabilise");
    }
}

bool radical_contains(const Ideal& ideal, const Polynomial& g) {
    if (ideal.contains(g)) return true;
    const TaggedContext tc = with_tag(ideal.context());
    std::vector<Polynomial> gens;
    for (const auto& h : ideal.generators()) gens.push_back(h.embed(tc.context, tc.forward));
    gens.push_back(Polynomial(tc.context, BigRational(1)) -
                   Polynomial::variable(tc.context, 0) * g.embed(tc.context, tc.forward));
    return Ideal(tc.context, std::move(gens)).is_unit();
}

bool same_radical(const Ideal& a, const Ideal& b) {
    require_same(a, b);
    for (const auto& g : a.basis()) {
        if (!radical_contains(b, g)) return false;
    }
    for (const auto& g : b.basis()) {
        if (!radical_contains(a, g)) return false;
    }
    return true;
}

}  // namespace eucalc
