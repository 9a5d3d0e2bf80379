#include "eucalc/factor.hpp"

#include "eucalc/ideal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

namespace eucalc {

namespace {

constexpr std::size_t kMaxKroneckerDegree = 3000;
constexpr std::size_t kMaxRecombinationFactors = 16;

// ---- dense polynomials over Z/p, p < 2^31 ----

using Vec = std::vector<std::uint64_t>;

struct Fp {
    std::uint64_t p;

    static void trim(Vec& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    std::uint64_t pw(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = r * a % p;
            a = a * a % p;
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const { return pw(a, p - 2); }

    Vec sub(Vec a, const Vec& b) const {
        if (a.size() < b.size()) a.resize(b.size(), 0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
        trim(a);
        return a;
    }
    Vec add(Vec a, const Vec& b) const {
        if (a.size() < b.size()) a.resize(b.size(), 0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
        trim(a);
        return a;
    }
    Vec mul(const Vec& a, const Vec& b) const {
        if (a.empty() || b.empty()) return {};
        Vec r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
        }
        trim(r);
        return r;
    }
    Vec scale(Vec a, std::uint64_t c) const {
        for (auto& x : a) x = x * c % p;
        trim(a);
        return a;
    }
    void divmod(Vec a, const Vec& b, Vec& q, Vec& r) const {
        const std::uint64_t li = inv(b.back());
        q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
        for (std::size_t i = a.size(); i-- >= b.size();) {
            const std::uint64_t c = a[i] * li % p;
            if (c == 0) {
                if (i == 0) break;
                continue;
            }
            q[i - (b.size() - 1)] = c;
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::uint64_t& t = a[i - (b.size() - 1) + j];
                t = (t + p - c * b[j] % p) % p;
            }
            if (i == 0) break;
        }
        trim(q);
        trim(a);
        r = std::move(a);
    }
    Vec mod(const Vec& a, const Vec& b) const {
        Vec q, r;
        divmod(a, b, q, r);
        return r;
    }
    Vec monic(Vec a) const {
        if (a.empty()) return a;
        return scale(std::move(a), inv(a.back()));
    }
    Vec gcd(Vec a, Vec b) const {
        while (!b.empty()) {
            Vec r = mod(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(std::move(a));
    }
    // s*a + t*b = gcd (monic)
    Vec ext_gcd(Vec a, Vec b, Vec& s, Vec& t) const {
        Vec s0{1}, s1{}, t0{}, t1{1};
        while (!b.empty()) {
            Vec q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
            Vec s2 = sub(s0, mul(q, s1));
            Vec t2 = sub(t0, mul(q, t1));
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        const std::uint64_t li = inv(a.back());
        s = scale(s0, li);
        t = scale(t0, li);
        return scale(std::move(a), li);
    }
    Vec deriv(const Vec& a) const {
        Vec r;
        for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * (i % p) % p);
        trim(r);
        return r;
    }
    Vec powmod(Vec base, const BigInt& e, const Vec& m) const {
        Vec r{1};
        base = mod(base, m);
        const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = mod(mul(r, r), m);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, base), m);
        }
        return r;
    }
};

Vec to_fp(const IntPoly& f, std::uint64_t p) {
    Vec out(f.size());
    BigInt pp(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < f.size(); ++i) {
        BigInt r = f[i] % pp;
        if (r < 0) r += pp;
        out[i] = r.get_ui();
    }
    Fp::trim(out);
    return out;
}

IntPoly from_fp(const Vec& v) {
    IntPoly out;
    for (auto c : v) out.emplace_back(static_cast<unsigned long>(c));
    return out;
}

// Distinct-degree factorisation of a monic square-free polynomial.
std::vector<std::pair<Vec, std::size_t>> distinct_degree(const Fp& F, Vec f) {
    std::vector<std::pair<Vec, std::size_t>> out;
    const Vec x{0, 1};
    Vec h = x;
    const BigInt p(static_cast<unsigned long>(F.p));
    for (std::size_t i = 1; 2 * i <= f.size() - 1; ++i) {
        h = F.powmod(h, p, f);
        Vec g = F.gcd(f, F.sub(h, x));
        if (g.size() > 1) {
            out.emplace_back(g, i);
            Vec q, r;
            F.divmod(f, g, q, r);
            f = std::move(q);
            h = F.mod(h, f);
        }
    }
    if (f.size() > 1) out.emplace_back(f, f.size() - 1);
    return out;
}

void equal_degree(const Fp& F, const Vec& g, std::size_t d, std::mt19937_64& rng, std::vector<Vec>& out) {
    const std::size_t n = g.size() - 1;
    if (n == d) {
        out.push_back(g);
        return;
    }
    BigInt e;
    mpz_ui_pow_ui(e.get_mpz_t(), F.p, d);
    e = (e - 1) / 2;
    std::uniform_int_distribution<std::uint64_t> dist(0, F.p - 1);
    for (;;) {
        Vec a(n);
        for (auto& c : a) c = dist(rng);
        Fp::trim(a);
        if (a.size() < 2) continue;
        Vec b = F.sub(F.powmod(a, e, g), Vec{1});
        Vec h = F.gcd(g, b);
        if (h.size() > 1 && h.size() < g.size()) {
            Vec q, r;
            F.divmod(g, h, q, r);
            equal_degree(F, h, d, rng, out);
            equal_degree(F, F.monic(q), d, rng, out);
            return;
        }
    }
}

// ---- dense integer polynomials ----

void trim(IntPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

BigInt content(const IntPoly& a) {
    BigInt g(0);
    for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

IntPoly primitive(IntPoly a) {
    BigInt g = content(a);
    if (g == 0) return a;
    if (a.back() < 0) g = -g;
    for (auto& c : a) c /= g;
    return a;
}

std::optional<IntPoly> divide_exact_z(IntPoly a, const IntPoly& b) {
    if (b.empty()) return std::nullopt;
    if (a.size() < b.size()) return a.empty() ? std::optional<IntPoly>(IntPoly{}) : std::nullopt;
    if (a.front() != 0 && b.front() != 0 && a.front() % b.front() != 0) return std::nullopt;
    IntPoly q(a.size() - b.size() + 1, BigInt(0));
    for (std::size_t i = a.size(); i-- >= b.size();) {
        if (a[i] != 0) {
            if (a[i] % b.back() != 0) return std::nullopt;
            BigInt c = a[i] / b.back();
            const std::size_t shift = i - (b.size() - 1);
            q[shift] = c;
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        }
        if (i == 0) break;
    }
    trim(a);
    if (!a.empty()) return std::nullopt;
    trim(q);
    return q;
}

IntPoly mod_coeffs(IntPoly a, const BigInt& m) {
    for (auto& c : a) {
        c %= m;
        if (c < 0) c += m;
    }
    trim(a);
    return a;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

IntPoly derivative(const IntPoly& a) {
    IntPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<unsigned long>(i));
    trim(r);
    return r;
}

IntPoly minus(IntPoly a, const IntPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), BigInt(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// Primitive gcd over Z by reduction modulo large primes and Chinese remaindering.
IntPoly gcd_z(IntPoly a, IntPoly b) {
    trim(a);
    trim(b);
    if (a.empty()) return primitive(b);
    if (b.empty()) return primitive(a);
    a = primitive(a);
    b = primitive(b);
    if (a.size() == 1 || b.size() == 1) return {BigInt(1)};
    BigInt lead;
    mpz_gcd(lead.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());
    std::size_t best = std::min(a.size(), b.size()) + 1;
    IntPoly acc, previous;
    BigInt modulus(1);
    for (std::uint64_t p = (1ull << 31) - 1; p > 3; p -= 2) {
        if (!is_prime(p)) continue;
        const BigInt bp(static_cast<unsigned long>(p));
        if (BigInt(a.back() % bp) == 0 || BigInt(b.back() % bp) == 0) continue;
        const Fp F{p};
        Vec g = F.gcd(to_fp(a, p), to_fp(b, p));
        if (g.size() == 1) return {BigInt(1)};
        g = F.scale(g, to_fp(IntPoly{lead}, p).at(0));
        if (g.size() > best) continue;
        if (g.size() < best) {
            best = g.size();
            acc = from_fp(g);
            modulus = bp;
            previous.clear();
        } else {
            BigInt inv;
            BigInt mm = modulus % bp;
            mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), bp.get_mpz_t());
            for (std::size_t i = 0; i < acc.size(); ++i) {
                BigInt diff = (BigInt(static_cast<unsigned long>(g[i])) - acc[i]) % bp;
                if (diff < 0) diff += bp;
                BigInt k = diff * inv % bp;
                acc[i] += modulus * k;
            }
            modulus *= bp;
        }
        IntPoly lifted = acc;
        const BigInt half = modulus / 2;
        for (auto& c : lifted) {
            if (c > half) c -= modulus;
        }
        lifted = primitive(lifted);
        if (lifted == previous && divide_exact_z(a, lifted) && divide_exact_z(b, lifted)) return lifted;
        previous = std::move(lifted);
    }
    throw Error("modular gcd ran out of primes");
}

// Yun's algorithm over Z: pairs (primitive square-free part, multiplicity).
std::vector<std::pair<IntPoly, unsigned>> square_free(const IntPoly& f) {
    std::vector<std::pair<IntPoly, unsigned>> out;
    const IntPoly a = primitive(f);
    const IntPoly da = derivative(a);
    const IntPoly c = gcd_z(a, da);
    IntPoly w = *divide_exact_z(a, c);
    IntPoly y = *divide_exact_z(da, c);
    IntPoly z = minus(y, derivative(w));
    unsigned i = 1;
    while (w.size() > 1) {
        const IntPoly g = gcd_z(w, z);
        w = *divide_exact_z(w, g);
        y = *divide_exact_z(z, g);
        z = minus(y, derivative(w));
        if (g.size() > 1) out.emplace_back(g, i);
        ++i;
    }
    return out;
}

// ---- Hensel lifting ----

// Lifts f = lc * A * B (mod p) to mod `target`; A monic.
void lift_pair(const IntPoly& f, IntPoly& A, IntPoly& B, const Fp& F, const BigInt& target) {
    const Vec Ap = to_fp(A, F.p), Bp = to_fp(B, F.p);
    Vec s, t;
    F.ext_gcd(Ap, Bp, s, t);
    BigInt pk(static_cast<unsigned long>(F.p));
    while (pk < target) {
        IntPoly diff = f;
        IntPoly ab = mul(A, B);
        if (diff.size() < ab.size()) diff.resize(ab.size(), BigInt(0));
        for (std::size_t i = 0; i < ab.size(); ++i) diff[i] -= ab[i];
        trim(diff);
        IntPoly e_int;
        for (auto& c : diff) e_int.push_back(BigInt(c / pk));
        const Vec e = to_fp(e_int, F.p);
        const Vec Am = to_fp(A, F.p), Bm = to_fp(B, F.p);
        Vec q, tau;
        F.divmod(F.mul(t, e), Am, q, tau);
        Vec sigma = F.add(F.mul(s, e), F.mul(q, Bm));
        IntPoly tau_z = from_fp(tau), sigma_z = from_fp(sigma);
        if (A.size() < tau_z.size()) A.resize(tau_z.size(), BigInt(0));
        for (std::size_t i = 0; i < tau_z.size(); ++i) A[i] += pk * tau_z[i];
        if (B.size() < sigma_z.size()) B.resize(sigma_z.size(), BigInt(0));
        for (std::size_t i = 0; i < sigma_z.size(); ++i) B[i] += pk * sigma_z[i];
        pk *= static_cast<unsigned long>(F.p);
        A = mod_coeffs(A, pk);
        B = mod_coeffs(B, pk);
    }
    A = mod_coeffs(A, target);
    B = mod_coeffs(B, target);
}

std::vector<IntPoly> lift_all(const IntPoly& f, const std::vector<Vec>& factors, const Fp& F, const BigInt& target) {
    if (factors.size() == 1) {
        BigInt inv;
        BigInt lc = f.back() % target;
        if (lc < 0) lc += target;
        mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), target.get_mpz_t());
        IntPoly g = f;
        for (auto& c : g) c *= inv;
        return {mod_coeffs(g, target)};
    }
    IntPoly A = from_fp(factors[0]);
    Vec rest{to_fp(IntPoly{f.back()}, F.p)};
    for (std::size_t i = 1; i < factors.size(); ++i) rest = F.mul(rest, factors[i]);
    IntPoly B = from_fp(rest);
    lift_pair(mod_coeffs(f, target), A, B, F, target);
    std::vector<Vec> tail(factors.begin() + 1, factors.end());
    auto lifted = lift_all(B, tail, F, target);
    lifted.insert(lifted.begin(), A);
    return lifted;
}

// Square-free primitive f of degree >= 2.
std::vector<IntPoly> zassenhaus(const IntPoly& f, bool& complete) {
    const std::size_t n = f.size() - 1;
    // Choose the prime giving the fewest modular factors among a few candidates.
    std::uint64_t best_p = 0;
    std::size_t best_count = ~std::size_t{0};
    int tried = 0;
    for (std::uint64_t p = 3; tried < 5 && p < 100000; p += 2) {
        if (!is_prime(p)) continue;
        const Fp F{p};
        if (BigInt(f.back() % BigInt(static_cast<unsigned long>(p))) == 0) continue;
        const Vec fp = F.monic(to_fp(f, p));
        if (fp.size() != f.size()) continue;
        if (F.gcd(fp, F.deriv(fp)).size() != 1) continue;
        ++tried;
        std::size_t count = 0;
        for (const auto& [g, d] : distinct_degree(F, fp)) count += (g.size() - 1) / d;
        if (count < best_count) {
            best_count = count;
            best_p = p;
        }
        if (count == 1) break;
    }
    if (best_p == 0) throw Error("no suitable prime for univariate factorization");
    if (best_count == 1) return {f};

    const Fp F{best_p};
    const Vec fp = F.monic(to_fp(f, best_p));
    std::mt19937_64 rng(best_p);
    std::vector<Vec> modular;
    for (const auto& [g, d] : distinct_degree(F, fp)) equal_degree(F, g, d, rng, modular);

    BigInt maxc(0);
    for (const auto& c : f) maxc = std::max(maxc, BigInt(abs(c)));
    BigInt bound = 2 * abs(f.back()) * (n + 1) * maxc;
    bound <<= n;
    BigInt M(static_cast<unsigned long>(best_p));
    while (M <= bound) M *= static_cast<unsigned long>(best_p);

    std::vector<IntPoly> lifted = lift_all(f, modular, F, M);
    if (lifted.size() > kMaxRecombinationFactors) {
        complete = false;
        return {f};
    }

    const BigInt half = M / 2;
    auto symmetric = [&](IntPoly a) {
        a = mod_coeffs(std::move(a), M);
        for (auto& c : a) {
            if (c > half) c -= M;
        }
        return a;
    };

    std::vector<IntPoly> found;
    IntPoly rem = f;
    std::size_t s = 1;
    while (2 * s <= lifted.size()) {
        bool hit = false;
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            IntPoly g{rem.back()};
            for (auto i : idx) g = mod_coeffs(mul(g, lifted[i]), M);
            IntPoly h = primitive(symmetric(g));
            if (auto q = divide_exact_z(rem, h)) {
                found.push_back(h);
                rem = *q;
                std::vector<IntPoly> keep;
                for (std::size_t i = 0, k = 0; i < lifted.size(); ++i) {
                    if (k < idx.size() && idx[k] == i) {
                        ++k;
                        continue;
                    }
                    keep.push_back(lifted[i]);
                }
                lifted = std::move(keep);
                hit = true;
                break;
            }
            // next combination
            std::size_t k = s;
            while (k > 0 && idx[k - 1] == lifted.size() - s + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!hit) ++s;
    }
    if (rem.size() > 1) found.push_back(primitive(rem));
    return found;
}

// ---- Kronecker substitution ----

struct Kronecker {
    std::vector<std::size_t> vars;
    std::vector<std::size_t> radix;  // deg + 1 per variable

    std::size_t weight_of(const Monomial& m) const {
        std::size_t w = 0, scale = 1;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            w += m.exp[vars[i]] * scale;
            scale *= radix[i];
        }
        return w;
    }
    Monomial decode(std::size_t e) const {
        Monomial m;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const std::size_t digit = i + 1 == vars.size() ? e : e % radix[i];
            m.exp[vars[i]] = static_cast<std::uint16_t>(digit);
            e /= radix[i];
        }
        return m;
    }
};

// gcd through the generator of the intersection of principal ideals.
Polynomial gcd_multi(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const VariableContext& ctx = a.context();
    const auto lcm = intersect(Ideal(ctx, {a}), Ideal(ctx, {b})).basis();
    if (lcm.size() != 1) throw Error("internal: intersection of principal ideals is not principal");
    auto q = divide_exact(a * b, lcm.front());
    if (!q) throw Error("internal: inexact gcd");
    return q->primitive();
}

// Product of f_i^(e_i - 1): common divisor of g and all its partials.
Polynomial repeated_part(const Polynomial& g) {
    Polynomial r = g;
    for (std::size_t i = 0; i < g.context().arity() && !r.is_constant(); ++i) {
        const Polynomial d = g.derivative(i);
        if (!d.is_zero()) r = gcd_multi(r, d);
    }
    return r;
}

}  // namespace

std::vector<std::pair<IntPoly, unsigned>> factor_univariate(const IntPoly& input, bool& complete) {
    IntPoly f = input;
    trim(f);
    std::vector<std::pair<IntPoly, unsigned>> out;
    if (f.size() <= 1) return out;
    f = primitive(f);
    for (const auto& [part, mult] : square_free(f)) {
        if (part.size() <= 1) continue;
        if (part.size() == 2) {
            out.emplace_back(part, mult);
            continue;
        }
        for (auto& g : zassenhaus(part, complete)) out.emplace_back(std::move(g), mult);
    }
    return out;
}

Factorization factor(const Polynomial& p) {
    if (p.is_zero()) throw Error("cannot factor the zero polynomial");
    const VariableContext& ctx = p.context();
    const std::size_t n = ctx.arity();
    Factorization out;
    if (p.is_constant()) {
        out.unit = p.constant_term();
        return out;
    }
    Polynomial g = p.primitive();
    out.unit = p.terms().front().coeff / g.terms().front().coeff;

    // Monomial content.
    Monomial low = g.terms().front().monomial;
    for (const auto& t : g.terms()) {
        for (std::size_t i = 0; i < n; ++i) low.exp[i] = std::min(low.exp[i], t.monomial.exp[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (low.exp[i]) out.factors.emplace_back(Polynomial::variable(ctx, i), low.exp[i]);
    }
    if (low.total_degree(n) > 0) {
        std::vector<Term> terms;
        for (const auto& t : g.terms()) terms.push_back(Term{t.monomial / low, t.coeff});
        g = Polynomial(ctx, std::move(terms));
    }
    if (g.is_constant()) return out;
    if (g.total_degree() == 1) {
        out.factors.emplace_back(g, 1);
        return out;
    }

    Kronecker K;
    std::size_t total = 0, scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(g.support() >> i & 1u)) continue;
        K.vars.push_back(i);
        K.radix.push_back(g.degree_in(i) + 1);
        total += g.degree_in(i) * scale;
        scale *= g.degree_in(i) + 1;
        if (total > kMaxKroneckerDegree) break;
    }
    if (total > kMaxKroneckerDegree) {
        out.complete = false;
        out.factors.emplace_back(g, 1);
        return out;
    }

    auto image_of = [&](const Polynomial& q) {
        IntPoly image(total + 1, BigInt(0));
        for (const auto& t : q.terms()) image[K.weight_of(t.monomial)] += BigInt(t.coeff);
        trim(image);
        return image;
    };

    // A square image means g itself may have repeated factors: split those off
    // first so recombination only ever sees a square-free polynomial.
    const auto shape = square_free(image_of(g));
    if (std::any_of(shape.begin(), shape.end(), [](const auto& e) { return e.second > 1; })) {
        const Polynomial r = repeated_part(g);
        if (!r.is_constant()) {
            const Factorization base = factor(*divide_exact(g, r));
            out.complete = base.complete;
            for (const auto& [h, one] : base.factors) {
                unsigned m = 0;
                Polynomial rest = g;
                while (auto q = divide_exact(rest, h)) {
                    rest = *q;
                    ++m;
                }
                out.factors.emplace_back(h, m);
            }
            Polynomial prod(ctx, out.unit);
            for (const auto& [h, m] : out.factors) prod *= h.pow(m);
            out.unit *= p.terms().front().coeff / prod.terms().front().coeff;
            return out;
        }
    }

    // Binomials such as y^2 - x^3 map to products of cyclotomic polynomials;
    // a translation of the variables removes most of these spurious splits.
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> small(1, 3);
    RationalPoint shift(n, BigRational(0));
    std::vector<IntPoly> pieces;
    bool have = false;
    for (int attempt = 0; attempt < 4; ++attempt) {
        RationalPoint trial(n, BigRational(0));
        if (attempt > 0) {
            for (auto v : K.vars) trial[v] = small(rng) * (rng() % 2 ? 1 : -1);
        }
        bool complete = true;
        std::vector<IntPoly> ps;
        for (const auto& [h, m] : factor_univariate(image_of(attempt ? g.translate(trial) : g), complete)) {
            for (unsigned k = 0; k < m; ++k) ps.push_back(h);
        }
        if (!complete) continue;
        if (!have || ps.size() < pieces.size()) {
            pieces = std::move(ps);
            shift = trial;
            have = true;
        }
        if (pieces.size() <= 3) break;
    }
    if (!have || pieces.size() > kMaxRecombinationFactors) {
        out.complete = false;
        out.factors.emplace_back(g, 1);
        return out;
    }
    RationalPoint back(n);
    for (std::size_t i = 0; i < n; ++i) back[i] = -shift[i];

    auto decode = [&](const IntPoly& u) {
        std::vector<Term> terms;
        for (std::size_t e = 0; e < u.size(); ++e) {
            if (u[e] != 0) terms.push_back(Term{K.decode(e), BigRational(u[e])});
        }
        return Polynomial(ctx, std::move(terms));
    };

    std::vector<Polynomial> found;
    Polynomial rem = g.translate(shift);
    std::size_t s = 1;
    while (2 * s <= pieces.size()) {
        bool hit = false;
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            IntPoly prod{BigInt(1)};
            for (auto i : idx) prod = mul(prod, pieces[i]);
            Polynomial h = decode(prod);
            if (!h.is_constant()) {
                if (auto q = divide_exact(rem, h)) {
                    found.push_back(h.translate(back).primitive());
                    rem = *q;
                    std::vector<IntPoly> keep;
                    for (std::size_t i = 0, k = 0; i < pieces.size(); ++i) {
                        if (k < idx.size() && idx[k] == i) {
                            ++k;
                            continue;
                        }
                        keep.push_back(pieces[i]);
                    }
                    pieces = std::move(keep);
                    hit = true;
                    break;
                }
            }
            std::size_t k = s;
            while (k > 0 && idx[k - 1] == pieces.size() - s + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!hit) ++s;
    }
    if (!rem.is_constant()) found.push_back(rem.translate(back).primitive());

    // Group equal factors.
    for (auto& h : found) {
        auto it = std::find_if(out.factors.begin(), out.factors.end(), [&](const auto& e) { return e.first == h; });
        if (it != out.factors.end()) ++it->second;
        else out.factors.emplace_back(std::move(h), 1);
    }
    // Fix the unit so the product reproduces p exactly.
    Polynomial prod(ctx, out.unit);
    for (const auto& [h, m] : out.factors) prod *= h.pow(m);
    out.unit *= p.terms().front().coeff / prod.terms().front().coeff;
    return out;
}

}  // namespace eucalc
