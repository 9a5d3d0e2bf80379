#pragma once

#include "eucalc/polynomial.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace eucalc {

/// Finitely generated ideal of Q[context]. Reduced Gröbner bases are cached
/// per monomial order; the cache is shared between copies and guarded by a
/// mutex, so an Ideal may be read from several threads at once.
class Ideal {
public:
    explicit Ideal(VariableContext context);
    Ideal(VariableContext context, std::vector<Polynomial> generators);

    static Ideal parse(const VariableContext& context, const std::vector<std::string>& generators);
    static Ideal unit(const VariableContext& context);
    /// Maximal ideal of the rational point `p`.
    static Ideal maximal(const VariableContext& context, std::span<const BigRational> p);

    const VariableContext& context() const noexcept { return context_; }
    const std::vector<Polynomial>& generators() const noexcept { return generators_; }

    const std::vector<Polynomial>& basis(const MonomialOrder& order = MonomialOrder::grevlex()) const;

    bool is_unit() const;
    bool is_zero() const;
    bool contains(const Polynomial& p) const;
    /// other ⊆ *this
    bool contains(const Ideal& other) const;
    /// Every element of the ideal vanishes at p.
    bool vanishes_at(std::span<const BigRational> p) const;

    Ideal operator+(const Ideal& other) const;
    Ideal operator+(const Polynomial& p) const;
    /// Equality as ideals (reduced grevlex bases coincide).
    bool operator==(const Ideal& other) const;

    /// Ideal generated by the reduced grevlex basis.
    Ideal reduced() const;
    Ideal translate(std::span<const BigRational> shift) const;
    Ideal rename_into(const VariableContext& target) const;

    /// Comma-separated reduced grevlex basis, e.g. "(x, y^2 - z)".
    std::string to_string() const;

private:
    struct Cache {
        std::mutex mutex;
        std::vector<std::pair<MonomialOrder, std::unique_ptr<std::vector<Polynomial>>>> bases;
    };
    VariableContext context_;
    std::vector<Polynomial> generators_;
    std::shared_ptr<Cache> cache_;
};

const std::vector<Polynomial>& groebner_basis(const Ideal& ideal, const MonomialOrder& order);
Polynomial normal_form(const Polynomial& p, const Ideal& ideal,
                       const MonomialOrder& order = MonomialOrder::grevlex());

Ideal intersect(const Ideal& a, const Ideal& b);
/// I : J
Ideal ideal_quotient(const Ideal& ideal, const Ideal& by);
Ideal ideal_quotient(const Ideal& ideal, const Polynomial& by);
/// I : J^infinity by iterated quotients.
Ideal saturate(const Ideal& ideal, const Ideal& by);
Ideal saturate(const Ideal& ideal, const Polynomial& by);

/// I ∩ Q[remaining variables], computed with a block elimination order.
Ideal eliminate(const Ideal& ideal, std::span<const std::size_t> variables);
Ideal eliminate_mask(const Ideal& ideal, std::uint32_t mask);

/// dim V(I) from maximal independent sets modulo the leading-term ideal.
/// Throws if I is the unit ideal.
int krull_dimension(const Ideal& ideal);

/// dim_Q Q[x]/I for a zero-dimensional ideal (count of standard monomials).
std::size_t colength(const Ideal& ideal);

/// Local intersection multiplicity of I at an isolated point p of V(I):
/// the stabilised colength of I + m_p^N.
std::size_t local_colength(const Ideal& ideal, std::span<const BigRational> p);

/// g ∈ rad(I)
bool radical_contains(const Ideal& ideal, const Polynomial& g);
bool same_radical(const Ideal& a, const Ideal& b);

}  // namespace eucalc
