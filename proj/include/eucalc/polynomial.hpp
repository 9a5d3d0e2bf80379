#pragma once

#include "eucalc/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eucalc {

/// Base error type for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Polynomial text could not be parsed. `column` is 1-based within the text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t column)
        : Error(message), column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

inline constexpr std::size_t kMaxVariables = 24;

/// Ordered list of distinct variable names, optionally split into a base
/// block z0..zn followed by an equally long cotangent block w0..wn.
class VariableContext {
public:
    VariableContext();
    explicit VariableContext(std::vector<std::string> names);

    /// Context (z0..zn, w0..wn) where wi is the cotangent partner of zi.
    static VariableContext cotangent(const std::vector<std::string>& base_names);

    std::size_t arity() const noexcept;
    const std::string& name(std::size_t i) const;
    const std::vector<std::string>& names() const noexcept;
    std::optional<std::size_t> index_of(std::string_view name) const;

    bool has_cotangent_split() const noexcept;
    /// Number of base variables (equals arity() when there is no split).
    std::size_t base_arity() const noexcept;
    /// Index of the cotangent partner w_i of base variable i.
    std::size_t cotangent_index(std::size_t base_index) const;
    VariableContext base_context() const;

    bool operator==(const VariableContext& other) const noexcept;

private:
    struct Data;
    VariableContext(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

/// Exponent vector; only the first `arity` entries of the owning context are used.
struct Monomial {
    std::array<std::uint16_t, kMaxVariables> exp{};

    unsigned total_degree(std::size_t arity) const noexcept;
    bool divides(const Monomial& other, std::size_t arity) const noexcept;
    Monomial operator*(const Monomial& other) const noexcept;
    /// Caller guarantees divisibility.
    Monomial operator/(const Monomial& other) const noexcept;
    static Monomial lcm(const Monomial& a, const Monomial& b, std::size_t arity) noexcept;
    bool coprime(const Monomial& other, std::size_t arity) const noexcept;

    bool operator==(const Monomial&) const = default;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept;
};

class MonomialOrder {
public:
    enum class Kind { Lex, GrevLex, Elimination };

    static MonomialOrder lex() { return MonomialOrder(Kind::Lex, 0); }
    static MonomialOrder grevlex() { return MonomialOrder(Kind::GrevLex, 0); }
    /// Block order eliminating the first `front` variables.
    static MonomialOrder block_elimination(std::size_t front);
    /// Block order eliminating an arbitrary variable set (bit i = variable i).
    static MonomialOrder eliminating(std::uint32_t mask) { return MonomialOrder(Kind::Elimination, mask); }

    Kind kind() const noexcept { return kind_; }
    std::uint32_t eliminated_mask() const noexcept { return mask_; }

    /// Negative, zero or positive as a <, =, > b.
    int compare(const Monomial& a, const Monomial& b, std::size_t arity) const noexcept;

    bool operator==(const MonomialOrder&) const = default;
    std::string describe() const;

private:
    MonomialOrder(Kind kind, std::uint32_t mask) : kind_(kind), mask_(mask) {}
    Kind kind_;
    std::uint32_t mask_;
};

struct Term {
    Monomial monomial;
    BigRational coeff;
};

using RationalPoint = std::vector<BigRational>;

/// Sparse multivariate polynomial over the rationals. Terms are kept in
/// descending graded-reverse-lexicographic order with no zero coefficients.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(VariableContext context) : context_(std::move(context)) {}
    Polynomial(VariableContext context, const BigRational& constant);
    /// Terms may repeat monomials and carry zeros; they are normalised.
    Polynomial(VariableContext context, std::vector<Term> terms);

    static Polynomial variable(const VariableContext& context, std::size_t index);
    static Polynomial parse(const VariableContext& context, std::string_view text);

    const VariableContext& context() const noexcept { return context_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Constant coefficient (zero when absent).
    BigRational constant_term() const;

    unsigned total_degree() const noexcept;
    unsigned degree_in(std::size_t var) const noexcept;
    /// Bit i set when variable i occurs.
    std::uint32_t support() const noexcept;
    /// True when every variable occurs with degree at most one and total degree <= 1.
    bool is_affine_linear() const noexcept;

    const Term& leading_term(const MonomialOrder& order) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(const BigRational& scalar) const;
    Polynomial& operator+=(const Polynomial& other) { return *this = *this + other; }
    Polynomial& operator-=(const Polynomial& other) { return *this = *this - other; }
    Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }
    Polynomial pow(unsigned exponent) const;
    bool operator==(const Polynomial& other) const;

    Polynomial derivative(std::size_t var) const;
    BigRational evaluate(std::span<const BigRational> point) const;
    /// Replaces variable `var` by `value` (same context).
    Polynomial substitute(std::size_t var, const Polynomial& value) const;
    /// Replaces every variable i by images[i] (all in a common target context).
    Polynomial compose(std::span<const Polynomial> images) const;
    /// Re-expresses in `target`; index_map[i] is the target index of variable i.
    Polynomial embed(const VariableContext& target, std::span<const std::size_t> index_map) const;
    /// Re-expresses in `target`, matching variables by name.
    Polynomial rename_into(const VariableContext& target) const;
    /// z_i -> z_i + shift_i for every variable.
    Polynomial translate(std::span<const BigRational> shift) const;

    /// Scales so the leading coefficient under `order` is one.
    Polynomial monic(const MonomialOrder& order) const;
    /// Scales to coprime integer coefficients with positive grevlex leading coefficient.
    Polynomial primitive() const;

    std::string to_string() const;

private:
    void normalize();
    VariableContext context_;
    std::vector<Term> terms_;
};

/// Exact division; returns nullopt if `divisor` does not divide `dividend`.
std::optional<Polynomial> divide_exact(const Polynomial& dividend, const Polynomial& divisor);

/// Reorders terms in descending `order` (used by the Gröbner engine).
std::vector<Term> sorted_terms(const Polynomial& p, const MonomialOrder& order);

}  // namespace eucalc
