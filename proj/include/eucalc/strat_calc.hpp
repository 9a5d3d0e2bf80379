#pragma once

#include "eucalc/polynomial.hpp"
#include "eucalc/rational.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eucalc {

struct Stratum {
    std::string name;
    int dim = 0;
    /// Open dense in an irreducible component.
    bool component_open = false;
    std::optional<int> component_dim;
};

/// Finite stratified space: strata and the closure order S0 < S meaning
/// S0 lies in the closure of S. The order is stored transitively closed.
class StratifiedSpace {
public:
    StratifiedSpace() = default;
    /// Throws on duplicate names, unknown names, cycles, pairs that do not drop
    /// dimension, or strata below no component-open stratum.
    StratifiedSpace(std::vector<Stratum> strata, const std::vector<std::pair<std::string, std::string>>& closure);

    std::size_t size() const noexcept { return strata_.size(); }
    const std::vector<Stratum>& strata() const noexcept { return strata_; }
    const Stratum& stratum(std::size_t i) const { return strata_.at(i); }
    std::size_t index_of(const std::string& name) const;
    /// i < j strictly
    bool below(std::size_t i, std::size_t j) const { return order_[i][j]; }
    /// Indices sorted by decreasing dimension (stable in declaration order).
    std::vector<std::size_t> by_decreasing_dim() const;
    std::vector<std::pair<std::size_t, std::size_t>> closure_pairs() const;

    bool operator==(const StratifiedSpace& other) const;

private:
    std::vector<Stratum> strata_;
    std::vector<std::vector<bool>> order_;
};

/// chi(S0, S) = χ(complex link at a point of S0, intersected with S), for S0 < S.
class LinkData {
public:
    explicit LinkData(const StratifiedSpace& space);
    void set(std::size_t low, std::size_t high, BigInt chi);
    const BigInt& get(std::size_t low, std::size_t high) const;
    /// Every closure pair carries a value.
    void require_total(const StratifiedSpace& space) const;
    const std::map<std::pair<std::size_t, std::size_t>, BigInt>& values() const noexcept { return chi_; }

private:
    std::size_t size_;
    std::map<std::pair<std::size_t, std::size_t>, BigInt> chi_;
};

/// χ(Milnor fibre of f - f(p) at a point p of the base stratum, intersected with S).
struct MilnorData {
    std::size_t point_stratum = 0;
    std::vector<BigInt> chi_fiber;
};

/// Integer value per stratum (index order of the space).
struct ConstructibleFunction {
    std::vector<BigInt> values;
    bool operator==(const ConstructibleFunction&) const = default;
};

struct CCCoefficients {
    std::vector<BigInt> coeffs;
    bool operator==(const CCCoefficients&) const = default;
};

ConstructibleFunction constant_function(const StratifiedSpace& space, const BigInt& value);

/// c_S0 = (-1)^dim S0 (α(S0) - Σ_{S0<S} chi(S0,S) α(S))
CCCoefficients cc_of_function(const StratifiedSpace& space, const LinkData& links, const ConstructibleFunction& alpha);

/// α(p) = Σ_S (-1)^dim S c_S Eu_p(closure S); inverse of cc_of_function.
ConstructibleFunction function_from_cc(const StratifiedSpace& space, const LinkData& links, const CCCoefficients& c);

/// Eu per stratum by the link recursion; component-open strata get 1.
ConstructibleFunction euler_obstruction_links(const StratifiedSpace& space, const LinkData& links);

/// Eu_{S0}(closure of S) for every pair, S0 ≤ S (zero elsewhere): row S0, column S.
std::vector<std::vector<BigInt>> closure_euler_obstructions(const StratifiedSpace& space, const LinkData& links);

/// Function whose CC is Σ (-1)^dim [conormal of each component-open stratum].
ConstructibleFunction characteristic_function(const StratifiedSpace& space, const LinkData& links);

/// Eu_p f = Eu_p X - Σ_S χ(F ∩ S) Eu_S X
BigInt relative_euler_obstruction_chi(const StratifiedSpace& space, const LinkData& links, const MilnorData& milnor);

struct NearbyVanishing {
    BigInt nearby;
    BigInt vanishing;
};

NearbyVanishing nearby_vanishing_chi(const StratifiedSpace& space, const ConstructibleFunction& alpha,
                                     const MilnorData& milnor);

// Coefficient and function algebra.
CCCoefficients shift(const CCCoefficients& c, long j);
CCCoefficients add(const CCCoefficients& a, const CCCoefficients& b);
ConstructibleFunction add(const ConstructibleFunction& a, const ConstructibleFunction& b);
ConstructibleFunction subtract(const ConstructibleFunction& a, const ConstructibleFunction& b);
/// α_Y + α_Z - α_{Y∩Z} on a common stratification.
ConstructibleFunction union_function(const ConstructibleFunction& y, const ConstructibleFunction& z,
                                     const ConstructibleFunction& meet);
/// Indicator of a closed union of strata (given by its top strata).
ConstructibleFunction closed_indicator(const StratifiedSpace& space, const std::vector<std::string>& tops);

struct Slice {
    StratifiedSpace space;
    LinkData links;
    CCCoefficients coeffs;
    /// Index in the original space of each slice stratum.
    std::vector<std::size_t> origin;
};

/// Normal slice at a point of `base`: strata whose closure contains it, with
/// dimensions lowered by dim(base) and the original coefficients.
Slice slice(const StratifiedSpace& space, const LinkData& links, const CCCoefficients& c, std::size_t base);

struct ProductSpace {
    StratifiedSpace space;
    LinkData links;
    /// (index in X, index in Y) for each product stratum.
    std::vector<std::pair<std::size_t, std::size_t>> factors;
};

/// Product stratification. Link data: chi over a pair where one factor is
/// unchanged is that of the other factor; when both factors move, the value
/// is -chi_X * chi_Y, which keeps the normal Morse data multiplicative.
ProductSpace product(const StratifiedSpace& x, const LinkData& lx, const StratifiedSpace& y, const LinkData& ly);

CCCoefficients product_coefficients(const ProductSpace& p, const CCCoefficients& a, const CCCoefficients& b);
ConstructibleFunction product_function(const ProductSpace& p, const ConstructibleFunction& a,
                                       const ConstructibleFunction& b);
/// Eu_{(p,q)}(f ⊞ g) = Eu_p f · Eu_q g
BigInt product_relative_euler(const BigInt& eu_f, const BigInt& eu_g);

/// Stratification file: strata, closure, link_chi, optional milnor_chi.
struct StratificationFile {
    StratifiedSpace space;
    LinkData links;
    std::optional<MilnorData> milnor;
};

StratificationFile stratification_from_json(const nlohmann::json& data);
nlohmann::json stratification_to_json(const StratificationFile& file);
/// Exact integer from a JSON integer or a decimal string; floats are rejected.
BigInt json_integer(const nlohmann::json& value, const std::string& where);

}  // namespace eucalc
