#pragma once

#include "eucalc/conormal.hpp"

#include <map>
#include <optional>
#include <string>

namespace eucalc {

/// Intersection tower in the cotangent bundle. Level k cycles have dimension k.
struct LeVogelTower {
    int top_dim = 0;
    std::map<int, ComponentCycle> gamma;
    std::map<int, ComponentCycle> lambda_hat;
    /// Projections of lambda_hat to the base.
    std::map<int, ComponentCycle> lambda;

    bool verified() const;
};

struct LeVogelNumbers {
    RationalPoint point;
    std::map<int, long> values;
    /// Local dimension of the critical locus at the point; absent when the point is off it.
    std::optional<int> critical_dim;
};

struct TowerOptions {
    DecomposeOptions decompose;
    /// When set, Γ̂ components missing the lifted point (p, d_p f) are dropped
    /// level by level; nothing they generate can pass through the point.
    std::optional<RationalPoint> localize_at;
};

/// Tower built from a conormal cycle. Level k+1 -> k intersects with
/// V(w_k - df/dz_k), then splits off the components lying in im(df).
LeVogelTower build_tower(const ComponentCycle& conormal, const Polynomial& function, const TowerOptions& options = {});
LeVogelTower build_tower(const VarietyPresentation& variety, const Polynomial& function,
                         const TowerOptions& options = {});

/// λ^k = (Λ^k · V(z_0 - p_0, ..., z_{k-1} - p_{k-1}))_p. Throws when some
/// intersection is not isolated at p or when λ^k ≠ 0 for some k above the
/// critical dimension.
LeVogelNumbers levogel_numbers(const LeVogelTower& tower, std::span<const BigRational> point,
                               std::optional<int> critical_dim);

/// dim_p V(I); absent when p lies off V(I).
std::optional<int> local_dimension(const Ideal& ideal, std::span<const BigRational> point);

enum class PrepolarStatus { verified, refuted, inapplicable };

struct PrepolarVerdict {
    PrepolarStatus status = PrepolarStatus::inapplicable;
    std::string reason;
};

std::string to_string(PrepolarStatus status);

/// Checks the low-dimensional prepolarity conditions in a punctured
/// neighbourhood of p: the coordinate hyperplane V(z_0 - p_0) contains no
/// positive-dimensional component of Σ = ΣX ∪ Σ_cnr f; successive coordinate
/// slices meet X_reg transversally; f restricted to X_reg ∩ slice has no
/// critical points. Inapplicable when dim_p Σ > 1.
PrepolarVerdict prepolar_check_restricted(const VarietyPresentation& variety, const Polynomial& function,
                                          std::span<const BigRational> point, const DecomposeOptions& options = {});

/// Ideal of the singular locus of X (per-component Jacobian loci and pairwise intersections).
Ideal singular_locus(const VarietyPresentation& variety, const DecomposeOptions& options = {});

struct ComponentContribution {
    Ideal component;
    int dim = 0;
    LeVogelTower tower;
    LeVogelNumbers numbers;
    /// (-1)^dim Σ_k (-1)^k λ^k
    long value = 0;
};

struct GeometricEuReport {
    /// Absent when f is constant near p: then Eu_p f = Eu_p X, which needs
    /// stratification data.
    std::optional<long> value;
    bool constant_function = false;
    std::vector<ComponentContribution> components;
    PrepolarVerdict prepolar;
    /// Every decomposition step certified.
    bool decomposition_verified = true;
};

GeometricEuReport relative_euler_obstruction_report(const VarietyPresentation& variety, const Polynomial& function,
                                                    std::span<const BigRational> point,
                                                    const DecomposeOptions& options = {});

/// Eu_p f by the tower; throws for a function constant near p.
long relative_euler_obstruction_geometric(const VarietyPresentation& variety, const Polynomial& function,
                                          std::span<const BigRational> point, const DecomposeOptions& options = {});

/// Σ_i (-1)^{dim X_i} (conormal_i · im(df))_(p, d_p f); throws when the
/// intersection is not isolated at the lifted point.
long isolated_cnr_euler(const VarietyPresentation& variety, const Polynomial& function,
                        std::span<const BigRational> point, const DecomposeOptions& options = {});

/// (p, d_p f) in the cotangent context.
RationalPoint lifted_point(const Polynomial& function, std::span<const BigRational> point);

}  // namespace eucalc
