#pragma once

#include "eucalc/cycles.hpp"

#include <optional>
#include <vector>

namespace eucalc {

/// Affine variety V(generators) in a base context (no cotangent block).
class VarietyPresentation {
public:
    /// Throws when a generator is zero, the context carries a cotangent split,
    /// or a supplied component does not lie in V(generators).
    VarietyPresentation(VariableContext context, std::vector<Polynomial> generators,
                        std::optional<ComponentCycle> components = std::nullopt);

    const VariableContext& context() const noexcept { return context_; }
    const std::vector<Polynomial>& generators() const noexcept { return generators_; }
    Ideal ideal() const { return Ideal(context_, generators_); }
    /// Supplied components, or decompose_ideal of the generated ideal.
    ComponentCycle components(const DecomposeOptions& options = {}) const;
    /// Context (z0..zn, w0..wn) over this base.
    VariableContext cotangent_context() const;

private:
    VariableContext context_;
    std::vector<Polynomial> generators_;
    std::optional<ComponentCycle> components_;
};

struct FunctionGerm {
    Polynomial function;
    RationalPoint base_point;

    /// function - function(base_point)
    Polynomial normalized() const;
};

/// Conormal closure over the regular part of one irreducible component.
struct ConormalPiece {
    Ideal component;
    int component_dim = 0;
    Ideal conormal;
    bool verified = true;
};

std::vector<ConormalPiece> conormal_pieces(const VarietyPresentation& variety, const DecomposeOptions& options = {});

/// Sum over irreducible components of the conormal closure of their regular
/// parts, each with multiplicity one, in the cotangent context.
ComponentCycle conormal_cycle(const VarietyPresentation& variety, const DecomposeOptions& options = {});

/// (w_i - df/dz_i) in `cotangent`; `function` lives in its base context.
Ideal im_df_ideal(const Polynomial& function, const VariableContext& cotangent);

struct CriticalLocus {
    /// One ideal per conormal component (the unit ideal when it misses the graph).
    std::vector<Ideal> per_component;
    /// Intersection of the per-component ideals.
    Ideal combined;
};

/// Projection of conormal ∩ im(df) to the base.
CriticalLocus cnr_critical_locus(const VarietyPresentation& variety, const Polynomial& function,
                                 const DecomposeOptions& options = {});
CriticalLocus cnr_critical_locus(const std::vector<ConormalPiece>& pieces, const Polynomial& function);

/// Determinant by cofactor expansion; intended for small matrices.
Polynomial determinant(const std::vector<std::vector<Polynomial>>& matrix);

}  // namespace eucalc
