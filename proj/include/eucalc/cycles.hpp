#pragma once

#include "eucalc/ideal.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eucalc {

struct CycleComponent {
    Ideal prime;
    long multiplicity = 0;
    int dim = 0;
    /// False when irreducibility of `prime` could not be certified.
    bool verified = true;
};

/// Formal integer combination of irreducible subvarieties. Components are
/// kept pairwise distinct; adding an equal prime merges multiplicities.
class ComponentCycle {
public:
    explicit ComponentCycle(VariableContext context) : context_(std::move(context)) {}

    const VariableContext& context() const noexcept { return context_; }
    const std::vector<CycleComponent>& components() const noexcept { return components_; }
    bool is_zero() const noexcept { return components_.empty(); }
    /// All components certified.
    bool verified() const noexcept;
    long total_multiplicity() const noexcept;

    void add(CycleComponent component);
    ComponentCycle operator+(const ComponentCycle& other) const;
    ComponentCycle scaled(long factor) const;
    /// Same components (prime equality of reduced bases) with the same multiplicities.
    bool operator==(const ComponentCycle& other) const;

    std::string to_string() const;

private:
    VariableContext context_;
    std::vector<CycleComponent> components_;
};

struct DecomposeOptions {
    std::uint64_t seed = 0;
};

/// Minimal primes of I with multiplicities. Components whose primality could
/// not be certified carry verified = false. Throws when the multiplicity
/// estimates from the two seeds disagree.
ComponentCycle decompose_ideal(const Ideal& ideal, const DecomposeOptions& options = {});

/// Minimal primes only (no multiplicities), each with its certification flag.
std::vector<std::pair<Ideal, bool>> minimal_primes(const Ideal& ideal);

/// Sum over components of m * decompose(P + (h)). Throws on improper intersection.
ComponentCycle intersect_hypersurface(const ComponentCycle& cycle, const Polynomial& h,
                                      const DecomposeOptions& options = {});

/// Components whose prime contains J go to `first`, the rest to `second`.
std::pair<ComponentCycle, ComponentCycle> split_by_subvariety(const ComponentCycle& cycle, const Ideal& subvariety);

/// Projection to the base of a cycle lying on the graph of d f. The cycle must
/// live in a cotangent context and `function` in its base context.
ComponentCycle pushforward_section(const ComponentCycle& cycle, const Polynomial& function);

/// Sum over components of m * local_colength(P + slices, p). Components not
/// passing through p contribute nothing.
long local_intersection_number(const ComponentCycle& cycle, const std::vector<Polynomial>& slices,
                               std::span<const BigRational> point);

nlohmann::json cycle_to_json(const ComponentCycle& cycle, const MonomialOrder& order = MonomialOrder::grevlex());
ComponentCycle cycle_from_json(const VariableContext& context, const nlohmann::json& data);

}  // namespace eucalc
