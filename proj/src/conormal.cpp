#include "eucalc/conormal.hpp"

#include <numeric>

namespace eucalc {

namespace {

// All k-element index subsets of {0..n-1}, in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<Polynomial> minors(const std::vector<std::vector<Polynomial>>& rows, std::size_t size) {
    std::vector<Polynomial> out;
    if (rows.empty()) return out;
    const std::size_t cols = rows.front().size();
    for (const auto& r : subsets(rows.size(), size)) {
        for (const auto& c : subsets(cols, size)) {
            std::vector<std::vector<Polynomial>> m;
            for (auto i : r) {
                std::vector<Polynomial> row;
                for (auto j : c) row.push_back(rows[i][j]);
                m.push_back(std::move(row));
            }
            Polynomial d = determinant(m);
            if (!d.is_zero()) out.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace

Polynomial determinant(const std::vector<std::vector<Polynomial>>& matrix) {
    const std::size_t n = matrix.size();
    if (n == 0) throw Error("determinant of an empty matrix");
    if (n == 1) return matrix[0][0];
    if (n == 2) return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    Polynomial sum(matrix[0][0].context());
    for (std::size_t j = 0; j < n; ++j) {
        if (matrix[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Polynomial> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) row.push_back(matrix[i][k]);
            }
            sub.push_back(std::move(row));
        }
        const Polynomial term = matrix[0][j] * determinant(sub);
        sum = j % 2 ? sum - term : sum + term;
    }
    return sum;
}

VarietyPresentation::VarietyPresentation(VariableContext context, std::vector<Polynomial> generators,
                                         std::optional<ComponentCycle> components)
    : context_(std::move(context)), generators_(std::move(generators)), components_(std::move(components)) {
    if (context_.has_cotangent_split()) throw Error("a variety lives in a base context without covector variables");
    for (const auto& g : generators_) {
        if (g.is_zero()) throw Error("variety generators must be nonzero");
        if (!(g.context() == context_)) throw Error("generator " + g.to_string() + " lives in a different context");
    }
    if (components_) {
        if (!(components_->context() == context_)) throw Error("components live in a different context");
        for (const auto& c : components_->components()) {
            for (const auto& g : generators_) {
                if (!c.prime.contains(g)) {
                    throw Error("component V" + c.prime.to_string() + " is not contained in V(" + g.to_string() + ")");
                }
            }
        }
    }
}

ComponentCycle VarietyPresentation::components(const DecomposeOptions& options) const {
    if (components_) return *components_;
    return decompose_ideal(ideal(), options);
}

VariableContext VarietyPresentation::cotangent_context() const { return VariableContext::cotangent(context_.names()); }

Polynomial FunctionGerm::normalized() const {
    return function - Polynomial(function.context(), function.evaluate(base_point));
}

std::vector<ConormalPiece> conormal_pieces(const VarietyPresentation& variety, const DecomposeOptions& options) {
    const VariableContext cot = variety.cotangent_context();
    const std::size_t n = variety.context().arity();
    std::vector<ConormalPiece> out;
    const ComponentCycle components = variety.components(options);
    for (const auto& comp : components.components()) {
        const int dim = krull_dimension(comp.prime);
        const std::size_t codim = n - static_cast<std::size_t>(dim);
        std::vector<Polynomial> gens;
        for (const auto& g : comp.prime.basis()) gens.push_back(g.rename_into(cot));

        std::vector<std::vector<Polynomial>> jac;
        for (const auto& g : gens) {
            std::vector<Polynomial> row;
            for (std::size_t i = 0; i < n; ++i) row.push_back(g.derivative(i));
            jac.push_back(std::move(row));
        }
        auto with_w = jac;
        std::vector<Polynomial> wrow;
        for (std::size_t i = 0; i < n; ++i) wrow.push_back(Polynomial::variable(cot, cot.cotangent_index(i)));
        with_w.push_back(std::move(wrow));

        std::vector<Polynomial> eqs = gens;
        for (auto& m : minors(with_w, codim + 1)) eqs.push_back(std::move(m));
        Ideal conormal(cot, eqs);
        if (codim > 0) {
            std::vector<Polynomial> sing = gens;
            for (auto& m : minors(jac, codim)) sing.push_back(std::move(m));
            conormal = saturate(conormal, Ideal(cot, sing));
        }
        if (conormal.is_unit() || krull_dimension(conormal) != static_cast<int>(n)) {
            throw Error("conormal of V" + comp.prime.to_string() + " does not have dimension " + std::to_string(n));
        }
        out.push_back(ConormalPiece{comp.prime, dim, conormal.reduced(), comp.verified});
    }
    return out;
}

ComponentCycle conormal_cycle(const VarietyPresentation& variety, const DecomposeOptions& options) {
    const VariableContext cot = variety.cotangent_context();
    ComponentCycle out(cot);
    for (const auto& piece : conormal_pieces(variety, options)) {
        out.add(CycleComponent{piece.conormal, 1, static_cast<int>(cot.base_arity()), piece.verified});
    }
    return out;
}

Ideal im_df_ideal(const Polynomial& function, const VariableContext& cotangent) {
    if (!cotangent.has_cotangent_split()) throw Error("im(df) needs a cotangent context");
    const Polynomial f = function.rename_into(cotangent);
    std::vector<Polynomial> gens;
    for (std::size_t i = 0; i < cotangent.base_arity(); ++i) {
        gens.push_back(Polynomial::variable(cotangent, cotangent.cotangent_index(i)) - f.derivative(i));
    }
    return Ideal(cotangent, std::move(gens));
}

CriticalLocus cnr_critical_locus(const std::vector<ConormalPiece>& pieces, const Polynomial& function) {
    const VariableContext base = function.context();
    CriticalLocus out{{}, Ideal::unit(base)};
    bool first = true;
    for (const auto& piece : pieces) {
        const VariableContext& cot = piece.conormal.context();
        const Polynomial f = function.rename_into(cot);
        std::vector<Polynomial> images;
        for (std::size_t i = 0; i < cot.arity(); ++i) images.push_back(Polynomial::variable(cot, i));
        for (std::size_t i = 0; i < cot.base_arity(); ++i) images[cot.cotangent_index(i)] = f.derivative(i);
        std::vector<Polynomial> gens;
        for (const auto& g : piece.conormal.basis()) gens.push_back(g.compose(images).rename_into(base));
        Ideal local = Ideal(base, std::move(gens)).reduced();
        out.combined = first ? local : intersect(out.combined, local);
        first = false;
        out.per_component.push_back(std::move(local));
    }
    return out;
}

CriticalLocus cnr_critical_locus(const VarietyPresentation& variety, const Polynomial& function,
                                 const DecomposeOptions& options) {
    return cnr_critical_locus(conormal_pieces(variety, options), function);
}

}  // namespace eucalc
