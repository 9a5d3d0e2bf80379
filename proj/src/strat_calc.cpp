#include "eucalc/strat_calc.hpp"

#include <algorithm>
#include <numeric>

namespace eucalc {

namespace {

BigInt sign(int dim) { return dim % 2 ? BigInt(-1) : BigInt(1); }

void same_size(std::size_t a, std::size_t b) {
    if (a != b) throw Error("operands live on different stratifications");
}

}  // namespace

StratifiedSpace::StratifiedSpace(std::vector<Stratum> strata,
                                 const std::vector<std::pair<std::string, std::string>>& closure)
    : strata_(std::move(strata)) {
    const std::size_t n = strata_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (strata_[i].dim < 0) throw Error("stratum " + strata_[i].name + " has negative dimension");
        for (std::size_t j = 0; j < i; ++j) {
            if (strata_[i].name == strata_[j].name) throw Error("duplicate stratum " + strata_[i].name);
        }
    }
    order_.assign(n, std::vector<bool>(n, false));
    for (const auto& [low, high] : closure) {
        const std::size_t a = index_of(low), b = index_of(high);
        if (strata_[a].dim >= strata_[b].dim) {
            throw Error("closure pair (" + low + ", " + high + ") does not drop dimension");
        }
        order_[a][b] = true;
    }
    // Transitive closure; dimensions strictly increase along pairs, so no cycles.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!order_[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (order_[k][j]) order_[i][j] = true;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool covered = strata_[i].component_open;
        for (std::size_t j = 0; j < n && !covered; ++j) covered = order_[i][j] && strata_[j].component_open;
        if (!covered) throw Error("stratum " + strata_[i].name + " lies below no component-open stratum");
    }
}

std::size_t StratifiedSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < strata_.size(); ++i) {
        if (strata_[i].name == name) return i;
    }
    throw Error("unknown stratum " + name);
}

std::vector<std::size_t> StratifiedSpace::by_decreasing_dim() const {
    std::vector<std::size_t> idx(strata_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return strata_[a].dim > strata_[b].dim; });
    return idx;
}

std::vector<std::pair<std::size_t, std::size_t>> StratifiedSpace::closure_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            if (order_[i][j]) out.emplace_back(i, j);
        }
    }
    return out;
}

bool StratifiedSpace::operator==(const StratifiedSpace& other) const {
    if (size() != other.size() || order_ != other.order_) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        const auto &a = strata_[i], &b = other.strata_[i];
        if (a.name != b.name || a.dim != b.dim || a.component_open != b.component_open) return false;
    }
    return true;
}

LinkData::LinkData(const StratifiedSpace& space) : size_(space.size()) {}

void LinkData::set(std::size_t low, std::size_t high, BigInt chi) {
    if (low >= size_ || high >= size_) throw Error("link entry outside the stratification");
    chi_[{low, high}] = std::move(chi);
}

const BigInt& LinkData::get(std::size_t low, std::size_t high) const {
    auto it = chi_.find({low, high});
    if (it == chi_.end()) throw Error("missing link Euler characteristic");
    return it->second;
}

void LinkData::require_total(const StratifiedSpace& space) const {
    same_size(size_, space.size());
    for (const auto& [a, b] : space.closure_pairs()) {
        if (!chi_.count({a, b})) {
            throw Error("missing link Euler characteristic for (" + space.stratum(a).name + ", " +
                        space.stratum(b).name + ")");
        }
    }
    for (const auto& [key, value] : chi_) {
        if (!space.below(key.first, key.second)) {
            throw Error("link value given for (" + space.stratum(key.first).name + ", " +
                        space.stratum(key.second).name + ") which is not a closure pair");
        }
    }
}

ConstructibleFunction constant_function(const StratifiedSpace& space, const BigInt& value) {
    return {std::vector<BigInt>(space.size(), value)};
}

CCCoefficients cc_of_function(const StratifiedSpace& space, const LinkData& links, const ConstructibleFunction& alpha) {
    links.require_total(space);
    same_size(space.size(), alpha.values.size());
    CCCoefficients c{std::vector<BigInt>(space.size(), BigInt(0))};
    for (std::size_t low = 0; low < space.size(); ++low) {
        BigInt acc = alpha.values[low];
        for (std::size_t high = 0; high < space.size(); ++high) {
            if (space.below(low, high)) acc -= links.get(low, high) * alpha.values[high];
        }
        c.coeffs[low] = sign(space.stratum(low).dim) * acc;
    }
    return c;
}

std::vector<std::vector<BigInt>> closure_euler_obstructions(const StratifiedSpace& space, const LinkData& links) {
    links.require_total(space);
    const std::size_t n = space.size();
    std::vector<std::vector<BigInt>> eu(n, std::vector<BigInt>(n, BigInt(0)));
    const auto order = space.by_decreasing_dim();
    for (std::size_t top = 0; top < n; ++top) {
        eu[top][top] = 1;
        for (auto low : order) {
            if (!space.below(low, top)) continue;
            BigInt acc = 0;
            for (std::size_t mid = 0; mid < n; ++mid) {
                if (space.below(low, mid) && (mid == top || space.below(mid, top))) acc += links.get(low, mid) * eu[mid][top];
            }
            eu[low][top] = acc;
        }
    }
    return eu;
}

ConstructibleFunction function_from_cc(const StratifiedSpace& space, const LinkData& links, const CCCoefficients& c) {
    same_size(space.size(), c.coeffs.size());
    const auto eu = closure_euler_obstructions(space, links);
    ConstructibleFunction alpha{std::vector<BigInt>(space.size(), BigInt(0))};
    for (std::size_t p = 0; p < space.size(); ++p) {
        for (std::size_t s = 0; s < space.size(); ++s) {
            if (s == p || space.below(p, s)) alpha.values[p] += sign(space.stratum(s).dim) * c.coeffs[s] * eu[p][s];
        }
    }
    return alpha;
}

ConstructibleFunction euler_obstruction_links(const StratifiedSpace& space, const LinkData& links) {
    links.require_total(space);
    ConstructibleFunction eu{std::vector<BigInt>(space.size(), BigInt(0))};
    for (auto s : space.by_decreasing_dim()) {
        if (space.stratum(s).component_open) {
            eu.values[s] = 1;
            continue;
        }
        bool any = false;
        BigInt acc = 0;
        for (std::size_t high = 0; high < space.size(); ++high) {
            if (!space.below(s, high)) continue;
            any = true;
            acc += links.get(s, high) * eu.values[high];
        }
        if (!any) throw Error("stratum " + space.stratum(s).name + " has no higher neighbours and is not component-open");
        eu.values[s] = acc;
    }
    return eu;
}

ConstructibleFunction characteristic_function(const StratifiedSpace& space, const LinkData& links) {
    links.require_total(space);
    // Solve cc_of_function(α) = target by downward induction on dimension.
    ConstructibleFunction alpha{std::vector<BigInt>(space.size(), BigInt(0))};
    for (auto s : space.by_decreasing_dim()) {
        const int dim = space.stratum(s).dim;
        const BigInt target = space.stratum(s).component_open ? sign(dim) : BigInt(0);
        BigInt acc = sign(dim) * target;
        for (std::size_t high = 0; high < space.size(); ++high) {
            if (space.below(s, high)) acc += links.get(s, high) * alpha.values[high];
        }
        alpha.values[s] = acc;
    }
    return alpha;
}

BigInt relative_euler_obstruction_chi(const StratifiedSpace& space, const LinkData& links, const MilnorData& milnor) {
    same_size(space.size(), milnor.chi_fiber.size());
    const auto eu = euler_obstruction_links(space, links);
    BigInt out = eu.values.at(milnor.point_stratum);
    for (std::size_t s = 0; s < space.size(); ++s) out -= milnor.chi_fiber[s] * eu.values[s];
    return out;
}

NearbyVanishing nearby_vanishing_chi(const StratifiedSpace& space, const ConstructibleFunction& alpha,
                                     const MilnorData& milnor) {
    same_size(space.size(), alpha.values.size());
    same_size(space.size(), milnor.chi_fiber.size());
    BigInt nearby = 0;
    for (std::size_t s = 0; s < space.size(); ++s) nearby += milnor.chi_fiber[s] * alpha.values[s];
    return {nearby, nearby - alpha.values.at(milnor.point_stratum)};
}

CCCoefficients shift(const CCCoefficients& c, long j) {
    CCCoefficients out = c;
    if (j % 2 != 0) {
        for (auto& v : out.coeffs) v = -v;
    }
    return out;
}

CCCoefficients add(const CCCoefficients& a, const CCCoefficients& b) {
    same_size(a.coeffs.size(), b.coeffs.size());
    CCCoefficients out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
    return out;
}

ConstructibleFunction add(const ConstructibleFunction& a, const ConstructibleFunction& b) {
    same_size(a.values.size(), b.values.size());
    ConstructibleFunction out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

ConstructibleFunction subtract(const ConstructibleFunction& a, const ConstructibleFunction& b) {
    same_size(a.values.size(), b.values.size());
    ConstructibleFunction out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

ConstructibleFunction union_function(const ConstructibleFunction& y, const ConstructibleFunction& z,
                                     const ConstructibleFunction& meet) {
    return subtract(add(y, z), meet);
}

ConstructibleFunction closed_indicator(const StratifiedSpace& space, const std::vector<std::string>& tops) {
    ConstructibleFunction out{std::vector<BigInt>(space.size(), BigInt(0))};
    for (const auto& name : tops) {
        const std::size_t t = space.index_of(name);
        for (std::size_t s = 0; s < space.size(); ++s) {
            if (s == t || space.below(s, t)) out.values[s] = 1;
        }
    }
    return out;
}

Slice slice(const StratifiedSpace& space, const LinkData& links, const CCCoefficients& c, std::size_t base) {
    links.require_total(space);
    same_size(space.size(), c.coeffs.size());
    const int drop = space.stratum(base).dim;
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < space.size(); ++s) {
        if (s == base || space.below(base, s)) keep.push_back(s);
    }
    std::vector<Stratum> strata;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto s : keep) {
        Stratum st = space.stratum(s);
        st.dim -= drop;
        if (st.component_dim) *st.component_dim -= drop;
        strata.push_back(st);
        for (auto t : keep) {
            if (space.below(s, t)) pairs.emplace_back(space.stratum(s).name, space.stratum(t).name);
        }
    }
    Slice out{StratifiedSpace(strata, pairs), LinkData(StratifiedSpace()), {}, keep};
    out.links = LinkData(out.space);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.coeffs.coeffs.push_back(c.coeffs[keep[i]]);
        for (std::size_t j = 0; j < keep.size(); ++j) {
            if (space.below(keep[i], keep[j])) out.links.set(i, j, links.get(keep[i], keep[j]));
        }
    }
    return out;
}

ProductSpace product(const StratifiedSpace& x, const LinkData& lx, const StratifiedSpace& y, const LinkData& ly) {
    lx.require_total(x);
    ly.require_total(y);
    std::vector<Stratum> strata;
    std::vector<std::pair<std::size_t, std::size_t>> factors;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            const auto &a = x.stratum(i), &b = y.stratum(j);
            Stratum s{a.name + "*" + b.name, a.dim + b.dim, a.component_open && b.component_open, std::nullopt};
            if (s.component_open) s.component_dim = a.component_dim.value_or(a.dim) + b.component_dim.value_or(b.dim);
            strata.push_back(std::move(s));
            factors.emplace_back(i, j);
        }
    }
    auto weak = [](const StratifiedSpace& sp, std::size_t a, std::size_t b) { return a == b || sp.below(a, b); };
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t p = 0; p < factors.size(); ++p) {
        for (std::size_t q = 0; q < factors.size(); ++q) {
            if (p == q) continue;
            const auto [i0, j0] = factors[p];
            const auto [i1, j1] = factors[q];
            if (weak(x, i0, i1) && weak(y, j0, j1)) pairs.emplace_back(strata[p].name, strata[q].name);
        }
    }
    ProductSpace out{StratifiedSpace(strata, pairs), LinkData(StratifiedSpace()), factors};
    out.links = LinkData(out.space);
    for (const auto& [p, q] : out.space.closure_pairs()) {
        const auto [i0, j0] = factors[p];
        const auto [i1, j1] = factors[q];
        if (i0 == i1) out.links.set(p, q, ly.get(j0, j1));
        else if (j0 == j1) out.links.set(p, q, lx.get(i0, i1));
        else out.links.set(p, q, -lx.get(i0, i1) * ly.get(j0, j1));
    }
    return out;
}

CCCoefficients product_coefficients(const ProductSpace& p, const CCCoefficients& a, const CCCoefficients& b) {
    CCCoefficients out;
    for (const auto& [i, j] : p.factors) out.coeffs.push_back(a.coeffs.at(i) * b.coeffs.at(j));
    return out;
}

ConstructibleFunction product_function(const ProductSpace& p, const ConstructibleFunction& a,
                                       const ConstructibleFunction& b) {
    ConstructibleFunction out;
    for (const auto& [i, j] : p.factors) out.values.push_back(a.values.at(i) * b.values.at(j));
    return out;
}

BigInt product_relative_euler(const BigInt& eu_f, const BigInt& eu_g) { return eu_f * eu_g; }

BigInt json_integer(const nlohmann::json& value, const std::string& where) {
    if (value.is_number_integer()) {
        return value.is_number_unsigned() ? BigInt(std::to_string(value.get<std::uint64_t>()))
                                          : BigInt(std::to_string(value.get<std::int64_t>()));
    }
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        const bool ok = !s.empty() && std::all_of(s.begin() + (s[0] == '-' ? 1 : 0), s.end(), [](char ch) {
            return ch >= '0' && ch <= '9';
        }) && s != "-";
        if (ok) return BigInt(s);
    }
    throw Error(where + ": expected an exact integer, got " + value.dump());
}

StratificationFile stratification_from_json(const nlohmann::json& data) {
    if (!data.is_object()) throw Error("stratification: expected an object");
    if (!data.contains("strata") || !data["strata"].is_array()) throw Error("stratification: missing strata array");
    std::vector<Stratum> strata;
    for (const auto& s : data["strata"]) {
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string() || !s.contains("dim")) {
            throw Error("stratification: each stratum needs a name and a dim");
        }
        Stratum st;
        st.name = s["name"].get<std::string>();
        st.dim = static_cast<int>(json_integer(s["dim"], "dim of " + st.name).get_si());
        if (s.contains("component_open")) {
            if (!s["component_open"].is_boolean()) throw Error("component_open of " + st.name + " must be a boolean");
            st.component_open = s["component_open"].get<bool>();
        }
        if (s.contains("component_dim") && !s["component_dim"].is_null()) {
            st.component_dim = static_cast<int>(json_integer(s["component_dim"], "component_dim of " + st.name).get_si());
        }
        strata.push_back(std::move(st));
    }
    std::vector<std::pair<std::string, std::string>> closure;
    if (data.contains("closure")) {
        for (const auto& pair : data["closure"]) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                throw Error("stratification: closure entries are [lower, higher] name pairs");
            }
            closure.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
        }
    }
    StratificationFile file{StratifiedSpace(strata, closure), LinkData(StratifiedSpace()), std::nullopt};
    file.links = LinkData(file.space);
    if (data.contains("link_chi")) {
        if (!data["link_chi"].is_object()) throw Error("stratification: link_chi must be an object");
        for (const auto& [low, row] : data["link_chi"].items()) {
            if (!row.is_object()) throw Error("stratification: link_chi." + low + " must be an object");
            for (const auto& [high, v] : row.items()) {
                file.links.set(file.space.index_of(low), file.space.index_of(high),
                               json_integer(v, "link_chi." + low + "." + high));
            }
        }
    }
    file.links.require_total(file.space);
    if (data.contains("milnor_chi") && !data["milnor_chi"].is_null()) {
        const auto& m = data["milnor_chi"];
        if (!m.contains("point_stratum") || !m["point_stratum"].is_string()) {
            throw Error("stratification: milnor_chi needs point_stratum");
        }
        MilnorData md;
        md.point_stratum = file.space.index_of(m["point_stratum"].get<std::string>());
        md.chi_fiber.assign(file.space.size(), BigInt(0));
        if (m.contains("values")) {
            for (const auto& [name, v] : m["values"].items()) {
                const std::size_t s = file.space.index_of(name);
                BigInt value = json_integer(v, "milnor_chi.values." + name);
                if (value != 0 && s != md.point_stratum && !file.space.below(md.point_stratum, s)) {
                    throw Error("milnor_chi.values." + name + ": stratum does not contain the point in its closure");
                }
                md.chi_fiber[s] = std::move(value);
            }
        }
        file.milnor = std::move(md);
    }
    return file;
}

nlohmann::json stratification_to_json(const StratificationFile& file) {
    nlohmann::json out;
    out["strata"] = nlohmann::json::array();
    for (const auto& s : file.space.strata()) {
        nlohmann::json e{{"name", s.name}, {"dim", s.dim}, {"component_open", s.component_open}};
        if (s.component_dim) e["component_dim"] = *s.component_dim;
        out["strata"].push_back(e);
    }
    out["closure"] = nlohmann::json::array();
    for (const auto& [a, b] : file.space.closure_pairs()) {
        out["closure"].push_back({file.space.stratum(a).name, file.space.stratum(b).name});
    }
    out["link_chi"] = nlohmann::json::object();
    for (const auto& [key, v] : file.links.values()) {
        out["link_chi"][file.space.stratum(key.first).name][file.space.stratum(key.second).name] = to_string(v);
    }
    if (file.milnor) {
        nlohmann::json values = nlohmann::json::object();
        for (std::size_t s = 0; s < file.space.size(); ++s) {
            if (file.milnor->chi_fiber[s] != 0) values[file.space.stratum(s).name] = to_string(file.milnor->chi_fiber[s]);
        }
        out["milnor_chi"] = {{"point_stratum", file.space.stratum(file.milnor->point_stratum).name}, {"values", values}};
    }
    return out;
}

}  // namespace eucalc
