#include "eucalc/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace eucalc::cli {

using nlohmann::json;
using eucalc::to_string;

namespace {

const std::vector<std::pair<Command, std::string>> kCommands = {
    {Command::conormal, "conormal"},       {Command::sigma_cnr, "sigma-cnr"},
    {Command::levogel, "levogel"},         {Command::eu_rel, "eu-rel"},
    {Command::eu_rel_isolated, "eu-rel-isolated"}, {Command::strat_eu, "strat-eu"},
    {Command::strat_eu_rel, "strat-eu-rel"}, {Command::cc, "cc"},
};

struct Location {
    std::size_t line = 0, column = 0;
};

Location locate(std::string_view text, std::size_t offset) {
    Location loc{1, 1};
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++loc.line;
            loc.column = 1;
        } else {
            ++loc.column;
        }
    }
    return loc;
}

// Parsing context: raw text for locating literals, source name for messages.
struct Reader {
    std::string_view text;
    std::string source;

    [[noreturn]] void fail(const std::string& message, std::optional<std::size_t> offset = std::nullopt) const {
        if (!offset) throw InputError(source + ": " + message);
        const auto loc = locate(text, *offset);
        throw InputError(source + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message,
                         loc.line, loc.column);
    }

    // Offset of the first character inside the string literal `value`, if it occurs verbatim.
    std::optional<std::size_t> find_string(const std::string& value) const {
        const std::string quoted = json(value).dump();
        const auto pos = text.find(quoted);
        if (pos == std::string_view::npos) return std::nullopt;
        return pos + 1;
    }

    const json& member(const json& object, const std::string& key, const std::string& where) const {
        if (!object.is_object()) fail(where + " must be an object");
        if (!object.contains(key)) fail(where + " is missing \"" + key + "\"");
        return object.at(key);
    }

    std::string string_at(const json& value, const std::string& where) const {
        if (!value.is_string()) fail(where + " must be a string, got " + value.dump());
        return value.get<std::string>();
    }

    Polynomial polynomial(const VariableContext& ctx, const json& value, const std::string& where) const {
        const std::string text_value = string_at(value, where);
        try {
            return Polynomial::parse(ctx, text_value);
        } catch (const ParseError& e) {
            auto at = find_string(text_value);
            if (at) *at += e.column() - 1;
            fail(where + ": " + e.what(), at);
        }
    }

    BigRational rational(const json& value, const std::string& where) const {
        if (value.is_number_integer()) return BigRational(json_integer(value, where));
        if (value.is_string()) {
            try {
                return parse_rational(value.get<std::string>());
            } catch (const std::exception&) {
            }
        }
        fail(where + ": expected an exact rational such as \"3/4\", got " + value.dump());
    }
};

// Floating point tokens are refused outright.
void reject_floats(const Reader& reader) {
    const auto text = reader.text;
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
            continue;
        }
        if (c == '-' || (c >= '0' && c <= '9')) {
            std::size_t j = i;
            bool fractional = false;
            while (j < text.size() && std::string_view("+-0123456789.eE").find(text[j]) != std::string_view::npos) {
                if (text[j] == '.' || text[j] == 'e' || text[j] == 'E') fractional = true;
                ++j;
            }
            if (fractional) {
                reader.fail("floating point number " + std::string(text.substr(i, j - i)) +
                                " is not allowed; write exact values as strings like \"3/4\"",
                            i);
            }
            i = j - 1;
        }
    }
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

StratificationFile stratification(const Reader& reader, const json& data, const std::string& where) {
    try {
        return stratification_from_json(data);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        reader.fail(where + ": " + e.what());
    }
}

GeometricProblem geometric_problem(const Reader& r, const json& g) {
    const json& vars = r.member(g, "variables", "geometric");
    if (!vars.is_array() || vars.empty()) r.fail("geometric.variables must be a non-empty array of names");
    if (vars.size() * 2 > kMaxVariables) {
        r.fail("geometric.variables: at most " + std::to_string(kMaxVariables / 2) + " variables are supported");
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const std::string where = "geometric.variables[" + std::to_string(i) + "]";
        std::string name = r.string_at(vars[i], where);
        if (!is_identifier(name)) r.fail(where + ": '" + name + "' is not a valid variable name", r.find_string(name));
        if (std::find(names.begin(), names.end(), name) != names.end()) {
            r.fail(where + ": duplicate variable '" + name + "'", r.find_string(name));
        }
        names.push_back(std::move(name));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string reserved = "w" + std::to_string(i);
        if (std::find(names.begin(), names.end(), reserved) != names.end()) {
            r.fail("geometric.variables: '" + reserved + "' is reserved for covector coordinates", r.find_string(reserved));
        }
    }
    GeometricProblem p{VariableContext(names), {}, Polynomial(), {}, std::nullopt, std::nullopt, std::nullopt};

    const json& gens = r.member(g, "generators", "geometric");
    if (!gens.is_array()) r.fail("geometric.generators must be an array of polynomial strings");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string where = "geometric.generators[" + std::to_string(i) + "]";
        Polynomial poly = r.polynomial(p.context, gens[i], where);
        if (poly.is_zero()) r.fail(where + ": generators must be nonzero");
        p.generators.push_back(std::move(poly));
    }
    p.function = r.polynomial(p.context, r.member(g, "function", "geometric"), "geometric.function");

    const json& point = r.member(g, "point", "geometric");
    if (!point.is_array()) r.fail("geometric.point must be an array of rationals");
    if (point.size() != names.size()) {
        r.fail("geometric.point has " + std::to_string(point.size()) + " coordinates but there are " +
               std::to_string(names.size()) + " variables");
    }
    for (std::size_t i = 0; i < point.size(); ++i) p.point.push_back(r.rational(point[i], "geometric.point[" + std::to_string(i) + "]"));

    if (g.contains("seed") && !g["seed"].is_null()) {
        if (!g["seed"].is_number_integer() || g["seed"].get<long long>() < 0) {
            r.fail("geometric.seed must be a non-negative integer");
        }
        p.seed = g["seed"].get<std::uint64_t>();
    }
    if (g.contains("stratification") && !g["stratification"].is_null()) {
        p.stratification = stratification(r, g["stratification"], "geometric.stratification");
    }
    if (g.contains("point_stratum") && !g["point_stratum"].is_null()) {
        const std::string name = r.string_at(g["point_stratum"], "geometric.point_stratum");
        if (!p.stratification) r.fail("geometric.point_stratum needs geometric.stratification");
        try {
            p.stratification->space.index_of(name);
        } catch (const Error& e) {
            r.fail(std::string("geometric.point_stratum: ") + e.what(), r.find_string(name));
        }
        p.point_stratum = name;
    }
    return p;
}

StratifiedProblem stratified_problem(const Reader& r, const json& s) {
    StratifiedProblem p{stratification(r, s, "stratified"), std::nullopt, std::nullopt};
    if (!s.contains("query") || s["query"].is_null()) return p;
    const json& q = s["query"];
    if (!q.is_object()) r.fail("stratified.query must be an object");
    const auto& space = p.file.space;
    if (q.contains("point_stratum")) {
        const std::string name = r.string_at(q["point_stratum"], "stratified.query.point_stratum");
        try {
            space.index_of(name);
        } catch (const Error& e) {
            r.fail(std::string("stratified.query.point_stratum: ") + e.what(), r.find_string(name));
        }
        p.point_stratum = name;
    }
    if (q.contains("function")) {
        const json& f = q["function"];
        if (!f.is_object()) r.fail("stratified.query.function must map stratum names to integers");
        ConstructibleFunction alpha{std::vector<BigInt>(space.size(), BigInt(0))};
        std::vector<bool> seen(space.size(), false);
        for (const auto& [name, v] : f.items()) {
            std::size_t idx = 0;
            try {
                idx = space.index_of(name);
                alpha.values[idx] = json_integer(v, "stratified.query.function." + name);
            } catch (const Error& e) {
                r.fail(e.what(), r.find_string(name));
            }
            seen[idx] = true;
        }
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (!seen[i]) r.fail("stratified.query.function has no value for stratum " + space.stratum(i).name);
        }
        p.function = std::move(alpha);
    }
    return p;
}

json rational_json(const BigRational& q) { return to_string(q); }

json point_json(const RationalPoint& p) {
    json out = json::array();
    for (const auto& q : p) out.push_back(rational_json(q));
    return out;
}

json prepolar_json(const PrepolarVerdict& v) { return {{"status", to_string(v.status)}, {"reason", v.reason}}; }

json by_stratum(const StratifiedSpace& space, const std::vector<BigInt>& values) {
    json out = json::object();
    for (std::size_t i = 0; i < space.size(); ++i) out[space.stratum(i).name] = to_string(values[i]);
    return out;
}

json tower_json(const LeVogelTower& tower, const MonomialOrder& order) {
    json levels = json::array();
    for (int k = tower.top_dim; k >= 0; --k) {
        json level{{"k", k}};
        if (auto it = tower.gamma.find(k); it != tower.gamma.end()) level["gamma_hat"] = cycle_to_json(it->second, order);
        if (auto it = tower.lambda_hat.find(k); it != tower.lambda_hat.end()) {
            level["lambda_hat"] = cycle_to_json(it->second, order);
        }
        if (auto it = tower.lambda.find(k); it != tower.lambda.end()) level["lambda"] = cycle_to_json(it->second, order);
        levels.push_back(std::move(level));
    }
    return {{"top_dim", tower.top_dim}, {"levels", levels}, {"verified", tower.verified()}};
}

json numbers_json(const LeVogelNumbers& n) {
    json values = json::object();
    for (const auto& [k, v] : n.values) values[std::to_string(k)] = v;
    json out{{"lambda", values}};
    out["critical_dim"] = n.critical_dim ? json(*n.critical_dim) : json(nullptr);
    return out;
}

[[noreturn]] void wrong_kind(Command c, const char* needed) {
    throw Error("command " + to_string(c) + " needs a " + std::string(needed) + " problem");
}

Report run_geometric(const GeometricProblem& p, const RunOptions& options, json body) {
    const DecomposeOptions dopts{options.seed.value_or(p.seed.value_or(0))};
    body["seed"] = dopts.seed;
    body["variables"] = p.context.names();
    body["function"] = p.function.to_string();
    body["point"] = point_json(p.point);
    const VarietyPresentation variety(p.context, p.generators);
    const auto& order = options.order;
    Report report{std::move(body), exit_verified};
    auto flag = [&](const std::string& what) {
        report.body["flags"].push_back(what);
        report.exit_code = exit_unverified;
    };
    report.body["flags"] = json::array();

    switch (options.command) {
    case Command::conormal:
    case Command::sigma_cnr: {
        const auto pieces = conormal_pieces(variety, dopts);
        report.body["cotangent_variables"] = variety.cotangent_context().names();
        json comps = json::array();
        bool verified = true;
        for (const auto& piece : pieces) {
            comps.push_back({{"component", ideal_to_json(piece.component, order)},
                             {"dim", piece.component_dim},
                             {"conormal", ideal_to_json(piece.conormal, order)},
                             {"verified", piece.verified}});
            verified = verified && piece.verified;
        }
        report.body["components"] = comps;
        if (options.command == Command::sigma_cnr) {
            const auto locus = cnr_critical_locus(pieces, p.function);
            json per = json::array();
            for (const auto& i : locus.per_component) per.push_back(ideal_to_json(i, order));
            report.body["sigma_cnr_by_component"] = per;
            report.body["sigma_cnr"] = ideal_to_json(locus.combined, order);
            const auto d = local_dimension(locus.combined, p.point);
            report.body["local_dimension_at_point"] = d ? json(*d) : json(nullptr);
        }
        if (!verified) flag("decomposition incomplete");
        return report;
    }
    case Command::levogel:
    case Command::eu_rel: {
        const auto eu = relative_euler_obstruction_report(variety, p.function, p.point, dopts);
        report.body["constant_function"] = eu.constant_function;
        if (eu.constant_function) {
            if (options.command == Command::levogel) return report;
            if (!p.stratification || !p.point_stratum) {
                throw Error("the function is constant near the point, so Eu_p f = Eu_p X; supply "
                            "geometric.stratification and geometric.point_stratum to evaluate it");
            }
            const auto& s = *p.stratification;
            const auto values = euler_obstruction_links(s.space, s.links);
            report.body["eu"] = to_string(values.values[s.space.index_of(*p.point_stratum)]);
            report.body["delegated_to"] = "stratification";
            return report;
        }
        json comps = json::array();
        for (const auto& c : eu.components) {
            json entry{{"component", ideal_to_json(c.component, order)},
                       {"dim", c.dim},
                       {"numbers", numbers_json(c.numbers)},
                       {"contribution", c.value}};
            if (options.command == Command::levogel) entry["tower"] = tower_json(c.tower, order);
            comps.push_back(std::move(entry));
        }
        report.body["components"] = comps;
        report.body["eu"] = std::to_string(*eu.value);
        report.body["prepolar"] = prepolar_json(eu.prepolar);
        report.body["decomposition_verified"] = eu.decomposition_verified;
        if (eu.prepolar.status != PrepolarStatus::verified) flag("coordinates unverified");
        if (!eu.decomposition_verified) flag("decomposition incomplete");
        return report;
    }
    case Command::eu_rel_isolated: {
        const long value = isolated_cnr_euler(variety, p.function, p.point, dopts);
        report.body["eu"] = std::to_string(value);
        report.body["lifted_point"] = point_json(lifted_point(p.function, p.point));
        bool verified = true;
        for (const auto& piece : conormal_pieces(variety, dopts)) verified = verified && piece.verified;
        if (!verified) flag("decomposition incomplete");
        return report;
    }
    default:
        wrong_kind(options.command, "stratified");
    }
}

Report run_stratified(const StratifiedProblem& p, const RunOptions& options, json body) {
    const auto& space = p.file.space;
    const auto& links = p.file.links;
    Report report{std::move(body), exit_verified};
    switch (options.command) {
    case Command::strat_eu: {
        const auto eu = euler_obstruction_links(space, links);
        report.body["eu_by_stratum"] = by_stratum(space, eu.values);
        if (p.point_stratum) report.body["eu"] = to_string(eu.values[space.index_of(*p.point_stratum)]);
        return report;
    }
    case Command::strat_eu_rel: {
        if (!p.file.milnor) throw Error("strat-eu-rel needs milnor_chi in the stratification");
        const auto& m = *p.file.milnor;
        const auto eu = euler_obstruction_links(space, links);
        report.body["point_stratum"] = space.stratum(m.point_stratum).name;
        report.body["eu_space"] = to_string(eu.values[m.point_stratum]);
        report.body["eu"] = to_string(relative_euler_obstruction_chi(space, links, m));
        const auto nv = nearby_vanishing_chi(space, constant_function(space, 1), m);
        report.body["milnor_fibre_chi"] = to_string(nv.nearby);
        return report;
    }
    case Command::cc: {
        const auto alpha = p.function.value_or(constant_function(space, 1));
        report.body["function"] = by_stratum(space, alpha.values);
        report.body["coefficients"] = by_stratum(space, cc_of_function(space, links, alpha).coeffs);
        return report;
    }
    default:
        wrong_kind(options.command, "geometric");
    }
}

void flatten(const json& value, const std::string& path, std::ostringstream& out) {
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_object()) {
        for (const auto& [k, v] : value.items()) flatten(v, path.empty() ? k : path + "." + k, out);
    } else if (value.is_array()) {
        const bool flat = std::all_of(value.begin(), value.end(), [](const json& v) { return v.is_primitive(); });
        if (flat) {
            out << path << ": (";
            for (std::size_t i = 0; i < value.size(); ++i) out << (i ? ", " : "") << scalar(value[i]);
            out << ")\n";
        } else {
            for (std::size_t i = 0; i < value.size(); ++i) flatten(value[i], path + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out << path << ": " << scalar(value) << "\n";
    }
}

}  // namespace

InputError::InputError(const std::string& message, std::size_t line, std::size_t column)
    : Error(message), line_(line), column_(column) {}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [c, n] : kCommands) {
        if (n == name) return c;
    }
    return std::nullopt;
}

std::string to_string(Command command) {
    for (const auto& [c, n] : kCommands) {
        if (c == command) return n;
    }
    return "?";
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : kCommands) out.push_back(entry.second);
        return out;
    }();
    return names;
}

ProblemFile parse_problem(std::string_view text, const std::string& source) {
    const Reader r{text, source};
    json data;
    try {
        data = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string message = e.what();
        if (auto colon = message.find(": "); colon != std::string::npos) message = message.substr(colon + 2);
        r.fail("malformed JSON: " + message, e.byte > 0 ? e.byte - 1 : 0);
    }
    reject_floats(r);
    const std::string kind = r.string_at(r.member(data, "kind", "problem"), "kind");
    ProblemFile out;
    if (kind == "geometric") {
        out.kind = ProblemFile::Kind::geometric;
        out.geometric = geometric_problem(r, r.member(data, "geometric", "problem"));
    } else if (kind == "stratified") {
        out.kind = ProblemFile::Kind::stratified;
        out.stratified = stratified_problem(r, r.member(data, "stratified", "problem"));
    } else {
        r.fail("kind must be \"geometric\" or \"stratified\", got \"" + kind + "\"", r.find_string(kind));
    }
    return out;
}

ProblemFile load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string() + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str(), path.string());
}

json ideal_to_json(const Ideal& ideal, const MonomialOrder& order) {
    json out = json::array();
    for (const auto& g : ideal.basis(order)) out.push_back(g.to_string());
    return out;
}

Report run(const ProblemFile& problem, const RunOptions& options) {
    json body{{"command", to_string(options.command)}, {"input", options.input.string()}};
    if (problem.kind == ProblemFile::Kind::geometric) return run_geometric(*problem.geometric, options, std::move(body));
    return run_stratified(*problem.stratified, options, std::move(body));
}

std::string render_text(const json& body) {
    std::ostringstream out;
    flatten(body, "", out);
    return out.str();
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relative Euler obstructions: geometric and stratified pipelines", "eucalc"};
    std::string command, input, order = "grevlex";
    std::optional<std::uint64_t> seed;
    bool as_json = false;
    app.add_option("command", command, "One of: conormal, sigma-cnr, levogel, eu-rel, eu-rel-isolated, "
                                       "strat-eu, strat-eu-rel, cc")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--input", input, "Problem file (JSON)")->required();
    app.add_option("--seed", seed, "Seed for all genericity draws (default: the file's seed, else 0)");
    app.add_option("--order", order, "Monomial order for printed bases")->check(CLI::IsMember({"lex", "grevlex"}));
    app.add_flag("--json", as_json, "Emit a deterministic JSON report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_verified;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }

    RunOptions options;
    options.command = *parse_command(command);
    options.input = input;
    options.seed = seed;
    options.order = order == "lex" ? MonomialOrder::lex() : MonomialOrder::grevlex();

    const auto start = std::chrono::steady_clock::now();
    try {
        Report report = run(load_problem(options.input), options);
        if (as_json) {
            out << report.body.dump(2) << "\n";
        } else {
            const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            report.body["elapsed_ms"] = static_cast<long>(ms);
            out << render_text(report.body);
        }
        return report.exit_code;
    } catch (const std::exception& e) {
        if (as_json) out << json{{"command", command}, {"input", input}, {"error", e.what()}}.dump(2) << "\n";
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
}

}  // namespace eucalc::cli
