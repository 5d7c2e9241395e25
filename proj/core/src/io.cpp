#include "starmetric/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "starmetric/construct.hpp"
#include "starmetric/errors.hpp"

namespace starmetric {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(field);
    }
    return out;
}

double parse_number(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + s + "' in " + where);
    }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return j;
}

DefinerExpr expr_from_json(const json& spec) {
    if (!spec.is_object()) throw ParseError("definer expression must be an object");
    if (spec.contains("var")) {
        const std::string v = spec.at("var").get<std::string>();
        if (v == "a") return DefinerExpr::var_a();
        if (v == "b") return DefinerExpr::var_b();
        throw ParseError("expression var must be 'a' or 'b'");
    }
    if (spec.contains("const")) return DefinerExpr::constant(spec.at("const").get<double>());
    const std::string op = spec.value("op", "");
    std::vector<DefinerExpr> args;
    for (const auto& a : spec.value("args", json::array())) args.push_back(expr_from_json(a));
    if (op == "sum") return DefinerExpr::sum(std::move(args));
    if (op == "max") return DefinerExpr::max(std::move(args));
    if (op == "power") return DefinerExpr::power(spec.at("p").get<double>(), std::move(args));
    if (op == "abs_diff") {
        if (args.size() != 2) throw ParseError("abs_diff needs exactly two args");
        return DefinerExpr::abs_diff(std::move(args[0]), std::move(args[1]));
    }
    throw ParseError("unknown expression node: " + spec.dump());
}

TDefiner definer_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind")) {
        throw ParseError("definer spec needs a 'kind' field");
    }
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "lukasiewicz") return TDefiner::lukasiewicz();
    if (kind == "maximum") return TDefiner::maximum();
    if (kind == "power") return TDefiner::power(spec.at("p").get<double>());
    if (kind == "composed") {
        return TDefiner::composed(expr_from_json(spec.at("expr")), spec.value("description", ""));
    }
    throw ParseError("unknown definer kind: " + kind);
}

namespace {

json expr_to_json(const DefinerExpr& e) {
    using Node = DefinerExpr::Node;
    switch (e.node) {
        case Node::VarA: return json{{"var", "a"}};
        case Node::VarB: return json{{"var", "b"}};
        case Node::Const: return json{{"const", e.value}};
        default: break;
    }
    json args = json::array();
    for (const auto& ch : e.children) args.push_back(expr_to_json(ch));
    switch (e.node) {
        case Node::Sum: return json{{"op", "sum"}, {"args", args}};
        case Node::Max: return json{{"op", "max"}, {"args", args}};
        case Node::Power: return json{{"op", "power"}, {"p", e.value}, {"args", args}};
        case Node::AbsDiff: return json{{"op", "abs_diff"}, {"args", args}};
        default: return json{};
    }
}

}  // namespace

json definer_to_json(const TDefiner& def) {
    switch (def.kind()) {
        case TDefiner::Kind::Lukasiewicz: return json{{"kind", "lukasiewicz"}};
        case TDefiner::Kind::Maximum: return json{{"kind", "maximum"}};
        case TDefiner::Kind::Power: return json{{"kind", "power"}, {"p", def.power_exponent()}};
        case TDefiner::Kind::Composed:
            return json{{"kind", "composed"},
                        {"expr", expr_to_json(*def.expression())},
                        {"description", def.description()}};
    }
    return json{};
}

StarSpace vector_csv_space(const std::filesystem::path& path, TDefiner def,
                           const std::string& metric) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "id") {
        throw ParseError(path.string() + ":1: header must start with 'id'");
    }
    const std::size_t dims = header.size() - 1;
    if (dims == 0) throw ParseError(path.string() + ": no coordinate columns");

    std::vector<std::string> ids;
    std::vector<std::vector<double>> coords;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != dims + 1) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(dims + 1) + " fields, got " +
                             std::to_string(fields.size()));
        }
        ids.push_back(fields[0]);
        std::vector<double> row(dims);
        for (std::size_t k = 0; k < dims; ++k) {
            row[k] = parse_number(fields[k + 1],
                                  path.string() + ":" + std::to_string(lineno) + " column " +
                                      header[k + 1]);
        }
        coords.push_back(std::move(row));
    }

    if (metric == "euclidean") return StarSpace::euclidean(std::move(coords), std::move(def), std::move(ids));
    if (metric == "sqrt_diff") {
        if (dims != 1) throw ParseError("sqrt_diff needs one coordinate column");
        std::vector<double> values;
        for (const auto& row : coords) values.push_back(row[0]);
        return StarSpace::sqrt_diff(std::move(values), std::move(def), std::move(ids));
    }
    if (metric == "discrete") return StarSpace::discrete(std::move(ids), std::move(def));
    throw ParseError("metric '" + metric + "' cannot load vector CSV data");
}

StarSpace matrix_csv_space(const std::filesystem::path& path, TDefiner def) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw ParseError(path.string() + ": empty file");

    std::vector<std::string> ids;
    std::size_t first_data_row = 0, first_data_col = 0;
    if (rows[0][0] == "id") {  // labeled form
        ids.assign(rows[0].begin() + 1, rows[0].end());
        first_data_row = 1;
        first_data_col = 1;
    }
    const std::size_t n = rows.size() - first_data_row;
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + first_data_row];
        if (row.size() != n + first_data_col) {
            throw ParseError(path.string() + ":" + std::to_string(i + first_data_row + 1) +
                             ": matrix is not square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            matrix[i][j] = parse_number(row[j + first_data_col],
                                        path.string() + ":" + std::to_string(i + first_data_row + 1));
        }
    }
    return StarSpace::explicit_matrix(std::move(matrix), std::move(def), std::move(ids));
}

StarSpace LoadedSpace::materialize(std::size_t samples, std::uint64_t seed,
                                   double sample_hi) const {
    if (finite) return *finite;
    return analytic->sample_space(samples, seed, sample_hi);
}

namespace {

LoadedSpace space_from_json_impl(const json& spec, const std::filesystem::path& base);

LoadedSpace resolve_sub(const json& sub, const std::filesystem::path& base) {
    if (sub.is_string()) {
        const std::filesystem::path p = base / sub.get<std::string>();
        return space_from_json_impl(read_json_file(p), p.parent_path());
    }
    return space_from_json_impl(sub, base);
}

StarSpace finite_sub(const json& sub, const std::filesystem::path& base, const char* what) {
    LoadedSpace ls = resolve_sub(sub, base);
    if (!ls.finite) throw ParseError(std::string(what) + " needs finite spaces");
    return *ls.finite;
}

LoadedSpace space_from_json_impl(const json& spec, const std::filesystem::path& base) {
    if (!spec.is_object()) throw ParseError("space spec must be an object or path string");

    if (spec.contains("analytic")) {
        const std::string which = spec.at("analytic").get<std::string>();
        LoadedSpace out;
        if (which == "sqrt_diff_halfline") {
            out.analytic = AnalyticSpace::sqrt_diff_halfline();
        } else if (which == "lukasiewicz_interval") {
            out.analytic = AnalyticSpace::lukasiewicz_interval(spec.value("lo", 0.0),
                                                               spec.value("hi", 1.0));
        } else {
            throw ParseError("unknown analytic exemplar: " + which);
        }
        return out;
    }

    if (spec.contains("construction")) {
        const std::string c = spec.at("construction").get<std::string>();
        LoadedSpace out;
        if (c == "truncate") {
            out.finite = truncate(finite_sub(spec.at("of"), base, "truncate"));
        } else if (c == "product") {
            const std::string mode = spec.value("mode", "fold");
            std::vector<StarSpace> factors;
            for (const auto& f : spec.at("factors")) {
                factors.push_back(finite_sub(f, base, "product"));
            }
            out.finite = product(std::move(factors),
                                 mode == "max" ? ProductMode::Max : ProductMode::Fold);
        } else if (c == "union") {
            std::vector<StarSpace> parts;
            for (const auto& p : spec.at("parts")) parts.push_back(finite_sub(p, base, "union"));
            out.finite = disjoint_union(std::move(parts), spec.value("auto_truncate", false));
        } else {
            throw ParseError("unknown construction: " + c);
        }
        return out;
    }

    const std::string metric = spec.value("metric", "");
    if (metric.empty()) throw ParseError("space spec needs 'metric', 'analytic' or 'construction'");

    TDefiner def = spec.contains("definer")
                       ? definer_from_json(spec.at("definer"))
                       : (metric == "sqrt_diff" ? TDefiner::power(2.0) : TDefiner::lukasiewicz());

    LoadedSpace out;
    if (spec.contains("data")) {
        const std::filesystem::path p = base / spec.at("data").get<std::string>();
        out.finite = metric == "matrix" ? matrix_csv_space(p, std::move(def))
                                        : vector_csv_space(p, std::move(def), metric);
        return out;
    }

    std::vector<std::string> ids;
    if (spec.contains("ids")) {
        for (const auto& i : spec.at("ids")) ids.push_back(i.get<std::string>());
    }
    if (metric == "euclidean") {
        std::vector<std::vector<double>> pts;
        for (const auto& row : spec.at("points")) pts.push_back(row.get<std::vector<double>>());
        out.finite = StarSpace::euclidean(std::move(pts), std::move(def), std::move(ids));
    } else if (metric == "sqrt_diff") {
        out.finite = StarSpace::sqrt_diff(spec.at("values").get<std::vector<double>>(),
                                          std::move(def), std::move(ids));
    } else if (metric == "discrete") {
        if (ids.empty()) throw ParseError("discrete space needs 'ids'");
        out.finite = StarSpace::discrete(std::move(ids), std::move(def));
    } else if (metric == "matrix") {
        std::vector<std::vector<double>> m;
        for (const auto& row : spec.at("matrix")) m.push_back(row.get<std::vector<double>>());
        out.finite = StarSpace::explicit_matrix(std::move(m), std::move(def), std::move(ids));
    } else {
        throw ParseError("unknown metric kind: " + metric);
    }
    return out;
}

}  // namespace

LoadedSpace space_from_json(const json& spec, const std::filesystem::path& base) {
    try {
        return space_from_json_impl(spec, base);
    } catch (const json::exception& e) {
        throw ParseError(std::string("space spec: ") + e.what());
    }
}

LoadedSpace load_space_file(const std::filesystem::path& path) {
    return space_from_json(read_json_file(path), path.parent_path());
}

SequenceTrace trace_from_json(const json& spec, const std::filesystem::path& base) {
    if (!spec.is_object() || !spec.contains("space")) {
        throw ParseError("trace spec needs a 'space' field");
    }
    LoadedSpace space = resolve_sub(spec.at("space"), base);

    SequenceTrace::Generator gen;
    if (spec.contains("generator")) {
        const json& g = spec.at("generator");
        const std::string kind = g.value("kind", "");
        if (kind == "inv_n") {
            const double s = g.value("scale", 1.0), c = g.value("offset", 0.0);
            gen = [s, c](std::size_t n) { return c + s / static_cast<double>(n); };
        } else if (kind == "inv_n_sq") {
            const double s = g.value("scale", 1.0), c = g.value("offset", 0.0);
            gen = [s, c](std::size_t n) {
                const double dn = static_cast<double>(n);
                return c + s / (dn * dn);
            };
        } else if (kind == "geometric") {
            const double q = g.at("ratio").get<double>();
            const double s = g.value("scale", 1.0), c = g.value("offset", 0.0);
            gen = [q, s, c](std::size_t n) { return c + s * std::pow(q, static_cast<double>(n)); };
        } else if (kind == "geometric_partial") {
            const double q = g.at("ratio").get<double>();
            gen = [q](std::size_t n) {
                return q * (1.0 - std::pow(q, static_cast<double>(n))) / (1.0 - q);
            };
        } else if (kind == "constant") {
            const double v = g.at("value").get<double>();
            gen = [v](std::size_t) { return v; };
        } else if (kind == "alternating") {
            const double a = g.at("a").get<double>(), b = g.at("b").get<double>();
            gen = [a, b](std::size_t n) { return n % 2 == 1 ? a : b; };
        } else {
            throw ParseError("unknown generator kind: " + kind);
        }
    }

    if (space.is_analytic()) {
        std::vector<double> terms;
        for (const auto& t : spec.value("terms", json::array())) terms.push_back(t.get<double>());
        if (terms.empty() && gen) {
            for (std::size_t n = 1; n <= 32; ++n) terms.push_back(gen(n));
        }
        return SequenceTrace::analytic(*space.analytic, std::move(terms), std::move(gen));
    }

    std::vector<std::size_t> indices;
    for (const auto& t : spec.value("terms", json::array())) {
        if (t.is_string()) {
            const auto idx = space.finite->index_of_id(t.get<std::string>());
            if (!idx) throw ParseError("trace term id '" + t.get<std::string>() + "' not found");
            indices.push_back(*idx);
        } else {
            indices.push_back(t.get<std::size_t>());
        }
    }
    return SequenceTrace::finite(*space.finite, std::move(indices));
}

NestedFamilySpec family_from_json(const json& spec, const std::filesystem::path& base) {
    if (!spec.is_object() || !spec.contains("space")) {
        throw ParseError("family spec needs a 'space' field");
    }
    LoadedSpace space = resolve_sub(spec.at("space"), base);
    if (!space.is_analytic()) throw ParseError("nested families live on analytic exemplars");

    NestedFamilySpec family{*space.analytic, {}};
    if (spec.contains("balls")) {
        for (const auto& b : spec.at("balls")) {
            family.balls.push_back({b.at("center").get<double>(), b.at("radius").get<double>()});
        }
        return family;
    }
    const double center = spec.at("center").get<double>();
    const std::string rule = spec.at("radius_rule").get<std::string>();
    const std::size_t depth = spec.at("depth").get<std::size_t>();
    if (depth < 1 || depth > 10'000'000) throw ParseError("family depth out of range");
    for (std::size_t n = 1; n <= depth; ++n) {
        double r;
        if (rule == "1/n") {
            r = 1.0 / static_cast<double>(n);
        } else if (rule == "2^-n") {
            r = std::pow(2.0, -static_cast<double>(n));
        } else {
            throw ParseError("unknown radius rule: " + rule);
        }
        family.balls.push_back({center, r});
    }
    return family;
}

std::vector<DenseOpenSet> predicates_from_json(const json& spec) {
    std::vector<DenseOpenSet> sets;
    auto push = [&](const json& p) {
        const std::string kind = p.value("kind", "");
        if (kind == "all") {
            sets.push_back(whole_space_set());
        } else if (kind == "empty") {
            sets.push_back(empty_dense_set());
        } else if (kind == "exclude_point") {
            sets.push_back(exclude_point_set(p.at("value").get<double>()));
        } else {
            throw ParseError("unknown predicate kind: " + kind);
        }
    };
    if (spec.is_array()) {
        for (const auto& p : spec) push(p);
        return sets;
    }
    if (spec.is_object() && spec.value("kind", "") == "exclude_grid") {
        const int count = spec.at("count").get<int>();
        const double lo = spec.value("lo", 0.0), hi = spec.value("hi", 1.0);
        for (int k = 1; k <= count; ++k) {
            sets.push_back(exclude_point_set(lo + (hi - lo) * k / (count + 1.0)));
        }
        return sets;
    }
    throw ParseError("predicates spec must be a list or an exclude_grid object");
}

ScheduleSpec schedule_from_json(const json& spec) {
    ScheduleSpec out;
    if (spec.is_string()) {
        if (spec.get<std::string>() != "default") {
            throw ParseError("unknown schedule name: " + spec.get<std::string>());
        }
        out.epsilons = ModulusSchedule::dyadic_epsilons(20);
        return out;
    }
    if (spec.is_object() && spec.contains("dyadic")) {
        out.epsilons = ModulusSchedule::dyadic_epsilons(spec.at("dyadic").get<int>());
        return out;
    }
    if (spec.is_object() && spec.contains("rows")) {
        ModulusSchedule fixed;
        for (const auto& r : spec.at("rows")) {
            fixed.rows.push_back(
                {r.at("epsilon").get<double>(), r.at("threshold").get<std::size_t>()});
        }
        fixed.validate();
        out.fixed = std::move(fixed);
        return out;
    }
    throw ParseError("schedule spec must be 'default', {dyadic:k} or {rows:[...]}");
}

}  // namespace starmetric
