#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "starmetric/analysis.hpp"
#include "starmetric/space.hpp"

namespace starmetric {

using json = nlohmann::json;

/// {"kind":"lukasiewicz"} | {"kind":"maximum"} | {"kind":"power","p":2.0}
/// | {"kind":"composed","expr":...} with expression nodes
///   {"var":"a"|"b"}, {"const":c}, {"op":"sum"|"max","args":[...]},
///   {"op":"power","p":p,"args":[...]}, {"op":"abs_diff","args":[l,r]}.
TDefiner definer_from_json(const json& spec);
json definer_to_json(const TDefiner& def);
DefinerExpr expr_from_json(const json& spec);

/// A space spec resolves to a finite StarSpace or an analytic exemplar.
struct LoadedSpace {
    std::optional<StarSpace> finite;
    std::optional<AnalyticSpace> analytic;

    bool is_analytic() const { return analytic.has_value(); }
    /// The finite space, sampling analytic exemplars when needed.
    StarSpace materialize(std::size_t samples = 64, std::uint64_t seed = 0,
                          double sample_hi = 16.0) const;
};

/// Space specs:
///   {"metric":"euclidean","points":[[...],...],"ids":[...],"definer":...}
///   {"metric":"euclidean","data":"points.csv", ...}
///   {"metric":"sqrt_diff","values":[1,16,25]} / {"metric":"sqrt_diff","data":...}
///   {"metric":"discrete","ids":["a","b"]}
///   {"metric":"matrix","matrix":[[...],...]} / {"metric":"matrix","data":"m.csv"}
///   {"analytic":"sqrt_diff_halfline"}
///   {"analytic":"lukasiewicz_interval","lo":0,"hi":1}
///   {"construction":"truncate","of":SPEC}
///   {"construction":"product","mode":"fold"|"max","factors":[SPEC,...]}
///   {"construction":"union","auto_truncate":false,"parts":[SPEC,...]}
/// Nested SPEC values may be inline objects or path strings relative to base.
LoadedSpace space_from_json(const json& spec, const std::filesystem::path& base);
LoadedSpace load_space_file(const std::filesystem::path& path);

/// Vector CSV with header id,x1,...,xk.
StarSpace vector_csv_space(const std::filesystem::path& path, TDefiner def,
                           const std::string& metric);
/// Square distance-matrix CSV; an optional leading "id,..." header labels rows.
StarSpace matrix_csv_space(const std::filesystem::path& path, TDefiner def);

/// {"space":SPEC,"terms":[...],"generator":{...}} with generators
///   {"kind":"inv_n","scale":s,"offset":c}        x_n = c + s/n
///   {"kind":"inv_n_sq","scale":s,"offset":c}     x_n = c + s/n^2
///   {"kind":"geometric","ratio":q,"scale":s,"offset":c}  x_n = c + s q^n
///   {"kind":"geometric_partial","ratio":q}       x_n = sum_{i<=n} q^i
///   {"kind":"constant","value":v}
///   {"kind":"alternating","a":va,"b":vb}
/// Terms on finite spaces are ids (strings) or indices (numbers).
SequenceTrace trace_from_json(const json& spec, const std::filesystem::path& base);

/// {"space":SPEC,"balls":[{"center":c,"radius":r},...]} or
/// {"space":SPEC,"center":c,"radius_rule":"1/n"|"2^-n","depth":d}.
NestedFamilySpec family_from_json(const json& spec, const std::filesystem::path& base);

/// [{"kind":"all"} | {"kind":"empty"} | {"kind":"exclude_point","value":q}, ...]
/// or {"kind":"exclude_grid","count":k,"lo":a,"hi":b} expanding to k
/// excluded grid points.
std::vector<DenseOpenSet> predicates_from_json(const json& spec);

/// "default" (dyadic 1..20, thresholds derived), {"dyadic":k}, or
/// {"rows":[{"epsilon":e,"threshold":n},...]} (fixed thresholds).
struct ScheduleSpec {
    std::optional<ModulusSchedule> fixed;
    std::vector<double> epsilons;  // thresholds to derive when !fixed
};
ScheduleSpec schedule_from_json(const json& spec);

json read_json_file(const std::filesystem::path& path);

}  // namespace starmetric
