#include "starmetric/definer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "starmetric/errors.hpp"

namespace starmetric {

namespace {

void require_operand(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError(std::string(what) + " must be a finite non-negative real, got " +
                          std::to_string(x));
    }
}

double require_result(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("definer evaluation left [0,inf): " + std::to_string(x));
    }
    return x;
}

}  // namespace

DefinerExpr DefinerExpr::sum(std::vector<DefinerExpr> args) {
    if (args.empty()) throw ConfigError("sum node needs at least one child");
    return {Node::Sum, 0.0, std::move(args)};
}

DefinerExpr DefinerExpr::max(std::vector<DefinerExpr> args) {
    if (args.empty()) throw ConfigError("max node needs at least one child");
    return {Node::Max, 0.0, std::move(args)};
}

DefinerExpr DefinerExpr::power(double p, std::vector<DefinerExpr> args) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("power node needs p > 0");
    if (args.empty()) throw ConfigError("power node needs at least one child");
    return {Node::Power, p, std::move(args)};
}

DefinerExpr DefinerExpr::abs_diff(DefinerExpr lhs, DefinerExpr rhs) {
    std::vector<DefinerExpr> kids;
    kids.push_back(std::move(lhs));
    kids.push_back(std::move(rhs));
    return {Node::AbsDiff, 0.0, std::move(kids)};
}

double DefinerExpr::eval(double a, double b) const {
    switch (node) {
        case Node::VarA: return a;
        case Node::VarB: return b;
        case Node::Const: return value;
        case Node::Sum: {
            double s = 0.0;
            for (const auto& ch : children) s += ch.eval(a, b);
            return s;
        }
        case Node::Max: {
            double m = 0.0;
            for (const auto& ch : children) m = std::max(m, ch.eval(a, b));
            return m;
        }
        case Node::Power: {
            double s = 0.0;
            for (const auto& ch : children) s += std::pow(ch.eval(a, b), 1.0 / value);
            return std::pow(s, value);
        }
        case Node::AbsDiff:
            return std::fabs(children[0].eval(a, b) - children[1].eval(a, b));
    }
    return 0.0;
}

std::string DefinerExpr::describe() const {
    std::ostringstream out;
    auto join = [&](const char* sep) {
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (i) out << sep;
            out << children[i].describe();
        }
    };
    switch (node) {
        case Node::VarA: out << "a"; break;
        case Node::VarB: out << "b"; break;
        case Node::Const: out << value; break;
        case Node::Sum:
            out << "(";
            join(" + ");
            out << ")";
            break;
        case Node::Max:
            out << "max(";
            join(", ");
            out << ")";
            break;
        case Node::Power:
            out << "pow_" << value << "(";
            join(", ");
            out << ")";
            break;
        case Node::AbsDiff:
            out << "|" << children[0].describe() << " - " << children[1].describe() << "|";
            break;
    }
    return out.str();
}

TDefiner TDefiner::lukasiewicz() { return TDefiner(Kind::Lukasiewicz, 0.0, nullptr, "a + b"); }

TDefiner TDefiner::maximum() { return TDefiner(Kind::Maximum, 0.0, nullptr, "max(a, b)"); }

TDefiner TDefiner::power(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("power definer needs p > 0");
    return TDefiner(Kind::Power, p, nullptr,
                    "(a^(1/" + std::to_string(p) + ") + b^(1/" + std::to_string(p) + "))^" +
                        std::to_string(p));
}

TDefiner TDefiner::composed(DefinerExpr expr, std::string description) {
    auto node = std::make_shared<const DefinerExpr>(std::move(expr));
    if (description.empty()) description = node->describe();
    return TDefiner(Kind::Composed, 0.0, std::move(node), std::move(description));
}

double TDefiner::eval(double a, double b) const {
    require_operand(a, "left operand");
    require_operand(b, "right operand");
    switch (kind_) {
        case Kind::Lukasiewicz: return require_result(a + b);
        case Kind::Maximum: return std::max(a, b);
        case Kind::Power: {
            const double inv = 1.0 / p_;
            return require_result(std::pow(std::pow(a, inv) + std::pow(b, inv), p_));
        }
        case Kind::Composed: return require_result(expr_->eval(a, b));
    }
    return 0.0;
}

double TDefiner::fold(std::span<const double> values) const {
    double acc = 0.0;
    bool first = true;
    for (double v : values) {
        require_operand(v, "fold element");
        acc = first ? v : eval(acc, v);
        first = false;
    }
    return acc;
}

double TDefiner::fold(std::initializer_list<double> values) const {
    return fold(std::span<const double>(values.begin(), values.size()));
}

bool TDefiner::same_operation(const TDefiner& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Power: return p_ == other.p_;
        case Kind::Composed: return description_ == other.description_;
        default: return true;
    }
}

LawReport check_laws(const TDefiner& def, long sample_count, double max_value,
                     std::uint64_t seed, double tol) {
    if (sample_count < 1) throw ConfigError("check_laws needs sample_count >= 1");
    if (!(tol > 0.0)) throw ConfigError("check_laws needs tol > 0");
    require_operand(max_value, "max_value");

    LawReport report;
    report.tolerance = tol;
    report.samples_used = sample_count;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, max_value);

    auto rel_close = [&](double l, double r) {
        return std::fabs(l - r) <= tol * std::max({1.0, std::fabs(l), std::fabs(r)});
    };

    auto fail = [](LawVerdict& v, double a, double b, double c, double l, double r) {
        if (v.pass) {
            v.pass = false;
            v.witness = LawWitness{a, b, c, l, r};
        }
    };

    for (long i = 0; i < sample_count; ++i) {
        const double a = uni(rng);
        const double b = uni(rng);
        const double c = uni(rng);

        // T1: a*b = b*a
        if (report.t1.pass) {
            const double l = def.eval(a, b), r = def.eval(b, a);
            if (!rel_close(l, r)) fail(report.t1, a, b, 0.0, l, r);
        }
        // T2: (a*b)*c = a*(b*c)
        if (report.t2.pass) {
            const double l = def.eval(def.eval(a, b), c);
            const double r = def.eval(a, def.eval(b, c));
            if (!rel_close(l, r)) fail(report.t2, a, b, c, l, r);
        }
        // T3: lo <= hi implies lo*c <= hi*c
        if (report.t3.pass) {
            const double lo = std::min(a, b), hi = std::max(a, b);
            const double l = def.eval(lo, c), r = def.eval(hi, c);
            if (l > r + tol * std::max(1.0, std::fabs(r))) fail(report.t3, lo, hi, c, l, r);
        }
        // T4: a*0 = a
        if (report.t4.pass) {
            const double l = def.eval(a, 0.0);
            if (!rel_close(l, a)) fail(report.t4, a, 0.0, 0.0, l, a);
        }
    }

    // T5 probe: |f(a+h, b) - f(a, b)| must decay toward 0 as h shrinks.
    // A genuine jump keeps the difference pinned near its size at every h.
    const long probe_points = std::min<long>(sample_count, 64);
    constexpr double kHMax = 1e-2, kHMin = 1e-10;
    for (long i = 0; i < probe_points && report.t5.pass; ++i) {
        const double a = uni(rng);
        const double b = uni(rng);
        const double base = def.eval(a, b);
        auto delta = [&](double h) {
            double d = std::fabs(def.eval(a + h, b) - base);
            if (a >= h) d = std::max(d, std::fabs(def.eval(a - h, b) - base));
            return d;
        };
        const double coarse = delta(kHMax);
        const double fine = delta(kHMin);
        const double floor = 1e-6 * (1.0 + std::fabs(base));
        if (fine > std::max(floor, 0.1 * coarse)) {
            fail(report.t5, a, b, kHMin, fine, coarse);
        }
    }

    return report;
}

namespace {

// Bisection for the largest t in (0, r] passing a monotone predicate.
double monotone_radius(double r, const std::function<bool(double)>& pass, const char* label) {
    if (pass(r)) return r;
    double lo = 0.0, hi = r;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pass(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (lo <= 0.0) {
        throw NoRadiusError(std::string(label) +
                            ": no positive radius passed after 64 bisection steps");
    }
    return lo;
}

}  // namespace

double joint_zero_radius(const TDefiner& def, double r, double margin) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("joint_zero_radius needs r > 0");
    if (!(margin > 0.0) || !(margin < 1.0)) {
        throw ConfigError("joint_zero_radius needs margin in (0,1)");
    }
    const double target = r * (1.0 - margin);
    return monotone_radius(
        r, [&](double t) { return def.eval(t, t) <= target; }, "joint_zero_radius");
}

double kfold_radius(const TDefiner& def, int k, double r, double margin) {
    if (k < 2) throw ConfigError("kfold_radius needs k >= 2");
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("kfold_radius needs r > 0");
    if (!(margin > 0.0) || !(margin < 1.0)) throw ConfigError("kfold_radius needs margin in (0,1)");
    const double target = r * (1.0 - margin);
    auto kfold = [&](double t) {
        double acc = t;
        for (int i = 1; i < k; ++i) acc = def.eval(acc, t);
        return acc;
    };
    return monotone_radius(
        r, [&](double t) { return kfold(t) <= target; }, "kfold_radius");
}

InverseBound star_inverse_lower(const TDefiner& def, double c, double b, double tol) {
    require_operand(c, "c");
    require_operand(b, "b");
    if (!(tol > 0.0)) throw ConfigError("star_inverse_lower needs tol > 0");
    if (b >= c) return {0.0, false};  // 0 (*) b = b >= c by T4

    // For a law-abiding definer t = c already passes: c (*) b >= c (*) 0 = c.
    // Grow the bracket anyway so broken definers degrade to a capped answer.
    double hi = std::max(c, 1.0);
    const double cap = std::max(c, 1.0) * 1e12;
    while (def.eval(hi, b) < c) {
        hi *= 2.0;
        if (hi > cap) return {cap, true};
    }
    double lo = 0.0;  // eval(0, b) = b < c here
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (def.eval(mid, b) >= c) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {hi, false};
}

}  // namespace starmetric
