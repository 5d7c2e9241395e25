#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace starmetric {

/// Expression tree for user-composed binary operations on [0,inf).
/// Leaves are the operands `a`/`b` or constants; interior nodes combine
/// children with sum, max, a power combiner (sum of p-th roots, raised
/// back to p), or the absolute difference of exactly two children.
struct DefinerExpr {
    enum class Node { VarA, VarB, Const, Sum, Max, Power, AbsDiff };

    Node node = Node::VarA;
    double value = 0.0;  // Const payload or Power exponent p
    std::vector<DefinerExpr> children;

    static DefinerExpr var_a() { return {Node::VarA, 0.0, {}}; }
    static DefinerExpr var_b() { return {Node::VarB, 0.0, {}}; }
    static DefinerExpr constant(double c) { return {Node::Const, c, {}}; }
    static DefinerExpr sum(std::vector<DefinerExpr> args);
    static DefinerExpr max(std::vector<DefinerExpr> args);
    static DefinerExpr power(double p, std::vector<DefinerExpr> args);
    static DefinerExpr abs_diff(DefinerExpr lhs, DefinerExpr rhs);

    double eval(double a, double b) const;
    std::string describe() const;
};

/// A candidate t-definer: a binary operation on non-negative reals expected
/// to satisfy
///   T1 commutativity, T2 associativity, T3 monotonicity in each argument,
///   T4 identity at 0, T5 continuity in the first argument.
/// The built-in kinds satisfy all five by construction; composed expressions
/// are candidates whose laws are checked, not assumed.
class TDefiner {
public:
    enum class Kind { Lukasiewicz, Maximum, Power, Composed };

    static TDefiner lukasiewicz();
    static TDefiner maximum();
    static TDefiner power(double p);
    static TDefiner composed(DefinerExpr expr, std::string description = "");

    Kind kind() const { return kind_; }
    double power_exponent() const { return p_; }
    const std::string& description() const { return description_; }
    const DefinerExpr* expression() const { return expr_ ? expr_.get() : nullptr; }

    /// a (*) b. Rejects negative or non-finite operands and non-finite results.
    double eval(double a, double b) const;

    /// Left fold of values under the operation; empty input gives the
    /// identity 0. Order is immaterial only when T2 holds.
    double fold(std::span<const double> values) const;
    double fold(std::initializer_list<double> values) const;

    /// Structural equality of the operation spec (kind + parameters).
    bool same_operation(const TDefiner& other) const;

private:
    TDefiner(Kind k, double p, std::shared_ptr<const DefinerExpr> expr, std::string desc)
        : kind_(k), p_(p), expr_(std::move(expr)), description_(std::move(desc)) {}

    Kind kind_;
    double p_ = 0.0;
    std::shared_ptr<const DefinerExpr> expr_;
    std::string description_;
};

struct LawWitness {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;  // unused for the two-operand laws
    double lhs = 0.0;
    double rhs = 0.0;
};

struct LawVerdict {
    bool pass = true;
    std::optional<LawWitness> witness;
};

/// Result of sampling-based law verification. A pass for T1..T4 means no
/// sampled violation; the T5 entry is a finite-difference continuity probe,
/// never a proof.
struct LawReport {
    LawVerdict t1, t2, t3, t4, t5;
    long samples_used = 0;
    double tolerance = 0.0;
    bool all_pass() const { return t1.pass && t2.pass && t3.pass && t4.pass && t5.pass; }
};

/// Checks T1-T4 on `sample_count` uniform samples in [0, max_value] and
/// probes T5 with shrinking finite differences at sampled points.
/// Deterministic given the seed.
LawReport check_laws(const TDefiner& def, long sample_count, double max_value,
                     std::uint64_t seed, double tol);

/// Largest r1 in (0, r] with r1 (*) r1 <= r * (1 - margin), located by
/// bisection. By T3 every a, b < r1 then satisfy a (*) b < r, which is the
/// constructive content of the joint-continuity-at-(0,0) lemma.
/// Throws NoRadiusError if no positive radius passes.
double joint_zero_radius(const TDefiner& def, double r, double margin = 1e-6);

/// k-fold variant: largest r1 with the k-fold product of r1 <= r * (1 - margin).
double kfold_radius(const TDefiner& def, int k, double r, double margin = 1e-6);

struct InverseBound {
    double value = 0.0;
    bool capped = false;  // set when eval(t, b) never reached c up to the probe cap
};

/// inf{ t >= 0 : t (*) b >= c } within tol (the set is upward closed by T3).
/// Returns 0 when b >= c. The returned value sits on the passing side:
/// value (*) b >= c whenever not capped.
InverseBound star_inverse_lower(const TDefiner& def, double c, double b, double tol);

}  // namespace starmetric
