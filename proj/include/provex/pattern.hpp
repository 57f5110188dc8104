#pragma once

#include <map>
#include <string>
#include <vector>

#include "provex/apt.hpp"
#include "provex/value.hpp"

namespace provex {

/// One predicate of a pattern. Categorical attributes use '=' only;
/// numeric attributes use '=', '<=' or '>='.
struct Predicate {
    std::string attr;
    CmpOp op = CmpOp::eq;
    Value constant;

    bool same_condition(const Predicate& o) const {
        return op == o.op && value_eq(constant, o.constant);
    }
};

/// A conjunctive pattern: attribute -> predicate. Attributes absent from
/// the map are wildcards. The map keeps a canonical attribute order.
struct Pattern {
    std::map<std::string, Predicate> predicates;

    std::size_t size() const { return predicates.size(); }
    bool empty() const { return predicates.empty(); }

    bool constrains(const std::string& attr) const { return predicates.count(attr) > 0; }

    Pattern with(const Predicate& p) const {
        Pattern out = *this;
        out.predicates[p.attr] = p;
        return out;
    }

    /// Canonical text form, also the dedup key: "(a = x ∧ b >= 2)".
    std::string canonical() const;

    bool operator==(const Pattern& o) const;
};

/// Phi' refines Phi when it keeps all of Phi's predicates and possibly
/// adds more. Equal patterns count as (non-strict) refinements.
bool is_refinement(const Pattern& refined, const Pattern& base);
bool is_strict_refinement(const Pattern& refined, const Pattern& base);

/// A pattern resolved against one APT for fast row matching.
class CompiledPattern {
public:
    CompiledPattern(const Pattern& p, const AptTable& apt);

    bool matches(const AptTable& apt, std::uint32_t row) const;

    /// True when any row in the range matches.
    bool matches_any(const AptTable& apt, RowRange range) const;

private:
    struct Pred {
        int col;
        bool categorical;
        CmpOp op;
        std::int32_t code;  // categorical constant (-2: not in dictionary)
        double threshold;   // numeric constant
    };
    std::vector<Pred> preds_;
};

/// Convenience wrapper: compile and match a single row.
bool matches(const Pattern& p, const AptTable& apt, std::uint32_t row);

}  // namespace provex
