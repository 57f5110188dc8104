#include "provex/pattern.hpp"

#include "provex/error.hpp"

namespace provex {

std::string Pattern::canonical() const {
    std::string out = "(";
    bool first = true;
    for (const auto& [attr, pred] : predicates) {
        if (!first) out += " ∧ ";
        first = false;
        out += attr;
        out.push_back(' ');
        out += cmp_op_name(pred.op);
        out.push_back(' ');
        out += value_display(pred.constant);
    }
    out.push_back(')');
    return out;
}

bool Pattern::operator==(const Pattern& o) const {
    if (predicates.size() != o.predicates.size()) return false;
    auto it = o.predicates.begin();
    for (const auto& [attr, pred] : predicates) {
        if (it->first != attr || !it->second.same_condition(pred)) return false;
        ++it;
    }
    return true;
}

bool is_refinement(const Pattern& refined, const Pattern& base) {
    for (const auto& [attr, pred] : base.predicates) {
        auto it = refined.predicates.find(attr);
        if (it == refined.predicates.end() || !it->second.same_condition(pred)) return false;
    }
    return true;
}

bool is_strict_refinement(const Pattern& refined, const Pattern& base) {
    return refined.predicates.size() > base.predicates.size() && is_refinement(refined, base);
}

CompiledPattern::CompiledPattern(const Pattern& p, const AptTable& apt) {
    preds_.reserve(p.predicates.size());
    for (const auto& [attr, pred] : p.predicates) {
        const int col = apt.column_index(attr);
        if (col < 0) throw InputError("pattern references unknown APT attribute: " + attr);
        Pred cp;
        cp.col = col;
        cp.categorical = apt.columns[col].kind == ColumnKind::categorical;
        cp.op = pred.op;
        if (cp.categorical) {
            if (pred.op != CmpOp::eq) {
                throw InputError("categorical attribute '" + attr + "' only supports '='");
            }
            cp.code = apt.columns[col].code_of(value_display(pred.constant));
            cp.threshold = 0.0;
        } else {
            if (!is_numeric(pred.constant)) {
                throw InputError("numeric attribute '" + attr + "' needs a numeric constant");
            }
            cp.code = 0;
            cp.threshold = as_number(pred.constant);
        }
        preds_.push_back(cp);
    }
}

bool CompiledPattern::matches(const AptTable& apt, std::uint32_t row) const {
    for (const auto& p : preds_) {
        const auto& col = apt.columns[p.col];
        if (p.categorical) {
            if (col.codes[row] < 0 || col.codes[row] != p.code) return false;
        } else {
            if (col.null_mask[row]) return false;  // null never satisfies
            const double v = col.nums[row];
            switch (p.op) {
                case CmpOp::eq:
                    if (v != p.threshold) return false;
                    break;
                case CmpOp::le:
                    if (!(v <= p.threshold)) return false;
                    break;
                case CmpOp::ge:
                    if (!(v >= p.threshold)) return false;
                    break;
            }
        }
    }
    return true;
}

bool CompiledPattern::matches_any(const AptTable& apt, RowRange range) const {
    for (std::uint32_t r = range.begin; r < range.end; ++r) {
        if (matches(apt, r)) return true;
    }
    return false;
}

bool matches(const Pattern& p, const AptTable& apt, std::uint32_t row) {
    return CompiledPattern(p, apt).matches(apt, row);
}

}  // namespace provex
