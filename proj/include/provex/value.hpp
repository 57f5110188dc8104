#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace provex {

/// A cell value: null, integer, float, or text.
using Value = std::variant<std::monostate, std::int64_t, double, std::string>;

enum class ColumnKind { categorical, numeric };

enum class CmpOp { eq, le, ge };

inline const char* cmp_op_name(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "=";
        case CmpOp::le: return "<=";
        case CmpOp::ge: return ">=";
    }
    return "?";
}

std::optional<CmpOp> parse_cmp_op(const std::string& s);

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

inline bool is_numeric(const Value& v) {
    return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

inline bool is_text(const Value& v) { return std::holds_alternative<std::string>(v); }

/// Numeric view of an integer or float value. Undefined for null/text.
inline double as_number(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

/// Equality with numeric int/float unification. Null equals nothing,
/// not even null (predicate semantics).
bool value_eq(const Value& a, const Value& b);

/// Total order used for deterministic output: null < numeric < text.
/// Nulls compare equal to each other here (sorting, not predicates).
int value_cmp(const Value& a, const Value& b);

/// Unambiguous string form, used for hashing and group keys.
std::string value_key(const Value& v);

/// Human-readable form ("" for null, no quotes).
std::string value_display(const Value& v);

/// Parse a CSV cell according to the column kind. Empty cells are null.
/// Returns std::nullopt when a numeric cell does not parse.
std::optional<Value> parse_cell(const std::string& raw, ColumnKind kind);

}  // namespace provex
