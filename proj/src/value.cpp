#include "provex/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace provex {

std::optional<CmpOp> parse_cmp_op(const std::string& s) {
    if (s == "=") return CmpOp::eq;
    if (s == "<=") return CmpOp::le;
    if (s == ">=") return CmpOp::ge;
    return std::nullopt;
}

bool value_eq(const Value& a, const Value& b) {
    if (is_null(a) || is_null(b)) return false;
    if (is_numeric(a) && is_numeric(b)) return as_number(a) == as_number(b);
    if (is_text(a) && is_text(b)) return std::get<std::string>(a) == std::get<std::string>(b);
    return false;
}

int value_cmp(const Value& a, const Value& b) {
    auto rank = [](const Value& v) { return is_null(v) ? 0 : (is_numeric(v) ? 1 : 2); };
    const int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (ra == 0) return 0;
    if (ra == 1) {
        const double x = as_number(a), y = as_number(b);
        if (x < y) return -1;
        if (x > y) return 1;
        return 0;
    }
    const auto& x = std::get<std::string>(a);
    const auto& y = std::get<std::string>(b);
    return x.compare(y) < 0 ? -1 : (x == y ? 0 : 1);
}

std::string value_key(const Value& v) {
    if (is_null(v)) return "\x01null";
    if (is_numeric(v)) {
        const double d = as_number(v);
        if (d == std::floor(d) && std::abs(d) < 9.0e15) {
            return "n:" + std::to_string(static_cast<std::int64_t>(d));
        }
        char buf[40];
        std::snprintf(buf, sizeof(buf), "n:%.17g", d);
        return buf;
    }
    return "t:" + std::get<std::string>(v);
}

std::string value_display(const Value& v) {
    if (is_null(v)) return "";
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        if (*d == std::floor(*d) && std::abs(*d) < 9.0e15) {
            return std::to_string(static_cast<std::int64_t>(*d));
        }
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6g", *d);
        return buf;
    }
    return std::get<std::string>(v);
}

std::optional<Value> parse_cell(const std::string& raw, ColumnKind kind) {
    if (raw.empty()) return Value{std::monostate{}};
    if (kind == ColumnKind::categorical) return Value{raw};

    const char* begin = raw.data();
    const char* end = raw.data() + raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
    if (begin == end) return Value{std::monostate{}};

    std::int64_t i = 0;
    auto [pi, eci] = std::from_chars(begin, end, i);
    if (eci == std::errc() && pi == end) return Value{i};

    double d = 0.0;
    auto [pd, ecd] = std::from_chars(begin, end, d);
    if (ecd == std::errc() && pd == end) return Value{d};
    return std::nullopt;
}

}  // namespace provex
