#include "provex/sql.hpp"

#include <algorithm>
#include <cctype>

#include "provex/error.hpp"

namespace provex {

namespace {

enum class Tok { ident, number, string, star, comma, dot, lparen, rparen, op_eq, op_le, op_ge, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t offset = 0;
};

[[noreturn]] void fail(std::size_t offset, const std::string& msg) {
    throw InputError("query parse error at byte " + std::to_string(offset) + ": " + msg);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.offset = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                             text[j] == '_' || text[j] == '-')) {
                // '-' appears inside values like season identifiers only when
                // quoted; identifiers stop before it.
                if (text[j] == '-') break;
                ++j;
            }
            t.kind = Tok::ident;
            t.text = text.substr(i, j - i);
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   ((c == '-' || c == '+') && i + 1 < n &&
                    std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i + 1;
            while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                             text[j] == '.' || text[j] == 'e' || text[j] == 'E' ||
                             ((text[j] == '-' || text[j] == '+') &&
                              (text[j - 1] == 'e' || text[j - 1] == 'E')))) {
                ++j;
            }
            t.kind = Tok::number;
            t.text = text.substr(i, j - i);
            i = j;
        } else if (c == '\'') {
            std::string s;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < n) {
                if (text[j] == '\'') {
                    if (j + 1 < n && text[j + 1] == '\'') {
                        s.push_back('\'');
                        j += 2;
                        continue;
                    }
                    closed = true;
                    ++j;
                    break;
                }
                s.push_back(text[j]);
                ++j;
            }
            if (!closed) fail(i, "unterminated string literal");
            t.kind = Tok::string;
            t.text = std::move(s);
            i = j;
        } else if (c == '*') {
            t.kind = Tok::star;
            ++i;
        } else if (c == ',') {
            t.kind = Tok::comma;
            ++i;
        } else if (c == '.') {
            t.kind = Tok::dot;
            ++i;
        } else if (c == '(') {
            t.kind = Tok::lparen;
            ++i;
        } else if (c == ')') {
            t.kind = Tok::rparen;
            ++i;
        } else if (c == '=') {
            t.kind = Tok::op_eq;
            ++i;
        } else if (c == '<' && i + 1 < n && text[i + 1] == '=') {
            t.kind = Tok::op_le;
            i += 2;
        } else if (c == '>' && i + 1 < n && text[i + 1] == '=') {
            t.kind = Tok::op_ge;
            i += 2;
        } else if (c == '<' || c == '>') {
            fail(i, std::string("operator '") + c + "' is not supported, use <= or >=");
        } else {
            fail(i, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.offset = n;
    out.push_back(end);
    return out;
}

struct RawAttr {
    std::string qualifier;  // alias or table name, may be empty
    std::string attr;
    std::size_t offset = 0;
};

class Parser {
public:
    Parser(const std::string& text, const Database& db)
        : tokens_(tokenize(text)), db_(db) {}

    Query parse() {
        expect_keyword("select");
        struct SelectItem {
            bool is_agg = false;
            AggFn fn = AggFn::count;
            bool star = false;
            RawAttr attr;
            std::string alias;
        };
        std::vector<SelectItem> items;
        while (true) {
            SelectItem item;
            const Token& t = peek();
            if (t.kind == Tok::ident) {
                const std::string kw = lower(t.text);
                if (kw == "count" || kw == "sum" || kw == "avg") {
                    item.is_agg = true;
                    item.fn = kw == "count" ? AggFn::count : (kw == "sum" ? AggFn::sum : AggFn::avg);
                    advance();
                    expect(Tok::lparen, "expected '('");
                    if (peek().kind == Tok::star) {
                        if (item.fn != AggFn::count) {
                            fail(peek().offset, "only count(*) may use '*'");
                        }
                        item.star = true;
                        advance();
                    } else {
                        item.attr = parse_attr();
                    }
                    expect(Tok::rparen, "expected ')'");
                } else {
                    item.attr = parse_attr();
                }
            } else {
                fail(t.offset, "expected attribute or aggregate");
            }
            // optional [AS] alias
            if (peek_keyword("as")) {
                advance();
                item.alias = expect_ident("expected alias after AS");
            } else if (peek().kind == Tok::ident && !peek_any_keyword()) {
                item.alias = expect_ident("expected alias");
            }
            items.push_back(std::move(item));
            if (peek().kind == Tok::comma) {
                advance();
                continue;
            }
            break;
        }

        expect_keyword("from");
        Query q;
        while (true) {
            QueryRelation rel;
            rel.table = expect_ident("expected table name");
            if (!db_.find_table(rel.table)) {
                fail(prev_offset_, "unknown relation: " + rel.table);
            }
            rel.alias = rel.table;
            if (peek().kind == Tok::ident && !peek_any_keyword()) {
                rel.alias = expect_ident("expected alias");
            }
            if (q.relation_by_alias(rel.alias) >= 0) {
                fail(prev_offset_, "duplicate relation alias: " + rel.alias);
            }
            q.relations.push_back(std::move(rel));
            if (peek().kind == Tok::comma) {
                advance();
                continue;
            }
            break;
        }

        if (peek_keyword("where")) {
            advance();
            while (true) {
                const RawAttr lhs = parse_attr();
                CmpOp op;
                switch (peek().kind) {
                    case Tok::op_eq: op = CmpOp::eq; break;
                    case Tok::op_le: op = CmpOp::le; break;
                    case Tok::op_ge: op = CmpOp::ge; break;
                    default: fail(peek().offset, "expected =, <= or >=");
                }
                advance();
                const Token& rhs = peek();
                if (rhs.kind == Tok::ident) {
                    if (op != CmpOp::eq) {
                        fail(rhs.offset, "join predicates only support '='");
                    }
                    const RawAttr r = parse_attr();
                    JoinPredicate jp;
                    jp.left = resolve(q, lhs);
                    jp.right = resolve(q, r);
                    q.join_predicates.push_back(jp);
                } else if (rhs.kind == Tok::string || rhs.kind == Tok::number) {
                    Selection sel;
                    sel.attr = resolve(q, lhs);
                    sel.op = op;
                    if (rhs.kind == Tok::string) {
                        sel.constant = Value{rhs.text};
                    } else {
                        auto v = parse_cell(rhs.text, ColumnKind::numeric);
                        if (!v) fail(rhs.offset, "bad numeric literal");
                        sel.constant = std::move(*v);
                    }
                    advance();
                    q.selections.push_back(std::move(sel));
                } else {
                    fail(rhs.offset, "expected attribute or constant");
                }
                if (peek_keyword("and")) {
                    advance();
                    continue;
                }
                break;
            }
        }

        if (!peek_keyword("group")) fail(peek().offset, "missing GROUP BY");
        advance();
        expect_keyword("by");
        while (true) {
            const RawAttr a = parse_attr();
            q.group_by.push_back(resolve(q, a));
            if (peek().kind == Tok::comma) {
                advance();
                continue;
            }
            break;
        }
        if (peek().kind != Tok::end) fail(peek().offset, "trailing input after GROUP BY");

        // Bind the select list: group attributes in order, exactly one aggregate.
        bool have_agg = false;
        q.group_out_aliases.assign(q.group_by.size(), "");
        for (const auto& item : items) {
            if (item.is_agg) {
                if (have_agg) {
                    fail(item.attr.offset, "multiple aggregates are not supported");
                }
                have_agg = true;
                q.aggregate.fn = item.fn;
                q.aggregate.star = item.star;
                if (!item.star) {
                    q.aggregate.attr = resolve(q, item.attr);
                    q.aggregate.star = false;
                }
                q.aggregate.out_alias = item.alias.empty() ? agg_name(item.fn) : item.alias;
            } else {
                const AttrRef ref = resolve(q, item.attr);
                bool found = false;
                for (std::size_t g = 0; g < q.group_by.size(); ++g) {
                    if (q.group_by[g] == ref) {
                        q.group_out_aliases[g] =
                            item.alias.empty() ? item.attr.attr : item.alias;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    fail(item.attr.offset,
                         "non-aggregate select attribute must appear in GROUP BY: " +
                             item.attr.attr);
                }
            }
        }
        if (!have_agg) fail(0, "query needs exactly one aggregate");
        for (std::size_t g = 0; g < q.group_by.size(); ++g) {
            if (q.group_out_aliases[g].empty()) {
                const Table& t = *db_.find_table(q.relations[q.group_by[g].rel].table);
                q.group_out_aliases[g] = t.columns[q.group_by[g].col].name;
            }
        }
        return q;
    }

private:
    static std::string agg_name(AggFn fn) {
        switch (fn) {
            case AggFn::count: return "count";
            case AggFn::sum: return "sum";
            case AggFn::avg: return "avg";
        }
        return "agg";
    }

    const Token& peek() const { return tokens_[pos_]; }
    void advance() {
        prev_offset_ = tokens_[pos_].offset;
        ++pos_;
    }

    bool peek_keyword(const std::string& kw) const {
        return peek().kind == Tok::ident && lower(peek().text) == kw;
    }

    bool peek_any_keyword() const {
        if (peek().kind != Tok::ident) return false;
        const std::string kw = lower(peek().text);
        return kw == "select" || kw == "from" || kw == "where" || kw == "group" ||
               kw == "by" || kw == "and" || kw == "as";
    }

    void expect_keyword(const std::string& kw) {
        if (!peek_keyword(kw)) fail(peek().offset, "expected " + kw);
        advance();
    }

    void expect(Tok kind, const std::string& msg) {
        if (peek().kind != kind) fail(peek().offset, msg);
        advance();
    }

    std::string expect_ident(const std::string& msg) {
        if (peek().kind != Tok::ident) fail(peek().offset, msg);
        std::string s = peek().text;
        advance();
        return s;
    }

    RawAttr parse_attr() {
        RawAttr a;
        a.offset = peek().offset;
        a.attr = expect_ident("expected attribute");
        if (peek().kind == Tok::dot) {
            advance();
            a.qualifier = a.attr;
            a.attr = expect_ident("expected attribute after '.'");
        }
        return a;
    }

    AttrRef resolve(const Query& q, const RawAttr& raw) {
        AttrRef out;
        if (!raw.qualifier.empty()) {
            const int rel = q.relation_by_alias(raw.qualifier);
            if (rel < 0) fail(raw.offset, "unknown relation alias: " + raw.qualifier);
            const Table& t = *db_.find_table(q.relations[rel].table);
            const int col = t.column_index(raw.attr);
            if (col < 0) {
                fail(raw.offset, "unknown attribute: " + raw.qualifier + "." + raw.attr);
            }
            out.rel = rel;
            out.col = col;
            return out;
        }
        int hits = 0;
        for (int rel = 0; rel < static_cast<int>(q.relations.size()); ++rel) {
            const Table& t = *db_.find_table(q.relations[rel].table);
            const int col = t.column_index(raw.attr);
            if (col >= 0) {
                ++hits;
                out.rel = rel;
                out.col = col;
            }
        }
        if (hits == 0) fail(raw.offset, "unknown attribute: " + raw.attr);
        if (hits > 1) fail(raw.offset, "ambiguous attribute: " + raw.attr);
        return out;
    }

    std::vector<Token> tokens_;
    const Database& db_;
    std::size_t pos_ = 0;
    std::size_t prev_offset_ = 0;
};

std::string quote_sql(const std::string& s) {
    std::string out = "'";
    for (const char c : s) {
        if (c == '\'') out += "''";
        else out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

}  // namespace

Query parse_query(const std::string& text, const Database& db) {
    return Parser(text, db).parse();
}

std::string serialize_query(const Query& q, const Database& db) {
    auto attr_text = [&](const AttrRef& a) {
        const Table& t = *db.find_table(q.relations[a.rel].table);
        return q.relations[a.rel].alias + "." + t.columns[a.col].name;
    };

    std::string out = "SELECT ";
    for (std::size_t g = 0; g < q.group_by.size(); ++g) {
        out += attr_text(q.group_by[g]) + " AS " + q.group_out_aliases[g] + ", ";
    }
    switch (q.aggregate.fn) {
        case AggFn::count: out += "count("; break;
        case AggFn::sum: out += "sum("; break;
        case AggFn::avg: out += "avg("; break;
    }
    out += q.aggregate.star ? "*" : attr_text(*q.aggregate.attr);
    out += ") AS " + q.aggregate.out_alias;
    out += " FROM ";
    for (std::size_t r = 0; r < q.relations.size(); ++r) {
        if (r) out += ", ";
        out += q.relations[r].table + " " + q.relations[r].alias;
    }
    bool first = true;
    for (const auto& jp : q.join_predicates) {
        out += first ? " WHERE " : " AND ";
        first = false;
        out += attr_text(jp.left) + "=" + attr_text(jp.right);
    }
    for (const auto& sel : q.selections) {
        out += first ? " WHERE " : " AND ";
        first = false;
        out += attr_text(sel.attr);
        out += cmp_op_name(sel.op);
        out += is_text(sel.constant) ? quote_sql(std::get<std::string>(sel.constant))
                                     : value_display(sel.constant);
    }
    out += " GROUP BY ";
    for (std::size_t g = 0; g < q.group_by.size(); ++g) {
        if (g) out += ", ";
        out += attr_text(q.group_by[g]);
    }
    return out;
}

}  // namespace provex
