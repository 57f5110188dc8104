#pragma once

#include <string>

#include "provex/query.hpp"

namespace provex {

/// Parses the supported query fragment:
///   SELECT <group attrs>, <agg>(<attr>|*) [AS alias]
///   FROM <table [alias]>, ...
///   [WHERE <conjunction of attr=attr | attr (=|<=|>=) constant>]
///   GROUP BY <attrs>
/// Keywords are case-insensitive. All attribute references are resolved
/// against the database; errors are InputError with a byte offset.
Query parse_query(const std::string& text, const Database& db);

/// Canonical text form; parse_query(serialize_query(q, db), db) round-trips.
std::string serialize_query(const Query& q, const Database& db);

}  // namespace provex
