#pragma once

#include <json.hpp>

#include <string>
#include <utility>

#include "bcszk/bcs.hpp"
#include "bcszk/distribution.hpp"
#include "bcszk/game.hpp"

namespace bcszk {

using Json = nlohmann::json;

// BCS document format (UTF-8 JSON):
//   { "contexts": [ { "constraint": {...}, "name": "...", "vars": [...] } ],
//     "distribution": {"type":"uniform"} | {"type":"matrix","num_den":[[[n,d]..]..]},
//     "variables": [ ... ] }
// Constraint blocks: table (sign strings over the context order), 3sat
// (signed literals, "x" / "!x"), full, obliviated {degree, inner}, and
// product {factors:[{arity, constraint}]}. Canonical form: object keys
// sorted, rationals in lowest terms, no insignificant whitespace. num/den
// values are JSON integers when they fit and decimal strings otherwise.

std::pair<Bcs, QuestionDistribution> parse_bcs(const std::string& document);
std::string serialize_bcs(const Bcs& b, const QuestionDistribution& pi);

Json bcs_to_json(const Bcs& b, const QuestionDistribution& pi);
std::pair<Bcs, QuestionDistribution> bcs_from_json(const Json& doc);

Json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const VarList& context, const Json& block);

Json distribution_to_json(const QuestionDistribution& pi);
QuestionDistribution distribution_from_json(const Json& block, int m);

Json rat_to_json(const Rat& q);        // [num, den]
Rat rat_from_json(const Json& value);  // [num, den], entries int or string

// Correlation dump: {"pairs": {"i,j": {"phi|psi": [num,den], ...}, ...}}
// with 1-based question indices and sign-string answers.
Json correlation_to_json(const Correlation& p);
Correlation correlation_from_json(const Json& doc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace bcszk
