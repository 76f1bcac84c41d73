#include "bcszk/bcs_io.hpp"

#include <fstream>
#include <sstream>

namespace bcszk {

namespace {

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw FormatError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

VarList string_list(const Json& value, const std::string& where) {
    if (!value.is_array()) throw FormatError(where + ": expected an array of strings");
    VarList out;
    for (const auto& item : value) {
        if (!item.is_string()) throw FormatError(where + ": expected a string");
        out.push_back(item.get<std::string>());
    }
    return out;
}

Int int_from_json(const Json& value, const std::string& where) {
    if (value.is_number_integer()) return Int(static_cast<long>(value.get<std::int64_t>()));
    if (value.is_string()) return Int(value.get<std::string>());
    throw FormatError(where + ": expected an integer or decimal string");
}

Json int_to_json(const Int& value) {
    if (value.fits_slong_p()) return Json(static_cast<std::int64_t>(value.get_si()));
    return Json(value.get_str());
}

}  // namespace

Json rat_to_json(const Rat& q) { return Json::array({int_to_json(q.get_num()), int_to_json(q.get_den())}); }

Rat rat_from_json(const Json& value) {
    if (!value.is_array() || value.size() != 2)
        throw FormatError("rational: expected [num, den]");
    Int num = int_from_json(value[0], "rational");
    Int den = int_from_json(value[1], "rational");
    if (den == 0) throw FormatError("rational: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Json constraint_to_json(const Constraint& c) {
    Json block;
    const ConstraintBody& body = c.body();
    const std::string kind = body.kind();
    if (kind == "table") {
        block["type"] = "table";
        Json rows = Json::array();
        for (const auto& s : *body.table()) rows.push_back(signs_to_string(s));
        block["satisfying"] = rows;
    } else if (kind == "full") {
        block["type"] = "full";
    } else if (kind == "3sat") {
        block["type"] = "3sat";
        const auto& sat = static_cast<const ThreeSatBody&>(body);
        Json clauses = Json::array();
        for (const auto& clause : sat.clauses()) {
            Json lits = Json::array();
            for (const auto& lit : clause) {
                std::string name = c.context().at(lit.var);
                lits.push_back(lit.positive ? name : "!" + name);
            }
            clauses.push_back(lits);
        }
        block["clauses"] = clauses;
    } else if (kind == "obliviated") {
        const auto& obl = static_cast<const ObliviatedBody&>(body);
        block["type"] = "obliviated";
        block["degree"] = obl.degree();
        block["inner"] = constraint_to_json(obl.inner());
        block["inner_vars"] = obl.inner().context();
    } else if (kind == "product") {
        const auto& prod = static_cast<const ProductBody&>(body);
        block["type"] = "product";
        Json factors = Json::array();
        for (const auto& f : prod.factors()) {
            Json entry;
            entry["vars"] = f.context();
            entry["constraint"] = constraint_to_json(f);
            factors.push_back(entry);
        }
        block["factors"] = factors;
    } else {
        throw FormatError("constraint kind '" + kind + "' has no file representation");
    }
    return block;
}

Constraint constraint_from_json(const VarList& context, const Json& block) {
    std::string type = require(block, "type", "constraint").get<std::string>();
    if (type == "table") {
        std::vector<SignVec> rows;
        for (const auto& row : require(block, "satisfying", "table constraint")) {
            if (!row.is_string()) throw FormatError("table constraint: rows are sign strings");
            SignVec signs = string_to_signs(row.get<std::string>());
            if (signs.size() != context.size())
                throw FormatError("table row '" + row.get<std::string>() +
                                  "' does not match the context size");
            rows.push_back(std::move(signs));
        }
        if (rows.empty()) throw FormatError("table constraint with empty satisfying set");
        return Constraint::table(context, std::move(rows));
    }
    if (type == "full") return Constraint::full(context);
    if (type == "3sat") {
        std::vector<Clause> clauses;
        for (const auto& clause_json : require(block, "clauses", "3sat constraint")) {
            Clause clause;
            for (const auto& lit_json : clause_json) {
                if (!lit_json.is_string()) throw FormatError("3sat literal must be a string");
                std::string text = lit_json.get<std::string>();
                bool positive = true;
                if (!text.empty() && text[0] == '!') {
                    positive = false;
                    text = text.substr(1);
                }
                auto it = std::find(context.begin(), context.end(), text);
                if (it == context.end())
                    throw FormatError("3sat literal '" + text + "' is not in the context");
                clause.push_back({static_cast<int>(it - context.begin()), positive});
            }
            clauses.push_back(std::move(clause));
        }
        return Constraint(context, std::make_shared<ThreeSatBody>(
                                       static_cast<int>(context.size()), std::move(clauses)));
    }
    if (type == "obliviated") {
        int degree = require(block, "degree", "obliviated constraint").get<int>();
        VarList inner_vars = string_list(require(block, "inner_vars", "obliviated constraint"),
                                         "inner_vars");
        Constraint inner =
            constraint_from_json(inner_vars, require(block, "inner", "obliviated constraint"));
        if (context.size() != inner_vars.size() * static_cast<std::size_t>(degree))
            throw FormatError("obliviated context size does not match degree * inner arity");
        return Constraint(context, std::make_shared<ObliviatedBody>(std::move(inner), degree));
    }
    if (type == "product") {
        std::vector<Constraint> factors;
        std::size_t offset = 0;
        for (const auto& entry : require(block, "factors", "product constraint")) {
            VarList vars = string_list(require(entry, "vars", "product factor"), "factor vars");
            if (offset + vars.size() > context.size())
                throw FormatError("product factors exceed the context");
            for (std::size_t k = 0; k < vars.size(); ++k)
                if (context[offset + k] != vars[k])
                    throw FormatError("product factor variables must tile the context in order");
            factors.push_back(
                constraint_from_json(vars, require(entry, "constraint", "product factor")));
            offset += vars.size();
        }
        if (offset != context.size()) throw FormatError("product factors do not cover the context");
        return Constraint(context, std::make_shared<ProductBody>(std::move(factors)));
    }
    throw FormatError("unknown constraint type '" + type + "'");
}

Json distribution_to_json(const QuestionDistribution& pi) {
    Json block;
    if (pi.kind() == QuestionDistribution::Kind::Uniform || pi.is_uniform()) {
        block["type"] = "uniform";
        return block;
    }
    block["type"] = "matrix";
    Json rows = Json::array();
    for (const auto& row : pi.to_dense()) {
        Json cells = Json::array();
        for (const auto& w : row) cells.push_back(rat_to_json(w));
        rows.push_back(cells);
    }
    block["num_den"] = rows;
    return block;
}

QuestionDistribution distribution_from_json(const Json& block, int m) {
    std::string type = require(block, "type", "distribution").get<std::string>();
    if (type == "uniform") return QuestionDistribution::uniform(m);
    if (type == "matrix") {
        const Json& rows = require(block, "num_den", "matrix distribution");
        std::vector<std::vector<Rat>> weights;
        for (const auto& row : rows) {
            std::vector<Rat> cells;
            for (const auto& cell : row) cells.push_back(rat_from_json(cell));
            weights.push_back(std::move(cells));
        }
        if (static_cast<int>(weights.size()) != m)
            throw FormatError("distribution has " + std::to_string(weights.size()) +
                              " rows, expected " + std::to_string(m));
        try {
            return QuestionDistribution::dense(std::move(weights));
        } catch (const DistributionError&) {
            throw;
        }
    }
    throw FormatError("unknown distribution type '" + type + "'");
}

Json bcs_to_json(const Bcs& b, const QuestionDistribution& pi) {
    Json doc;
    doc["variables"] = b.variables;
    Json contexts = Json::array();
    for (int i = 0; i < b.m(); ++i) {
        Json entry;
        entry["name"] = b.name(i);
        entry["vars"] = b.context(i);
        entry["constraint"] = constraint_to_json(b.constraint(i));
        contexts.push_back(entry);
    }
    doc["contexts"] = contexts;
    doc["distribution"] = distribution_to_json(pi);
    return doc;
}

std::pair<Bcs, QuestionDistribution> bcs_from_json(const Json& doc) {
    Bcs b;
    b.variables = string_list(require(doc, "variables", "document"), "variables");
    const Json& contexts = require(doc, "contexts", "document");
    if (!contexts.is_array()) throw FormatError("contexts: expected an array");
    for (const auto& entry : contexts) {
        VarList vars = string_list(require(entry, "vars", "context"), "context vars");
        b.constraints.push_back(
            constraint_from_json(vars, require(entry, "constraint", "context")));
        b.names.push_back(entry.contains("name") ? entry.at("name").get<std::string>() : "");
    }
    b.validate();
    QuestionDistribution pi =
        distribution_from_json(require(doc, "distribution", "document"), b.m());
    return {std::move(b), std::move(pi)};
}

std::pair<Bcs, QuestionDistribution> parse_bcs(const std::string& document) {
    Json doc;
    try {
        doc = Json::parse(document);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    return bcs_from_json(doc);
}

std::string serialize_bcs(const Bcs& b, const QuestionDistribution& pi) {
    return bcs_to_json(b, pi).dump();
}

Json correlation_to_json(const Correlation& p) {
    Json pairs = Json::object();
    for (const auto& [pair, table] : p.tables) {
        std::string key = std::to_string(pair.first + 1) + "," + std::to_string(pair.second + 1);
        Json entries = Json::object();
        for (const auto& [answers, prob] : table)
            entries[answers.first + "|" + answers.second] = rat_to_json(prob);
        pairs[key] = entries;
    }
    Json doc;
    doc["pairs"] = pairs;
    return doc;
}

Correlation correlation_from_json(const Json& doc) {
    Correlation p;
    for (const auto& [key, table] : require(doc, "pairs", "correlation").items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw FormatError("bad pair key '" + key + "'");
        int i = std::stoi(key.substr(0, comma)) - 1;
        int j = std::stoi(key.substr(comma + 1)) - 1;
        for (const auto& [answers, prob] : table.items()) {
            auto bar = answers.find('|');
            if (bar == std::string::npos) throw FormatError("bad answer key '" + answers + "'");
            p.tables[{i, j}][{answers.substr(0, bar), answers.substr(bar + 1)}] =
                rat_from_json(prob);
        }
    }
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << contents;
}

}  // namespace bcszk
