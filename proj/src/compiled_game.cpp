#include "bcszk/compiled_game.hpp"

namespace bcszk {

namespace {

std::vector<Pbp> obliviated_programs(const Bcs& b, int degree,
                                     const std::vector<std::optional<Pbp>>& base_pbps,
                                     const Limits& limits) {
    std::vector<Pbp> out;
    for (int i = 0; i < b.m(); ++i) {
        Pbp base;
        if (static_cast<int>(base_pbps.size()) > i && base_pbps[i]) {
            base = *base_pbps[i];
            if (!recognizes(base, b.constraint(i), limits))
                throw NotRecognizing("supplied program " + std::to_string(i + 1) +
                                     " does not recognize its constraint");
        } else {
            base = compile_constraint(b.constraint(i), std::nullopt, limits);
        }
        out.push_back(lift_pbp(base, degree, share_variable_name));
    }
    return out;
}

// Clause lists; uniform distributions get padded with repeated trivial
// clauses so the subdivided distribution stays uniform.
std::vector<CompiledGame::WindowList> build_window_lists(const TableauSystem& tab,
                                                         bool pad_uniform) {
    std::vector<CompiledGame::WindowList> lists(tab.m());
    int max_count = 0;
    for (int i = 0; i < tab.m(); ++i) {
        lists[i].natural = lists[i].padded = tab.window_count(i);
        // The first trivial window (all constraints have one: the tableau has
        // uncovered pairs whenever it has four rows), else the last window.
        const auto& tc = tab.data().cons[i];
        lists[i].pad_index = tc.trivial_pairs.empty()
                                 ? tab.window_count(i) - 1
                                 : static_cast<int>(tc.typed_windows.size());
        max_count = std::max(max_count, lists[i].natural);
    }
    if (pad_uniform)
        for (auto& list : lists) list.padded = max_count;
    return lists;
}

QuestionDistribution subdivided_from_lists(const QuestionDistribution& pi,
                                           const std::vector<CompiledGame::WindowList>& lists) {
    std::vector<int> counts;
    for (const auto& list : lists) counts.push_back(list.padded);
    return QuestionDistribution::subdivided(pi, counts);
}

}  // namespace

CompiledGame::CompiledGame(Bcs original, QuestionDistribution pi, int degree,
                           std::vector<Pbp> obliviated_pbps, const Limits& limits)
    : original_(std::move(original)),
      original_pi_(std::move(pi)),
      degree_(degree),
      obl_(obliviate(original_, degree)),
      tab_(obl_, std::move(obliviated_pbps), limits),
      window_lists_(build_window_lists(tab_, original_pi_.is_uniform())),
      sub_pi_(subdivided_from_lists(original_pi_, window_lists_)) {
    if (original_pi_.size() != original_.m())
        throw DimensionMismatch("distribution does not match the system");
}

std::pair<int, int> CompiledGame::question_to_window(int flat) const {
    auto [i, j] = sub_pi_.flat_to_pair(flat);
    const WindowList& list = window_lists_[i];
    return {i, j < list.natural ? j : list.pad_index};
}

ClauseWindow CompiledGame::window_of(int flat) const {
    auto [i, j] = question_to_window(flat);
    return tab_.window(i, j);
}

Game CompiledGame::sub_game() const {
    Bcs sub;
    sub.variables = tab_.data().all_vars;
    for (int i = 0; i < tab_.m(); ++i)
        for (int j = 0; j < window_lists_[i].padded; ++j) {
            int w = j < window_lists_[i].natural ? j : window_lists_[i].pad_index;
            sub.constraints.push_back(tab_.window_constraint(i, w));
            sub.names.push_back("c" + std::to_string(i + 1) + "." + std::to_string(j + 1) +
                                ":t" + std::to_string(tab_.window(i, w).type));
        }
    return Game(std::move(sub), sub_pi_);
}

CompiledGame compile_pipeline(const Bcs& b, const QuestionDistribution& pi, int degree,
                              const std::vector<std::optional<Pbp>>& base_pbps,
                              const Limits& limits) {
    b.validate();
    return CompiledGame(b, pi, degree, obliviated_programs(b, degree, base_pbps, limits),
                        limits);
}

CompiledGame compile_pzk(const Bcs& b, const QuestionDistribution& pi, const Limits& limits) {
    if (!pi.is_strictly_positive())
        throw NonPositiveDistribution("the compiled correlation needs pi(i,j) > 0 everywhere");
    return compile_pipeline(b, pi, 5, {}, limits);
}

std::string serialize_compiled(const CompiledGame& g) {
    Json doc;
    doc["format"] = "bcszk-compiled";
    doc["degree"] = g.degree();
    doc["original"] = bcs_to_json(g.original(), g.original_pi());
    Json pbps = Json::array();
    for (int i = 0; i < g.tableau().m(); ++i)
        pbps.push_back(Json::parse(pbp_to_json_string(g.tableau().data().cons[i].pbp)));
    doc["pbps"] = pbps;
    Json counts = Json::array();
    for (const auto& list : g.window_lists()) counts.push_back(list.padded);
    doc["window_counts"] = counts;
    return doc.dump();
}

CompiledGame parse_compiled(const std::string& document, const Limits& limits) {
    Json doc;
    try {
        doc = Json::parse(document);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("invalid compiled-game JSON: ") + e.what());
    }
    if (!doc.contains("format") || doc["format"] != "bcszk-compiled")
        throw FormatError("not a compiled-game document");
    auto [b, pi] = bcs_from_json(doc.at("original"));
    int degree = doc.at("degree").get<int>();
    std::vector<Pbp> pbps;
    for (const auto& entry : doc.at("pbps")) pbps.push_back(pbp_from_json_string(entry.dump()));
    CompiledGame g(std::move(b), std::move(pi), degree, std::move(pbps), limits);
    // The clause lists are canonical; the stored counts guard against drift.
    const Json& counts = doc.at("window_counts");
    for (int i = 0; i < g.tableau().m(); ++i)
        if (counts.at(i).get<int>() != g.window_lists()[i].padded)
            throw FormatError("window counts in the document do not match the rebuild");
    return g;
}

}  // namespace bcszk
