#pragma once

#include <optional>

#include "bcszk/bcs_io.hpp"
#include "bcszk/tableau.hpp"
#include "bcszk/transforms.hpp"

namespace bcszk {

// The compiled pipeline: B -> Obl_n(B) -> Tab(Obl_n(B)) -> clause windows
// with the subdivided question distribution. Every question of the compiled
// game is one clause window; cross references run back to the tableau.
class CompiledGame {
  public:
    CompiledGame(Bcs original, QuestionDistribution pi, int degree,
                 std::vector<Pbp> obliviated_pbps, const Limits& limits = default_limits());

    const Bcs& original() const { return original_; }
    const QuestionDistribution& original_pi() const { return original_pi_; }
    int degree() const { return degree_; }
    const Bcs& obliviated() const { return obl_; }
    const TableauSystem& tableau() const { return tab_; }
    const QuestionDistribution& sub_pi() const { return sub_pi_; }

    int question_count() const { return sub_pi_.size(); }
    // flat question -> (constraint index, window index within the tableau)
    std::pair<int, int> question_to_window(int flat) const;
    ClauseWindow window_of(int flat) const;

    // The subdivided game as an ordinary Game value. Materializes one
    // context per clause window: fine for the small test games, ruinous for
    // compiled production games (use the compiled protocol runner instead).
    Game sub_game() const;

    // Uniform pi keeps pi_sub uniform through padding: every clause list is
    // brought to the same length by repeating one trivial clause.
    struct WindowList {
        int natural = 0;  // canonical clause count
        int padded = 0;   // count after padding
        int pad_index = 0;  // the repeated clause
    };
    const std::vector<WindowList>& window_lists() const { return window_lists_; }

  private:
    Bcs original_;
    QuestionDistribution original_pi_;
    int degree_;
    Bcs obl_;
    TableauSystem tab_;
    std::vector<WindowList> window_lists_;
    QuestionDistribution sub_pi_;
};

// General pipeline entry point. base_pbps[i], when given, must recognize
// C_i over V_i and is lifted through the obliviation; otherwise the
// constraint is compiled from its indicator circuit and lifted.
CompiledGame compile_pipeline(const Bcs& b, const QuestionDistribution& pi, int degree,
                              const std::vector<std::optional<Pbp>>& base_pbps = {},
                              const Limits& limits = default_limits());

// The production compiler: obliviation degree 5 and a strictly positive
// question distribution (NonPositiveDistribution otherwise).
CompiledGame compile_pzk(const Bcs& b, const QuestionDistribution& pi,
                         const Limits& limits = default_limits());

// Dump format: the BCS document shape with tableau constraint blocks
// ({"type":"tableau","degree":n,"pbp":...,"base_vars":...,"base_constraint":...})
// plus the base distribution and the padded clause counts; parsing rebuilds
// the pipeline deterministically.
std::string serialize_compiled(const CompiledGame& g);
CompiledGame parse_compiled(const std::string& document, const Limits& limits = default_limits());

}  // namespace bcszk
