#pragma once

#include "nuca/dynamics.hpp"
#include "nuca/inverse.hpp"

#include <functional>
#include <sstream>

namespace nuca::gallery {

// Rules ---------------------------------------------------------------------------------

inline LocalRule center_projection(std::string name = "id", std::size_t s = 2, int radius = 1) {
    return LocalRule::from_function(std::move(name), radius, s,
                                    [radius](std::span<const Symbol> w) { return w[static_cast<std::size_t>(radius)]; });
}

inline LocalRule xor_left() { // f_L(a,b,c) = a ⊕ b
    return LocalRule::from_function("f_L", 1, 2, [](std::span<const Symbol> w) { return w[0] ^ w[1]; });
}
inline LocalRule xor_right() { // f_R(a,b,c) = b ⊕ c
    return LocalRule::from_function("f_R", 1, 2, [](std::span<const Symbol> w) { return w[1] ^ w[2]; });
}
inline LocalRule xor3(std::string name = "f") {
    return LocalRule::from_function(std::move(name), 1, 2, [](std::span<const Symbol> w) { return w[0] ^ w[1] ^ w[2]; });
}
inline LocalRule max_right(std::string name = "g") { // max(b, c)
    return LocalRule::from_function(std::move(name), 1, 2, [](std::span<const Symbol> w) { return std::max(w[1], w[2]); });
}
inline LocalRule left_shift(std::string name = "shift") { // cell takes its right neighbor
    return LocalRule::from_function(std::move(name), 1, 2, [](std::span<const Symbol> w) { return w[2]; });
}
inline LocalRule and_right(std::string name = "and") { // b ∧ c
    return LocalRule::from_function(std::move(name), 1, 2, [](std::span<const Symbol> w) { return w[1] & w[2]; });
}

// Leftward traffic: 0 if a=0,b=1; 1 if b=0,c=1; b otherwise.
inline LocalRule traffic() {
    return LocalRule::from_function("tau", 1, 2, [](std::span<const Symbol> w) -> Symbol {
        const Symbol a = w[0], b = w[1], c = w[2];
        if (a == 0 && b == 1) return 0;
        if (b == 0 && c == 1) return 1;
        return b;
    });
}

// One clause of the four-state rule; `any` matches every symbol.
struct Clause {
    static constexpr int any = -1;
    int a, b, c;
    Symbol out;
    bool matches(std::span<const Symbol> w) const {
        return (a == any || w[0] == a) && (b == any || w[1] == b) && (c == any || w[2] == c);
    }
};

inline const std::vector<Clause>& fourstate_clauses() {
    static const std::vector<Clause> clauses = {
        {Clause::any, 0, 3, 3}, {1, 1, 1, 1}, {1, 1, 2, 1}, {Clause::any, 1, 3, 3}, {1, 2, Clause::any, 2},
        {Clause::any, 3, 3, 3},
    };
    return clauses;
}

// The listed clauses, 0 otherwise.
inline LocalRule fourstate() {
    return LocalRule::from_function("f", 1, 4, [](std::span<const Symbol> w) -> Symbol {
        for (const auto& cl : fourstate_clauses()) {
            if (cl.matches(w)) return cl.out;
        }
        return 0;
    });
}

// Entries -------------------------------------------------------------------------------

struct FactOutcome {
    std::string fact;
    bool passed = false;
    std::string detail;
};

struct PinnedFact {
    std::string description;
    std::function<FactOutcome()> check;
};

struct GalleryEntry {
    std::string name;
    std::string summary;
    std::shared_ptr<const RuleSet> rules;
    RuleDistribution distribution;
    std::vector<Configuration> configs;
    std::vector<PinnedFact> facts;

    const Configuration& config(std::string_view config_name) const {
        for (const auto& c : configs) {
            if (c.name() == config_name) return c;
        }
        throw ContractError("gallery entry " + name + " has no configuration " + std::string(config_name));
    }
};

inline const std::vector<std::string>& entry_names() {
    static const std::vector<std::string> names = {
        "example1",    "balance_counterexample", "traffic_halfplane", "fourstate_halfplane",
        "uniform_shift", "uniform_xor3",         "uniform_and",
    };
    return names;
}

// Cells scanned when looking for long f_R runs in the pyramid distribution.
inline const Interval kPyramidScan{0, 4096};

// ^∞(f_R) g (f_L)^∞, the non-recurrent variant, for ad-hoc use.
inline RuleDistribution example1_nonrecurrent() {
    auto rules = std::make_shared<const RuleSet>(Alphabet("01"), std::vector{xor_right(), center_projection("g"), xor_left()});
    return RuleDistribution("example1_nonrecurrent", rules, TwoSidedDescription{{0}, {1}, 0, {2}});
}

// Center of the first f_R run of length >= 2R+1 in the pyramid distribution.
inline Cell example1_run_center(const RuleDistribution& theta, int radius) {
    const auto fr = theta.ruleset().index_of("f_R");
    auto x = find_rule_run(theta, fr, 2 * static_cast<std::size_t>(radius) + 1, kPyramidScan);
    if (!x) throw InvariantViolation("no f_R run of length " + std::to_string(2 * radius + 1) + " in scan range");
    return *x;
}

namespace detail {

inline FactOutcome fact(std::string name, bool passed, std::string detail = {}) {
    return {std::move(name), passed, std::move(detail)};
}

inline std::string glyphs(const Alphabet& a, const Pattern& p) { return a.format_word(p.symbols); }

inline Pattern pattern_of(const Alphabet& a, Cell lo, std::string_view text) {
    return {Interval(lo, lo + static_cast<Cell>(text.size()) - 1), a.parse_word(text)};
}

inline std::vector<Configuration> binary_constants(const Alphabet& a) {
    return {Configuration::constant(a, 0, "all_zero"), Configuration::constant(a, 1, "all_one")};
}

inline GalleryEntry make_example1() {
    const Alphabet a("01");
    auto rules = std::make_shared<const RuleSet>(a, std::vector{xor_right(), center_projection("g"), xor_left()});
    RuleDistribution theta("example1", rules, MirroredPyramidDescription{0, 1, 2, 0});
    GalleryEntry e{"example1", "bijective, recurrent, not finitely reversible (f_L, f_R, g pyramid)", rules, theta,
                   binary_constants(a), {}};
    e.facts.push_back({"rules pairwise non-identical", [theta] {
                           const auto norm = normalize_ruleset(theta.ruleset());
                           return fact("rules pairwise non-identical", norm.rules.size() == 3);
                       }});
    e.facts.push_back({"no erasable pair on [0,6], pad 0", [theta] {
                           auto pair = mutual_erasability_search(theta, {0, 6}, 0);
                           return fact("no erasable pair on [0,6], pad 0", !pair.has_value());
                       }});
    e.facts.push_back({"balanced on [0,4]", [theta] {
                           return fact("balanced on [0,4]", balance_audit(theta, {0, 4}).balanced);
                       }});
    e.facts.push_back({"radius-2 inverse conflict at f_R-run center, certified by all-0/all-1", [theta, a] {
                           const Cell x = example1_run_center(theta, 2);
                           const bool conflict = is_conflict(local_inverse_candidate(theta, x, 2));
                           const bool certified = verify_conflict_with_configs(
                               theta, x, 2, Configuration::constant(a, 0), Configuration::constant(a, 1));
                           return fact("radius-2 inverse conflict at f_R-run center, certified by all-0/all-1",
                                       conflict && certified, "cell " + std::to_string(x));
                       }});
    e.facts.push_back({"recurrence witness for [0,2] within 100", [theta] {
                           auto k = recurrence_witness(theta, {0, 2}, 100);
                           return fact("recurrence witness for [0,2] within 100", k.has_value(),
                                       k ? "k=" + std::to_string(*k) : "none");
                       }});
    return e;
}

inline GalleryEntry make_balance_counterexample() {
    const Alphabet a("01");
    auto rules = std::make_shared<const RuleSet>(a, std::vector{xor3("f"), max_right("g")});
    RuleDistribution theta("balance_counterexample", rules, TwoSidedDescription{{0}, {1}, 0, {0}});
    GalleryEntry e{"balance_counterexample", "surjective but unbalanced: g = max(b,c) at 0, xor3 elsewhere", rules,
                   theta, binary_constants(a), {}};
    e.facts.push_back({"preimages of \"1\" on {0} = 6", [theta, a] {
                           auto r = preimage_count(theta, {0, 0}, pattern_of(a, 0, "1"));
                           return fact("preimages of \"1\" on {0} = 6", r.count == 6 && r.expected == 4,
                                       std::to_string(r.count) + " vs expected " + std::to_string(r.expected));
                       }});
    e.facts.push_back({"preimages of \"0\" on {0} = 2", [theta, a] {
                           auto r = preimage_count(theta, {0, 0}, pattern_of(a, 0, "0"));
                           return fact("preimages of \"0\" on {0} = 2", r.count == 2);
                       }});
    e.facts.push_back({"unbalanced on {0} with witness (1, 6, 4)", [theta, a] {
                           auto r = balance_audit(theta, {0, 0});
                           const bool ok = !r.balanced && r.witness && glyphs(a, r.witness->pattern) == "1" &&
                                           r.witness->count == 6 && r.witness->expected == 4;
                           return fact("unbalanced on {0} with witness (1, 6, 4)", ok);
                       }});
    e.facts.push_back({"every pattern on {0} attained", [theta] {
                           return fact("every pattern on {0} attained",
                                       surjectivity_window_check(theta, {0, 0}).all_attained);
                       }});
    return e;
}

inline GalleryEntry make_traffic_halfplane() {
    const Alphabet a("01");
    auto rules = std::make_shared<const RuleSet>(a, std::vector{center_projection("id"), traffic()});
    RuleDistribution theta("traffic_halfplane", rules, TwoSidedDescription{{0}, {}, 1, {1}});
    auto configs = binary_constants(a);
    configs.push_back(Configuration::finite_perturbation(a, 0, {1}, 4, "single_one"));
    GalleryEntry e{"traffic_halfplane", "leftward traffic for x > 0, identity for x <= 0", rules, theta, configs, {}};
    e.facts.push_back({"tau(1,0,1) = 1 and tau(0,1,1) = 0", [theta] {
                           const auto& tau = theta.ruleset()[1];
                           return fact("tau(1,0,1) = 1 and tau(0,1,1) = 0",
                                       eval_rule(tau, {1, 0, 1}) == 1 && eval_rule(tau, {0, 1, 1}) == 0);
                       }});
    e.facts.push_back({"all-ones is a fixed point", [theta, a] {
                           const auto c1 = Configuration::constant(a, 1);
                           const auto next = step_config(theta, c1);
                           return fact("all-ones is a fixed point", restrict(next, {-64, 64}) == restrict(c1, {-64, 64}));
                       }});
    for (Cell k : {2, 4}) {
        const std::string name = "all-ones invariant on [2,4] ∪ [0," + std::to_string(k) + "]";
        e.facts.push_back({name, [theta, a, k, name] {
                               const Interval d = Interval(2, 4).hull(Interval(0, k));
                               auto cert = cylinder_invariance_check(theta, Configuration::constant(a, 1), d);
                               return fact(name, cert.invariant, d.str());
                           }});
    }
    e.facts.push_back({"all-ones on [2,4] alone escapes", [theta, a] {
                           auto cert = cylinder_invariance_check(theta, Configuration::constant(a, 1), {2, 4});
                           return fact("all-ones on [2,4] alone escapes", !cert.invariant);
                       }});
    e.facts.push_back({"all-zero diverges at cell 1 (D=[-3,3], probes 0/1)", [theta, a] {
                           const auto c = Configuration::constant(a, 0);
                           auto w = divergence_search(theta, c, {-3, 3}, {1, 1}, {{0}, {1}}, 64);
                           const bool ok = w && w->cell == 1 && replay_divergence(theta, c, {-3, 3}, *w);
                           return fact("all-zero diverges at cell 1 (D=[-3,3], probes 0/1)", ok,
                                       w ? "n=" + std::to_string(w->time) : "none");
                       }});
    return e;
}

} // namespace detail

// 1 everywhere except a 2 at `j`.
inline Configuration blocking_configuration(const Alphabet& a, Cell j) {
    return Configuration::finite_perturbation(a, 1, {2}, j, "blocking");
}

// The flood scenario: 1 everywhere, c(x1) = `barrier` (not 1) and c(x2) = 2.
inline Configuration flood_configuration(const Alphabet& a, Cell x1, Cell x2, Symbol barrier = 0) {
    if (x2 <= x1) throw ContractError("flood configuration needs x1 < x2");
    std::vector<Symbol> center(static_cast<std::size_t>(x2 - x1 + 1), 1);
    center.front() = barrier;
    center.back() = 2;
    return Configuration::finite_perturbation(a, 1, std::move(center), x1, "flood");
}

namespace detail {

inline GalleryEntry make_fourstate_halfplane() {
    const Alphabet a("0123");
    auto rules = std::make_shared<const RuleSet>(a, std::vector{center_projection("id", 4), fourstate()});
    RuleDistribution theta("fourstate_halfplane", rules, TwoSidedDescription{{0}, {}, 1, {1}});
    std::vector<Configuration> configs = {blocking_configuration(a, 12), flood_configuration(a, 1, 8),
                                          Configuration::constant(a, 1, "all_one")};
    GalleryEntry e{"fourstate_halfplane", "not sensitive, no equicontinuity points (four states, x > 0)", rules, theta,
                   configs, {}};
    e.facts.push_back({"f(0,0,3) = 3", [theta] {
                           return fact("f(0,0,3) = 3", eval_rule(theta.ruleset()[1], {0, 0, 3}) == 3);
                       }});
    e.facts.push_back({"blocking configuration invariant on [0,12]", [theta, a] {
                           auto cert = cylinder_invariance_check(theta, blocking_configuration(a, 12), {0, 12});
                           return fact("blocking configuration invariant on [0,12]", cert.invariant);
                       }});
    e.facts.push_back({"flood law H^d(c)(x2) = 0 for d = 2..12", [theta, a] {
                           bool ok = true;
                           for (Cell d = 2; d <= 12; ++d) {
                               ok = ok && evolve_cell(theta, flood_configuration(a, 1, 1 + d), 1 + d,
                                                      static_cast<std::size_t>(d)) == 0;
                           }
                           return fact("flood law H^d(c)(x2) = 0 for d = 2..12", ok);
                       }});
    return e;
}

inline GalleryEntry make_uniform(std::string name, std::string summary, LocalRule rule) {
    const Alphabet a("01");
    auto rules = std::make_shared<const RuleSet>(a, std::vector{std::move(rule)});
    RuleDistribution theta(name, rules, UniformDescription{0});
    auto configs = binary_constants(a);
    configs.push_back(Configuration(a, TwoSidedWord<Symbol>{{0, 0, 1, 0, 1, 1, 1}, {}, 0, {0, 0, 1, 0, 1, 1, 1}},
                                    "periodic7"));
    return {std::move(name), std::move(summary), rules, theta, std::move(configs), {}};
}

inline GalleryEntry make_uniform_shift() {
    auto e = make_uniform("uniform_shift", "left shift: each cell copies its right neighbor", left_shift());
    const auto theta = e.distribution;
    e.facts.push_back({"balanced on [0,3]", [theta] {
                           return fact("balanced on [0,3]", balance_audit(theta, {0, 3}).balanced);
                       }});
    e.facts.push_back({"radius-1 inverse assembles on [-2,2] to one rule", [theta] {
                           auto phi = assemble_inverse(theta, {-2, 2}, 1);
                           return fact("radius-1 inverse assembles on [-2,2] to one rule",
                                       phi.ok() && phi.rules->size() == 1);
                       }});
    return e;
}

inline GalleryEntry make_uniform_xor3() {
    auto e = make_uniform("uniform_xor3", "elementary rule 150 (a ⊕ b ⊕ c)", xor3("xor3"));
    const auto theta = e.distribution;
    e.facts.push_back({"preimages of \"1\" on {0} = 4", [theta] {
                           auto r = preimage_count(theta, {0, 0}, Pattern({0, 0}, {1}));
                           return fact("preimages of \"1\" on {0} = 4", r.count == 4);
                       }});
    e.facts.push_back({"no erasable pair on [0,4], pad 0", [theta] {
                           return fact("no erasable pair on [0,4], pad 0",
                                       !mutual_erasability_search(theta, {0, 4}, 0).has_value());
                       }});
    e.facts.push_back({"radius-1 inverse conflict at cell 0", [theta] {
                           return fact("radius-1 inverse conflict at cell 0", !assemble_inverse(theta, {0, 0}, 1).ok());
                       }});
    return e;
}

inline GalleryEntry make_uniform_and() {
    auto e = make_uniform("uniform_and", "b ∧ c, not pre-injective", and_right());
    const auto theta = e.distribution;
    e.facts.push_back({"erasable pair on [0,2], pad 0", [theta] {
                           auto pair = mutual_erasability_search(theta, {0, 2}, 0);
                           return fact("erasable pair on [0,2], pad 0", pair.has_value());
                       }});
    return e;
}

} // namespace detail

inline GalleryEntry build_entry(std::string_view name) {
    if (name == "example1") return detail::make_example1();
    if (name == "balance_counterexample") return detail::make_balance_counterexample();
    if (name == "traffic_halfplane") return detail::make_traffic_halfplane();
    if (name == "fourstate_halfplane") return detail::make_fourstate_halfplane();
    if (name == "uniform_shift") return detail::make_uniform_shift();
    if (name == "uniform_xor3") return detail::make_uniform_xor3();
    if (name == "uniform_and") return detail::make_uniform_and();
    throw ContractError("unknown gallery entry " + std::string(name));
}

inline std::vector<FactOutcome> run_pinned_facts(const GalleryEntry& entry) {
    std::vector<FactOutcome> out;
    for (const auto& f : entry.facts) {
        try {
            out.push_back(f.check());
        } catch (const std::exception& ex) {
            out.push_back({f.description, false, std::string("exception: ") + ex.what()});
        }
    }
    return out;
}

} // namespace nuca::gallery
