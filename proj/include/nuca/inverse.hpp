#pragma once

#include "nuca/finite_map.hpp"

#include <random>

namespace nuca {

// Two patterns on N_θ([x-R, x+R]) with the same image on [x-R, x+R] but different values at x.
// Pattern-level only: the patterns need not extend to configurations with equal global images.
struct Conflict {
    Cell cell = 0;
    int radius = 0;
    Pattern w1;
    Pattern w2;
    Pattern image;
};

using InverseSearchOutcome = std::variant<LocalRule, Conflict>;

inline bool is_conflict(const InverseSearchOutcome& o) { return std::holds_alternative<Conflict>(o); }

// Tries to build a radius-R rule recovering c(x) from H_θ(c) on [x-R, x+R]. Image windows that
// are never realized map to symbol 0.
inline InverseSearchOutcome local_inverse_candidate(const RuleDistribution& theta, Cell x, int radius,
                                                    std::uint64_t cap = kDefaultCap) {
    if (radius < 0) throw ContractError("inverse radius must be non-negative");
    const Interval window(x - radius, x + radius);
    const FiniteNucaMap map(theta, window);
    const Interval ext = map.extended();
    const std::size_t s = map.alphabet_size();
    checked_pattern_count(s, ext.size(), cap, "local inverse search at cell " + std::to_string(x));

    constexpr std::uint64_t kUnseen = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t images = saturating_pow(s, window.size());
    std::vector<std::uint64_t> first_preimage(images, kUnseen);
    std::vector<Symbol> center(images, 0);
    const std::size_t at_x = ext.offset(x);

    std::vector<Symbol> w(ext.size(), 0);
    std::uint64_t index = 0;
    do {
        const auto img = map.apply_index(w);
        if (first_preimage[img] == kUnseen) {
            first_preimage[img] = index;
            center[img] = w[at_x];
        } else if (center[img] != w[at_x]) {
            return Conflict{x, radius, Pattern(ext, decode_word(first_preimage[img], s, ext.size())), Pattern(ext, w),
                            Pattern(window, decode_word(img, s, window.size()))};
        }
        ++index;
    } while (next_word(w, s));
    return LocalRule("inv" + std::to_string(x), radius, s, std::move(center));
}

// True iff c and e differ at x but have equal images on [x-R, x+R]: no radius-R rule at x
// can invert H_θ.
inline bool verify_conflict_with_configs(const RuleDistribution& theta, Cell x, int radius, const Configuration& c,
                                         const Configuration& e) {
    if (c.at(x) == e.at(x)) return false;
    const Interval window(x - radius, x + radius);
    return evolve_window(theta, c, window, 1) == evolve_window(theta, e, window, 1);
}

struct PartialInverseDistribution {
    Interval interval;
    int radius = 0;
    std::shared_ptr<const RuleSet> rules;   // pairwise non-identical
    std::vector<std::size_t> assignment;    // rule index per cell, up to the failing cell
    std::optional<Conflict> failure;

    bool ok() const { return !failure.has_value(); }
    const LocalRule& rule_at(Cell x) const { return (*rules)[assignment.at(interval.offset(x))]; }
};

inline PartialInverseDistribution assemble_inverse(const RuleDistribution& theta, const Interval& interval, int radius,
                                                   std::uint64_t cap = kDefaultCap) {
    PartialInverseDistribution out;
    out.interval = interval;
    out.radius = radius;
    std::vector<LocalRule> kept;
    if (!interval.is_empty()) {
        for (Cell x = interval.lo(); x <= interval.hi(); ++x) {
            auto outcome = local_inverse_candidate(theta, x, radius, cap);
            if (auto* conflict = std::get_if<Conflict>(&outcome)) {
                out.failure = std::move(*conflict);
                break;
            }
            const auto& candidate = std::get<LocalRule>(outcome);
            auto same = std::find_if(kept.begin(), kept.end(),
                                     [&](const LocalRule& r) { return rules_identical(r, candidate); });
            if (same == kept.end()) {
                kept.push_back(candidate.renamed("phi" + std::to_string(kept.size())));
                same = kept.end() - 1;
            }
            out.assignment.push_back(static_cast<std::size_t>(same - kept.begin()));
        }
    }
    out.rules = std::make_shared<const RuleSet>(theta.alphabet(), std::move(kept));
    return out;
}

struct ComposeCounterexample {
    std::size_t trial = 0;
    Cell cell = 0;
    Configuration config;
    Symbol expected = 0;
    Symbol got = 0;
};

struct ComposeCheck {
    bool ok = true;
    std::optional<ComposeCounterexample> counterexample;
};

// Randomized check that φ(x) applied to H_θ(c) on [x-R, x+R] returns c(x) for every x in the
// R-interior of φ's interval.
inline ComposeCheck compose_check(const RuleDistribution& theta, const PartialInverseDistribution& phi,
                                  std::size_t trials, std::uint64_t seed) {
    if (!phi.ok()) throw ContractError("compose_check needs a successfully assembled inverse");
    if (phi.interval.size() <= 2 * static_cast<std::size_t>(phi.radius)) return {};
    const Interval interior(phi.interval.lo() + phi.radius, phi.interval.hi() - phi.radius);
    const Interval images = interior.widened(phi.radius, phi.radius);
    const Interval cover = neighborhood_of(theta, images).widened(2, 2);

    std::mt19937_64 rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto c = random_configuration(theta.alphabet(), rng, cover);
        const auto image = evolve_window(theta, c, images, 1);
        for (Cell x = interior.lo(); x <= interior.hi(); ++x) {
            const auto& rule = phi.rule_at(x);
            const auto first = image.symbols.begin() + static_cast<std::ptrdiff_t>(images.offset(x - phi.radius));
            const Symbol got = rule(std::span<const Symbol>(&*first, rule.width()));
            if (got != c.at(x)) return {false, ComposeCounterexample{trial, x, c, c.at(x), got}};
        }
    }
    return {};
}

} // namespace nuca
