#pragma once

#include "nuca/finite_map.hpp"

namespace nuca {

struct InvarianceCertificate {
    Configuration base;
    Interval domain;
    bool invariant = true;
    std::optional<Pattern> escape;       // extension on N_θ(D) whose image leaves Cyl(c, D)
    std::optional<Pattern> escape_image; // its image on D
};

// Exhaustive one-step check of H_θ(Cyl(c, D)) ⊆ Cyl(c, D). One step on D depends only on
// N_θ(D), so it suffices to enumerate the cells of N_θ(D) outside D.
inline InvarianceCertificate cylinder_invariance_check(const RuleDistribution& theta, const Configuration& c,
                                                       const Interval& d, std::uint64_t cap = kDefaultCap) {
    InvarianceCertificate cert{c, d, true, std::nullopt, std::nullopt};
    if (d.is_empty()) return cert;
    const FiniteNucaMap map(theta, d);
    const Interval ext = map.extended();
    const std::size_t s = map.alphabet_size();
    const std::size_t free_cells = ext.size() - d.size();
    checked_pattern_count(s, free_cells, cap, "cylinder invariance check on " + d.str());

    const auto base = restrict(c, d).symbols;
    std::vector<Symbol> q(ext.size(), 0);
    std::copy(base.begin(), base.end(), q.begin() + static_cast<std::ptrdiff_t>(ext.offset(d.lo())));
    std::vector<std::size_t> slots;
    for (Cell x = ext.lo(); x <= ext.hi(); ++x) {
        if (!d.contains(x)) slots.push_back(ext.offset(x));
    }
    std::vector<Symbol> u(free_cells, 0);
    std::vector<Symbol> image(d.size());
    do {
        for (std::size_t i = 0; i < slots.size(); ++i) q[slots[i]] = u[i];
        map.apply(q, image);
        if (image != base) {
            cert.invariant = false;
            cert.escape = Pattern(ext, q);
            cert.escape_image = Pattern(d, image);
            return cert;
        }
    } while (next_word(u, s));
    return cert;
}

// c on D, `background` repeated on both sides outside D.
inline Configuration probe_configuration(const Configuration& c, const Interval& d, std::vector<Symbol> background) {
    TwoSidedWord<Symbol> w{background, restrict(c, d).symbols, d.is_empty() ? 0 : d.lo(), background};
    return {c.alphabet(), std::move(w)};
}

struct DivergenceWitness {
    std::size_t probe_index = 0;
    std::vector<Symbol> background;
    Configuration probe;
    std::size_t time = 0;
    Cell cell = 0;
    Symbol base_value = 0;
    Symbol probe_value = 0;
};

// Simulates c and each probe (c on D, background elsewhere) for n = 1..t_max and returns the
// first (probe, n, x) with x in E where they differ. Absence is inconclusive.
inline std::optional<DivergenceWitness> divergence_search(const RuleDistribution& theta, const Configuration& c,
                                                          const Interval& d, const Interval& e,
                                                          const std::vector<std::vector<Symbol>>& probes,
                                                          std::size_t t_max) {
    if (e.is_empty()) return std::nullopt;
    const auto base = spacetime(theta, c, e, t_max);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto probe = probe_configuration(c, d, probes[i]);
        const auto run = spacetime(theta, probe, e, t_max);
        for (std::size_t n = 1; n <= t_max; ++n) {
            for (Cell x = e.lo(); x <= e.hi(); ++x) {
                if (run.at(n, x) != base.at(n, x)) {
                    return DivergenceWitness{i, probes[i], probe, n, x, base.at(n, x), run.at(n, x)};
                }
            }
        }
    }
    return std::nullopt;
}

// Re-simulates a witness from scratch.
inline bool replay_divergence(const RuleDistribution& theta, const Configuration& c, const Interval& d,
                              const DivergenceWitness& w) {
    if (!Cylinder{c, d}.contains(w.probe)) return false;
    const Symbol a = evolve_cell(theta, c, w.cell, w.time);
    const Symbol b = evolve_cell(theta, w.probe, w.cell, w.time);
    return a != b && a == w.base_value && b == w.probe_value;
}

// Smallest n in [1, t_max] with H_θ^n(c) ∈ Cyl(c, D).
inline std::optional<std::size_t> temporal_recurrence_search(const RuleDistribution& theta, const Configuration& c,
                                                             const Interval& d, std::size_t t_max) {
    const auto grid = spacetime(theta, c, d, t_max);
    for (std::size_t n = 1; n <= t_max; ++n) {
        if (grid.rows[n] == grid.rows[0]) return n;
    }
    return std::nullopt;
}

// Product pairing ------------------------------------------------------------------------

inline Symbol pair_symbol(Symbol a, Symbol b, std::size_t s) { return static_cast<Symbol>(a * s + b); }
inline Symbol pair_first(Symbol p, std::size_t s) { return static_cast<Symbol>(p / s); }
inline Symbol pair_second(Symbol p, std::size_t s) { return static_cast<Symbol>(p % s); }

inline LocalRule pair_rule(const LocalRule& f) {
    const std::size_t s = f.alphabet_size();
    std::vector<Symbol> first(f.width()), second(f.width());
    return LocalRule::from_function(f.name(), f.radius(), s * s, [&](std::span<const Symbol> window) {
        for (std::size_t i = 0; i < window.size(); ++i) {
            first[i] = pair_first(window[i], s);
            second[i] = pair_second(window[i], s);
        }
        return pair_symbol(f(first), f(second), s);
    });
}

// Distribution over Σ×Σ (symbol a·s + b) running θ on both components independently.
inline RuleDistribution product_pairing(const RuleDistribution& theta) {
    const std::size_t s = theta.alphabet().size();
    std::vector<LocalRule> paired;
    for (const auto& r : theta.ruleset().rules()) paired.push_back(pair_rule(r));
    auto rules = std::make_shared<const RuleSet>(Alphabet::standard(s * s), std::move(paired));
    return RuleDistribution(theta.name() + "_paired", std::move(rules), theta.description());
}

inline Configuration pair_configurations(const Configuration& c, const Configuration& e) {
    const std::size_t s = c.alphabet().size();
    if (e.alphabet().size() != s) throw ContractError("paired configurations need equal alphabets");
    const auto& a = c.word();
    const auto& b = e.word();
    auto word = detail::sample_two_sided([&](Cell x) { return pair_symbol(c.at(x), e.at(x), s); },
                                         std::min(a.anchor, b.anchor) - 1, std::max(a.center_end(), b.center_end()),
                                         std::lcm(a.left.size(), b.left.size()),
                                         std::lcm(a.right.size(), b.right.size()));
    return {Alphabet::standard(s * s), std::move(word)};
}

} // namespace nuca
