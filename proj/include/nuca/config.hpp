#pragma once

#include "nuca/rule.hpp"

#include <random>

namespace nuca {

// A bi-infinite configuration in two-sided eventually periodic form.
class Configuration {
public:
    Configuration(Alphabet alphabet, TwoSidedWord<Symbol> word, std::string name = {})
        : alphabet_(std::move(alphabet)), word_(std::move(word)), name_(std::move(name)) {
        word_.validate();
        auto check = [&](const std::vector<Symbol>& w) {
            for (Symbol v : w) {
                if (v >= alphabet_.size()) throw ContractError("configuration symbol outside alphabet");
            }
        };
        check(word_.left);
        check(word_.center);
        check(word_.right);
    }

    static Configuration constant(const Alphabet& alphabet, Symbol v, std::string name = {}) {
        return {alphabet, TwoSidedWord<Symbol>::constant(v), std::move(name)};
    }
    // `background` everywhere except `center` written from `anchor`.
    static Configuration finite_perturbation(const Alphabet& alphabet, Symbol background,
                                             std::vector<Symbol> center, Cell anchor, std::string name = {}) {
        return {alphabet, TwoSidedWord<Symbol>{{background}, std::move(center), anchor, {background}},
                std::move(name)};
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const TwoSidedWord<Symbol>& word() const { return word_; }
    const std::string& name() const { return name_; }
    Symbol at(Cell x) const { return word_.at(x); }

    Configuration with_name(std::string name) const {
        Configuration c = *this;
        c.name_ = std::move(name);
        return c;
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    Alphabet alphabet_;
    TwoSidedWord<Symbol> word_;
    std::string name_;
};

inline Symbol value_at(const Configuration& c, Cell x) { return c.at(x); }

struct Pattern {
    Interval domain;
    std::vector<Symbol> symbols;

    Pattern() = default;
    Pattern(Interval d, std::vector<Symbol> s) : domain(d), symbols(std::move(s)) {
        if (symbols.size() != domain.size()) throw ContractError("pattern length does not match its domain");
    }

    Symbol at(Cell x) const { return symbols.at(domain.offset(x)); }

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

inline Pattern restrict(const Configuration& c, const Interval& d) {
    std::vector<Symbol> out;
    out.reserve(d.size());
    if (!d.is_empty()) {
        for (Cell x = d.lo(); x <= d.hi(); ++x) out.push_back(c.at(x));
    }
    return {d, std::move(out)};
}

struct Cylinder {
    Configuration base;
    Interval domain;

    bool contains(const Configuration& e) const {
        if (domain.is_empty()) return true;
        for (Cell x = domain.lo(); x <= domain.hi(); ++x) {
            if (e.at(x) != base.at(x)) return false;
        }
        return true;
    }
};

inline bool cylinder_member(const Cylinder& cyl, const Configuration& e) { return cyl.contains(e); }

// Result r satisfies r(x) = c(x + k).
inline Configuration shift_config(const Configuration& c, Cell k) {
    return {c.alphabet(), c.word().shifted(k), c.name()};
}

// Space-time evolution --------------------------------------------------------------

struct SpaceTimeGrid {
    Interval window;
    std::vector<std::vector<Symbol>> rows; // rows[t][x - window.lo()]

    std::size_t steps() const { return rows.empty() ? 0 : rows.size() - 1; }
    Symbol at(std::size_t t, Cell x) const { return rows.at(t).at(window.offset(x)); }
    Pattern row(std::size_t t) const { return {window, rows.at(t)}; }
};

namespace detail {

// Cells needed at each time so that `window` is known at time T: cone[T] = window and
// cone[t - 1] = N(cone[t]).
inline std::vector<Interval> dependency_cone(const RuleDistribution& theta, const Interval& window, std::size_t T) {
    std::vector<Interval> cone(T + 1);
    cone[T] = window;
    for (std::size_t t = T; t > 0; --t) cone[t - 1] = neighborhood_of(theta, cone[t]);
    return cone;
}

// One synchronous step from a row over `from` to a row over `to` (to must satisfy N(to) ⊆ from).
inline std::vector<Symbol> step_row(const RuleDistribution& theta, const Interval& from,
                                    const std::vector<Symbol>& row, const Interval& to) {
    std::vector<Symbol> next;
    next.reserve(to.size());
    if (to.is_empty()) return next;
    for (Cell x = to.lo(); x <= to.hi(); ++x) {
        const LocalRule& rule = theta.at(x);
        const std::size_t first = from.offset(x - rule.radius());
        next.push_back(rule(std::span<const Symbol>(row.data() + first, rule.width())));
    }
    return next;
}

// Evaluates rows 0..T over the dependency cone; `visit(t, cone_t, row_t)` sees every row.
template <typename Visit>
void evolve_cone(const RuleDistribution& theta, const Configuration& c, const Interval& window, std::size_t T,
                 Visit&& visit) {
    const auto cone = dependency_cone(theta, window, T);
    std::vector<Symbol> row = restrict(c, cone[0]).symbols;
    visit(std::size_t{0}, cone[0], row);
    for (std::size_t t = 1; t <= T; ++t) {
        row = step_row(theta, cone[t - 1], row, cone[t]);
        visit(t, cone[t], row);
    }
}

} // namespace detail

// H_θ^t(c) on a window. Each call evaluates the dependency cone once; the per-level rows act
// as the (cell, time) memo and are discarded on return.
inline Pattern evolve_window(const RuleDistribution& theta, const Configuration& c, const Interval& window,
                             std::size_t t) {
    if (theta.alphabet().size() != c.alphabet().size()) {
        throw ContractError("distribution and configuration alphabets differ");
    }
    Pattern out;
    detail::evolve_cone(theta, c, window, t, [&](std::size_t step, const Interval& cone, const std::vector<Symbol>& row) {
        if (step == t) out = Pattern(cone, row);
    });
    return out;
}

inline Symbol evolve_cell(const RuleDistribution& theta, const Configuration& c, Cell x, std::size_t t) {
    return evolve_window(theta, c, Interval::single(x), t).symbols.front();
}

inline SpaceTimeGrid spacetime(const RuleDistribution& theta, const Configuration& c, const Interval& window,
                               std::size_t T) {
    if (theta.alphabet().size() != c.alphabet().size()) {
        throw ContractError("distribution and configuration alphabets differ");
    }
    SpaceTimeGrid grid{window, {}};
    grid.rows.reserve(T + 1);
    detail::evolve_cone(theta, c, window, T, [&](std::size_t, const Interval& cone, const std::vector<Symbol>& row) {
        if (window.is_empty()) {
            grid.rows.emplace_back();
            return;
        }
        const auto first = row.begin() + static_cast<std::ptrdiff_t>(cone.offset(window.lo()));
        grid.rows.emplace_back(first, first + static_cast<std::ptrdiff_t>(window.size()));
    });
    return grid;
}

namespace detail {

inline TwoSidedDescription as_two_sided(const RuleDistribution& theta) {
    return std::visit(
        [&](const auto& d) -> TwoSidedDescription {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, UniformDescription>) {
                return TwoSidedDescription::constant(d.rule);
            } else if constexpr (std::is_same_v<D, TwoSidedDescription>) {
                return d;
            } else {
                throw UnsupportedClosedForm("distribution " + theta.name() +
                                            " is not eventually periodic; use evolve_cell instead");
            }
        },
        theta.description());
}

// Samples an eventually periodic function into two-sided form: f is p_left-periodic on
// (-inf, left_end] and p_right-periodic on [right_start, inf).
template <typename F>
TwoSidedWord<Symbol> sample_two_sided(F&& f, Cell left_end, Cell right_start, std::size_t p_left,
                                      std::size_t p_right) {
    TwoSidedWord<Symbol> out;
    for (Cell x = left_end - static_cast<Cell>(p_left) + 1; x <= left_end; ++x) out.left.push_back(f(x));
    out.anchor = left_end + 1;
    for (Cell x = left_end + 1; x < right_start; ++x) out.center.push_back(f(x));
    for (Cell x = right_start; x < right_start + static_cast<Cell>(p_right); ++x) out.right.push_back(f(x));
    return out;
}

} // namespace detail

// H_θ(c) in closed form. Both descriptions must be eventually periodic on each side.
inline Configuration step_config(const RuleDistribution& theta, const Configuration& c) {
    const auto rules = detail::as_two_sided(theta);
    const auto& w = c.word();
    const Cell r = theta.radius_bound();
    // Beyond these bounds every cell's rule comes from a period word and its window reads
    // only the configuration's tail.
    const Cell left_end = std::min(rules.anchor - 1, w.anchor - 1 - r);
    const Cell right_start = std::max(rules.center_end(), w.center_end() + r);
    const std::size_t p_left = std::lcm(rules.left.size(), w.left.size());
    const std::size_t p_right = std::lcm(rules.right.size(), w.right.size());

    const Interval span(left_end - static_cast<Cell>(p_left) + 1, right_start + static_cast<Cell>(p_right) - 1);
    const Interval support = neighborhood_of(theta, span);
    const auto image = detail::step_row(theta, support, restrict(c, support).symbols, span);
    auto word = detail::sample_two_sided([&](Cell x) { return image[span.offset(x)]; }, left_end, right_start,
                                         p_left, p_right);
    return {c.alphabet(), std::move(word), c.name()};
}

// Random two-sided configuration whose center covers `cover`; period words have length
// 1..max_period.
template <typename Rng>
Configuration random_configuration(const Alphabet& alphabet, Rng& rng, const Interval& cover,
                                   std::size_t max_period = 3) {
    std::uniform_int_distribution<int> sym(0, static_cast<int>(alphabet.size()) - 1);
    std::uniform_int_distribution<std::size_t> period(1, std::max<std::size_t>(1, max_period));
    auto word = [&](std::size_t n) {
        std::vector<Symbol> out(n);
        for (auto& v : out) v = static_cast<Symbol>(sym(rng));
        return out;
    };
    TwoSidedWord<Symbol> w;
    w.left = word(period(rng));
    w.right = word(period(rng));
    w.anchor = cover.is_empty() ? 0 : cover.lo();
    w.center = word(cover.size());
    return {alphabet, std::move(w)};
}

} // namespace nuca
