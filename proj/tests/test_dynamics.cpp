#include "support.hpp"

#include <gtest/gtest.h>

using namespace nuca;

namespace {

const gallery::GalleryEntry& traffic() {
    static const auto e = gallery::build_entry("traffic_halfplane");
    return e;
}

const gallery::GalleryEntry& fourstate() {
    static const auto e = gallery::build_entry("fourstate_halfplane");
    return e;
}

// Enumerates every extension of c|D on N(D) by hand and checks the image on D.
bool brute_invariant(const oracle::Dist& theta, int s, const Configuration& c, Cell lo, Cell hi, int r) {
    const std::size_t free = 2 * static_cast<std::size_t>(r);
    for (std::uint64_t i = 0; i < oracle::power(static_cast<std::uint64_t>(s), free); ++i) {
        const auto outer = oracle::digits(i, s, free);
        std::vector<int> q(outer.begin(), outer.begin() + r);
        for (Cell x = lo; x <= hi; ++x) q.push_back(c.at(x));
        q.insert(q.end(), outer.begin() + r, outer.end());
        std::vector<int> base;
        for (Cell x = lo; x <= hi; ++x) base.push_back(c.at(x));
        if (oracle::apply_on(theta, lo, hi, lo - r, q) != base) return false;
    }
    return true;
}

oracle::Dist traffic_oracle() {
    return [](oracle::Cell x) { return x > 0 ? oracle::tau() : oracle::identity(); };
}

oracle::Dist four_oracle() {
    return [](oracle::Cell x) { return x > 0 ? oracle::four() : oracle::identity(); };
}

} // namespace

TEST(Invariance, TrafficAllOnes) {
    const auto& theta = traffic().distribution;
    const auto ones = traffic().config("all_one");
    for (Cell k : {2, 4}) {
        const Interval d = Interval(2, 4).hull(Interval(0, k));
        const auto cert = cylinder_invariance_check(theta, ones, d);
        EXPECT_TRUE(cert.invariant) << d.str();
        EXPECT_EQ(cert.invariant, brute_invariant(traffic_oracle(), 2, ones, d.lo(), d.hi(), 1));
    }
    const auto escape = cylinder_invariance_check(theta, ones, {2, 4});
    EXPECT_FALSE(escape.invariant);
    ASSERT_TRUE(escape.escape && escape.escape_image);
    EXPECT_EQ(escape.escape->domain, Interval(1, 5));
    EXPECT_EQ(finite_map_apply(theta, {2, 4}, *escape.escape), *escape.escape_image);
    EXPECT_NE(escape.escape_image->symbols, restrict(ones, {2, 4}).symbols);
}

TEST(Invariance, AgreesWithBruteForceOnRandomCylinders) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<Cell> lo(-4, 4), len(0, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const bool four = trial % 2 == 1;
        const auto& e = four ? fourstate() : traffic();
        const int s = four ? 4 : 2;
        const auto c = random_configuration(e.distribution.alphabet(), rng, {-10, 10});
        const Cell a = lo(rng);
        const Interval d(a, a + len(rng));
        const auto cert = cylinder_invariance_check(e.distribution, c, d);
        ASSERT_EQ(cert.invariant, brute_invariant(four ? four_oracle() : traffic_oracle(), s, c, d.lo(), d.hi(), 1))
            << "trial " << trial << " D=" << d.str();
    }
}

TEST(Invariance, FourStateBlockingWord) {
    const auto& theta = fourstate().distribution;
    for (Cell j : {1, 5, 12}) {
        const auto c = gallery::blocking_configuration(theta.alphabet(), j);
        EXPECT_TRUE(cylinder_invariance_check(theta, c, {0, j}).invariant) << j;
    }
    // dropping the 2 from the domain breaks the protection
    const auto c = gallery::blocking_configuration(theta.alphabet(), 12);
    EXPECT_FALSE(cylinder_invariance_check(theta, c, {0, 11}).invariant);
}

TEST(Invariance, CapIsEnforced) {
    const auto& theta = fourstate().distribution;
    EXPECT_THROW(cylinder_invariance_check(theta, fourstate().config("all_one"), {0, 3}, 8), CapExceeded);
}

TEST(FourState, FloodLaw) {
    const auto& theta = fourstate().distribution;
    for (Cell x1 : {0, 1, 4}) {
        for (Symbol barrier : {Symbol{0}, Symbol{3}}) {
            for (Cell d = 2; d <= 12; ++d) {
                const auto c = gallery::flood_configuration(theta.alphabet(), x1, x1 + d, barrier);
                oracle::Simulator sim(four_oracle(), support::to_oracle(c));
                const auto got = evolve_cell(theta, c, x1 + d, static_cast<std::size_t>(d));
                EXPECT_EQ(got, sim.value(static_cast<std::size_t>(d), x1 + d));
                EXPECT_EQ(got, 0) << "x1=" << x1 << " d=" << d;
            }
        }
    }
}

TEST(Divergence, TrafficAllZero) {
    const auto& theta = traffic().distribution;
    const auto zero = traffic().config("all_zero");
    const auto w = divergence_search(theta, zero, {-3, 3}, {1, 1}, {{0}, {1}}, 64);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->probe_index, 1u);
    EXPECT_EQ(w->cell, 1);
    EXPECT_TRUE(replay_divergence(theta, zero, {-3, 3}, *w));
    // recursive model: first time the all-ones-outside probe differs at cell 1
    oracle::Simulator base(traffic_oracle(), support::to_oracle(zero));
    oracle::Simulator probe(traffic_oracle(), support::to_oracle(w->probe));
    std::size_t first = 0;
    for (std::size_t n = 1; n <= 64 && !first; ++n) {
        if (base.value(n, 1) != probe.value(n, 1)) first = n;
    }
    EXPECT_EQ(w->time, first);
    EXPECT_EQ(first, 3u);
}

TEST(Divergence, AllOnesStaysPut) {
    const auto& theta = traffic().distribution;
    const auto ones = traffic().config("all_one");
    EXPECT_FALSE(divergence_search(theta, ones, Interval(0, 4), {2, 4}, {{0}, {1}}, 64));
}

TEST(Divergence, FourStateProbes) {
    const auto& theta = fourstate().distribution;
    const auto a = theta.alphabet();
    const auto c = Configuration::finite_perturbation(a, 1, {2}, 4, "c");
    const Interval d(-3, 8);
    const auto w = divergence_search(theta, c, d, {5, 5}, {{0}, {3}}, 64);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->cell, 5);
    EXPECT_TRUE(replay_divergence(theta, c, d, *w));
    oracle::Simulator base(four_oracle(), support::to_oracle(c));
    oracle::Simulator probe(four_oracle(), support::to_oracle(w->probe));
    EXPECT_EQ(base.value(w->time, 5), w->base_value);
    EXPECT_EQ(probe.value(w->time, 5), w->probe_value);
}

TEST(Divergence, ReplayRejectsForgedWitness) {
    const auto& theta = traffic().distribution;
    const auto zero = traffic().config("all_zero");
    auto w = *divergence_search(theta, zero, {-3, 3}, {1, 1}, {{0}, {1}}, 64);
    auto forged = w;
    forged.time = 1;
    EXPECT_FALSE(replay_divergence(theta, zero, {-3, 3}, forged));
    forged = w;
    forged.probe = Configuration::finite_perturbation(theta.alphabet(), 1, {1}, 0);
    EXPECT_FALSE(replay_divergence(theta, zero, {-3, 3}, forged));
}

TEST(Probes, BackgroundOutsideDomain) {
    const auto c = Configuration::finite_perturbation(Alphabet("0123"), 1, {2}, 4);
    const auto p = probe_configuration(c, {2, 5}, {3, 0});
    EXPECT_TRUE((Cylinder{c, {2, 5}}).contains(p));
    EXPECT_EQ(p.at(6), 3);
    EXPECT_EQ(p.at(7), 0);
    EXPECT_EQ(p.at(1), 0);
    EXPECT_EQ(p.at(0), 3);
}

TEST(TemporalRecurrence, ShiftOfPeriodicWord) {
    const auto theta = gallery::build_entry("uniform_shift").distribution;
    const Configuration c(theta.alphabet(), TwoSidedWord<Symbol>{{0, 0, 1}, {}, 0, {0, 0, 1}});
    EXPECT_EQ(temporal_recurrence_search(theta, c, {0, 5}, 10), 3u);
    const auto single = Configuration::finite_perturbation(theta.alphabet(), 0, {1}, 2);
    EXPECT_FALSE(temporal_recurrence_search(theta, single, {0, 5}, 20));
}

TEST(Pairing, ProductEvolvesComponentwise) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const auto theta = trial % 3 == 0 ? support::example1() : support::random_distribution(rng, 2, 2).theta;
        const auto paired = product_pairing(theta);
        EXPECT_EQ(paired.alphabet().size(), 4u);
        const auto c = random_configuration(theta.alphabet(), rng, {-6, 6});
        const auto e = random_configuration(theta.alphabet(), rng, {-6, 6});
        const auto ce = pair_configurations(c, e);
        for (Cell x = -20; x <= 20; ++x) ASSERT_EQ(ce.at(x), pair_symbol(c.at(x), e.at(x), 2));
        const Interval window(-4, 4);
        const auto got = evolve_window(paired, ce, window, 3).symbols;
        const auto a = evolve_window(theta, c, window, 3).symbols;
        const auto b = evolve_window(theta, e, window, 3).symbols;
        for (std::size_t i = 0; i < got.size(); ++i) {
            ASSERT_EQ(pair_first(got[i], 2), a[i]);
            ASSERT_EQ(pair_second(got[i], 2), b[i]);
        }
    }
}

TEST(Pairing, RejectsMismatchedAlphabets) {
    EXPECT_THROW(pair_configurations(Configuration::constant(Alphabet("01"), 0),
                                     Configuration::constant(Alphabet("012"), 0)),
                 ContractError);
}
