#include "nuca/cli.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace nuca;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "nuca");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("nuca_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST(Cli, SimulateTraffic) {
    const auto r = run({"simulate", "--distribution", "gallery:traffic_halfplane", "--config", "gallery:single_one",
                        "--window", "0", "8", "--steps", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    // recursive model of the same run
    const auto c = gallery::build_entry("traffic_halfplane").config("single_one");
    oracle::Simulator sim([](oracle::Cell x) { return x > 0 ? oracle::tau() : oracle::identity(); },
                          [&](oracle::Cell x) { return static_cast<int>(c.at(x)); });
    std::string expected;
    for (std::size_t t = 0; t <= 4; ++t) {
        for (Cell x = 0; x <= 8; ++x) expected += static_cast<char>('0' + sim.value(t, x));
        expected += '\n';
    }
    EXPECT_EQ(r.out, expected);
}

TEST(Cli, SimulateZeroStepsAndNegativeWindow) {
    const auto r = run({"simulate", "--distribution", "gallery:fourstate_halfplane", "--config", "gallery:blocking",
                        "--window", "-2", "13", "--steps", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1111111111111121\n");
}

TEST(Cli, SimulateBlockingColumnsStayConstant) {
    const auto r = run({"simulate", "--distribution", "gallery:fourstate_halfplane", "--config",
                        "gallery:fourstate_halfplane/blocking", "--window", "0", "12", "--steps", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream rows(r.out);
    std::string row;
    int n = 0;
    while (std::getline(rows, row)) {
        EXPECT_EQ(row, "1111111111112");
        ++n;
    }
    EXPECT_EQ(n, 21);
}

TEST(Cli, SimulatePgm) {
    const auto r = run({"simulate", "--distribution", "gallery:uniform_shift", "--config", "gallery:periodic7",
                        "--window", "0", "6", "--steps", "1", "--format", "pgm"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("P2\n7 2\n255\n", 0), 0u);
    EXPECT_EQ(run({"simulate", "--distribution", "gallery:uniform_shift", "--config", "gallery:periodic7", "--window",
                   "0", "6", "--steps", "1", "--format", "gif"})
                  .code,
              2);
}

TEST(Cli, BalanceCsv) {
    const auto r = run({"balance", "--distribution", "gallery:balance_counterexample", "--domain", "0", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "pattern,count,expected\n0,2,4\n1,6,4\n# domain=[0,0] extended=[-1,1]\n# verdict=Unbalanced\n");
    const auto shift = run({"balance", "--distribution", "gallery:uniform_shift", "--domain", "0", "3"});
    EXPECT_NE(shift.out.find("# verdict=Balanced"), std::string::npos);
    const auto ex1 = run({"balance", "--distribution", "gallery:example1", "--domain", "0", "4"});
    EXPECT_NE(ex1.out.find("# verdict=Balanced"), std::string::npos);
}

TEST(Cli, PreimagesRow) {
    const auto r = run({"preimages", "--distribution", "gallery:balance_counterexample", "--domain", "0", "0",
                        "--pattern", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\n1,6,4\n"), std::string::npos);
    EXPECT_NE(r.out.find("# verdict=Unbalanced"), std::string::npos);
    const auto bad = run({"preimages", "--distribution", "gallery:balance_counterexample", "--domain", "0", "1",
                          "--pattern", "1"});
    EXPECT_EQ(bad.code, 2);
}

TEST(Cli, InverseReports) {
    const auto ok = run({"inverse", "--distribution", "gallery:uniform_shift", "--interval", "-2", "2", "--radius", "1"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    std::istringstream rules(ok.out);
    const auto parsed = io::parse_rules(rules);
    ASSERT_EQ(parsed.rules.size(), 1u);
    EXPECT_TRUE(rules_identical(parsed.rules[0], LocalRule::from_function("x", 1, 2, [](auto w) { return w[0]; })));

    const auto& theta = support::example1();
    const Cell x = gallery::example1_run_center(theta, 2);
    const auto conflict = run({"inverse", "--distribution", "gallery:example1", "--interval", std::to_string(x),
                               std::to_string(x + 2), "--radius", "2"});
    ASSERT_EQ(conflict.code, 0) << conflict.err;
    EXPECT_EQ(conflict.out.rfind("conflict cell=" + std::to_string(x) + " radius=2\n", 0), 0u);

    const auto xor3 = run({"inverse", "--distribution", "gallery:uniform_xor3", "--interval", "0", "0", "--radius", "1"});
    EXPECT_EQ(xor3.out.rfind("conflict cell=0", 0), 0u);
}

TEST(Cli, TrialsNeedSeedAndEmbedIt) {
    EXPECT_EQ(run({"inverse", "--distribution", "gallery:uniform_shift", "--interval", "-2", "2", "--radius", "1",
                   "--trials", "10"})
                  .code,
              2);
    const auto r = run({"inverse", "--distribution", "gallery:uniform_shift", "--interval", "-3", "3", "--radius", "1",
                        "--trials", "10", "--seed", "1234"});
    EXPECT_NE(r.out.find("seed=1234 result=pass"), std::string::npos);
}

TEST(Cli, ErasableAndCap) {
    const auto r = run({"erasable", "--distribution", "gallery:uniform_and", "--interval", "0", "2"});
    EXPECT_NE(r.out.find("p 000 on [0,2]\nq 010 on [0,2]"), std::string::npos);
    const auto none = run({"erasable", "--distribution", "gallery:example1", "--interval", "0", "6", "--pad", "1"});
    EXPECT_NE(none.out.find("result none"), std::string::npos);
    const auto capped = run({"erasable", "--distribution", "gallery:example1", "--interval", "0", "20", "--cap", "1000"});
    EXPECT_EQ(capped.code, 3);
    EXPECT_NE(capped.err.find("cap is 1000"), std::string::npos);
}

TEST(Cli, Recurrence) {
    const auto r = run({"recurrence", "--distribution", "gallery:example1", "--domain", "0", "2", "--bound", "100"});
    EXPECT_EQ(r.out, "recurrence domain=[0,2] bound=100 witness k=3\n");
    const auto t = run({"recurrence", "--distribution", "gallery:traffic_halfplane", "--domain", "-1", "1", "--bound",
                        "10000"});
    EXPECT_NE(t.out.find("none"), std::string::npos);
    EXPECT_EQ(run({"recurrence", "--distribution", "gallery:example1", "--domain", "0", "2"}).code, 2);
    EXPECT_EQ(run({"recurrence", "--distribution", "gallery:example1", "--domain", "0", "2", "--gap", "3"}).code, 2);
}

TEST(Cli, ExperimentSpecs) {
    const auto dir = scratch("experiment");
    {
        std::ofstream(dir / "traffic.spec") << "experiment traffic\ndistribution traffic_halfplane\nbase all_zero\nD -3 3\nE 1 1\n"
                                          "probes 0,1\ntmax 64\n";
        std::ofstream(dir / "traffic_inv.spec") << "experiment traffic_inv\ndistribution traffic_halfplane\nbase all_one\nD 0 4\n"
                                             "E 2 4\nprobes 0\ntmax 8\n";
        std::ofstream(dir / "bad.spec") << "experiment bad\ntmax x\n";
    }
    const auto r = run({"experiment", (dir / "traffic.spec").string(), "--render", (dir / "traffic").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("divergence witness probe=1 n=3 x=1"), std::string::npos) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "traffic_base.txt"));
    EXPECT_TRUE(std::filesystem::exists(dir / "traffic_probe.txt"));
    const auto inv = run({"experiment", (dir / "traffic_inv.spec").string()});
    EXPECT_NE(inv.out.find("invariance Invariant"), std::string::npos);
    const auto bad = run({"experiment", (dir / "bad.spec").string()});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("line 2"), std::string::npos);
    EXPECT_EQ(run({"experiment", (dir / "missing.spec").string()}).code, 2);
}

TEST(Cli, GalleryExportRoundTrip) {
    for (const auto& name : gallery::entry_names()) {
        const auto dir = scratch("export_" + name);
        ASSERT_EQ(run({"gallery", "export", name, "--dir", dir.string()}).code, 0);
        const auto entry = gallery::build_entry(name);
        std::ifstream rules_in(dir / (name + ".rules"));
        const auto rules = io::parse_rules(rules_in);
        auto rs = std::make_shared<const RuleSet>(rules.alphabet, rules.rules);
        for (std::size_t i = 0; i < rs->size(); ++i) EXPECT_EQ((*rs)[i], (*entry.rules)[i]);
        std::ifstream dist_in(dir / (name + ".dist"));
        const auto dists = io::parse_distributions(dist_in, rs);
        ASSERT_EQ(dists.size(), 1u);
        EXPECT_EQ(dists[0].description(), entry.distribution.description());
        for (const auto& c : entry.configs) {
            std::ifstream cin(dir / (name + "." + c.name() + ".config"));
            EXPECT_EQ(io::parse_configs(cin).at(0), c);
        }
        // exported files drive the CLI the same way the gallery name does
        const auto from_files = run({"balance", "--rules", (dir / (name + ".rules")).string(), "--distribution",
                                     (dir / (name + ".dist")).string(), "--domain", "0", "1"});
        const auto from_gallery = run({"balance", "--distribution", "gallery:" + name, "--domain", "0", "1"});
        EXPECT_EQ(from_files.out, from_gallery.out) << name;
    }
}

TEST(Cli, DeterministicOutput) {
    const std::vector<std::string> args = {"inverse", "--distribution", "gallery:example1", "--interval", "0", "5",
                                           "--radius", "2", "--trials", "30", "--seed", "5"};
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OutFile) {
    const auto dir = scratch("out");
    const auto r = run({"balance", "--distribution", "gallery:uniform_shift", "--domain", "0", "1", "--out",
                        (dir / "tally.csv").string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(dir / "tally.csv").rfind("pattern,count,expected\n00,4,4\n", 0), 0u);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"balance", "--distribution", "gallery:nope", "--domain", "0", "0"}).code, 2);
    EXPECT_EQ(run({"balance", "--distribution", "gallery:example1", "--domain", "3", "0"}).code, 2);
    EXPECT_EQ(run({"balance", "--distribution", "no_such.dist", "--rules", "no_such.rules", "--domain", "0", "0"}).code, 2);
    const auto dir = scratch("errors");
    std::ofstream(dir / "bad.rules") << "rule f radius 1 alphabet 01\n\"0\" -> 1\n";
    std::ofstream(dir / "x.dist") << "distribution x\nkind uniform rule f\n";
    const auto r = run({"balance", "--rules", (dir / "bad.rules").string(), "--distribution", (dir / "x.dist").string(),
                        "--domain", "0", "0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad.rules: line 2:"), std::string::npos) << r.err;
}

TEST(Cli, GalleryListAndCheck) {
    const auto list = run({"gallery", "list"});
    for (const auto& name : gallery::entry_names()) EXPECT_NE(list.out.find(name), std::string::npos);
    const auto check = run({"gallery", "check", "balance_counterexample"});
    EXPECT_EQ(check.code, 0);
    EXPECT_EQ(check.out.find("FAIL"), std::string::npos);
}
