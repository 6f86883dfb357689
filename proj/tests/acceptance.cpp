// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "helpers.hpp"
#include "mcrand/conditional.hpp"
#include "mcrand/error.hpp"
#include "mcrand/exact.hpp"
#include "mcrand/linalg.hpp"
#include "mcrand/moments.hpp"
#include "mcrand/power.hpp"
#include "mcrand/report.hpp"
#include "mcrand/rerandomization.hpp"
#include "mcrand/scores.hpp"
#include "mcrand/sequential.hpp"
#include "mcrand/simulation.hpp"

using namespace mcrand;

namespace {

constexpr std::uint64_t kSeed = 20260315;

int workers()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail, double seconds)
{
    std::printf("%s [%2d] %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

void run(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::pair<bool, std::string> r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, r.first, title, r.second, s);
}

// Random design with N patients per block drawn from K institutions, arms
// from permuted blocks and outcomes of a random kind.
TrialData random_design(int n, int p, int k, RandomStream& rng, ScoreKind* kind)
{
    std::vector<int> inst;
    for (int i = 0; i < n * p; ++i) inst.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(k))));
    auto d = randomize_trial({n, p, k}, inst, rng);
    const auto pick = rng.below(3);
    for (auto& pt : d.patients) {
        if (pick == 0) {
            pt.outcome = Outcome::continuous(rng.normal());
        } else if (pick == 1) {
            pt.outcome = Outcome::binary(rng.bernoulli(0.4) ? 1 : 0);
        } else {
            const double t = rng.exponential(1.0), c = rng.exponential(2.0);
            pt.outcome = Outcome::survival(std::min(t, c), t <= c);
        }
    }
    *kind = pick == 0 ? ScoreKind::Identity : pick == 1 ? ScoreKind::Binary
                      : (rng.bernoulli(0.5) ? ScoreKind::Logrank : ScoreKind::Gehan);
    return d;
}

// Relative error with an absolute floor tied to the scale of the problem.
double rel_scaled(double a, double b, double scale)
{
    return std::fabs(a - b) / std::max(scale, std::max(std::fabs(a), std::fabs(b)));
}

// Power results keyed by scenario name; each scenario is run once with
// every test any criterion needs.
class PowerCache {
  public:
    const TestPower& get(int table, const std::string& name, const std::string& test, double alpha = 0.05)
    {
        const std::string key = std::to_string(table) + "/" + name;
        auto it = results_.find(key);
        if (it == results_.end()) {
            Scenario found;
            bool ok = false;
            for (const auto& s : table_scenarios(table, 1.0, kSeed)) {
                if (s.name == name) {
                    found = s;
                    ok = true;
                }
            }
            if (!ok) fail(ErrorKind::InvalidArgument, "no scenario " + name);
            PowerOptions o;
            o.workers = workers();
            o.alphas = {0.05};
            it = results_.emplace(key, estimate_power(found, tests_for(table), o)).first;
        }
        for (const auto& t : it->second.tests) {
            if (t.test == test && t.alpha == alpha) return t;
        }
        fail(ErrorKind::InvalidArgument, "no test " + test + " in " + name);
    }

  private:
    static std::vector<std::string> tests_for(int table)
    {
        switch (table) {
            case 1: return {"conditional", "t-test"};
            case 3: return {"conditional", "mantel-haenszel"};
            case 4: return {"conditional-gehan", "stratified-gehan"};
            default: return {"gst-conditional", "gst-unconditional"};
        }
    }

    std::map<std::string, PowerResult> results_;
};

PowerCache cache;

bool within(double v, double target, double tol)
{
    return std::fabs(v - target) <= tol + 1e-12;
}

}  // namespace

int main()
{
    std::printf("acceptance run, seed %llu, %d worker(s)\n", static_cast<unsigned long long>(kSeed), workers());

    run(1, "oracle moment equivalence", [] {
        RandomStream rng(kSeed, 1);
        double worst = 0;
        int designs = 0;
        for (int n : {2, 4}) {
            for (int p = 1; p <= 3; ++p) {
                for (int k = 1; k <= 3; ++k) {
                    for (int draw = 0; draw < 50; ++draw) {
                        ScoreKind kind;
                        const auto d = random_design(n, p, k, rng, &kind);
                        const auto s = compute_scores(d, kind);
                        const auto m = joint_moments(d, s);
                        const auto e = exact_joint_moments(d, s);
                        // Entries that vanish in theory are compared against the
                        // magnitude of the scores that enter them.
                        double ss = 1e-300;
                        for (double v : s.values) ss += v * v;
                        const double sd_S = std::sqrt(ss);
                        worst = std::max(worst, rel_scaled(m.mean_S, e.mean_S, sd_S));
                        worst = std::max(worst, rel_scaled(m.var_S, e.var_S, ss));
                        // Count moments are on the unit scale of the counts.
                        for (int a = 0; a < k; ++a) {
                            worst = std::max(worst, rel_scaled(m.cov_Sn(a), e.cov_Sn(a), sd_S));
                            for (int b = 0; b < k; ++b) {
                                worst = std::max(worst, rel_scaled(m.var_n(a, b), e.var_n(a, b), 1.0));
                            }
                        }
                        ++designs;
                    }
                }
            }
        }
        return std::pair{worst <= 1e-10, fmt("%d designs, max relative error %.2e (limit 1e-10)", designs, worst)};
    });

    run(2, "sample-space counts", [] {
        const InstitutionLayout l{4, 2, 2, {2, 2, 2, 2}};
        const auto s = sample_space_size(l);
        const auto t = conditional_space_size(l, std::vector<int>{2, 2});
        const InstitutionLayout big{4, 25, 1, std::vector<int>(25, 4)};
        const auto b = sample_space_size(big);
        BigInt six25 = 1;
        for (int i = 0; i < 25; ++i) six25 *= 6;
        const auto digits = b.str();
        const bool ok = s == 36 && t == 18 && b == six25 && digits.substr(0, 3) == "284" && digits.size() == 20;
        return std::pair{ok, fmt("S=%s T=%s S(N=4,P=25,K=1)=%s = %c.%se19", s.str().c_str(), t.str().c_str(),
                                 digits.c_str(), digits[0], digits.substr(1, 2).c_str())};
    });

    run(3, "conditional p-value accuracy", [] {
        RandomStream rng(kSeed, 3);
        int designs = 0, close = 0, attempts = 0;
        int kind_n[4] = {}, kind_close[4] = {};
        double worst = 0;
        while (designs < 200) {
            ++attempts;
            const int n = 4;
            // 6^P assignment points must stay within 10^6.
            const int p = 5 + static_cast<int>(rng.below(3));
            const int k = 2 + static_cast<int>(rng.below(3));
            ScoreKind kind;
            const auto d = random_design(n, p, k, rng, &kind);
            const auto s = compute_scores(d, kind);
            EnumerationOptions o;
            o.condition_on = tabulate_counts(d).institution_a;
            o.keep_distribution = false;
            const auto ex = exact_distribution(d, s, o);
            if (ex.conditional_points < 50) continue;
            TestResult normal;
            try {
                normal = conditional_test(d, s);
            } catch (const Error&) {
                continue;
            }
            const double diff = std::fabs(normal.p_two_sided - *ex.p_two_sided);
            worst = std::max(worst, diff);
            close += diff <= 0.03;
            ++designs;
            ++kind_n[static_cast<int>(kind)];
            kind_close[static_cast<int>(kind)] += diff <= 0.03;
        }
        const double frac = static_cast<double>(close) / designs;
        std::string by_kind;
        for (auto kind : {ScoreKind::Identity, ScoreKind::Binary, ScoreKind::Logrank, ScoreKind::Gehan}) {
            const int i = static_cast<int>(kind);
            by_kind += fmt(" %s %d/%d", to_string(kind), kind_close[i], kind_n[i]);
        }
        return std::pair{frac >= 0.95, fmt("%d/%d designs within 0.03 (%.1f%%, need 95%%); by score:%s; "
                                           "worst %.3f; %d drawn",
                                           close, designs, 100 * frac, by_kind.c_str(), worst, attempts)};
    });

    run(4, "pseudo-inverse Penrose conditions", [] {
        RandomStream rng(kSeed, 4);
        double worst = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const int n = 2 + static_cast<int>(rng.below(59));
            const int r = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
            Eigen::MatrixXd b(n, r);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < r; ++j) b(i, j) = rng.normal();
            }
            const double scale = std::pow(10.0, 6 * rng.uniform() - 3);
            const Eigen::MatrixXd a = scale * b * b.transpose();
            const auto g = pseudo_inverse(a).matrix;
            const Eigen::MatrixXd ag = a * g, ga = g * a;
            worst = std::max(worst, (a * g * a - a).norm() / a.norm());
            worst = std::max(worst, (g * a * g - g).norm() / g.norm());
            worst = std::max(worst, (ag.transpose() - ag).norm() / ag.norm());
            worst = std::max(worst, (ga.transpose() - ga).norm() / ga.norm());
        }
        return std::pair{worst <= 1e-8, fmt("1000 matrices up to 60x60, worst relative residual %.2e", worst)};
    });

    run(5, "type I error of the conditional test", [] {
        struct Null {
            const char* label;
            Scenario s;
        };
        std::vector<Null> nulls;
        for (int table : {1, 3, 4}) {
            for (auto s : table_scenarios(table, 1.0, kSeed)) {
                if (s.name.find("_N4_n120_K10") == std::string::npos) continue;
                s.name += "_null";
                s.id = stream_id(s.id, 0x6e756c6cULL);
                if (s.outcome == OutcomeKind::Binary) s.effect = s.base_rate;
                else if (s.outcome == OutcomeKind::Continuous) s.effect = 0;
                else s.effect = 1;
                nulls.push_back({to_string(s.outcome), s});
            }
        }
        bool ok = nulls.size() == 3;
        std::string detail;
        for (const auto& n : nulls) {
            PowerOptions o;
            o.workers = workers();
            o.alphas = {0.05, 0.01};
            const std::string test = n.s.outcome == OutcomeKind::Survival ? "conditional-logrank" : "conditional";
            const auto r = estimate_power(n.s, {test}, o);
            const double p05 = r.tests[0].proportion, p01 = r.tests[1].proportion;
            ok = ok && p05 >= 0.039 && p05 <= 0.061 && p01 >= 0.006 && p01 <= 0.016;
            detail += fmt("%s %.4f/%.4f ", n.label, p05, p01);
        }
        return std::pair{ok, detail + "at alpha 0.05/0.01, R=5000"};
    });

    run(6, "Table 1 spot cells", [] {
        const auto& c10 = cache.get(1, "table1_continuous_N4_n120_K10", "conditional");
        const auto& t10 = cache.get(1, "table1_continuous_N4_n120_K10", "t-test");
        const auto& c40 = cache.get(1, "table1_continuous_N4_n120_K40", "conditional");
        const bool ok = within(c10.proportion, 0.53, 0.05) && within(t10.proportion, 0.43, 0.05)
                        && within(c40.proportion, 0.35, 0.05);
        return std::pair{ok, fmt("K10 conditional %.4f (0.53), t-test %.4f (0.43); K40 conditional %.4f (0.35)",
                                 c10.proportion, t10.proportion, c40.proportion)};
    });

    run(7, "Table 3 and Table 4 spot cells", [] {
        const auto& c3 = cache.get(3, "table3_binary_N4_n120_K10", "conditional");
        const auto& m3 = cache.get(3, "table3_binary_N4_n120_K10", "mantel-haenszel");
        const auto& c4 = cache.get(4, "table4_survival_N4_n120_K10", "conditional-gehan");
        const auto& g4 = cache.get(4, "table4_survival_N4_n120_K10", "stratified-gehan");
        const double gap3 = c3.proportion - m3.proportion, gap4 = c4.proportion - g4.proportion;
        const bool ok = gap3 >= 0.03 && gap4 >= 0.03;
        const bool abs_ok = within(c3.proportion, 0.37, 0.05) && within(m3.proportion, 0.30, 0.05)
                            && within(c4.proportion, 0.23, 0.05) && within(g4.proportion, 0.16, 0.05);
        return std::pair{ok, fmt("gaps %+.4f and %+.4f (binding, need >= 0.03); conditional %.4f vs MH %.4f "
                                 "(0.37/0.30), CT-Gehan %.4f vs stratified Gehan %.4f (0.23/0.16), "
                                 "absolute values %s",
                                 gap3, gap4, c3.proportion, m3.proportion, c4.proportion, g4.proportion,
                                 abs_ok ? "within 0.05" : "outside 0.05 (advisory)")};
    });

    run(8, "group-sequential boundaries, size and Table 5 cell", [] {
        bool ok = true;
        std::string detail = "boundaries";
        const double want[] = {4.048, 2.862, 2.337, 2.024};
        for (int l = 1; l <= 4; ++l) {
            const double b = obf_boundary(l, 4);
            ok = ok && std::fabs(std::round(b * 1000) / 1000 - want[l - 1]) < 1e-9;
            detail += fmt(" %.3f", b);
        }
        Scenario null_s;
        for (auto s : table_scenarios(5, 1.0, kSeed)) {
            if (s.name == "table5_continuous_N4_n480_K10") null_s = s;
        }
        null_s.effect = 0;
        null_s.id = stream_id(null_s.id, 0x6e756c6cULL);
        PowerOptions o;
        o.workers = workers();
        const auto size = estimate_power(null_s, {"gst-conditional"}, o).tests[0].proportion;
        ok = ok && size >= 0.015 && size <= 0.035;
        const auto& c = cache.get(5, "table5_continuous_N4_n480_K10", "gst-conditional", 0.025);
        const auto& u = cache.get(5, "table5_continuous_N4_n480_K10", "gst-unconditional", 0.025);
        const double gap = c.proportion - u.proportion;
        ok = ok && within(c.proportion, 0.72, 0.05) && within(u.proportion, 0.51, 0.05) && gap >= 0.10;
        detail += fmt("; null size %.4f (0.015-0.035); continuous K10 N4 conditional %.4f (0.72), "
                      "unconditional %.4f (0.51), gap %+.4f (need >= 0.10)",
                      size, c.proportion, u.proportion, gap);
        return std::pair{ok, detail};
    });

    run(9, "conditional power non-increasing in K", [] {
        bool ok = true;
        std::string detail;
        for (int table : {1, 3}) {
            for (int n : {4, 8}) {
                const std::string base = table == 1 ? "table1_continuous_N" : "table3_binary_N";
                std::vector<const TestPower*> cells;
                for (int k : {10, 20, 40}) {
                    cells.push_back(&cache.get(table, base + std::to_string(n) + "_n120_K" + std::to_string(k),
                                               "conditional"));
                }
                detail += fmt("T%d N%d:", table, n);
                for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                    const double se = std::hypot(cells[i]->se, cells[i + 1]->se);
                    ok = ok && cells[i + 1]->proportion <= cells[i]->proportion + 3 * se;
                }
                for (const auto* c : cells) detail += fmt(" %.3f", c->proportion);
                detail += "; ";
            }
        }
        return std::pair{ok, detail + "K = 10, 20, 40 at n=120"};
    });

    run(10, "score invariants", [] {
        RandomStream rng(kSeed, 10);
        double worst = 0;
        bool scale_ok = true;
        for (int rep = 0; rep < 10000; ++rep) {
            const int n = 2 * (1 + static_cast<int>(rng.below(10)));
            std::vector<Outcome> block, scaled;
            const double factor = 0.01 + 100 * rng.uniform();
            for (int i = 0; i < n; ++i) {
                // Coarse grid so ties between deaths and censorings occur.
                const double t = 0.5 + std::floor(rng.exponential(3.0) * 2) / 2;
                const bool e = rng.bernoulli(0.6);
                block.push_back(Outcome::survival(t, e));
                scaled.push_back(Outcome::survival(t * factor, e));
            }
            for (auto kind : {ScoreKind::Logrank, ScoreKind::Gehan}) {
                const auto s = block_scores(block, kind);
                double sum = 0;
                for (double v : s) sum += v;
                worst = std::max(worst, std::fabs(sum) / n);
                scale_ok = scale_ok && block_scores(scaled, kind) == s;
            }
        }
        return std::pair{worst <= 1e-12 && scale_ok,
                         fmt("10^4 blocks, max |sum|/N %.2e (limit 1e-12); time scaling %s", worst,
                             scale_ok ? "exact" : "changed scores")};
    });

    run(11, "rerandomization CI coverage", [] {
        CoverageScenario s;
        s.seed = kSeed;
        const auto r = ci_coverage(s, workers());
        const bool ok = r.coverage >= 0.92 && r.coverage <= 0.98;
        return std::pair{ok, fmt("true ratio %.2f, %d trials x %d rerandomizations, coverage %.4f (se %.4f), "
                                 "%d skipped",
                                 r.true_ratio, r.trials, s.reps, r.coverage, r.se, r.skipped)};
    });

    run(12, "determinism across worker counts", [] {
        std::vector<std::pair<std::string, SimulationRequest>> requests;
        const auto parse = [](const char* text) {
            return simulation_request(FlatConfig::parse(text, simulation_keys()), kSeed);
        };
        requests.emplace_back("table 4", parse("study = table\ntable = 4\nscale = 0.004\n"));
        requests.emplace_back("scenario", parse("study = scenario\nname = det\noutcome = continuous\n"
                                                "n_total = 120\nnum_institutions = 20\nblock_size = 4\n"
                                                "replications = 300\ntests = conditional, t-test, "
                                                "gst-conditional\nalphas = 0.05, 0.01\n"));
        requests.emplace_back("ci-coverage", parse("study = ci-coverage\ntrials = 40\nreps = 200\n"));
        bool ok = true;
        for (const auto& [label, req] : requests) {
            const auto base = run_simulation(req, kSeed, 1);
            for (int w : {1, 4, 16}) {
                const auto o = run_simulation(req, kSeed, w);
                ok = ok && o.csv == base.csv && o.json == base.json && o.manifest == base.manifest;
            }
        }
        CoverageScenario cs;
        cs.seed = kSeed;
        const auto data = coverage_trial(cs, 3);
        const auto ci1 = ci_report(confidence_interval(data, 1000, 0.95, kSeed, 1), kSeed).dump();
        for (int w : {1, 4, 16}) {
            ok = ok && ci_report(confidence_interval(data, 1000, 0.95, kSeed, w), kSeed).dump() == ci1;
        }
        return std::pair{ok, std::string("simulate (table, scenario, ci-coverage) and ci outputs ")
                                 + (ok ? "byte-identical" : "differ") + " under 1, 4 and 16 workers"};
    });

    std::printf("%d criterion/criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
