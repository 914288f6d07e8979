#include "doctest.h"
#include "generators.hpp"

#include "infoprop/degree_model.hpp"
#include "infoprop/errors.hpp"
#include "infoprop/config.hpp"
#include "infoprop/theory.hpp"

#include <cmath>

using namespace infoprop;

namespace {

// Node-by-node recursion P(k|i+1) = ((n-i) P(k|i) - P_recv(k|i)) / (n-i-1),
// written out independently of the solver.
std::vector<std::vector<double>> discrete_recursion(const Pmf& p_tot, long n)
{
    std::vector<std::vector<double>> out;
    std::vector<double> p = p_tot.p;
    out.push_back(p);
    for (long i = 1; i < n - 1; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j)
            mean += (p_tot.k_min + static_cast<double>(j)) * p[j];
        const double r = static_cast<double>(n - i);
        std::vector<double> next(p.size());
        for (std::size_t j = 0; j < p.size(); ++j)
            next[j] = (r * p[j] - (p_tot.k_min + static_cast<double>(j)) * p[j] / mean) / (r - 1.0);
        p = next;
        out.push_back(p);
    }
    return out;
}

double binom(int n, int k)
{
    double c = 1.0;
    for (int j = 1; j <= k; ++j)
        c = c * (n - k + j) / j;
    return c;
}

} // namespace

TEST_CASE("receiver distribution")
{
    CHECK(receiver_distribution(Pmf(4, {1.0})) == Pmf(4, {1.0}));

    const Pmf r = receiver_distribution(Pmf(1, {0.5, 0.5}));
    CHECK(r.at(1) == doctest::Approx(1.0 / 3.0));
    CHECK(r.at(2) == doctest::Approx(2.0 / 3.0));

    SUBCASE("sampling oracle: follow a random half-link")
    {
        // 5000 nodes of degree 1 and 5000 of degree 2, one entry per half-link.
        std::vector<int> half_links;
        for (int v = 0; v < 10000; ++v)
            for (int s = 0; s < (v < 5000 ? 1 : 2); ++s)
                half_links.push_back(v < 5000 ? 1 : 2);
        Rng rng(12);
        int twos = 0;
        const int draws = 300000;
        for (int j = 0; j < draws; ++j)
            twos += half_links[rng.below(half_links.size())] == 2;
        CHECK(std::abs(twos / static_cast<double>(draws) - r.at(2)) < 4.0 * std::sqrt(2.0 / 9.0 / draws));
    }
    SUBCASE("size-biasing never lowers the mean")
    {
        Rng rng(13);
        for (int trial = 0; trial < 500; ++trial) {
            const Pmf p = gen::random_pmf(rng, 0, 4, 15);
            if (!(p.mean() > 0.0))
                continue;
            const Pmf q = receiver_distribution(p);
            CHECK(std::abs(q.sum() - 1.0) < 1e-12);
            CHECK(q.mean() >= p.mean() - 1e-12);
        }
    }
    CHECK_THROWS_AS(receiver_distribution(Pmf(0, {1.0})), DegenerateInputError);
}

TEST_CASE("expected informed links of the receiver")
{
    CHECK(expected_krecv_inf(5.0, 0.0, 100.0) == 1.0);
    CHECK(expected_krecv_inf(1.0, 30.0, 7.0) == 1.0);
    CHECK(expected_krecv_inf(3.0, 10.0, 10.0) == doctest::Approx(2.0));

    // Size-biased Binomial(3, 1/2): weights k C(3,k) / 8, mean 24 / 12.
    double w = 0.0, m = 0.0;
    for (int k = 0; k <= 3; ++k) {
        w += k * binom(3, k) / 8.0;
        m += k * k * binom(3, k) / 8.0;
    }
    CHECK(m / w == doctest::Approx(expected_krecv_inf(3.0, 10.0, 10.0)));

    Rng rng(14);
    for (int trial = 0; trial < 1000; ++trial) {
        const double v = expected_krecv_inf(1.0 + 20.0 * rng.uniform(), 50.0 * rng.uniform(), 50.0 * rng.uniform());
        CHECK(v >= 1.0);
    }
    CHECK_THROWS_AS(expected_krecv_inf(3.0, 0.0, 0.0), DegenerateInputError);
    CHECK_THROWS_AS(expected_krecv_inf(3.0, -1.0, 2.0), DomainError);
}

TEST_CASE("uninformed-degree derivative")
{
    for (double d : dninf_di(Pmf(3, {1.0}), 10.0, 100))
        CHECK(d == 0.0);

    const Pmf p(1, {0.5, 0.5});
    const auto d = dninf_di(p, 0.0, 100);
    CHECK(d[0] == doctest::Approx(0.5 * (1.0 / 3.0) / 100.0));
    CHECK(d[1] == doctest::Approx(-0.5 * (1.0 / 3.0) / 100.0));

    // One unit step of the recursion from n - i = 100 differs from the
    // derivative only by the factor (n - i) / (n - i - 1).
    const Pmf recv = receiver_distribution(p);
    for (int k = 1; k <= 2; ++k) {
        const double next = (100.0 * p.at(k) - recv.at(k)) / 99.0;
        CHECK((next - p.at(k)) * 99.0 / 100.0 == doctest::Approx(d[static_cast<std::size_t>(k - 1)]));
    }

    Rng rng(15);
    for (int trial = 0; trial < 500; ++trial) {
        const Pmf q = gen::random_pmf(rng, 1, 4, 20);
        const auto dq = dninf_di(q, 3.0, 1000);
        double s = 0.0;
        for (double v : dq)
            s += v;
        CHECK(std::abs(s) < 1e-14);
    }
    CHECK_THROWS_AS(dninf_di(p, 99.0, 100), DomainError);
    CHECK_THROWS_AS(dninf_di(p, 150.0, 100), DomainError);
}

TEST_CASE("external-connection derivative")
{
    CHECK(dkext_di(Pmf(4, {1.0}), 0.0, 1.0, 1000) == doctest::Approx(2.0));

    // Regular graph, early stage: about c - 2.
    for (int c : {3, 5, 8})
        CHECK(dkext_di(Pmf(c, {1.0}), c, 1.0, 1'000'000) == doctest::Approx(c - 2.0).epsilon(1e-4));

    // Shrinking uninformed population: the derivative turns negative and
    // falls toward e_krecv - 2 e_krecv = -e_krecv.
    const Pmf p(1, {0.2, 0.3, 0.5});
    const double e_krecv = p.second_moment() / p.mean();
    double last = dkext_di(p, 100.0, 0.0, 1000);
    for (double i = 100.0; i < 999.0; i += 100.0) {
        const double v = dkext_di(p, 100.0, i, 1000);
        CHECK(v <= last);
        last = v;
    }
    CHECK(last < 0.0);
    CHECK(dkext_di(p, 1e9, 999.0, 1000) == doctest::Approx(-e_krecv).epsilon(1e-6));
}

TEST_CASE("time derivative")
{
    CHECK(dt_di(10.0, 1.0) == doctest::Approx(0.1));
    for (double k : {0.5, 3.0, 70.0})
        CHECK(dt_di(k, 2.0) == doctest::Approx(dt_di(k, 1.0) / 2.0));
    CHECK(dt_di(1e-12, 1.0) > 1e11);
    CHECK_THROWS_AS(dt_di(0.0, 1.0), PropagationInterrupted);
    CHECK_THROWS_AS(dt_di(-1.0, 1.0), PropagationInterrupted);
}

TEST_CASE("informed distribution")
{
    const Pmf p_tot(1, {0.2, 0.5, 0.3});
    CHECK(total_variation(informed_distribution(p_tot, p_tot, 40.0, 100), p_tot) < 1e-15);
    CHECK(informed_distribution(Pmf(2, {1.0}), p_tot, 100.0, 100) == p_tot);

    // Union of supports and the clamp report.
    double clamped = 0.0;
    const Pmf skewed = informed_distribution(Pmf(1, {0.0, 0.0, 0.0, 1.0}), p_tot, 10.0, 100, &clamped);
    CHECK(clamped > 0.0);
    CHECK(skewed.at(4) == 0.0);
    CHECK(std::abs(skewed.sum() - 1.0) < 1e-12);

    CHECK_THROWS_AS(informed_distribution(p_tot, p_tot, 0.5, 100), DomainError);
}

TEST_CASE("solver grid")
{
    const auto g = SolverGrid::log_sections(5, 10000, 200);
    CHECK(g.points.front() == 5.0);
    CHECK(g.points.back() == 9999.0);
    for (std::size_t j = 1; j < g.points.size(); ++j)
        CHECK(g.points[j] - g.points[j - 1] >= 1.0 - 1e-9);
    for (double boundary : {50.0, 500.0, 5000.0})
        CHECK(std::find(g.points.begin(), g.points.end(), boundary) != g.points.end());
    // [5,50] has 45 unit steps, the other sections 200 each.
    CHECK(g.points.size() == 1 + 45 + 200 + 200 + 200);

    const auto u = SolverGrid::unit(3, 20);
    CHECK(u.points.size() == 17);
    CHECK(u.points.front() == 3.0);
    CHECK(u.points.back() == 19.0);

    CHECK_THROWS_AS(SolverGrid::log_sections(0, 100, 10), ParameterError);
    CHECK_THROWS_AS(SolverGrid::log_sections(99, 100, 10), ParameterError);
    CHECK_THROWS_AS(SolverGrid::log_sections(5, 100, 0), ParameterError);
}

TEST_CASE("regular graph keeps a point mass")
{
    const auto curve = solve(Pmf(4, {1.0}), 500, 5, 1.0, 50);
    for (const auto& s : curve.samples) {
        CHECK(s.p_ninf == Pmf(4, {1.0}));
        CHECK(s.p_inf.at(4) == doctest::Approx(1.0));
    }
}

TEST_CASE("solver invariants on the reference distributions")
{
    for (const auto& spec : {DegreeSpec::power_law(2.75, 2), DegreeSpec::poisson(4.58, 1)}) {
        const auto d = DegreeDistribution::create(spec, 10000);
        const auto curve = solve(d.pmf(), 10000, 5, 1.0, kDefaultStepsPerSection);
        CHECK_FALSE(curve.halted);
        CHECK(curve.final_i == 9999.0);
        CHECK(curve.max_normalization_drift < 1e-9);
        double last_mean = 1e300, last_t = -1e300;
        for (const auto& s : curve.samples) {
            CHECK(std::abs(s.p_ninf.sum() - 1.0) < 1e-9);
            CHECK(s.p_ninf.mean() <= last_mean + 1e-12);
            last_mean = s.p_ninf.mean();
            if (s.e_k_ext > 0.0)
                CHECK(s.e_t > last_t);
            last_t = s.e_t;
        }
        CHECK(curve.time_at(5.0) == 0.0);
    }
}

TEST_CASE("mu rescales the theory time axis")
{
    const auto d = DegreeDistribution::create(DegreeSpec::poisson(4.58, 1), 2000);
    const auto a = solve(d.pmf(), 2000, 5, 1.0, 100);
    const auto b = solve(d.pmf(), 2000, 5, 2.0, 100);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t j = 0; j < a.samples.size(); ++j)
        CHECK(b.samples[j].e_t == doctest::Approx(a.samples[j].e_t / 2.0));
}

TEST_CASE("grid convergence at half coverage")
{
    const auto d = DegreeDistribution::create(DegreeSpec::poisson(4.58, 1), 10000);
    const double t1 = solve(d.pmf(), 10000, 5, 1.0, 200).time_at(5000.0);
    const double t2 = solve(d.pmf(), 10000, 5, 1.0, 400).time_at(5000.0);
    CHECK(std::abs(t2 - t1) / t2 < 0.005);
}

TEST_CASE("unit steps reproduce the node-by-node recursion")
{
    Rng rng(16);
    std::vector<Pmf> cases = {DegreeDistribution::create(DegreeSpec::power_law(2.75, 2), 200).pmf(),
                              DegreeDistribution::create(DegreeSpec::poisson(4.58, 1), 200).pmf()};
    for (int j = 0; j < 5; ++j)
        cases.push_back(gen::random_pmf(rng, 1, 3, 10));
    for (const Pmf& p_tot : cases) {
        const long n = 200;
        const auto curve = solve(p_tot, SolverGrid::unit(5, n), 1.0);
        const auto oracle = discrete_recursion(p_tot, n);
        // Subcritical pmfs halt early; compare what was solved.
        REQUIRE(curve.samples.size() <= oracle.size());
        if (!curve.halted)
            REQUIRE(curve.samples.size() == oracle.size());
        double worst = 0.0;
        for (std::size_t s = 0; s < curve.samples.size(); ++s) {
            CHECK(curve.samples[s].i == static_cast<double>(s + 1));
            for (std::size_t k = 0; k < oracle[s].size(); ++k)
                worst = std::max(worst, std::abs(curve.samples[s].p_ninf.p[k] - oracle[s][k]));
        }
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("oversized explicit steps are reported")
{
    const auto d = DegreeDistribution::create(DegreeSpec::power_law(2.75, 2), 10000);
    CHECK_THROWS_AS(solve(d.pmf(), 10000, 5, 1.0, 1, SolverOptions{Stepper::Euler, false}), StepSizeError);
}

TEST_CASE("every stepper converges under grid refinement")
{
    const auto d = DegreeDistribution::create(DegreeSpec::poisson(4.58, 1), 5000);
    for (Stepper st : {Stepper::Mixture, Stepper::Euler, Stepper::Midpoint}) {
        const double coarse = solve(d.pmf(), 5000, 5, 1.0, 200, {st, true}).time_at(2500.0);
        const double fine = solve(d.pmf(), 5000, 5, 1.0, 400, {st, true}).time_at(2500.0);
        CHECK(std::abs(coarse - fine) / fine < 0.005);
    }
    // On a unit grid the mixture stepper is the node-by-node recursion, and the
    // continuous steppers stay close to it before the final stage.
    const auto unit = SolverGrid::unit(5, 5000);
    const double mix = solve(d.pmf(), unit, 1.0, {Stepper::Mixture, true}).time_at(2500.0);
    const double mid = solve(d.pmf(), unit, 1.0, {Stepper::Midpoint, true}).time_at(2500.0);
    CHECK(std::abs(mid - mix) / mix < 0.02);
}

TEST_CASE("theory curve lookups")
{
    const auto d = DegreeDistribution::create(DegreeSpec::poisson(4.0, 1), 1000);
    const auto curve = solve(d.pmf(), 1000, 5, 1.0, 50);
    CHECK(curve.uninformed_pmf_at(0.0) == curve.samples.front().p_ninf);
    CHECK(curve.uninformed_pmf_at(1e9) == curve.samples.back().p_ninf);
    const Pmf mid = curve.informed_pmf_at(300.5);
    CHECK(std::abs(mid.sum() - 1.0) < 1e-12);
    CHECK_THROWS_AS(TheoryCurve{}.uninformed_pmf_at(3.0), DomainError);
}
