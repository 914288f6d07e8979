#include "doctest.h"

#include "infoprop/config.hpp"
#include "infoprop/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace infoprop;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("infoprop_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string error_of(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("minimal config gets the documented defaults")
{
    const auto c = parse_config_text("distribution = poisson\ngamma = 4.58\nn = 10000\n");
    CHECK(c.distribution == DistributionKind::PoissonLike);
    CHECK(*c.gamma == 4.58);
    CHECK(c.k_min == 1);
    CHECK(c.mu == 1.0);
    CHECK(c.threshold == 0.99);
    CHECK(c.i0 == 5);
    CHECK(c.steps_per_section == kDefaultStepsPerSection);
    CHECK(c.milestones == std::vector<double>{0.01, 0.5, 1.0});
    CHECK(parse_config_text("distribution = powerlaw\ngamma_prime = 2.75\nn = 100\n").k_min == 2);
}

TEST_CASE("rejections name the key and the domain")
{
    const std::string g = error_of("distribution = powerlaw\ngamma_prime = 2.0\nn = 100\n");
    CHECK(g.find("gamma_prime") != std::string::npos);
    CHECK(g.find("> 2") != std::string::npos);

    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\ncolour = red\n").find("colour") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\n").find("'n'") != std::string::npos);
    CHECK(error_of("gamma = 3\nn = 100\n").find("distribution") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\nmu = 0\n").find("mu") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\nthreshold = 1.5\n").find("threshold") !=
          std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\ni0 = 99\n").find("i0") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\nruns = x\n").find("runs") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma_prime = 3\nn = 100\n").find("gamma_prime") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\nn = 200\n").find("more than once") !=
          std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\nmilestones = 0.5,0.1\n").find("milestones") !=
          std::string::npos);
    CHECK(error_of("distribution = weird\nn = 100\n").find("distribution") != std::string::npos);
    CHECK(error_of("distribution = poisson\ngamma = 3\nn = 100\njunk line\n").find("line 4") != std::string::npos);
}

TEST_CASE("comments and sections are ignored")
{
    const auto c = parse_config_text("# experiment\n[network]\ndistribution = poisson # ER\ngamma = 4\n\n[run]\nn = 50\n");
    CHECK(c.n == 50);
}

TEST_CASE("serialization round-trips")
{
    const std::vector<std::string> texts = {
        "distribution = poisson\ngamma = 4.58\nn = 10000\n",
        "distribution = powerlaw\ngamma_prime = 2.75\nk_min = 3\nk_max = 77\nn = 321\nruns = 7\nmu = 0.1\n"
        "threshold = 0.3\ni0 = 2\nsteps_per_section = 13\nseed = 18446744073709551\nparallelism = 3\n"
        "milestones = 0.1,0.2,0.333333333333\nout = some dir\ndt = 0.0002\nt_end = 12.5\nseeding = degree\n"
        "dump_records = true\nexport_network = yes\n",
        "distribution = empirical\npmf_file = /tmp/x.pmf\nn = 10\n",
    };
    for (const auto& t : texts) {
        const RunConfig c = parse_config_text(t);
        CHECK(parse_config_text(serialize(c)) == c);
        CHECK(serialize(parse_config_text(serialize(c))) == serialize(c));
    }
}

TEST_CASE("flags override file values")
{
    ConfigValues v = parse_config_values("distribution = poisson\ngamma = 4\nn = 100\nseed = 1\n");
    v["seed"] = "9";
    CHECK(parse_config(v).seed == 9);
}

TEST_CASE("parallelism default comes from the environment")
{
    ::setenv(kParallelismEnv, "3", 1);
    CHECK(default_parallelism() == 3);
    CHECK(parse_config_text("distribution = poisson\ngamma = 4\nn = 100\n").parallelism == 3);
    ::setenv(kParallelismEnv, "zero", 1);
    CHECK(default_parallelism() == 1);
    ::unsetenv(kParallelismEnv);
    CHECK(default_parallelism() == 1);
}

TEST_CASE("pipeline: theory on a point mass keeps constant snapshots")
{
    const fs::path dir = scratch("point");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "regular.pmf") << "# 3-regular\n3 1\n";
    }
    RunConfig c = parse_config_text("distribution = empirical\npmf_file = " + (dir / "regular.pmf").string() +
                                    "\nn = 200\nout = " + (dir / "out").string() + "\n");
    std::ostringstream log;
    const auto outcome = run(Command::Theory, c, log);
    REQUIRE(outcome.exit_code == kExitOk);
    for (const char* name : {"theory_pmf_1pct.csv", "theory_pmf_50pct.csv", "theory_pmf_100pct.csv"})
        CHECK(slurp(dir / "out" / name) == "k,p_ninf,p_inf\n3,1,1\n");
    fs::remove_all(dir);
}

TEST_CASE("pipeline: exit codes")
{
    std::ostringstream log;
    SUBCASE("zero accepted runs")
    {
        const fs::path dir = scratch("zero");
        fs::create_directories(dir);
        std::ofstream(dir / "ones.pmf") << "1 1\n";
        const auto c = parse_config_text("distribution = empirical\npmf_file = " + (dir / "ones.pmf").string() +
                                         "\nn = 100\nruns = 5\nout = " + (dir / "out").string() + "\n");
        const auto outcome = run(Command::Simulate, c, log);
        CHECK(outcome.exit_code == kExitNoAcceptedRuns);
        CHECK(outcome.message.find("no run") != std::string::npos);
        fs::remove_all(dir);
    }
    SUBCASE("unwritable output directory")
    {
        const fs::path dir = scratch("io");
        fs::create_directories(dir);
        std::ofstream(dir / "file") << "x";
        const auto c = parse_config_text("distribution = poisson\ngamma = 4\nn = 100\nout = " +
                                         (dir / "file" / "sub").string() + "\n");
        CHECK(run(Command::Theory, c, log).exit_code == kExitIo);
        fs::remove_all(dir);
    }
    SUBCASE("missing pmf file")
    {
        const auto c = parse_config_text("distribution = empirical\npmf_file = /nonexistent.pmf\nn = 100\nout = " +
                                         scratch("missing").string() + "\n");
        CHECK(run(Command::Theory, c, log).exit_code == kExitConfig);
        fs::remove_all(scratch("missing"));
    }
}

TEST_CASE("pipeline: deterministic outputs and a complete manifest")
{
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string base = "distribution = powerlaw\ngamma_prime = 2.75\nn = 600\nruns = 12\nseed = 5\n";
    std::ostringstream log;
    const auto ra = run(Command::All, parse_config_text(base + "parallelism = 1\nout = " + a.string() + "\n"), log);
    const auto rb = run(Command::All, parse_config_text(base + "parallelism = 4\nout = " + b.string() + "\n"), log);
    REQUIRE(ra.exit_code == kExitOk);
    REQUIRE(rb.exit_code == kExitOk);
    REQUIRE(ra.files == rb.files);
    for (const auto& f : ra.files)
        if (f.ends_with(".csv") || f == "summary.txt")
            CHECK(slurp(a / f) == slurp(b / f));

    CHECK(slurp(a / "propagation.csv").rfind("i,fraction,t_sim,t_theory,t_meanfield\n", 0) == 0);
    CHECK(slurp(a / "degrees.csv")
              .rfind("k,pmf_sim_1pct,pmf_model_1pct,pmf_sim_50pct,pmf_model_50pct,pmf_sim_100pct,pmf_model_100pct,"
                     "median_time\n",
                     0) == 0);

    const std::string manifest = slurp(a / "manifest.json");
    for (const auto& f : ra.files) {
        if (f == "manifest.json")
            continue;
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(slurp(a / f))));
        CHECK(manifest.find("\"" + f + "\"") != std::string::npos);
        CHECK(manifest.find(hex) != std::string::npos);
    }
    CHECK(parse_config_text(slurp(a / "config.txt")).seed == 5);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("FNV-1a reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
