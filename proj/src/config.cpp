#include "infoprop/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace infoprop {

namespace {

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "distribution", "gamma", "gamma_prime", "k_min", "k_max", "pmf_file", "n", "runs", "mu",
        "threshold", "i0", "steps_per_section", "seed", "parallelism", "milestones", "out", "dt",
        "t_end", "seeding", "dump_records", "export_network",
    };
    return keys;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_real(const std::string& key, const std::string& v, const char* domain)
{
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out))
        throw ConfigError(key, std::string("expected ") + domain + ", got '" + v + "'");
    return out;
}

long long to_integer(const std::string& key, const std::string& v, const char* domain)
{
    long long out = 0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(key, std::string("expected ") + domain + ", got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::string format_real(double v)
{
    // Shortest representation that parses back to the same double.
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

ConfigValues parse_config_values(std::string_view text)
{
    ConfigValues values;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string content = trim(line);
        if (content.empty() || (content.front() == '[' && content.back() == ']'))
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no), "missing key");
        if (!values.emplace(key, value).second)
            throw ConfigError(key, "given more than once");
    }
    return values;
}

ConfigValues read_config_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_values(buf.str());
}

RunConfig parse_config(const ConfigValues& values)
{
    for (const auto& [key, value] : values)
        if (!known_keys().contains(key))
            throw ConfigError(key, "unknown key");

    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    };

    RunConfig c;
    c.parallelism = default_parallelism();

    const std::string* dist = get("distribution");
    if (!dist)
        throw ConfigError("distribution", "required (poisson, powerlaw or empirical)");
    if (*dist == "poisson")
        c.distribution = DistributionKind::PoissonLike;
    else if (*dist == "powerlaw")
        c.distribution = DistributionKind::PowerLaw;
    else if (*dist == "empirical")
        c.distribution = DistributionKind::Empirical;
    else
        throw ConfigError("distribution", "expected poisson, powerlaw or empirical, got '" + *dist + "'");

    auto reject_unless = [&](const char* key, DistributionKind kind) {
        if (get(key) && c.distribution != kind)
            throw ConfigError(key, "only valid for distribution = " + std::string(to_string(kind)));
    };
    reject_unless("gamma", DistributionKind::PoissonLike);
    reject_unless("gamma_prime", DistributionKind::PowerLaw);
    reject_unless("pmf_file", DistributionKind::Empirical);

    switch (c.distribution) {
    case DistributionKind::PoissonLike: {
        const std::string* g = get("gamma");
        if (!g)
            throw ConfigError("gamma", "required for a poisson distribution (real > 0)");
        c.gamma = to_real("gamma", *g, "real > 0");
        if (!(*c.gamma > 0.0))
            throw ConfigError("gamma", "expected real > 0, got " + *g);
        c.k_min = 1;
        break;
    }
    case DistributionKind::PowerLaw: {
        const std::string* g = get("gamma_prime");
        if (!g)
            throw ConfigError("gamma_prime", "required for a powerlaw distribution (real > 2)");
        c.gamma_prime = to_real("gamma_prime", *g, "real > 2");
        if (!(*c.gamma_prime > 2.0))
            throw ConfigError("gamma_prime", "expected real > 2 (no maximum degree exists otherwise), got " + *g);
        c.k_min = 2;
        break;
    }
    case DistributionKind::Empirical: {
        const std::string* f = get("pmf_file");
        if (!f || f->empty())
            throw ConfigError("pmf_file", "required for an empirical distribution");
        c.pmf_file = *f;
        c.k_min = 0;
        break;
    }
    }

    if (const auto* v = get("k_min")) {
        const long long k = to_integer("k_min", *v, "integer >= 0");
        const long long lowest = c.distribution == DistributionKind::PowerLaw ? 1 : 0;
        if (k < lowest || k > 1'000'000)
            throw ConfigError("k_min", "expected integer >= " + std::to_string(lowest) + ", got " + *v);
        c.k_min = static_cast<int>(k);
    }
    if (const auto* v = get("k_max")) {
        const long long k = to_integer("k_max", *v, "integer >= k_min");
        if (k < c.k_min || k > 100'000'000)
            throw ConfigError("k_max", "expected integer >= k_min (" + std::to_string(c.k_min) + "), got " + *v);
        c.k_max = static_cast<int>(k);
    }

    const std::string* n = get("n");
    if (!n)
        throw ConfigError("n", "required (integer >= 3)");
    c.n = static_cast<long>(to_integer("n", *n, "integer >= 3"));
    if (c.n < 3)
        throw ConfigError("n", "expected integer >= 3, got " + *n);

    if (const auto* v = get("runs")) {
        const long long r = to_integer("runs", *v, "integer >= 1");
        if (r < 1)
            throw ConfigError("runs", "expected integer >= 1, got " + *v);
        c.runs = static_cast<std::size_t>(r);
    }
    if (const auto* v = get("mu")) {
        c.mu = to_real("mu", *v, "real > 0");
        if (!(c.mu > 0.0))
            throw ConfigError("mu", "expected real > 0, got " + *v);
    }
    if (const auto* v = get("threshold")) {
        c.threshold = to_real("threshold", *v, "fraction in (0, 1]");
        if (!(c.threshold > 0.0 && c.threshold <= 1.0))
            throw ConfigError("threshold", "expected fraction in (0, 1], got " + *v);
    }
    if (const auto* v = get("i0")) {
        const long long i0 = to_integer("i0", *v, "integer in [1, n - 2]");
        if (i0 < 1 || i0 > c.n - 2)
            throw ConfigError("i0", "expected integer in [1, n - 2], got " + *v);
        c.i0 = static_cast<int>(i0);
    } else if (c.i0 > c.n - 2) {
        throw ConfigError("i0", "default i0 = 5 needs n >= 7; set i0 explicitly");
    }
    if (const auto* v = get("steps_per_section")) {
        const long long s = to_integer("steps_per_section", *v, "integer >= 1");
        if (s < 1 || s > 10'000'000)
            throw ConfigError("steps_per_section", "expected integer >= 1, got " + *v);
        c.steps_per_section = static_cast<int>(s);
    }
    if (const auto* v = get("seed")) {
        const long long s = to_integer("seed", *v, "integer >= 0");
        if (s < 0)
            throw ConfigError("seed", "expected integer >= 0, got " + *v);
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (const auto* v = get("parallelism")) {
        const long long p = to_integer("parallelism", *v, "integer in [1, 1024]");
        if (p < 1 || p > 1024)
            throw ConfigError("parallelism", "expected integer in [1, 1024], got " + *v);
        c.parallelism = static_cast<unsigned>(p);
    }
    if (const auto* v = get("milestones")) {
        c.milestones.clear();
        std::stringstream list(*v);
        std::string item;
        while (std::getline(list, item, ',')) {
            const double f = to_real("milestones", trim(item), "comma-separated fractions in (0, 1]");
            if (!(f > 0.0 && f <= 1.0))
                throw ConfigError("milestones", "expected fractions in (0, 1], got " + trim(item));
            c.milestones.push_back(f);
        }
        if (c.milestones.empty())
            throw ConfigError("milestones", "expected at least one fraction");
        if (!std::is_sorted(c.milestones.begin(), c.milestones.end()) ||
            std::adjacent_find(c.milestones.begin(), c.milestones.end()) != c.milestones.end())
            throw ConfigError("milestones", "expected strictly increasing fractions");
    }
    if (const auto* v = get("out")) {
        if (v->empty())
            throw ConfigError("out", "expected a directory path");
        c.out = *v;
    }
    if (const auto* v = get("dt")) {
        c.dt = to_real("dt", *v, "real > 0");
        if (!(c.dt > 0.0))
            throw ConfigError("dt", "expected real > 0, got " + *v);
    }
    if (const auto* v = get("t_end")) {
        c.t_end = to_real("t_end", *v, "real > 0");
        if (!(c.t_end > 0.0))
            throw ConfigError("t_end", "expected real > 0, got " + *v);
    }
    if (const auto* v = get("seeding")) {
        if (*v == "uniform")
            c.seeding = Seeding::Uniform;
        else if (*v == "degree")
            c.seeding = Seeding::DegreeWeighted;
        else
            throw ConfigError("seeding", "expected uniform or degree, got '" + *v + "'");
    }
    if (const auto* v = get("dump_records"))
        c.dump_records = to_bool("dump_records", *v);
    if (const auto* v = get("export_network"))
        c.export_network = to_bool("export_network", *v);
    return c;
}

RunConfig parse_config_text(std::string_view text)
{
    return parse_config(parse_config_values(text));
}

std::string serialize(const RunConfig& c)
{
    std::ostringstream out;
    out << "distribution = " << to_string(c.distribution) << '\n';
    if (c.gamma)
        out << "gamma = " << format_real(*c.gamma) << '\n';
    if (c.gamma_prime)
        out << "gamma_prime = " << format_real(*c.gamma_prime) << '\n';
    if (!c.pmf_file.empty())
        out << "pmf_file = " << c.pmf_file << '\n';
    out << "k_min = " << c.k_min << '\n';
    if (c.k_max)
        out << "k_max = " << *c.k_max << '\n';
    out << "n = " << c.n << '\n';
    out << "runs = " << c.runs << '\n';
    out << "mu = " << format_real(c.mu) << '\n';
    out << "threshold = " << format_real(c.threshold) << '\n';
    out << "i0 = " << c.i0 << '\n';
    out << "steps_per_section = " << c.steps_per_section << '\n';
    out << "seed = " << c.seed << '\n';
    out << "parallelism = " << c.parallelism << '\n';
    out << "milestones = ";
    for (std::size_t j = 0; j < c.milestones.size(); ++j)
        out << (j ? "," : "") << format_real(c.milestones[j]);
    out << '\n';
    out << "out = " << c.out << '\n';
    out << "dt = " << format_real(c.dt) << '\n';
    out << "t_end = " << format_real(c.t_end) << '\n';
    out << "seeding = " << (c.seeding == Seeding::Uniform ? "uniform" : "degree") << '\n';
    out << "dump_records = " << (c.dump_records ? "true" : "false") << '\n';
    out << "export_network = " << (c.export_network ? "true" : "false") << '\n';
    return out.str();
}

unsigned default_parallelism()
{
    if (const char* env = std::getenv(kParallelismEnv)) {
        const std::string v = env;
        unsigned p = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), p);
        if (ec == std::errc{} && ptr == v.data() + v.size() && p >= 1 && p <= 1024)
            return p;
    }
    return 1;
}

DegreeSpec RunConfig::degree_spec() const
{
    DegreeSpec spec;
    switch (distribution) {
    case DistributionKind::PoissonLike:
        spec = DegreeSpec::poisson(gamma.value_or(0.0), k_min);
        break;
    case DistributionKind::PowerLaw:
        spec = DegreeSpec::power_law(gamma_prime.value_or(0.0), k_min);
        break;
    case DistributionKind::Empirical: {
        Pmf pmf = read_pmf_file(pmf_file);
        // k_min trims the low end of an empirical pmf.
        if (k_min > pmf.k_min) {
            const auto drop = static_cast<std::size_t>(std::min(k_min - pmf.k_min, static_cast<int>(pmf.size())));
            pmf.p.erase(pmf.p.begin(), pmf.p.begin() + static_cast<std::ptrdiff_t>(drop));
            pmf.k_min += static_cast<int>(drop);
        }
        spec = DegreeSpec::from_pmf(std::move(pmf));
        break;
    }
    }
    spec.k_max = k_max;
    return spec;
}

} // namespace infoprop
