#include "infoprop/pipeline.hpp"

#include "infoprop/errors.hpp"
#include "infoprop/meanfield.hpp"
#include "infoprop/network.hpp"
#include "infoprop/simulator.hpp"
#include "infoprop/stats.hpp"
#include "infoprop/theory.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace infoprop {

namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name)
{
    if (name == "simulate")
        return Command::Simulate;
    if (name == "theory")
        return Command::Theory;
    if (name == "meanfield")
        return Command::MeanField;
    if (name == "compare")
        return Command::Compare;
    if (name == "all")
        return Command::All;
    return std::nullopt;
}

std::string_view to_string(Command command)
{
    switch (command) {
    case Command::Simulate: return "simulate";
    case Command::Theory: return "theory";
    case Command::MeanField: return "meanfield";
    case Command::Compare: return "compare";
    case Command::All: return "all";
    }
    return "?";
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

class NoAcceptedRuns : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v)
{
    if (!std::isfinite(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// "1", "50", "100", "0.5"
std::string pct_label(double f)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%gpct", std::round(f * 100.0 * 1e6) / 1e6);
    return buf;
}

struct Outputs {
    fs::path dir;
    std::vector<std::string> files;

    void write(const std::string& name, const std::string& content)
    {
        const fs::path path = dir / name;
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw OutputError("cannot write '" + path.string() + "'");
        out << content;
        out.close();
        if (!out)
            throw OutputError("failed writing '" + path.string() + "'");
        files.push_back(name);
    }
};

struct SimulationStage {
    EnsembleSummary summary;
    EnsembleStats stats;
};

struct Pipeline {
    const RunConfig& config;
    std::ostream& log;
    Outputs outputs;
    DegreeDistribution distribution;

    std::optional<SimulationStage> sim;
    std::optional<TheoryCurve> theory;
    std::optional<MeanFieldCurve> meanfield;

    Pipeline(const RunConfig& c, std::ostream& l)
        : config(c), log(l), outputs{fs::path(c.out), {}},
          distribution(DegreeDistribution::create(c.degree_spec(), c.n))
    {
    }

    const Pmf& p_tot() const { return distribution.pmf(); }

    void simulate()
    {
        EnsembleSpec spec{distribution,
                          static_cast<std::size_t>(config.n),
                          config.mu,
                          config.runs,
                          config.threshold,
                          config.seed,
                          config.parallelism,
                          true};
        EnsembleAccumulator acc(config.i0, config.milestones);
        std::ostringstream records;
        std::optional<std::string> edges;
        log << "simulate: " << config.runs << " runs on n = " << config.n << '\n';

        const auto summary = run_ensemble(spec, [&](std::size_t index, const Network& net, PropagationRecord&& rec) {
            acc.add(rec);
            if (config.dump_records) {
                records << "# run " << index << '\n';
                write_record(records, rec, config.seed);
            }
            if (config.export_network && !edges) {
                std::ostringstream e;
                write_edge_list(e, net, config.seed);
                edges = e.str();
            }
        });
        log << "simulate: accepted " << summary.accepted << " of " << summary.runs << '\n';
        if (summary.accepted == 0 || acc.accepted() == 0)
            throw NoAcceptedRuns("no run informed at least " + num(config.threshold * 100.0) +
                                 "% of the nodes; raise the mean degree or lower the threshold");
        sim = SimulationStage{summary, acc.finish()};
        if (sim->stats.accepted_runs == 0)
            throw NoAcceptedRuns("every accepted run informed fewer than i0 nodes");

        const auto& st = sim->stats;
        std::ostringstream curve;
        curve << "i,fraction,t_sim,k_ext_sim\n";
        for (std::size_t i = 1; i <= st.max_i(); ++i) {
            curve << i << ',' << num(static_cast<double>(i) / static_cast<double>(config.n)) << ','
                  << num(st.mean_t_of_i[i - 1]) << ',';
            if (i <= st.mean_k_ext_of_i.size())
                curve << num(st.mean_k_ext_of_i[i - 1]);
            curve << '\n';
        }
        outputs.write("sim_curve.csv", curve.str());
        outputs.write("sim_degrees.csv", degree_table(false));
        if (config.dump_records)
            outputs.write("records.txt", records.str());
        if (edges)
            outputs.write("network.edges", *edges);
    }

    void solve_theory()
    {
        if (!distribution.molloy_reed_ok())
            log << "theory: warning: degree distribution has no giant component (E[k^2] - 2E[k] = "
                << num(distribution.molloy_reed_value()) << ")\n";
        theory = solve(p_tot(), config.n, config.i0, config.mu, config.steps_per_section);
        log << "theory: " << theory->samples.size() << " samples"
            << (theory->halted ? ", halted at i = " + num(theory->final_i) : std::string()) << '\n';

        std::ostringstream curve;
        curve << "i,fraction,e_t,e_k_ext\n";
        for (const auto& s : theory->samples)
            curve << num(s.i) << ',' << num(s.i / static_cast<double>(config.n)) << ',' << num(s.e_t) << ','
                  << num(s.e_k_ext) << '\n';
        outputs.write("theory_curve.csv", curve.str());

        for (double f : config.milestones) {
            const double i = model_i(f);
            const Pmf ninf = theory->uninformed_pmf_at(std::min(i, static_cast<double>(config.n - 1)));
            const Pmf inf = model_informed_pmf(f);
            std::ostringstream snap;
            snap << "k,p_ninf,p_inf\n";
            const int lo = std::min(ninf.k_min, inf.k_min);
            const int hi = std::max(ninf.k_max(), inf.k_max());
            for (int k = lo; k <= hi; ++k)
                snap << k << ',' << num(ninf.at(k)) << ',' << num(inf.at(k)) << '\n';
            outputs.write("theory_pmf_" + pct_label(f) + ".csv", snap.str());
        }
    }

    void integrate_meanfield()
    {
        meanfield = integrate(p_tot(), config.n, config.i0, config.mu, config.dt, config.t_end,
                              MeanFieldOptions{config.seeding});
        log << "meanfield: " << meanfield->t.size() << " steps\n";
        std::ostringstream curve;
        curve << "t,fraction\n";
        for (std::size_t j = 0; j < meanfield->t.size(); ++j)
            curve << num(meanfield->t[j]) << ',' << num(meanfield->fraction[j]) << '\n';
        outputs.write("meanfield_curve.csv", curve.str());
    }

    double model_i(double f) const { return std::ceil(f * static_cast<double>(config.n) - 1e-9); }

    Pmf model_informed_pmf(double f) const
    {
        const double i = model_i(f);
        if (i >= static_cast<double>(config.n))
            return p_tot();
        return informed_distribution(theory->uninformed_pmf_at(i), p_tot(), i, config.n);
    }

    std::string degree_table(bool with_model) const
    {
        const auto& st = sim->stats;
        int lo = p_tot().k_min;
        int hi = p_tot().k_max();
        for (const auto& [f, pmf] : st.informed_degree_pmf_at)
            if (!pmf.empty()) {
                lo = std::min(lo, pmf.k_min);
                hi = std::max(hi, pmf.k_max());
            }
        std::vector<Pmf> model;
        if (with_model)
            for (double f : config.milestones)
                model.push_back(model_informed_pmf(f));

        std::ostringstream out;
        out << 'k';
        for (double f : config.milestones) {
            out << ",pmf_sim_" << pct_label(f);
            if (with_model)
                out << ",pmf_model_" << pct_label(f);
        }
        out << ",median_time\n";
        for (int k = lo; k <= hi; ++k) {
            out << k;
            for (std::size_t m = 0; m < config.milestones.size(); ++m) {
                const auto it = st.informed_degree_pmf_at.find(config.milestones[m]);
                out << ',' << num(it == st.informed_degree_pmf_at.end() ? 0.0 : it->second.at(k));
                if (with_model)
                    out << ',' << num(model[m].at(k));
            }
            out << ',';
            if (const auto it = st.median_time_per_degree.find(k); it != st.median_time_per_degree.end())
                out << num(it->second);
            out << '\n';
        }
        return out.str();
    }

    void compare(bool full)
    {
        const auto cmp = compare_curves(sim->stats, *theory, *meanfield);
        std::ostringstream prop;
        prop << "i,fraction,t_sim,t_theory,t_meanfield\n";
        for (std::size_t j = 0; j < cmp.i.size(); ++j)
            prop << num(cmp.i[j]) << ',' << num(cmp.i[j] / static_cast<double>(config.n)) << ','
                 << num(cmp.t_sim[j]) << ',' << num(cmp.t_theory[j]) << ',' << num(cmp.t_meanfield[j]) << '\n';
        outputs.write("propagation.csv", prop.str());
        outputs.write("degrees.csv", degree_table(true));
        outputs.write("summary.txt", summary(cmp, full));
    }

    std::string summary(const CurveComparison& cmp, bool full) const
    {
        const auto& s = sim->summary;
        const auto& st = sim->stats;
        std::ostringstream out;
        out << "command: " << (full ? "all" : "compare") << '\n';
        out << "distribution: " << to_string(distribution.kind()) << " shape " << num(distribution.shape())
            << " k in [" << distribution.k_min() << ", " << distribution.k_max() << "]\n";
        out << "mean degree: " << num(distribution.mean_degree()) << ", second moment: "
            << num(distribution.second_moment()) << '\n';
        out << "runs: " << s.runs << ", accepted: " << s.accepted << ", rejected: " << s.rejected
            << ", acceptance rate: " << num(static_cast<double>(s.accepted) / static_cast<double>(s.runs)) << '\n';
        out << "runs excluded below i0: " << st.excluded_runs << '\n';
        out << "parity repairs: " << s.parity_repairs << ", discarded half-links: " << s.discarded_half_links
            << '\n';
        out << "simulation common range: i <= " << st.max_i() << '\n';
        out << "theory: " << (theory->halted ? "halted at i = " + num(theory->final_i) : "reached i = " + num(theory->final_i))
            << ", clamp events: " << theory->clamp_events << ", clamped mass: " << num(theory->clamped_mass)
            << ", max normalization drift: " << num(theory->max_normalization_drift)
            << ", unit steps with negative entries: " << theory->negative_steps << " (lowest "
            << num(theory->most_negative_entry) << ")\n";
        out << "meanfield: final fraction " << num(meanfield->fraction.back()) << " at t = "
            << num(meanfield->t.back()) << ", max clamp " << num(meanfield->max_clamp) << '\n';
        out << "checkpoints (fraction, t_sim, t_theory, t_meanfield, theory-sim, meanfield-sim, "
               "theory rel, meanfield rel):\n";
        for (const auto& c : cmp.checkpoints)
            out << "  " << num(c.fraction) << ' ' << num(c.t_sim) << ' ' << num(c.t_theory) << ' '
                << num(c.t_meanfield) << ' ' << num(c.theory_minus_sim()) << ' ' << num(c.meanfield_minus_sim())
                << ' ' << num(c.theory_rel_error()) << ' ' << num(c.meanfield_rel_error()) << '\n';
        return out.str();
    }

    void manifest(Command command)
    {
        nlohmann::ordered_json m;
        m["tool"] = "infoprop";
        m["version"] = kVersion;
        m["command"] = std::string(to_string(command));
        m["seed"] = config.seed;
        nlohmann::ordered_json cfg;
        for (const auto& [key, value] : parse_config_values(serialize(config)))
            cfg[key] = value;
        m["config"] = cfg;
        nlohmann::ordered_json files = nlohmann::ordered_json::array();
        for (const auto& name : outputs.files) {
            std::ifstream in(outputs.dir / name, std::ios::binary);
            if (!in)
                throw OutputError("cannot re-read '" + name + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            const std::string bytes = buf.str();
            char hex[17];
            std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
            files.push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a64", hex}});
        }
        m["files"] = files;
        outputs.write("manifest.json", m.dump(2) + "\n");
    }
};

} // namespace

RunOutcome run(Command command, const RunConfig& config, std::ostream& log)
{
    RunOutcome outcome;
    try {
        std::error_code ec;
        fs::create_directories(config.out, ec);
        if (ec || !fs::is_directory(config.out))
            throw OutputError("cannot create output directory '" + config.out + "'");

        Pipeline p(config, log);
        p.outputs.write("config.txt", serialize(config));
        const bool needs_sim = command == Command::Simulate || command == Command::Compare || command == Command::All;
        const bool needs_theory = command == Command::Theory || command == Command::Compare || command == Command::All;
        const bool needs_mf = command == Command::MeanField || command == Command::Compare || command == Command::All;
        if (needs_theory)
            p.solve_theory();
        if (needs_mf)
            p.integrate_meanfield();
        if (needs_sim)
            p.simulate();
        if (command == Command::Compare || command == Command::All)
            p.compare(command == Command::All);
        p.manifest(command);
        outcome.files = p.outputs.files;
        outcome.message = "wrote " + std::to_string(outcome.files.size()) + " files to " + config.out;
    } catch (const ConfigError& e) {
        outcome.exit_code = kExitConfig;
        outcome.message = e.what();
    } catch (const ParameterError& e) {
        outcome.exit_code = kExitConfig;
        outcome.message = e.what();
    } catch (const NoAcceptedRuns& e) {
        outcome.exit_code = kExitNoAcceptedRuns;
        outcome.message = e.what();
    } catch (const OutputError& e) {
        outcome.exit_code = kExitIo;
        outcome.message = e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = kExitFailure;
        outcome.message = e.what();
    }
    return outcome;
}

} // namespace infoprop
