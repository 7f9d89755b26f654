// popcount: simulate, query exact oracles, and run the acceptance suite.

#include <popcount/popcount.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    using namespace popcount;

    constexpr int exit_ok = 0;
    constexpr int exit_usage = 1;
    constexpr int exit_truncated = 2;

    // POPCOUNT_THREADS caps parallelism; unset means 1.
    std::optional<unsigned> thread_cap()
    {
        const char* env = std::getenv("POPCOUNT_THREADS");
        if (env == nullptr || *env == '\0')
            return 1u;
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 1024)
            return std::nullopt;
        return static_cast<unsigned>(v);
    }

    struct SimulateArgs
    {
        std::string protocol;
        std::size_t n = 0;
        std::size_t trials = 1000;
        std::string scheduler = "bst";
        std::string init = "zeros";
        std::uint64_t seed = 0;
        std::string format = "csv";
        std::optional<std::uint64_t> max_interactions;
        std::optional<std::uint32_t> p;
    };

    experiments::InitPolicy parse_init(const std::string& s, std::vector<std::uint32_t>& states)
    {
        using experiments::InitPolicy;
        if (s == "zeros")
            return InitPolicy::AllZero;
        if (s == "ones")
            return InitPolicy::AllOne;
        if (s == "random")
            return InitPolicy::UniformRandomMarks;
        if (s == "worst")
            return InitPolicy::WorstCaseUnnamed;
        if (s.rfind("vector=", 0) == 0)
        {
            std::stringstream in(s.substr(7));
            std::string item;
            while (std::getline(in, item, ','))
            {
                std::size_t used = 0;
                unsigned long v = 0;
                try
                {
                    v = std::stoul(item, &used);
                }
                catch (const std::exception&)
                {
                    used = 0;
                }
                if (used == 0 || used != item.size() || v > std::numeric_limits<std::uint32_t>::max())
                    throw std::invalid_argument("--init vector: bad entry '" + item + "'");
                states.push_back(static_cast<std::uint32_t>(v));
            }
            return InitPolicy::ExplicitVector;
        }
        throw std::invalid_argument("--init must be zeros, ones, random, worst or vector=a,b,...");
    }

    // Canonical flags that reproduce the batch.
    std::string command_echo(const SimulateArgs& a)
    {
        std::string s = "popcount simulate --protocol " + a.protocol + " --n " + std::to_string(a.n) + " --trials " +
                        std::to_string(a.trials) + " --scheduler " + a.scheduler + " --init " + a.init + " --seed " +
                        std::to_string(a.seed) + " --format " + a.format;
        if (a.max_interactions)
            s += " --max-interactions " + std::to_string(*a.max_interactions);
        if (a.p)
            s += " --p " + std::to_string(*a.p);
        return s;
    }

    int cmd_simulate(const SimulateArgs& a)
    {
        experiments::TrialBatchSpec spec;
        try
        {
            spec.protocol = parse_protocol(a.protocol).value();
            spec.n = a.n;
            spec.trials = a.trials;
            spec.scheduler = parse_scheduler(a.scheduler).value();
            spec.init = parse_init(a.init, spec.explicit_states);
            spec.base_seed = a.seed;
            if (a.p)
            {
                if (spec.protocol != ProtocolId::GrosNaming)
                    throw std::invalid_argument("--p applies only to --protocol gros");
                spec.name_bound = *a.p;
            }
            if (a.max_interactions)
            {
                StopCondition stop = experiments::default_stop(spec.protocol, spec.n);
                stop.metric = BudgetMetric::Total;
                stop.budget = *a.max_interactions;
                spec.stop = stop;
            }
            const auto threads = thread_cap();
            if (!threads)
                throw std::invalid_argument("POPCOUNT_THREADS must be an integer >= 1");
            spec.threads = *threads;
            spec.validate();
        }
        catch (const std::exception& e)
        {
            std::cerr << "simulate: " << e.what() << "\n";
            return exit_usage;
        }

        experiments::BatchResult result;
        try
        {
            result = experiments::run_batch(spec);
        }
        catch (const all_trials_truncated& e)
        {
            std::cerr << "simulate: " << e.what() << "\n";
            return exit_truncated;
        }
        catch (const std::exception& e)
        {
            std::cerr << "simulate: " << e.what() << "\n";
            return exit_usage;
        }

        const std::vector<io::OutputRow> rows{io::make_output_row(command_echo(a), spec, result)};
        if (a.format == "json")
            std::cout << io::rows_to_json(rows).dump(2) << "\n";
        else
            std::cout << io::rows_to_csv(rows);
        return exit_ok;
    }

    struct OracleArgs
    {
        std::string which;
        std::optional<std::uint64_t> n;
        std::optional<std::uint64_t> k;
    };

    std::string render(const oracle::ExactRational& r)
    {
        const std::string exact = oracle::to_fraction_string(r);
        if (boost::multiprecision::denominator(r) == 1)
            return exact;
        return exact + " ≈ " + oracle::to_decimal_string(r, 20);
    }

    int cmd_oracle(const OracleArgs& a)
    {
        constexpr std::uint64_t max_flip_n = 4096;
        auto need = [&](const std::optional<std::uint64_t>& v, const char* flag, std::uint64_t lo, std::uint64_t hi) {
            if (!v)
                throw std::invalid_argument(std::string("--which ") + a.which + " needs " + flag);
            if (*v < lo || *v > hi)
                throw std::out_of_range(std::string(flag) + " must be in [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "] for " + a.which);
            return *v;
        };
        try
        {
            std::string out;
            if (a.which == "flip-closed")
                out = render(oracle::flip_expected_closed_form(static_cast<unsigned>(need(a.n, "--n", 1, max_flip_n))));
            else if (a.which == "flip-recurrence")
                out = render(oracle::flip_expected_recurrence(static_cast<unsigned>(need(a.n, "--n", 1, max_flip_n))));
            else if (a.which == "gros-term")
                out = std::to_string(oracle::gros_term(need(a.k, "--k", 1, std::numeric_limits<std::uint64_t>::max())));
            else if (a.which == "gros-length")
                out = std::to_string(oracle::gros_length(static_cast<unsigned>(need(a.n, "--n", 0, 63))));
            else if (a.which == "harmonic")
                out = render(oracle::harmonic_bound(static_cast<unsigned>(need(a.n, "--n", 1, 1u << 20))));
            else if (a.which == "timeopt-exact")
                out = render(oracle::timeopt_exact_expected(
                    static_cast<unsigned>(need(a.n, "--n", 1, oracle::TimeOptChain::max_n))));
            else
                throw std::invalid_argument("unknown oracle " + a.which);
            std::cout << out << "\n";
            return exit_ok;
        }
        catch (const std::exception& e)
        {
            std::cerr << "oracle: " << e.what() << "\n";
            return exit_usage;
        }
    }

    int cmd_verify(const std::string& level, std::uint64_t seed)
    {
        const auto threads = thread_cap();
        if (!threads)
        {
            std::cerr << "verify: POPCOUNT_THREADS must be an integer >= 1\n";
            return exit_usage;
        }
        acceptance::SuiteOptions opt;
        opt.level = level == "full" ? acceptance::Level::Full : acceptance::Level::Fast;
        opt.seed = seed;
        opt.threads = *threads;
        opt.on_result = [](const acceptance::CriterionResult& r) {
            std::cerr << "  C" << r.id << (r.passed ? " pass" : " FAIL") << " (" << r.seconds << " s)\n";
        };
        const auto results = acceptance::run_suite(opt);
        std::cout << acceptance::render_report(results, opt.level, opt.seed);
        for (const auto& r : results)
        {
            if (!r.passed)
                return exit_usage;
        }
        return exit_ok;
    }
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Population protocols with a base station: simulation, exact oracles, acceptance suite"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run a batch of seeded trials and emit one summary row");
    simulate->add_option("--protocol", sim.protocol)->required()->check(CLI::IsMember({"timeopt", "flip", "gros"}));
    simulate->add_option("--n", sim.n, "number of mobile agents")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--trials", sim.trials)->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--scheduler", sim.scheduler)
        ->capture_default_str()
        ->check(CLI::IsMember({"uniform", "bst", "roundrobin", "adversarial"}));
    simulate->add_option("--init", sim.init, "zeros|ones|random|worst|vector=a,b,...")->capture_default_str();
    simulate->add_option("--seed", sim.seed)->capture_default_str();
    simulate->add_option("--format", sim.format)->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--max-interactions", sim.max_interactions, "budget on total interactions per trial")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--p", sim.p, "name bound P for the naming protocol (default n + 1)");

    OracleArgs orc;
    auto* oracle_cmd = app.add_subcommand("oracle", "print an exact reference value");
    oracle_cmd->add_option("--which", orc.which)
        ->required()
        ->check(CLI::IsMember({"flip-closed", "flip-recurrence", "gros-term", "gros-length", "harmonic", "timeopt-exact"}));
    oracle_cmd->add_option("--n", orc.n);
    oracle_cmd->add_option("--k", orc.k);

    std::string level = "fast";
    std::uint64_t verify_seed = 42;
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria; exit 0 iff all pass");
    verify->add_option("--level", level)->capture_default_str()->check(CLI::IsMember({"fast", "full"}));
    verify->add_option("--seed", verify_seed)->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    if (simulate->parsed())
        return cmd_simulate(sim);
    if (oracle_cmd->parsed())
        return cmd_oracle(orc);
    return cmd_verify(level, verify_seed);
}
