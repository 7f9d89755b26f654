#pragma once

#include "../experiments/batch.hpp"
#include "../oracle/flip.hpp"
#include "../oracle/timeopt_chain.hpp"
#include "../rng.hpp"
#include "csv.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace popcount::io
{
    inline constexpr std::string_view schema_version = "1";
    // Band used for every oracle comparison in this project, echoed in each row.
    inline constexpr std::string_view confidence_band = "3se";

    using Value = std::variant<std::monostate, std::string, std::uint64_t, double>;

    inline std::string format_double(double v)
    {
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    inline std::string to_cell(const Value& v)
    {
        struct
        {
            std::string operator()(std::monostate) const { return {}; }
            std::string operator()(const std::string& s) const { return s; }
            std::string operator()(std::uint64_t u) const { return std::to_string(u); }
            std::string operator()(double d) const { return format_double(d); }
        } visit;
        return std::visit(visit, v);
    }

    /// One batch, self-describing: `command` re-runs it exactly.
    struct OutputRow
    {
        std::vector<std::pair<std::string, Value>> fields;

        void add(std::string name, Value v) { fields.emplace_back(std::move(name), std::move(v)); }

        const Value& at(std::string_view name) const
        {
            for (const auto& [k, v] : fields)
            {
                if (k == name)
                    return v;
            }
            throw std::out_of_range("no column " + std::string(name));
        }
    };

    struct OracleReference
    {
        std::string name;
        std::string exact;
        double value = 0.0;
    };

    /// Exact reference value for a batch when one applies to its mean bst_interactions
    /// (or, for the adversarial naming run, a lower bound on non-null transitions).
    inline std::optional<OracleReference> oracle_reference(const experiments::TrialBatchSpec& spec)
    {
        using experiments::InitPolicy;
        const auto n = static_cast<unsigned>(spec.n);
        switch (spec.protocol)
        {
        case ProtocolId::Flip:
            if ((spec.init == InitPolicy::AllZero || spec.init == InitPolicy::AllOne) && n <= 1000)
            {
                const auto u = oracle::flip_expected_closed_form(n);
                return OracleReference{"flip-expected", oracle::to_fraction_string(u), oracle::to_double(u)};
            }
            break;
        case ProtocolId::TimeOpt:
            if (spec.init == InitPolicy::UniformRandomMarks && n <= oracle::TimeOptChain::max_n)
            {
                const auto e = oracle::timeopt_exact_expected(n);
                return OracleReference{"timeopt-exact", oracle::to_fraction_string(e), oracle::to_double(e)};
            }
            break;
        case ProtocolId::GrosNaming:
            if (spec.scheduler == SchedulerKind::WeakAdversarial && spec.init == InitPolicy::WorstCaseUnnamed &&
                spec.effective_name_bound() == spec.n + 1 && n < 64)
            {
                const std::uint64_t lb = (std::uint64_t{1} << n) - 1;
                return OracleReference{"gros-worst-lower-bound", std::to_string(lb), static_cast<double>(lb)};
            }
            break;
        }
        return std::nullopt;
    }

    inline OutputRow make_output_row(const std::string& command, const experiments::TrialBatchSpec& spec,
                                     const experiments::BatchResult& result)
    {
        OutputRow row;
        row.add("schema_version", std::string(schema_version));
        row.add("command", command);
        row.add("protocol", std::string(to_string(spec.protocol)));
        row.add("n", std::uint64_t{spec.n});
        row.add("p", spec.protocol == ProtocolId::GrosNaming ? Value{std::uint64_t{spec.effective_name_bound()}} : Value{});
        row.add("scheduler", std::string(to_string(spec.scheduler)));
        row.add("init", std::string(to_string(spec.init)));
        row.add("trials", std::uint64_t{spec.trials});
        row.add("seed", spec.base_seed);
        row.add("rng", std::string(rng_algorithm_id));
        row.add("confidence", std::string(confidence_band));
        row.add("converged", std::uint64_t{result.summary.converged});
        row.add("non_converged", std::uint64_t{result.summary.non_converged});

        auto metric = [&](const std::string& prefix, const experiments::MetricSummary& m) {
            row.add(prefix + "_mean", m.mean);
            row.add(prefix + "_stddev", m.stddev);
            row.add(prefix + "_se", m.standard_error);
            row.add(prefix + "_min", m.min);
            row.add(prefix + "_max", m.max);
        };
        metric("bst_interactions", result.summary.bst_interactions);
        metric("total_interactions", result.summary.total_interactions);
        metric("non_null_transitions", result.summary.non_null_transitions);

        // Parallel time: interactions divided by n when all agents are scheduled, the BST
        // interaction count itself when only the BST is.
        Value parallel;
        if (spec.scheduler == SchedulerKind::BstOnly)
            parallel = result.summary.bst_interactions.mean;
        else if (spec.scheduler != SchedulerKind::WeakAdversarial)
            parallel = result.summary.total_interactions.mean / static_cast<double>(spec.n);
        row.add("parallel_time_mean", parallel);

        std::optional<std::uint64_t> cmin, cmax;
        for (const auto& t : result.trials)
        {
            cmin = std::min(cmin.value_or(t.record.final_c), t.record.final_c);
            cmax = std::max(cmax.value_or(t.record.final_c), t.record.final_c);
        }
        row.add("final_c_min", cmin ? Value{*cmin} : Value{});
        row.add("final_c_max", cmax ? Value{*cmax} : Value{});

        const auto ref = oracle_reference(spec);
        row.add("oracle_name", ref ? Value{ref->name} : Value{});
        row.add("oracle_exact", ref ? Value{ref->exact} : Value{});
        row.add("oracle_value", ref ? Value{ref->value} : Value{});
        row.add("invariant_violations", result.invariants.violations());
        return row;
    }

    inline CsvTable to_table(const std::vector<OutputRow>& rows)
    {
        CsvTable t;
        if (rows.empty())
            return t;
        for (const auto& [k, v] : rows.front().fields)
            t.header.push_back(k);
        for (const auto& row : rows)
        {
            std::vector<std::string> cells;
            for (const auto& [k, v] : row.fields)
                cells.push_back(to_cell(v));
            t.rows.push_back(std::move(cells));
        }
        return t;
    }

    inline std::string rows_to_csv(const std::vector<OutputRow>& rows) { return write_csv(to_table(rows)); }

    // Array of row objects with the CSV column names; missing values are null.
    inline nlohmann::ordered_json rows_to_json(const std::vector<OutputRow>& rows)
    {
        auto out = nlohmann::ordered_json::array();
        for (const auto& row : rows)
        {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (const auto& [k, v] : row.fields)
            {
                if (std::holds_alternative<std::monostate>(v))
                    obj[k] = nullptr;
                else if (const auto* s = std::get_if<std::string>(&v))
                    obj[k] = *s;
                else if (const auto* u = std::get_if<std::uint64_t>(&v))
                    obj[k] = *u;
                else
                    obj[k] = std::get<double>(v);
            }
            out.push_back(std::move(obj));
        }
        return out;
    }
} // namespace popcount::io
