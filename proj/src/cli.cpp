#include "ricsim/cli.hpp"

#include "ricsim/engine.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

namespace ricsim::cli
{
    namespace fs = std::filesystem;

    std::vector<Diagnostic> cmd_validate(const fs::path &scenario_path)
    {
        try
        {
            return validate(load_scenario(scenario_path));
        }
        catch (const Error &e)
        {
            return {Diagnostic{scenario_path.string(), e.what()}};
        }
    }

    fs::path resolve_out_dir(const RunOptions &opts)
    {
        if (opts.out_dir)
            return *opts.out_dir;
        if (const char *env = std::getenv(out_dir_env); env && *env)
            return env;
        return "ricsim-out";
    }

    namespace
    {
        template <typename Fn>
        void write_text(const fs::path &path, Fn &&fn)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw Error(Errc::Io, "cannot open " + path.string());
            fn(out);
            out.flush();
            if (!out)
                throw Error(Errc::Io, "write failed for " + path.string());
        }

        void publish(const fs::path &staging, const fs::path &dest)
        {
            fs::create_directories(dest);
            for (const auto &entry : fs::recursive_directory_iterator(staging))
            {
                const auto rel = fs::relative(entry.path(), staging);
                if (entry.is_directory())
                {
                    fs::create_directories(dest / rel);
                    continue;
                }
                fs::rename(entry.path(), dest / rel);
            }
            fs::remove_all(staging);
        }
    }

    ExitCode cmd_run(const RunOptions &opts, std::ostream &out, std::ostream &err)
    {
        EngineOptions engine;
        if (opts.method == "all")
            engine.all_methods = true;
        else if (!opts.method.empty())
        {
            try
            {
                engine.method = welfare_method_from_string(opts.method);
            }
            catch (const Error &e)
            {
                err << e.what() << '\n';
                return ExitCode::UsageError;
            }
        }
        if (opts.samples)
        {
            if (*opts.samples < 3)
            {
                err << "--samples must be >= 3\n";
                return ExitCode::UsageError;
            }
            engine.samples = opts.samples;
        }

        ScenarioSpec spec;
        try
        {
            spec = load_scenario(opts.scenario_path);
        }
        catch (const Error &e)
        {
            err << opts.scenario_path.string() << ": " << e.what() << '\n';
            return ExitCode::ValidationFailed;
        }
        if (auto diags = validate(spec); !diags.empty())
        {
            for (const auto &d : diags)
                err << opts.scenario_path.string() << ": " << to_string(d) << '\n';
            return ExitCode::ValidationFailed;
        }

        RunReport report;
        try
        {
            report = run_scenario(spec, engine);
        }
        catch (const Error &e)
        {
            err << "run failed: " << e.what() << '\n';
            return ExitCode::RunFailed;
        }
        if (opts.verbosity > 0)
            for (const auto &w : report.warnings)
                err << "warning: " << w << '\n';
        if (report.aborted)
        {
            err << "run aborted: " << report.abort_reason << '\n';
            return ExitCode::RunFailed;
        }

        const fs::path dest = resolve_out_dir(opts);
        const fs::path staging = dest / ".staging";
        try
        {
            fs::remove_all(staging);
            fs::create_directories(staging);

            write_text(staging / "timeseries.csv", [&](std::ostream &o) { write_timeseries_csv(o, report); });
            for (auto m : report.methods)
            {
                std::vector<std::pair<std::size_t, const MitigationResult *>> rows;
                for (std::size_t i = 0; i < report.conflicts.size(); ++i)
                    for (const auto &r : report.conflicts[i].results)
                        if (r.method == m)
                            rows.emplace_back(i, &r);
                write_text(staging / ("welfare_trace_" + std::string(to_string(m)) + ".csv"),
                           [&](std::ostream &o) { write_welfare_trace_csv(o, rows); });
            }
            write_text(staging / "summary.json", [&](std::ostream &o) { o << summary_json(report).dump(2) << '\n'; });
            write_text(staging / "conflicts.jsonl", [&](std::ostream &o) { write_conflict_log(o, report); });
            write_text(staging / "events.jsonl", [&](std::ostream &o) { report.store.write_event_log(o); });
            report.store.export_csv(staging / "store");
            publish(staging, dest);
        }
        catch (const std::exception &e)
        {
            std::error_code ec;
            fs::remove_all(staging, ec);
            err << "cannot write artifacts: " << e.what() << '\n';
            return ExitCode::RunFailed;
        }

        out << report.scenario << ": " << report.triggers.size() << " trigger(s), " << report.conflicts.size()
            << " conflict(s)\n";
        for (std::size_t i = 0; i < report.conflicts.size(); ++i)
        {
            const auto &c = report.conflicts[i];
            out << "  [" << i << "] t=" << c.report.trigger.timestamp << ' ' << to_string(c.report.kind) << " on "
                << c.report.parameter.str() << ':';
            for (const auto &r : c.results)
                out << ' ' << to_string(r.method) << '=' << format_double(r.suggested_value);
            out << '\n';
        }
        out << "artifacts written to " << dest.string() << '\n';
        return ExitCode::Ok;
    }
}
