#include "ricsim/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    using namespace ricsim;

    CLI::App app{"Near-RT RIC xApp conflict detection and mitigation simulator"};
    app.require_subcommand(1);

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", validate_path, "scenario JSON file")->required()->check(CLI::ExistingFile);

    cli::RunOptions run_opts;
    std::string scenario;
    int samples = 0;
    std::string out_dir;
    auto *run = app.add_subcommand("run", "run a scenario and write CSV/summary artifacts");
    run->add_option("scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--method", run_opts.method, "nswf | eg | am | all")
        ->check(CLI::IsMember({"nswf", "eg", "am", "all"}, CLI::ignore_case));
    auto *samples_opt = run->add_option("--samples", samples, "grid samples per pass (>= 3)")->check(CLI::Range(3, 100000000));
    auto *out_opt = run->add_option("--out", out_dir, "output directory (default $RICSIM_OUT_DIR or ./ricsim-out)");
    run->add_flag("-v,--verbose", run_opts.verbosity, "print warnings");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        // --help and --version exit 0; everything else is a usage error
        return app.exit(e) == 0 ? 0 : static_cast<int>(cli::ExitCode::UsageError);
    }

    if (*validate)
    {
        const auto diags = cli::cmd_validate(validate_path);
        for (const auto &d : diags)
            std::cerr << validate_path << ": " << to_string(d) << '\n';
        if (diags.empty())
            std::cout << validate_path << ": ok\n";
        return diags.empty() ? 0 : static_cast<int>(cli::ExitCode::ValidationFailed);
    }

    run_opts.scenario_path = scenario;
    if (*samples_opt)
        run_opts.samples = samples;
    if (*out_opt)
        run_opts.out_dir = out_dir;
    return static_cast<int>(cli::cmd_run(run_opts, std::cout, std::cerr));
}
