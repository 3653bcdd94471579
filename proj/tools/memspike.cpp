#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "memspike/experiment.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristive spiking-network trainer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string snapshot_path;
    uint64_t seed_override = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed_override, "override the config seed");
    };
    auto* train = app.add_subcommand("train", "train on the glyph templates, write a weight snapshot");
    auto* test = app.add_subcommand("test", "classify noisy glyphs with a trained snapshot");
    auto* sweep = app.add_subcommand("sweep", "train and test across a config grid");
    auto* stdp = app.add_subcommand("stdp-curve", "tabulate the pairing-interval update curve");
    auto* resfit = app.add_subcommand("resource-fit", "fit hardware usage against the n*t^2 metric");
    auto* trace = app.add_subcommand("trace", "dump per-presentation training detail");
    for (auto* sub : {train, test, sweep, stdp, resfit, trace}) add_common(sub);
    test->add_option("--snapshot", snapshot_path, "weights written by `train`")->required();

    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        memspike::RunConfig rc;
        if (!config_path.empty()) rc = memspike::parse_run_config(slurp(config_path));
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--seed") > 0) rc.seed = seed_override;

        // Environment override wins over --out so harnesses can redirect
        // outputs without touching the invocation line.
        if (const char* env = std::getenv("MEMSPIKE_OUT"); env != nullptr && *env != '\0')
            out_dir = env;

        memspike::ReportBundle bundle;
        if (sub == train) bundle = memspike::cmd_train(rc);
        else if (sub == test) bundle = memspike::cmd_test(rc, slurp(snapshot_path));
        else if (sub == sweep) bundle = memspike::cmd_sweep(rc);
        else if (sub == stdp) bundle = memspike::cmd_stdp_curve(rc);
        else if (sub == resfit) bundle = memspike::cmd_resource_fit();
        else bundle = memspike::cmd_trace(rc);

        memspike::write_bundle(bundle, out_dir);
        for (const auto& [name, contents] : bundle.files)
            std::cout << "wrote " << (std::filesystem::path(out_dir) / name).string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "memspike: " << e.what() << "\n";
        return 1;
    }

    // Timing is stderr-only; nothing under --out may depend on the clock.
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "elapsed %.3fs\n", dt);
    return 0;
}
