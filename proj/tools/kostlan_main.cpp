// Command-line entry point: parses an experiment configuration, dispatches the
// requested computation, and writes reproducible CSV/JSON artifacts.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric error, 1 I/O or
// other failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kostlan/kostlan.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo and entropy-bound toolkit for sup norms of random "
                 "holomorphic sections on CP^m"};
    std::string config_path;
    std::string output_dir;
    int threads = 0;
    std::optional<std::uint64_t> seed_override;
    app.add_option("--config", config_path, "experiment configuration (JSON)")->required();
    app.add_option("--output", output_dir, "output directory (overrides config)");
    app.add_option("--threads", threads, "worker threads (default: hardware)");
    app.add_option("--seed-override", seed_override, "replace the configured master seed");
    CLI11_PARSE(app, argc, argv);

    try {
        kostlan::ExperimentConfig cfg = kostlan::parse_config(kostlan::io::read_file(config_path));
        if (!output_dir.empty()) {
            cfg.output_dir = output_dir;
        } else if (cfg.output_dir.empty()) {
            if (const char* env = std::getenv("KOSTLAN_OUTPUT_DIR")) cfg.output_dir = env;
        }
        if (seed_override) cfg.spec.master_seed = *seed_override;

        const kostlan::Manifest manifest = kostlan::execute(cfg, threads);
        std::cout << "config digest " << manifest.config_digest << "\n";
        for (const auto& [name, digest] : manifest.files)
            std::cout << "wrote " << name << "  fnv1a64 " << digest << "\n";
        for (const auto& name : manifest.volatile_files)
            std::cout << "wrote " << name << "  (volatile)\n";
        return 0;
    } catch (const kostlan::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const kostlan::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::range_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::length_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
