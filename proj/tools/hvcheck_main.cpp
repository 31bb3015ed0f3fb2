#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "hvcheck/suite.hpp"

using namespace hvcheck;

namespace {

std::size_t budget_from_env(std::size_t fallback) {
    if (const char* env = std::getenv("HVCHECK_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return fallback;
}

LambdaSpec parse_lambda_flag(const std::string& text, int radius, const ParsedModel& pm) {
    if (text == "preparation") return LambdaSpec::preparation();
    if (text == "preparation-plus") return LambdaSpec::preparation_plus(radius);
    if (text == "thick-slices") return LambdaSpec::thick_slices();
    if (text.rfind("coarse:", 0) == 0)
        return LambdaSpec::coarse(parse_partition_file(text.substr(7), pm.model.alphabet));
    throw Error(ErrorCode::ValidationError,
                "unknown lambda spec '" + text +
                    "' (use preparation, preparation-plus, thick-slices or coarse:<file>)");
}

int emit_and_exit(const Report& r, bool json, bool timings) {
    if (json)
        std::cout << report_json(r, timings).dump(2) << "\n";
    else
        std::cout << report_human(r) << "\n";
    return r.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite hidden-variable model checker for light-cone lattices"};
    app.require_subcommand(1);

    // check
    auto* check = app.add_subcommand("check", "Run one checker against a model file");
    std::string checker, model_path, lambda_flag = "thick-slices", direction_flag = "both";
    bool coarse = false, fine = false, json = false, timings = false, external = false;
    int radius = 1, rect_cap = 2;
    std::optional<int> t_override, tprime_override;
    std::size_t budget = budget_from_env(kDefaultBudget);
    std::size_t max_cells = 8, state_cap = kDefaultSearchStateCap;
    check->add_option("checker", checker,
                      "determinism | local-determinism | local-causality | temporal-locality | "
                      "settings-independence | factorizability | settings-compatibility | "
                      "sufficiency | derivation | coarse-search | chsh")
        ->required();
    check->add_option("--model", model_path, "model file")->required();
    check->add_option("--lambda", lambda_flag,
                      "preparation | preparation-plus | thick-slices | coarse:<file>");
    check->add_option("--direction", direction_flag, "past | future | both");
    check->add_flag("--coarse", coarse, "coarse-grained local causality");
    check->add_flag("--fine", fine, "fine-grained local causality (default)");
    check->add_option("--t", t_override, "override the wiring's upper thick-slice time");
    check->add_option("--tprime", tprime_override, "override the lower thick-slice time");
    check->add_option("--radius", radius, "preparation-plus widening radius");
    check->add_option("--rect", rect_cap, "region schedule rectangle cap (default 2)");
    check->add_option("--budget", budget, "enumeration budget (solutions)");
    check->add_option("--max-cells", max_cells, "coarse-search partition size cap");
    check->add_option("--state-cap", state_cap, "coarse-search realized-state cap");
    check->add_flag("--json", json, "machine-readable report");
    check->add_flag("--timings", timings, "include wall time in JSON output");
    check->add_flag("--external-settings", external,
                    "redraw setting cells exogenously, exempting them from the model's laws");

    // chsh
    auto* chsh = app.add_subcommand("chsh", "CHSH combination of a model or table");
    std::string chsh_model;
    bool chsh_float = false, chsh_json = false, chsh_timings = false;
    chsh->add_option("--model", chsh_model, "model file")->required();
    chsh->add_flag("--float", chsh_float, "evaluate in floating point");
    chsh->add_flag("--json", chsh_json, "machine-readable report");
    chsh->add_flag("--timings", chsh_timings, "include wall time in JSON output");

    // suite
    auto* suite = app.add_subcommand("suite", "Run every applicable checker over many models");
    std::string suite_target = "zoo";
    std::string suite_dir;
    bool suite_json = false, suite_timings = false;
    suite->add_option("target", suite_target, "'zoo' or a directory of .hvt files");
    suite->add_flag("--json", suite_json, "machine-readable report array");
    suite->add_flag("--timings", suite_timings, "include wall times in JSON output");

    // export-zoo
    auto* expzoo = app.add_subcommand("export-zoo", "Write the built-in models as .hvt files");
    std::string export_dir;
    expzoo->add_option("dir", export_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            ParsedModel pm = parse_model_file(model_path);
            CheckOptions opt;
            opt.budget = budget;
            opt.bounds = RegionBounds{rect_cap, rect_cap};
            opt.coarse = coarse && !fine;
            opt.direction = direction_flag == "past"     ? Direction::Past
                            : direction_flag == "future" ? Direction::Future
                                                          : Direction::Both;
            opt.lambda = parse_lambda_flag(lambda_flag, radius, pm);
            opt.t_override = t_override;
            opt.t_prime_override = tprime_override;
            opt.external_settings = external;
            opt.search_max_cells = max_cells;
            opt.search_state_cap = state_cap;
            return emit_and_exit(run_check(pm, checker, opt), json, timings);
        }
        if (chsh->parsed()) {
            ParsedModel pm = parse_model_file(chsh_model);
            CheckOptions opt;
            opt.budget = budget_from_env(kDefaultBudget);
            opt.float_mode = chsh_float;
            return emit_and_exit(run_check(pm, "chsh", opt), chsh_json, chsh_timings);
        }
        if (suite->parsed()) {
            CheckOptions opt;
            opt.budget = budget_from_env(kDefaultBudget);
            SuiteResult result;
            if (suite_target == "zoo") {
                result = run_zoo_suite(opt);
            } else {
                std::vector<std::string> paths;
                for (const auto& entry : std::filesystem::directory_iterator(suite_target))
                    if (entry.path().extension() == ".hvt") paths.push_back(entry.path().string());
                std::sort(paths.begin(), paths.end());
                result = run_file_suite(paths, opt);
            }
            if (suite_json)
                std::cout << result.to_json(suite_timings).dump(2) << "\n";
            else
                std::cout << result.human();
            return result.all_matched ? 0 : 1;
        }
        if (expzoo->parsed()) {
            std::filesystem::create_directories(export_dir);
            for (const ZooEntry& z : full_zoo()) {
                std::string path = export_dir + "/" + z.name + ".hvt";
                write_model_file(path, z.model, z.wiring);
                std::cout << "wrote " << path << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error(" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
