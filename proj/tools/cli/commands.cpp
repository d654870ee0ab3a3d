// Copyright 2026 The pqk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pqk/gram_io.hpp"
#include "pqk/pipeline.hpp"
#include "pqk/validation/properties.hpp"

namespace pqk::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

const char *const kToolVersion = PQK_VERSION_STRING;

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string provenance_line(const RunConfig &config) {
    return "pqk " + std::string(kToolVersion) + " config_hash=" + config.config_hash +
           " seed=" + std::to_string(config.seed);
}

ordered_json header(const RunConfig &config, const std::string &experiment) {
    return ordered_json{{"experiment", experiment},
                        {"config_hash", config.config_hash},
                        {"seed", config.seed},
                        {"tool_version", kToolVersion}};
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) throw Error(ErrorCategory::Internal, "cannot write " + path.string());
}

void write_json(const std::filesystem::path &path, const ordered_json &doc) { write_file(path, doc.dump(2) + "\n"); }

ordered_json result_row(const KernelSpec &spec, const CvResult &result) {
    ordered_json row;
    row["kernel"] = kernel_name(spec.kind);
    row["feature_map"] = spec.kind == KernelKind::RBF ? std::string("none") : spec.feature_map.describe();
    row["strategy"] = spec.kind == KernelKind::PQK ? ordered_json(projection_name(spec.strategy)) : ordered_json();
    row["C"] = result.hyperparams.C;
    row["gamma"] = result.hyperparams.gamma;
    row["fold_accuracies"] = result.fold_accuracies;
    row["mean"] = result.mean;
    row["ci95_half_width"] = result.ci_half_width;
    return row;
}

void print_result(std::ostream &out, const std::string &label, const CvResult &result) {
    out << label << " C=" << result.hyperparams.C << " gamma=" << result.hyperparams.gamma
        << " accuracy=" << result.mean << " +/- " << result.ci_half_width << "\n";
}

Dataset load(const RunConfig &config) {
    Dataset dataset = load_dataset(config.dataset.path, config.dataset.columns, config.dataset.label_column);
    if (dataset.size() == 0) throw IngestionError("dataset " + config.dataset.path + " has no usable rows");
    return dataset;
}

std::vector<double> c_grid(const RunConfig &config) {
    return config.c_grid.empty() ? default_c_grid() : config.c_grid;
}

std::vector<double> gamma_grid(const RunConfig &config, const KernelSpec &spec) {
    return config.gamma_grid.empty() ? default_gamma_grid(spec) : config.gamma_grid;
}

std::vector<FeatureVector> scaled_features(const RunConfig &config, const Dataset &dataset) {
    return apply_scaler(fit_scaler(dataset.features, config.cv.lo, config.cv.hi), dataset.features);
}

int cmd_encode(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    if (config.kernel.kind != KernelKind::PQK) {
        throw ConfigError("configuration key \"kernel.kind\" must be PQK for encode");
    }
    const Dataset dataset = load(config);
    const auto features = scaled_features(config, dataset);
    const PreparedKernel prepared = PreparedKernel::prepare(features, config.kernel, config.jobs);
    const ProjectionStrategy strategy(config.kernel.strategy, config.kernel.feature_map.n_qubits);

    std::ostringstream csv;
    csv << "# " << provenance_line(config) << " kernel=" << config.kernel.describe() << "\n";
    csv << "index,label";
    for (const auto &po : strategy.observables()) csv << "," << po.observable.label();
    csv << "\n";
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        csv << i << "," << dataset.labels[i];
        for (double v : prepared.vectors()[i]) csv << "," << format_double(v);
        csv << "\n";
    }
    write_file(dir / "features.csv", csv.str());
    out << "encoded " << prepared.size() << " points into " << strategy.feature_count() << " features\n";
    return kExitOk;
}

int cmd_gram(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    const Dataset dataset = load(config);
    const GramMatrix gram = gram_matrix(scaled_features(config, dataset), config.kernel, config.jobs);
    const PsdReport psd = check_psd(gram);
    const std::string comment = provenance_line(config) + " kernel=" + config.kernel.describe();
    if (config.gram_format == "csv") {
        std::ostringstream csv;
        write_gram_csv(csv, gram, comment);
        write_file(dir / "gram.csv", csv.str());
    } else {
        std::ostringstream bin(std::ios::binary);
        write_gram_binary(bin, gram);
        write_file(dir / "gram.bin", bin.str());
        ordered_json meta = header(config, "gram");
        meta["kernel"] = config.kernel.describe();
        meta["size"] = gram.size();
        meta["min_eigenvalue"] = psd.min_eigenvalue;
        write_json(dir / "gram.meta.json", meta);
    }
    out << "min_eigenvalue " << format_double(psd.min_eigenvalue) << "\n";
    return kExitOk;
}

int cmd_cv(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    const Dataset dataset = load(config);
    const CvResult result =
        cross_validate(dataset, config.kernel, HyperParams{config.svm.C, config.kernel.gamma}, config.cv);
    ordered_json doc = header(config, "cv");
    doc["rows"] = ordered_json::array({result_row(config.kernel, result)});
    write_json(dir / "results.json", doc);
    print_result(out, config.kernel.describe(), result);
    return kExitOk;
}

int cmd_grid_search(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    const Dataset dataset = load(config);
    const auto cs = c_grid(config);
    const auto gammas = gamma_grid(config, config.kernel);
    const GridResult grid = grid_search(dataset, config.kernel, cs, gammas, config.cv);
    ordered_json doc = header(config, "grid-search");
    doc["rows"] = ordered_json::array();
    for (const auto &cell : grid.table) doc["rows"].push_back(result_row(config.kernel, cell));
    doc["best"] = result_row(config.kernel, grid.best_result);
    write_json(dir / "results.json", doc);
    print_result(out, "best " + config.kernel.describe(), grid.best_result);
    return kExitOk;
}

int cmd_shot_sweep(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    if (config.kernel.kind != KernelKind::PQK) {
        throw ConfigError("configuration key \"kernel.kind\" must be PQK for shot-sweep");
    }
    const Dataset dataset = load(config);
    const HyperParams hp{config.svm.C, config.kernel.gamma};
    KernelSpec exact_spec = config.kernel;
    exact_spec.shots.reset();
    const CvResult exact = cross_validate(dataset, exact_spec, hp, config.cv);
    const auto rows = shot_sweep(dataset, exact_spec, hp, config.sweep_shots, config.cv);

    ordered_json doc = header(config, "shot-sweep");
    doc["exact"] = result_row(exact_spec, exact);
    doc["rows"] = ordered_json::array();
    std::ostringstream csv;
    csv << "# " << provenance_line(config) << " kernel=" << exact_spec.describe()
        << " exact_mean_accuracy=" << format_double(exact.mean) << "\n";
    csv << "shots,mean_accuracy,ci_half_width\n";
    for (const auto &row : rows) {
        ordered_json entry = result_row(exact_spec, row.result);
        entry["shots"] = row.shots;
        doc["rows"].push_back(entry);
        csv << row.shots << "," << format_double(row.result.mean) << "," << format_double(row.result.ci_half_width)
            << "\n";
        print_result(out, "shots=" + std::to_string(row.shots), row.result);
    }
    write_json(dir / "results.json", doc);
    write_file(dir / "shot_sweep.csv", csv.str());
    print_result(out, "exact", exact);
    return kExitOk;
}

int cmd_table2(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    const Dataset dataset = load(config);
    const auto cs = c_grid(config);
    ordered_json doc = header(config, "table2");
    doc["rows"] = ordered_json::array();
    for (const auto &spec : comparison_table_specs(static_cast<int>(dataset.dimension()))) {
        const GridResult grid = grid_search(dataset, spec, cs, gamma_grid(config, spec), config.cv);
        doc["rows"].push_back(result_row(spec, grid.best_result));
        print_result(out, spec.describe(), grid.best_result);
    }
    write_json(dir / "results.json", doc);
    return kExitOk;
}

int cmd_validate(const RunConfig &config, const std::filesystem::path &dir, std::ostream &out) {
    const auto checks = validation::run_property_suite(config.seed);
    ordered_json doc = header(config, "validate");
    doc["checks"] = ordered_json::array();
    bool all_passed = true;
    for (const auto &check : checks) {
        doc["checks"].push_back(ordered_json{{"id", check.id},
                                             {"name", check.name},
                                             {"passed", check.passed},
                                             {"value", check.value},
                                             {"threshold", check.threshold},
                                             {"detail", check.detail}});
        all_passed = all_passed && check.passed;
        out << (check.passed ? "PASS " : "FAIL ") << check.id << " " << check.name << ": " << check.detail << "\n";
    }
    write_json(dir / "validate.json", doc);
    return all_passed ? kExitOk : kExitInternal;
}

}  // namespace

int exit_status(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Config: return kExitConfig;
        case ErrorCategory::Ingestion:
        case ErrorCategory::Degenerate: return kExitIngestion;
        case ErrorCategory::Convergence: return kExitConvergence;
        case ErrorCategory::Usage:
        case ErrorCategory::Internal: return kExitInternal;
    }
    return kExitInternal;
}

int run_command(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        const std::filesystem::path dir(config.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Error(ErrorCategory::Internal, "cannot create output directory " + dir.string());

        ordered_json echo = header(config, config.command);
        echo.erase("experiment");
        echo["config"] = config.resolved;
        write_json(dir / "resolved_config.json", echo);

        if (config.command == "encode") return cmd_encode(config, dir, out);
        if (config.command == "gram") return cmd_gram(config, dir, out);
        if (config.command == "cv") return cmd_cv(config, dir, out);
        if (config.command == "grid-search") return cmd_grid_search(config, dir, out);
        if (config.command == "shot-sweep") return cmd_shot_sweep(config, dir, out);
        if (config.command == "table2") return cmd_table2(config, dir, out);
        if (config.command == "validate") return cmd_validate(config, dir, out);
        throw ConfigError("unknown command \"" + config.command + "\"");
    } catch (const Error &e) {
        err << "error [" << category_name(e.category()) << "]: " << e.what() << "\n";
        return exit_status(e.category());
    } catch (const std::exception &e) {
        err << "error [internal]: " << e.what() << "\n";
        return kExitInternal;
    }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Projected quantum kernel experiments", "pqk"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    std::string config_path;
    const std::vector<std::string> descriptions{
        "Write projected features of every point to features.csv",
        "Compute the Gram matrix and print its smallest eigenvalue",
        "Cross-validate one kernel at fixed C and gamma",
        "Cross-validate every (C, gamma) cell and report the best",
        "Cross-validate a PQK at each shot count of sweep.shots",
        "Grid-search every kernel, feature map and projection",
        "Run the property suites against the reference oracles",
    };
    for (std::size_t c = 0; c < kCommands.size(); ++c) {
        auto *sub = app.add_subcommand(kCommands[c], descriptions[c]);
        sub->allow_extras();
        sub->add_option("--config", config_path, "JSON configuration file");
    }
    app.footer("Any configuration key may be overridden with --key.path=value, e.g. --kernel.gamma=0.1 --jobs=4.");

    // CLI11 takes arguments in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o, r;
        const int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code == 0 ? kExitOk : kExitConfig;
    }
    CLI::App *sub = app.get_subcommands().front();

    std::vector<std::string> overrides;
    const auto extras = sub->remaining();
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string arg = extras[i];
        // Also accept "--key value".
        if (arg.starts_with("--") && arg.find('=') == std::string::npos && i + 1 < extras.size() &&
            !extras[i + 1].starts_with("--")) {
            arg += "=" + extras[++i];
        }
        if (!arg.starts_with("--")) {
            err << "error [config]: unexpected argument \"" << arg << "\"\n";
            return kExitConfig;
        }
        overrides.push_back(arg);
    }

    RunConfig config;
    try {
        config = load_config(sub->get_name(), config_path, overrides);
    } catch (const Error &e) {
        err << "error [" << category_name(e.category()) << "]: " << e.what() << "\n";
        return exit_status(e.category());
    }
    return run_command(config, out, err);
}

}  // namespace pqk::cli
