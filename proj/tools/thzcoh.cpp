#include "thzcoh/thzcoh.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

namespace {

enum ExitCode { ok = 0, invalid = 1, tolerance = 2, numerical = 3 };

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw thzcoh::ValidationError("cannot write '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void list_materials(std::ostream& out, thzcoh::OutputFormat format)
{
    const auto files = thzcoh::list_material_files();
    if (format == thzcoh::OutputFormat::csv) {
        out << "name,lambda_opt,n_opt,n_thz,gamma_opt,gamma_thz,sigma_abs_opt,density,kappa_thz,omega_thz,path\n";
    }
    for (const auto& path : files) {
        const auto m = thzcoh::load_material(path);
        if (format == thzcoh::OutputFormat::csv) {
            out << thzcoh::csv_escape(m.name);
            for (double v : {m.lambda_opt, m.n_opt, m.n_thz, m.gamma_opt, m.gamma_thz, m.sigma_abs_opt, m.density,
                             m.kappa_thz, m.omega_thz}) {
                out << ',' << thzcoh::format_number(v);
            }
            out << ',' << thzcoh::csv_escape(path.string()) << '\n';
        } else {
            char line[256];
            std::snprintf(line, sizeof line, "%-16s %s\n", m.name.c_str(), m.description.c_str());
            out << line;
        }
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coherence-driven THz generation in V-scheme crystals"};
    app.require_subcommand(1);

    std::string format_name = "text";
    std::string out_path;
    app.add_option("--format", format_name, "Output format: text or csv")
        ->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--out", out_path, "Write the report to this file instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "Run one scenario from a config file");
    std::string config_path;
    simulate->add_option("config", config_path, "Scenario config file")->required();

    auto* table = app.add_subcommand("table", "Reproduce a reference table (I or II)");
    std::string table_name;
    table->add_option("which", table_name, "I or II")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one numeric config parameter");
    std::string sweep_config;
    std::string param;
    std::string min_text;
    std::string max_text;
    std::size_t steps = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    sweep_cmd->add_option("config", sweep_config, "Scenario config file")->required();
    sweep_cmd->add_option("--param", param, "Config key to vary")->required();
    sweep_cmd->add_option("--min", min_text, "Start value, with unit")->required();
    sweep_cmd->add_option("--max", max_text, "End value, with unit")->required();
    sweep_cmd->add_option("--steps", steps, "Number of points")->required()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* materials = app.add_subcommand("materials", "Material presets");
    materials->require_subcommand(1);
    auto* materials_list = materials->add_subcommand("list", "List available presets");

    for (auto* sub : {simulate, table, sweep_cmd, materials}) {
        sub->fallthrough();
    }
    materials_list->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::invalid;
    }

    try {
        const auto format = thzcoh::parse_output_format(format_name);
        Output out(out_path);

        if (*simulate) {
            const auto config = thzcoh::load_scenario(config_path);
            const auto result = thzcoh::run_scenario(config);
            thzcoh::write_scenario_outputs(config, result);
            thzcoh::write_rows(out.stream(), {result.row}, format);
            for (const auto& flag : result.row.flags) {
                std::cerr << "warning: " << flag << '\n';
            }
        } else if (*table) {
            const auto report = thzcoh::reproduce_table(thzcoh::parse_table_id(table_name));
            thzcoh::write_table(out.stream(), report, format);
            if (!report.passed()) {
                std::cerr << "error: table cells outside tolerance\n";
                return ExitCode::tolerance;
            }
        } else if (*sweep_cmd) {
            const auto config = thzcoh::load_scenario(sweep_config);
            const auto dim = thzcoh::ScenarioConfig::parameter_dimension(param);
            if (!dim) {
                throw thzcoh::ValidationError("'" + param + "' is not a numeric config parameter");
            }
            const thzcoh::SweepSpec spec{param, thzcoh::parse_quantity(min_text, *dim),
                                         thzcoh::parse_quantity(max_text, *dim), steps, jobs};
            thzcoh::write_rows(out.stream(), thzcoh::sweep(config, spec), format);
        } else if (*materials_list) {
            list_materials(out.stream(), format);
        }
    } catch (const thzcoh::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::invalid;
    } catch (const thzcoh::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return ExitCode::numerical;
    }
    return ExitCode::ok;
}
