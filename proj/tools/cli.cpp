#include "cli.hpp"

#include <cmtest/catalog.hpp>
#include <cmtest/colormap.hpp>
#include <cmtest/errors.hpp>
#include <cmtest/evaluation.hpp>
#include <cmtest/io.hpp>
#include <cmtest/parallel.hpp>
#include <cmtest/render.hpp>
#include <cmtest/report.hpp>
#include <cmtest/service.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <ostream>

namespace cmtest::cli {

namespace {

// Raised for problems with input or output files.
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorFlags {
    std::string function;
    std::vector<std::string> params;
    std::string size = "512x512";
    std::uint64_t seed = 0;

    void add_to(CLI::App* cmd, bool required)
    {
        auto* fn = cmd->add_option("--function", function, "test function id (see `catalog`)");
        if (required) fn->required();
        cmd->add_option("--param", params, "parameter as k=v, repeatable");
        cmd->add_option("--size", size, "grid size WxH")->capture_default_str();
        cmd->add_option("--seed", seed, "noise seed")->capture_default_str();
    }

    TestSpec spec() const
    {
        TestSpec s;
        s.function = parse_function_id(function);
        for (const std::string& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ValidationError("--param expects k=v, got '" + kv + "'");
            s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        s.resolution = parse_resolution(size);
        s.seed = seed;
        return s;
    }
};

ScalarField load_input_field(const std::string& path)
{
    try {
        return load_field(path);
    } catch (const ValidationError& e) {
        throw FileError(e.what());
    } catch (const IoError& e) {
        throw FileError(e.what());
    }
}

ColormapSpec load_colormap(const std::string& path, std::ostream& err)
{
    try {
        ParsedColormap parsed = parse_colormap(read_file(path));
        for (const std::string& w : parsed.warnings) err << "warning: " << path << ": " << w << "\n";
        return std::move(parsed.spec);
    } catch (const ValidationError& e) {
        throw FileError(path + ": " + e.what());
    } catch (const IoError& e) {
        throw FileError(e.what());
    }
}

void print_stats(std::ostream& out, const char* name, const nlohmann::json& s)
{
    out << name << ": min " << s["min"].get<double>() << "  max " << s["max"].get<double>() << "  mean "
        << s["mean"].get<double>() << "  median " << s["median"].get<double>() << "  stddev "
        << s["stddev"].get<double>();
    if (s.value("degenerate", false)) out << "  (degenerate)";
    out << "\n";
}

std::atomic<Service*> g_service{nullptr};

void stop_service(int)
{
    if (Service* s = g_service.load()) s->stop();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"cmtest: colormap test fields, rendering and evaluation"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    GeneratorFlags gen;
    std::string gen_out;
    auto* generate_cmd = app.add_subcommand("generate", "generate a test field");
    gen.add_to(generate_cmd, true);
    generate_cmd->add_option("--out", gen_out, "output field (.csv or .cmtf)")->required();

    std::string render_field_path, render_cmap, render_out;
    auto* render_cmd = app.add_subcommand("render", "render a field through a colormap");
    render_cmd->add_option("--field", render_field_path, "input field (.csv, .cmtf or .pgm)")->required();
    render_cmd->add_option("--colormap", render_cmap, "colormap JSON file")->required();
    render_cmd->add_option("--out", render_out, "output image (.png or .ppm)")->required();

    GeneratorFlags eval_gen;
    std::string eval_field, eval_cmap, eval_out, metric = "ciede2000", normalization = "minmax", agg = "max";
    auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate a colormap on a field and write a report");
    auto* field_opt = evaluate_cmd->add_option("--field", eval_field, "input field (.csv, .cmtf or .pgm)");
    eval_gen.add_to(evaluate_cmd, false);
    field_opt->excludes(evaluate_cmd->get_option("--function"));
    evaluate_cmd->add_option("--colormap", eval_cmap, "colormap JSON file")->required();
    evaluate_cmd->add_option("--metric", metric, "lab, din99, de94 or ciede2000")->capture_default_str();
    evaluate_cmd->add_option("--normalization", normalization, "minmax, blackwhite or custom:<max>")
        ->capture_default_str();
    evaluate_cmd->add_option("--agg", agg, "max, avg or median")->capture_default_str();
    evaluate_cmd->add_option("--out", eval_out, "report directory")->required();

    std::string report_dir;
    bool report_json = false;
    auto* report_cmd = app.add_subcommand("report", "summarize an existing report directory");
    report_cmd->add_option("dir", report_dir, "report directory")->required();
    report_cmd->add_flag("--json", report_json, "print statistics and provenance as JSON");

    bool catalog_as_json = false;
    auto* catalog_cmd = app.add_subcommand("catalog", "list test functions and parameter schemas");
    catalog_cmd->add_flag("--json", catalog_as_json, "machine-readable output");

    ServiceOptions serve_opts;
    std::string spec_dir;
    auto* serve_cmd = app.add_subcommand("serve", "start the HTTP service");
    serve_cmd->add_option("--host", serve_opts.host, "bind address")->capture_default_str();
    serve_cmd->add_option("--port", serve_opts.port, "port (0 picks a free one)")->capture_default_str();
    serve_cmd->add_option("--spec-dir", spec_dir, "persist colormap specs in this directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (CLI::App* sub : app.get_subcommands()) err << sub->help();
        return kUsage;
    }

    try {
        set_thread_count(threads);

        if (generate_cmd->parsed()) {
            GeneratedField g = generate(gen.spec());
            for (const std::string& w : g.warnings) err << "warning: " << w << "\n";
            try {
                write_field(g.field, gen_out);
            } catch (const IoError& e) {
                throw FileError(e.what());
            }
            return kOk;
        }

        if (render_cmd->parsed()) {
            const ScalarField field = load_input_field(render_field_path);
            const ColormapSpec cmap = load_colormap(render_cmap, err);
            const Image img = render_field(field, cmap);
            try {
                write_image(img, render_out);
            } catch (const IoError& e) {
                throw FileError(e.what());
            }
            return kOk;
        }

        if (evaluate_cmd->parsed()) {
            EvaluationOptions opts;
            opts.metric = parse_metric(metric);
            opts.normalization = parse_normalization(normalization);
            opts.aggregation = parse_aggregation(agg);
            const ColormapSpec cmap = load_colormap(eval_cmap, err);
            std::optional<TestSpec> spec;
            ScalarField field;
            if (!eval_field.empty()) {
                field = load_input_field(eval_field);
            } else if (!eval_gen.function.empty()) {
                spec = eval_gen.spec();
                GeneratedField g = generate(*spec);
                for (const std::string& w : g.warnings) err << "warning: " << w << "\n";
                field = std::move(g.field);
            } else {
                throw ValidationError("evaluate needs --field or --function");
            }
            const EvaluationBundle bundle = evaluate(std::move(field), cmap, opts, spec);
            try {
                write_report(bundle, eval_out);
            } catch (const IoError& e) {
                throw FileError(e.what());
            }
            if (bundle.degenerate()) err << "warning: degenerate normalization (all neighbor differences zero)\n";
            const nlohmann::json stats = statistics_json(bundle);
            print_stats(out, "value", stats["value"]);
            print_stats(out, "color", stats["color"]);
            print_stats(out, "subtraction", stats["subtraction"]);
            return kOk;
        }

        if (report_cmd->parsed()) {
            nlohmann::json r;
            try {
                r = read_report(report_dir);
            } catch (const ValidationError& e) {
                throw FileError(e.what());
            } catch (const IoError& e) {
                throw FileError(e.what());
            }
            if (report_json) {
                out << r.dump(2) << "\n";
                return kOk;
            }
            const auto& s = r["statistics"];
            const auto& p = r["provenance"];
            out << "size " << s["width"] << "x" << s["height"] << ", metric " << s["metric"].get<std::string>()
                << ", normalization " << s["normalization"].get<std::string>() << ", aggregation "
                << s["aggregation"].get<std::string>() << "\n";
            if (!p["test_spec"].is_null()) out << "test " << p["test_spec"].dump() << "\n";
            out << "colormap sha256 " << p["colormap_sha256"].get<std::string>() << "\n";
            print_stats(out, "value", s["value"]);
            print_stats(out, "color", s["color"]);
            print_stats(out, "subtraction", s["subtraction"]);
            return kOk;
        }

        if (catalog_cmd->parsed()) {
            out << (catalog_as_json ? catalog_json().dump(2) + "\n" : catalog_text());
            return kOk;
        }

        if (serve_cmd->parsed()) {
            if (!spec_dir.empty()) serve_opts.spec_dir = spec_dir;
            Service service(serve_opts);
            const int port = service.bind();
            out << "listening on http://" << serve_opts.host << ":" << port << std::endl;
            g_service = &service;
            std::signal(SIGINT, stop_service);
            std::signal(SIGTERM, stop_service);
            service.listen();
            g_service = nullptr;
            return kOk;
        }
    } catch (const UnknownNameError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const FileError& e) {
        err << "error: " << e.what() << "\n";
        return kFile;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kFile;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

} // namespace cmtest::cli
