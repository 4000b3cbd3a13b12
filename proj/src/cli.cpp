#include "pldoc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pldoc/doc_db.hpp"
#include "pldoc/doc_server.hpp"
#include "pldoc/html_backend.hpp"

namespace fs = std::filesystem;

namespace pldoc::cli {

namespace {

struct Finding {
    std::string file;
    int line = 0;
    std::string severity;
    std::string code;
    std::string message;
};

std::vector<Finding> lint_findings(const DocIndex& index)
{
    std::vector<Finding> out;
    auto add = [&](const Diagnostic& d) {
        if (d.severity == Severity::info)
            return;
        out.push_back({d.file, d.span.line_start, to_string(d.severity), d.code, d.message});
    };
    for (const auto& d : index.diagnostics)
        add(d);
    for (const auto& [path, fd] : index.files) {
        for (const auto& d : fd.diagnostics)
            add(d);
        for (const Indicator& pi : undocumented_exports(index, path))
            out.push_back({path, 0, "warning", "UndocumentedExport", pi.str()});
    }
    std::stable_sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
        return std::tie(a.file, a.line) < std::tie(b.file, b.line);
    });
    return out;
}

int cmd_lint(const fs::path& root, const std::string& format, std::ostream& out)
{
    DocIndex index = build_index(root);
    auto findings = lint_findings(index);
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& f : findings)
            j.push_back({{"file", f.file},
                         {"line", f.line},
                         {"severity", f.severity},
                         {"code", f.code},
                         {"message", f.message}});
        out << j.dump(2) << "\n";
    } else {
        for (const auto& f : findings) {
            out << f.file;
            if (f.line > 0)
                out << ":" << f.line;
            if (f.code == "UndocumentedExport")
                out << ": undocumented export " << f.message << "\n";
            else
                out << ": " << f.severity << ": " << f.code << ": " << f.message << "\n";
        }
    }
    return findings.empty() ? 0 : 1;
}

int cmd_search(const fs::path& root, const std::string& query, bool public_only, const std::string& format,
               std::ostream& out)
{
    DocIndex index = build_index(root);
    auto hits = search(index, query, !public_only);
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& h : hits)
            j.push_back({{"target", h.target},
                         {"kind", to_string(h.kind)},
                         {"summary", h.summary},
                         {"public", h.is_public},
                         {"score", h.score},
                         {"file", h.file},
                         {"line", h.line}});
        out << j.dump(2) << "\n";
    } else {
        for (const auto& h : hits) {
            out << h.score << "\t" << to_string(h.kind) << "\t" << h.target;
            if (!h.is_public)
                out << " (private)";
            out << "\t" << h.file << ":" << h.line;
            if (!h.summary.empty())
                out << "\t" << h.summary;
            out << "\n";
        }
    }
    return 0;
}

int cmd_build(const fs::path& root, const fs::path& outdir, bool include_private, std::ostream& out)
{
    DocIndex index = build_index(root);
    auto files = export_static(index, outdir, !include_private);
    out << "wrote " << files.size() << " files to " << outdir.string() << "\n";
    return 0;
}

int cmd_serve(const fs::path& root, ServerConfig config, std::ostream& out, std::istream& in)
{
    auto handle = std::make_shared<DocHandle>(build_index(root));
    DocServer server(config, handle);
    server.start();
    out << "serving " << root.string() << " at http://" << server.host() << ":" << server.port() << "/doc/\n"
        << "commands: reload, quit\n"
        << std::flush;
    std::string line;
    while (std::getline(in, line)) {
        if (line == "quit" || line == "exit")
            break;
        if (line == "reload") {
            auto snap = handle->reload();
            out << "generation " << snap->generation << "\n" << std::flush;
        } else if (!line.empty()) {
            out << "unknown command: " << line << "\n" << std::flush;
        }
    }
    if (!in) {
        // Input closed: keep serving until the process is signalled.
        for (;;)
            std::this_thread::sleep_for(std::chrono::hours(1));
    }
    server.stop();
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in)
{
    CLI::App app{"Prolog documentation tool", "pldoc"};
    app.require_subcommand(1);

    std::string root = ".";
    std::string format = "text";
    bool include_private = false;

    auto* serve = app.add_subcommand("serve", "serve documentation over HTTP");
    ServerConfig config;
    std::vector<std::string> allow;
    std::string assets;
    serve->add_option("root", root, "source directory")->check(CLI::ExistingDirectory);
    serve->add_option("--port", config.port, "TCP port (0 picks a free one)");
    serve->add_option("--allow", allow, "additional peer address pattern, e.g. 192.168.*");
    serve->add_option("--editor", config.editor_command, "editor command with {file} and {line}");
    serve->add_flag("--private", include_private, "show private predicates by default");
    serve->add_option("--assets", assets, "directory with extra /assets files")->check(CLI::ExistingDirectory);
    app.set_config("--config", "", "key=value file with command options");

    auto* build = app.add_subcommand("build", "write static HTML");
    std::string outdir = "html";
    build->add_option("root", root, "source directory")->check(CLI::ExistingDirectory);
    build->add_option("--out", outdir, "output directory");
    build->add_flag("--private", include_private, "include private predicates");

    auto* lint = app.add_subcommand("lint", "report header problems and undocumented exports");
    lint->add_option("root", root, "source directory")->check(CLI::ExistingDirectory);
    lint->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* srch = app.add_subcommand("search", "keyword search");
    std::string query;
    bool public_only = false;
    srch->add_option("query", query, "search words")->required();
    srch->add_option("root", root, "source directory")->check(CLI::ExistingDirectory);
    srch->add_flag("--public", public_only, "public predicates only");
    srch->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::vector<std::string> storage{"pldoc"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        app.exit(e, err, err);
        return 2;
    }

    try {
        if (*serve) {
            config.allow.insert(config.allow.end(), allow.begin(), allow.end());
            config.public_only_default = !include_private;
            config.assets_dir = assets;
            return cmd_serve(root, config, out, in);
        }
        if (*build)
            return cmd_build(root, outdir, include_private, out);
        if (*lint)
            return cmd_lint(root, format, out);
        if (*srch)
            return cmd_search(root, query, public_only, format, out);
    } catch (const ServerError& e) {
        err << "pldoc: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "pldoc: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace pldoc::cli
