#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lpdo/engine.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lpdo - exact calculus for linear partial differential operators on the plane"};

    std::string format = "text";
    int max_order = 4;
    std::string script_path;
    app.add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--max-order", max_order, "Reject operators above this order")
        ->check(CLI::PositiveNumber);
    app.add_option("script", script_path, "Script file ('-' or absent reads stdin)");

    CLI11_PARSE(app, argc, argv);

    std::string source;
    if (script_path.empty() || script_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        source = ss.str();
    } else {
        std::ifstream in(script_path);
        if (!in) {
            std::cerr << "cannot open " << script_path << "\n";
            return 4;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        source = ss.str();
    }

    lpdo::RunOptions opts;
    opts.max_order = max_order;
    lpdo::RunResult result = lpdo::run_source(source, opts);
    if (format == "json")
        std::cout << lpdo::report_to_json(result.report);
    else
        std::cout << lpdo::report_to_text(result.report);
    return result.exit_code;
}
