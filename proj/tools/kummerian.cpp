#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kummerian/cli.hpp"

using namespace kummerian;

int main(int argc, char** argv) {
    CLI::App app{"Kummerian orientations, pairings and Massey products of pro-p presentations"};
    app.require_subcommand(1);

    cli::CommandOptions opts;
    int precision = 0;
    bool json = false;
    std::string theta, word, phi;
    app.add_option("-N,--precision", precision, "p-adic precision N")->check(CLI::PositiveNumber);
    app.add_flag("--json", json, "print the JSON report");
    app.add_option("--seed", opts.seed, "seed for randomized steps")->capture_default_str();
    app.add_option("--max-solutions", opts.limits.max_solutions, "search: cap on listed solutions")->capture_default_str();
    app.add_option("--max-branches", opts.limits.max_branches, "search: cap on explored branches")->capture_default_str();
    app.add_flag("--timing", opts.timing, "add wall-clock timing to the JSON report");

    std::string file;
    auto* check = app.add_subcommand("check", "decide Kummerian at one orientation (exit 0 / 2)");
    check->add_option("file", file, "presentation file")->required();
    check->add_option("--theta", theta, "orientation residues, e.g. 1,91");

    auto* search = app.add_subcommand("search", "search all Kummerian orientations (exit 0 / 2 / 3)");
    search->add_option("file", file, "presentation file")->required();

    auto* cup = app.add_subcommand("cup", "Bockstein and cup pairings of the relators");
    cup->add_option("file", file, "presentation file")->required();

    auto* om = app.add_subcommand("omega", "lower-central weights and mildness");
    om->add_option("file", file, "presentation file");
    om->add_option("--word", word, "word to weigh, e.g. [[x1,x2],x3]");

    auto* massey = app.add_subcommand("massey", "Massey product of characters");
    massey->add_option("file", file, "presentation file")->required();
    massey->add_option("--phi", phi, "characters, e.g. 1,0,0;1,0,0;1,0,0")->required();

    std::string dir = "fixtures";
    auto* run_all = app.add_subcommand("run-all", "run every fixture's expected-verdict checks");
    run_all->add_option("dir", dir, "fixtures directory")->capture_default_str();

    // every global flag is also accepted after the subcommand
    for (auto* sub : {check, search, cup, om, massey, run_all}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : cli::exit_code::kError;
    }

    if (precision > 0) opts.precision = precision;
    if (!theta.empty()) opts.theta = theta;
    if (!word.empty()) opts.word = word;
    if (!phi.empty()) opts.phi = phi;

    cli::RunReport rep;
    if (run_all->parsed()) rep = cli::cmd_run_all(dir, opts);
    else rep = cli::run_command(app.get_subcommands().front()->get_name(), file, opts);

    if (json) std::cout << rep.json.dump(2) << "\n";
    else std::cout << rep.text;
    if (rep.exit_code == cli::exit_code::kError && json) std::cerr << rep.text;
    return rep.exit_code;
}
