#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bao/checker.hpp"
#include "bao/graph.hpp"
#include "bao/verify.hpp"

namespace bao {

namespace detail {

inline Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("cannot open graph file '" + path + "'");
    return parse_graph(in);
}

inline AtomStructure read_structure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("cannot open structure dump '" + path + "'");
    return load_structure(in);
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw invalid_parameter("cannot write file '" + path + "'");
    out << text;
}

inline CopyRule rule_from_flag(const std::string& tag) {
    const auto rule = copy_rule_from_tag(tag);
    if (!rule) throw invalid_parameter("unknown copy rule '" + tag + "' (transparent|clique)");
    return *rule;
}

} // namespace detail

/// Batch front door.  Subcommands:
///   graph gen --kind K --size S -o F
///   graph analyze F
///   graph mycielski F -o F2
///   graph union F1 F2 -o F3
///   graph witness --min-girth G --min-chi C --seed S --budget B
///   eta build F -n N --rule R -o F2
///   eta count F -n N --rule R
///   check lemmas F2
///   check axioms F2 --suite Q --strategy exhaustive|random --samples N --seed S
///   check all F -n N --rule R --seed S
/// Exit codes: 0 success/all-pass, 1 check failure or witness not found,
/// 2 usage, parse or resource errors.  The resolved configuration is echoed
/// to the error stream; reports go to the output stream.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"graph-derived atom structures and their operator algebras", "baograph"};
    app.require_subcommand(1);

    // graph ------------------------------------------------------------
    auto* graph_cmd = app.add_subcommand("graph", "build and analyze graphs");
    graph_cmd->require_subcommand(1);

    std::string gen_kind, gen_out;
    std::size_t gen_size = 0;
    auto* gen = graph_cmd->add_subcommand("gen", "generate a standard graph");
    gen->add_option("--kind", gen_kind, "complete|cycle|path|edgeless")->required();
    gen->add_option("--size", gen_size, "node count")->required();
    gen->add_option("-o", gen_out, "output file")->required();

    std::string analyze_in;
    auto* analyze = graph_cmd->add_subcommand("analyze", "print nodes, edges, chromatic number, girth");
    analyze->add_option("file", analyze_in, "graph file")->required();

    std::string myc_in, myc_out;
    auto* myc = graph_cmd->add_subcommand("mycielski", "apply the Mycielski construction");
    myc->add_option("file", myc_in, "graph file")->required();
    myc->add_option("-o", myc_out, "output file")->required();

    std::string union_a, union_b, union_out;
    auto* gunion = graph_cmd->add_subcommand("union", "disjoint union of two graphs");
    gunion->add_option("first", union_a, "graph file")->required();
    gunion->add_option("second", union_b, "graph file")->required();
    gunion->add_option("-o", union_out, "output file")->required();

    std::size_t wit_girth = 3, wit_chi = 1;
    std::uint64_t wit_seed = 1, wit_budget = 100000;
    auto* witness = graph_cmd->add_subcommand("witness",
                                              "search for a graph with given girth and chromatic number");
    witness->add_option("--min-girth", wit_girth, "minimum girth (cycle required)")->required();
    witness->add_option("--min-chi", wit_chi, "minimum chromatic number")->required();
    witness->add_option("--seed", wit_seed, "random seed (default 1)");
    witness->add_option("--budget", wit_budget, "candidate budget (default 100000)");

    // eta ---------------------------------------------------------------
    auto* eta_cmd = app.add_subcommand("eta", "atom structures over a graph");
    eta_cmd->require_subcommand(1);

    std::string eta_build_in, eta_build_out, eta_build_rule = "transparent";
    int eta_build_n = 3;
    auto* eta_build_cmd = eta_cmd->add_subcommand("build", "enumerate the atom structure");
    eta_build_cmd->add_option("file", eta_build_in, "graph file")->required();
    eta_build_cmd->add_option("-n", eta_build_n, "dimension (default 3)");
    eta_build_cmd->add_option("--rule", eta_build_rule, "copy rule transparent|clique");
    eta_build_cmd->add_option("-o", eta_build_out, "output dump file")->required();

    std::string eta_count_in, eta_count_rule = "transparent";
    int eta_count_n = 3;
    auto* eta_count_cmd = eta_cmd->add_subcommand("count", "closed-form atom count");
    eta_count_cmd->add_option("file", eta_count_in, "graph file")->required();
    eta_count_cmd->add_option("-n", eta_count_n, "dimension (default 3)");
    eta_count_cmd->add_option("--rule", eta_count_rule, "copy rule transparent|clique");

    // check ---------------------------------------------------------------
    auto* check_cmd = app.add_subcommand("check", "run verification suites");
    check_cmd->require_subcommand(1);

    std::string lemmas_in;
    auto* lemmas = check_cmd->add_subcommand("lemmas", "swap-relation and closure properties of a dump");
    lemmas->add_option("file", lemmas_in, "structure dump")->required();

    std::string ax_in, ax_suite = "qea", ax_strategy = "random";
    std::uint64_t ax_samples = 1000, ax_seed = 1;
    auto* axioms = check_cmd->add_subcommand("axioms", "equational suites against a dump");
    axioms->add_option("file", ax_in, "structure dump")->required();
    axioms->add_option("--suite", ax_suite, "df|sc|ca|qa|qea or an equation file (default qea)");
    axioms->add_option("--strategy", ax_strategy, "exhaustive|random (default random)");
    axioms->add_option("--samples", ax_samples, "random samples per instance (default 1000)");
    axioms->add_option("--seed", ax_seed, "random seed (default 1)");

    std::string all_in, all_rule = "transparent";
    int all_n = 3;
    std::uint64_t all_seed = 1;
    auto* all = check_cmd->add_subcommand("all", "build a graph's structure and run every suite");
    all->add_option("file", all_in, "graph file")->required();
    all->add_option("-n", all_n, "dimension (default 3)");
    all->add_option("--rule", all_rule, "copy rule transparent|clique");
    all->add_option("--seed", all_seed, "random seed (default 1)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) {
            StandardGraph kind;
            if (gen_kind == "complete") kind = StandardGraph::complete;
            else if (gen_kind == "cycle") kind = StandardGraph::cycle;
            else if (gen_kind == "path") kind = StandardGraph::path;
            else if (gen_kind == "edgeless") kind = StandardGraph::edgeless;
            else throw invalid_parameter("unknown kind '" + gen_kind + "'");
            err << "# config command=graph.gen kind=" << gen_kind << " size=" << gen_size
                << " out=" << gen_out << "\n";
            detail::write_file(gen_out, graph_to_text(build_standard(kind, gen_size)));
            return 0;
        }
        if (analyze->parsed()) {
            err << "# config command=graph.analyze file=" << analyze_in << "\n";
            const Graph g = detail::read_graph_file(analyze_in);
            out << "nodes " << g.node_count() << "\n";
            out << "edges " << g.edge_count() << "\n";
            out << "chromatic " << chromatic_number(g) << "\n";
            out << "girth " << girth_to_string(girth(g)) << "\n";
            return 0;
        }
        if (myc->parsed()) {
            err << "# config command=graph.mycielski file=" << myc_in << " out=" << myc_out << "\n";
            detail::write_file(myc_out, graph_to_text(mycielskian(detail::read_graph_file(myc_in))));
            return 0;
        }
        if (gunion->parsed()) {
            err << "# config command=graph.union first=" << union_a << " second=" << union_b
                << " out=" << union_out << "\n";
            detail::write_file(union_out,
                               graph_to_text(disjoint_union(detail::read_graph_file(union_a),
                                                            detail::read_graph_file(union_b))));
            return 0;
        }
        if (witness->parsed()) {
            err << "# config command=graph.witness min-girth=" << wit_girth << " min-chi=" << wit_chi
                << " seed=" << wit_seed << " budget=" << wit_budget << "\n";
            const auto w = search_witness({wit_girth, wit_chi, wit_seed, wit_budget});
            if (!w) {
                err << "witness not found within budget\n";
                return 1;
            }
            err << "# witness nodes=" << w->node_count() << " chi=" << chromatic_number(*w)
                << " girth=" << girth_to_string(girth(*w)) << "\n";
            write_graph(out, *w);
            return 0;
        }
        if (eta_build_cmd->parsed()) {
            err << "# config command=eta.build file=" << eta_build_in << " n=" << eta_build_n
                << " rule=" << eta_build_rule << " out=" << eta_build_out << "\n";
            const auto s = build_eta(detail::read_graph_file(eta_build_in), eta_build_n,
                                     detail::rule_from_flag(eta_build_rule));
            detail::write_file(eta_build_out, structure_to_text(s));
            err << "# built atoms=" << s.size() << "\n";
            return 0;
        }
        if (eta_count_cmd->parsed()) {
            err << "# config command=eta.count file=" << eta_count_in << " n=" << eta_count_n
                << " rule=" << eta_count_rule << "\n";
            out << atom_count(detail::read_graph_file(eta_count_in), eta_count_n,
                              detail::rule_from_flag(eta_count_rule))
                << "\n";
            return 0;
        }
        if (lemmas->parsed()) {
            err << "# config command=check.lemmas file=" << lemmas_in << "\n";
            const auto reports = check_lemma_suite(detail::read_structure_file(lemmas_in));
            write_reports(out, reports);
            return reports_exit_status(reports);
        }
        if (axioms->parsed()) {
            err << "# config command=check.axioms file=" << ax_in << " suite=" << ax_suite
                << " strategy=" << ax_strategy << " samples=" << ax_samples << " seed=" << ax_seed
                << "\n";
            Strategy strat;
            if (ax_strategy == "exhaustive") strat = Strategy::exhaustive();
            else if (ax_strategy == "random") strat = Strategy::random(ax_samples, ax_seed);
            else throw invalid_parameter("unknown strategy '" + ax_strategy + "'");
            const ComplexAlgebra a(detail::read_structure_file(ax_in));
            const auto reports = check_axiom_suite(a, ax_suite, strat);
            write_reports(out, reports);
            return reports_exit_status(reports);
        }
        if (all->parsed()) {
            err << "# config command=check.all file=" << all_in << " n=" << all_n
                << " rule=" << all_rule << " strategy=random samples=1000 seed=" << all_seed << "\n";
            const auto fr = full_report(detail::read_graph_file(all_in), all_n,
                                        detail::rule_from_flag(all_rule),
                                        Strategy::random(1000, all_seed));
            write_reports(out, fr.reports);
            return fr.status;
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_limit& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_parameter& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace bao
