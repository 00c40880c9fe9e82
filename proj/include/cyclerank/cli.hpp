#pragma once

// Command-line front end:
//
//   cyclerank run --input FILE [--format F] --algorithm A [--source S]
//                 [--alpha X] [--k K] [--sigma S] [--top-k N] [--output M]
//   cyclerank compare --input FILE [--format F] --spec REQUESTS [--output M]
//
// A compare spec holds one request per line written with the same request
// flags as `run` (e.g. `--algorithm cyclerank --source "Fake news" --k 3`);
// blank lines and `#` comments are skipped.

#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cyclerank/io.hpp"
#include "cyclerank/query.hpp"
#include "cyclerank/report.hpp"

namespace cyclerank {

namespace detail {

struct RequestFlags {
  std::string algorithm;
  std::string source;
  double alpha = WalkParams::kDefaultAlpha;
  int k = CycleRankParams::kDefaultMaxLength;
  std::string sigma = "exponential";
  std::size_t top_k = Query::kDefaultTopK;

  void attach(CLI::App& app, bool algorithm_required) {
    auto* alg = app.add_option("--algorithm,-a", algorithm,
                               "cyclerank, pagerank, personalized_pagerank, cheirank, "
                               "personalized_cheirank, 2drank, personalized_2drank");
    if (algorithm_required) alg->required();
    app.add_option("--source,-s", source, "reference node label");
    app.add_option("--alpha", alpha, "damping factor in (0, 1)");
    app.add_option("--k,-k", k, "maximum cycle length K in [2, 10]");
    app.add_option("--sigma", sigma, "cycle scoring: exponential, reciprocal, constant");
    app.add_option("--top-k,-n", top_k, "number of ranked entries to report");
  }

  Query to_query(const CLI::App& app) const {
    Query q;
    q.algorithm = parse_algorithm(algorithm);
    if (app.count("--source")) q.source = source;
    if (app.count("--alpha")) q.alpha = alpha;
    if (app.count("--k")) q.max_length = k;
    if (app.count("--sigma")) q.sigma = parse_scoring(sigma);
    q.top_k = top_k;
    return q;
  }
};

inline Graph load_input(const std::string& path, const std::string& format) {
  return load_graph(path, format == "auto" ? std::nullopt : std::optional(parse_format(format)));
}

inline std::vector<Query> read_compare_spec(const std::string& path) {
  std::vector<Query> out;
  std::size_t line_no = 0;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    CLI::App app;
    RequestFlags flags;
    flags.attach(app, true);
    try {
      app.parse(std::string(body), false);
      out.push_back(flags.to_query(app));
    } catch (const CLI::ParseError& e) {
      throw ParseError(line_no, std::string("bad request: ") + e.what());
    } catch (const InvalidInput& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace detail

/// Entry point of the `cyclerank` tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Personalized relevance ranking for directed graphs"};
  app.require_subcommand(1);

  std::string input, format = "auto", output = "table", spec;
  detail::RequestFlags flags;

  auto* run = app.add_subcommand("run", "rank the nodes of one graph with one algorithm");
  run->add_option("--input,-i", input, "graph file")->required();
  run->add_option("--format,-f", format, "auto, edgelist, pajek or asd");
  flags.attach(*run, true);
  run->add_option("--output,-o", output, "table, csv or json");

  auto* compare = app.add_subcommand("compare", "rank one graph with several requests side by side");
  compare->add_option("--input,-i", input, "graph file")->required();
  compare->add_option("--format,-f", format, "auto, edgelist, pajek or asd");
  compare->add_option("--spec", spec, "file with one request per line")->required();
  compare->add_option("--output,-o", output, "table, csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const auto mode = parse_output_mode(output);
    if (*run) {
      Query q = flags.to_query(*run);
      q.validate();
      const Graph g = detail::load_input(input, format);
      render_ranking(out, execute(g, q).entries, mode, q);
      return 0;
    }
    const auto queries = detail::read_compare_spec(spec);
    if (queries.size() < 2) throw InvalidInput("compare needs at least 2 requests in " + spec);
    const Graph g = detail::load_input(input, format);
    const auto columns = run_columns(g, queries);
    render_comparison(out, columns, mode);
    bool failed = false;
    for (const auto& c : columns) {
      if (!c.entries) {
        err << "error: " << c.title() << ": " << c.error << '\n';
        failed = true;
      }
    }
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cyclerank
