#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "polyfix/problem.hpp"

namespace {

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 4;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polyfix: certifies surjective displacement and fixed-point uniqueness of\n"
      "nonexpansive maps on polyhedral-normed spaces, with exact finite limit tests"};

  std::string problem_path;
  std::string demo_name;
  std::string output_path;
  std::string graph_path;
  std::string method_name;
  bool verify = false;
  int tmax = -1;
  double tol = -1;
  long long seed = -1;

  app.add_option("problem", problem_path, "problem file (JSON, schema polyfix-problem/1)");
  app.add_option("--demo", demo_name, "run a built-in demo: fixed-ray, shrink-sqrt, min-clip");
  app.add_flag("--verify", verify, "run the brute-force iteration oracle and append its section");
  app.add_option("--export-graph", graph_path, "write the limit graph (Graphviz) to this path");
  app.add_option("--method", method_name,
                 "topical method override: hypergraph, hypergraph_reach, convex, strongly_connected");
  app.add_option("--tmax", tmax, "numeric limit schedule: maximum doublings");
  app.add_option("--seed", seed, "seed override for sampling and the oracle");
  app.add_option("--tol", tol, "oracle tolerance override");
  app.add_option("-o,--output", output_path, "write the report here instead of standard output");

  CLI11_PARSE(app, argc, argv);

  try {
    polyfix::ProblemFile problem;
    if (!demo_name.empty()) {
      problem = polyfix::demo_problem(demo_name);
    } else if (!problem_path.empty()) {
      problem = polyfix::parse_problem_file(problem_path);
    } else {
      std::cerr << "error: give a problem file or --demo NAME (see --help)\n";
      return 3;
    }

    polyfix::RunOptions opts;
    opts.verify = verify;
    opts.want_graph = !graph_path.empty();
    if (!method_name.empty()) {
      if (method_name == "hypergraph")
        opts.method_override = polyfix::TopicalMethod::hypergraph;
      else if (method_name == "hypergraph_reach")
        opts.method_override = polyfix::TopicalMethod::hypergraph_reach;
      else if (method_name == "convex")
        opts.method_override = polyfix::TopicalMethod::convex;
      else if (method_name == "strongly_connected")
        opts.method_override = polyfix::TopicalMethod::strongly_connected_sufficient;
      else {
        std::cerr << "error: unknown method '" << method_name << "'\n";
        return 3;
      }
    }
    if (tmax >= 0) opts.tmax = tmax;
    if (tol >= 0) opts.tol = tol;
    if (seed >= 0) opts.seed = static_cast<std::uint64_t>(seed);

    polyfix::RunResult result = polyfix::run_problem(problem, opts);
    if (int rc = write_output(result.report_json, output_path); rc != 0) return rc;
    if (!graph_path.empty() && result.graph_dot) {
      std::ofstream g(graph_path);
      if (!g) {
        std::cerr << "error: cannot write " << graph_path << "\n";
        return 4;
      }
      g << *result.graph_dot;
    }
    return result.exit_code;
  } catch (const polyfix::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
