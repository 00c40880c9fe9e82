// Ranks the bundled toy graph around one article with CycleRank and
// Personalized PageRank and prints the two top-5 lists.
//
//   rank_toy [graph.csv] [reference]

#include <iostream>
#include <string>

#include "cyclerank/cyclerank.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : CYCLERANK_SAMPLE_GRAPH;
  const std::string reference = argc > 2 ? argv[2] : "Fake news";

  try {
    const auto g = cyclerank::load_graph(path);
    const auto r = cyclerank::resolve_node(g, reference);

    const auto cr = cyclerank::cyclerank(g, {.reference = r, .max_length = 3});
    cyclerank::WalkParams walk;
    walk.alpha = 0.3;
    walk.reference = r;
    const auto ppr = cyclerank::personalized_pagerank(g, walk);

    std::cout << "CycleRank (K=3)\n";
    for (const auto& e : cyclerank::top_k(g, cr, 5))
      std::cout << "  " << e.rank << ". " << e.label << "  " << *e.score << '\n';
    std::cout << "Personalized PageRank (alpha=0.3)\n";
    for (const auto& e : cyclerank::top_k(g, ppr, 5))
      std::cout << "  " << e.rank << ". " << e.label << "  " << *e.score << '\n';
  } catch (const cyclerank::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
