#include <iostream>

#include "mvrc/benchmarks.hpp"
#include "mvrc/robustness.hpp"

int main() {
  const auto workload = mvrc::auction();
  for (bool fk : {false, true}) {
    const mvrc::AnalysisSettings settings{mvrc::Granularity::Attribute, fk, mvrc::Method::TypeTwo};
    const auto graph = mvrc::construct_summary_graph(workload, settings);
    const auto stats = mvrc::graph_stats(graph);
    const auto verdict = mvrc::check_graph(graph, settings.method);
    std::cout << mvrc::setting_name(settings) << ": " << stats.nodes << " nodes, " << stats.edges << " edges, "
              << stats.counterflow << " counterflow, " << (verdict.robust ? "robust" : "not robust") << "\n";
    for (const auto& set : mvrc::maximal_robust_subsets(workload, settings)) {
      std::cout << "  maximal robust subset:";
      for (const auto& name : set) std::cout << " " << workload.find_program(name)->display_name();
      std::cout << "\n";
    }
  }
}
