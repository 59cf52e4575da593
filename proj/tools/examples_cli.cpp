// examples list-iterator: the linked list read three ways, with hop counts.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bestow/examples/list_iterator.hpp"

int main(int argc, char** argv) {
  using namespace bestow::examples;
  CLI::App app{"Runtime examples"};
  app.require_subcommand(1);

  ListRunOptions opts;
  std::string mode = "get";
  std::string tracePath;
  bool withTrace = false;
  auto* li = app.add_subcommand("list-iterator", "Clients read a list owned by an actor");
  li->add_option("--clients", opts.clients, "Client threads")->capture_default_str()->check(CLI::PositiveNumber);
  li->add_option("--elements", opts.elements, "List length")->capture_default_str();
  li->add_option("--mode", mode, "get | bestowed-iterator | atomic-pairs")
      ->capture_default_str()
      ->check(CLI::IsMember({"get", "bestowed-iterator", "atomic-pairs"}));
  li->add_option("--workers", opts.workers, "Worker threads (0: hardware)")->capture_default_str();
  li->add_flag("--dump-trace", withTrace, "Include the owner trace in the report");
  li->add_option("--trace-out", tracePath, "Write the report with the owner trace to a file");

  CLI11_PARSE(app, argc, argv);

  opts.mode = *parseMode(mode);
  ListRunReport report = runListIterator(opts);
  std::cout << report.toJson(withTrace).dump(2) << "\n";
  if (!tracePath.empty()) {
    std::ofstream out(tracePath);
    if (!out) {
      std::cerr << tracePath << ": cannot write\n";
      return 1;
    }
    out << report.toJson(true).dump(1) << "\n";
  }
  const bool ok = report.valuesInOrder() && report.offOwnerAccesses == 0 &&
                  (opts.mode != Mode::AtomicPairs || report.pairsAdjacent());
  return ok ? 0 : 2;
}
