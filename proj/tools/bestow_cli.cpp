// bestow: check, run, explore and desugar surface programs.
//
// Exit codes: 0 ok, 1 diagnostics (parse, elaboration or type errors),
// 2 a check failed or a run got stuck.

#include <fstream>
#include <iostream>
#include <iterator>
#include <regex>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bestow/calculus/eval.hpp"
#include "bestow/calculus/explore.hpp"
#include "bestow/calculus/wellformed.hpp"
#include "bestow/surface/compile.hpp"

namespace {

using namespace bestow;
using calculus::SchedulerChoice;

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kCheckFailed = 2;

struct Common {
  std::string file;
  bool lifo = false;
};

std::optional<std::string> readSource(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads and compiles; prints diagnostics. Nullopt means exit with 1.
std::optional<surface::Compiled> load(const Common& c) {
  auto src = readSource(c.file);
  if (!src) {
    std::cerr << c.file << ": cannot read file\n";
    return std::nullopt;
  }
  surface::ElaborateOptions opts;
  opts.queueOrder = c.lifo ? calculus::QueueOrder::Lifo : calculus::QueueOrder::Fifo;
  surface::Compiled out = surface::compile(*src, opts);
  for (const auto& d : out.diagnostics) std::cerr << c.file << ":" << d.str() << "\n";
  if (!out.diagnostics.empty()) return std::nullopt;
  if (!out.type->ok()) {
    std::cerr << c.file << ": " << out.type->str() << "\n";
    return std::nullopt;
  }
  return out;
}

// Counterexamples are reported in the naming of the elaborated program, so
// `run` with the same choices reproduces them.
std::string choices(const calculus::Heap& start, const std::vector<SchedulerChoice>& canonical) {
  const auto path = calculus::concretePath(start, canonical);
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? " " : "") + path[i].str();
  return s + "]";
}

nlohmann::json spaceJson(const calculus::StateSpace& space) {
  nlohmann::json j;
  j["truncated"] = space.truncated;
  j["bound"] = {{"max_states", space.bound.maxStates}, {"max_depth", space.bound.maxDepth}};
  auto& states = j["states"] = nlohmann::json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    states.push_back({{"id", i},
                      {"depth", space.depth[i]},
                      {"expanded", static_cast<bool>(space.expanded[i])},
                      {"heap", calculus::toSexpr(space.states[i])}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : space.edges) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"choice", e.choice.str()},
                     {"event", nlohmann::json::parse(calculus::toJsonLine(e.event))}});
  }
  return j;
}

int cmdCheck(const Common& c) {
  auto prog = load(c);
  if (!prog) return kDiagnostics;
  std::cout << prog->type->str() << "\n";
  return kOk;
}

int cmdDesugar(const Common& c, bool sexpr) {
  auto prog = load(c);
  if (!prog) return kDiagnostics;
  std::cout << (sexpr ? calculus::toSexpr(prog->expr) : calculus::toPretty(prog->expr)) << "\n";
  return kOk;
}

// Accepts the explorer's counterexample format: "[run #0 pop #1]".
std::optional<calculus::ScriptedSchedule> parseSchedule(const std::string& text) {
  static const std::regex whole(R"(\s*\[?\s*((run|pop)\s*#\d+[\s,]*)*\]?\s*)");
  static const std::regex item(R"((run|pop)\s*#(\d+))");
  if (!std::regex_match(text, whole)) return std::nullopt;
  calculus::ScriptedSchedule out;
  for (std::sregex_iterator it(text.begin(), text.end(), item), end; it != end; ++it) {
    const calculus::ActorId id{static_cast<std::uint32_t>(std::stoul((*it)[2]))};
    out.push_back((*it)[1] == "run" ? calculus::SchedulerChoice::run(id) : calculus::SchedulerChoice::pop(id));
  }
  return out;
}

int cmdRun(const Common& c, std::uint64_t seed, std::size_t fuel, const std::string& tracePath,
           const std::string& scheduleText) {
  auto prog = load(c);
  if (!prog) return kDiagnostics;
  calculus::Schedule schedule = calculus::SeededSchedule{seed};
  if (!scheduleText.empty()) {
    auto script = parseSchedule(scheduleText);
    if (!script) {
      std::cerr << "cannot parse schedule '" << scheduleText << "'\n";
      return kDiagnostics;
    }
    schedule = std::move(*script);
  }
  calculus::RunResult result;
  try {
    result = calculus::runToQuiescence(prog->heap, schedule, fuel);
  } catch (const calculus::EvalError& e) {
    std::cerr << e.what() << "\n";
    return kCheckFailed;
  }
  if (!tracePath.empty()) {
    std::ofstream out(tracePath);
    if (!out) {
      std::cerr << tracePath << ": cannot write trace\n";
      return kDiagnostics;
    }
    for (const auto& ev : result.trace) out << calculus::toJsonLine(ev) << "\n";
  }
  std::cout << "status: " << calculus::statusName(result.status) << "\n";
  std::cout << "steps: " << result.steps() << "\n";
  std::cout << calculus::toSexpr(result.heap) << "\n";
  return result.status == calculus::RunResult::Status::Stuck ? kCheckFailed : kOk;
}

int cmdExplore(const Common& c, std::size_t bound, std::size_t depth, const std::string& checks,
               const std::string& emitPath) {
  auto prog = load(c);
  if (!prog) return kDiagnostics;

  bool progress = false, preservation = false, races = false;
  std::stringstream ss(checks);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "progress") {
      progress = true;
    } else if (item == "preservation") {
      preservation = true;
    } else if (item == "races") {
      races = true;
    } else if (!item.empty()) {
      std::cerr << "unknown check '" << item << "'\n";
      return kDiagnostics;
    }
  }

  auto space = calculus::explore(prog->heap, calculus::ExploreBound{bound, depth});
  std::cout << "states: " << space.size() << "\nedges: " << space.edges.size()
            << "\ntruncated: " << (space.truncated ? "yes" : "no") << "\n";
  if (!emitPath.empty()) {
    std::ofstream out(emitPath);
    if (!out) {
      std::cerr << emitPath << ": cannot write state space\n";
      return kDiagnostics;
    }
    out << spaceJson(space).dump(1) << "\n";
  }

  int rc = kOk;
  if (progress) {
    if (auto v = calculus::checkProgress(space)) {
      std::cout << "progress: FAIL stuck state after " << choices(prog->heap, v->path) << "\n";
      rc = kCheckFailed;
    } else {
      std::cout << "progress: ok\n";
    }
  }
  if (preservation) {
    if (auto v = calculus::checkPreservation(space)) {
      auto path = v->path;
      path.push_back(space.edges[v->edge].choice);
      std::cout << "preservation: FAIL after " << choices(prog->heap, path) << "\n" << v->report.str() << "\n";
      rc = kCheckFailed;
    } else {
      std::cout << "preservation: ok\n";
    }
  }
  if (races) {
    if (auto w = calculus::checkRaceFreedom(space)) {
      // The witness names are canonical; map them back through the replayed heap.
      calculus::Heap end = prog->heap;
      for (const auto& c : calculus::concretePath(prog->heap, w->path)) calculus::stepSystemInPlace(end, c);
      const auto canon = calculus::canonicalize(end);
      auto back = [](const std::map<std::uint32_t, std::uint32_t>& m, std::uint32_t v) {
        for (const auto& [from, to] : m) {
          if (to == v) return from;
        }
        return v;
      };
      std::cout << "races: FAIL actors #" << back(canon.actorRenaming, raw(w->actorPair.first)) << " and #"
                << back(canon.actorRenaming, raw(w->actorPair.second)) << " both mutate @"
                << back(canon.locRenaming, raw(w->location)) << " after " << choices(prog->heap, w->path) << "\n";
      rc = kCheckFailed;
    } else {
      std::cout << "races: ok\n";
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checker, interpreter and interleaving explorer for the bestow calculus"};
  app.require_subcommand(1);

  Common common;
  auto addCommon = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "Program source ('-' for stdin)")->required();
    sub->add_flag("--lifo-queue", common.lifo, "Sends push to the front of the queue");
  };

  auto* check = app.add_subcommand("check", "Print the program's type or its type error");
  addCommon(check);

  bool sexpr = false;
  auto* desugar = app.add_subcommand("desugar", "Print the elaborated core term");
  addCommon(desugar);
  desugar->add_flag("--sexpr", sexpr, "Print as an s-expression");

  std::uint64_t seed = 0;
  std::size_t fuel = calculus::kDefaultFuel;
  std::string tracePath;
  std::string scheduleText;
  auto* run = app.add_subcommand("run", "Run under a seeded random scheduler");
  addCommon(run);
  run->add_option("--seed", seed, "Scheduler seed")->capture_default_str();
  run->add_option("--fuel", fuel, "Step budget")->capture_default_str();
  run->add_option("--trace", tracePath, "Write the trace as JSON lines");
  run->add_option("--schedule", scheduleText, "Replay these choices, e.g. \"[run #0 pop #1]\", instead of --seed");

  calculus::ExploreBound defaults;
  std::size_t bound = defaults.maxStates;
  std::size_t depth = defaults.maxDepth;
  std::string checks = "progress,preservation,races";
  std::string emitPath;
  auto* explore = app.add_subcommand("explore", "Explore every interleaving and check properties");
  addCommon(explore);
  explore->add_option("--bound", bound, "Most canonical states")->capture_default_str();
  explore->add_option("--depth", depth, "Most steps from the initial heap")->capture_default_str();
  explore->add_option("--check", checks, "Comma-separated: progress, preservation, races")->capture_default_str();
  explore->add_option("--emit", emitPath, "Write the state space as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kDiagnostics;
  }

  if (check->parsed()) return cmdCheck(common);
  if (desugar->parsed()) return cmdDesugar(common, sexpr);
  if (run->parsed()) return cmdRun(common, seed, fuel, tracePath, scheduleText);
  return cmdExplore(common, bound, depth, checks, emitPath);
}
