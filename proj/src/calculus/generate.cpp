#include "bestow/calculus/generate.hpp"

#include <random>
#include <vector>

#include "bestow/calculus/typecheck.hpp"

namespace bestow::calculus {

namespace {

std::size_t minSize(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Unit:
    case TypeKind::Passive:
    case TypeKind::Actor: return 1;
    case TypeKind::Bestowed: return 2;
    case TypeKind::Arrow: return 1 + minSize(t.cod());
  }
  return 1;
}

const std::vector<Type>& ground() {
  static const std::vector<Type> types{Type::unit(), Type::passive(), Type::actor(), Type::bestowed()};
  return types;
}

class Generator {
public:
  static constexpr std::size_t kRoomy = 4;

  Generator(std::uint64_t seed, const GeneratorWeights& w) : rng_(seed), w_(w) {}

  Expr gen(const TypeEnv& env, const Type& goal, std::size_t budget) {
    enum class P { Leaf, Var, Let, ApplyVar, Send, Mutate, Bestow, Lambda };
    std::vector<std::pair<P, unsigned>> options;

    // With room to spare, atoms are unlikely so the budget gets used.
    const bool roomy = budget > kRoomy;
    const auto vars = varsOfType(env, goal);
    if (!vars.empty()) options.emplace_back(P::Var, roomy ? std::min(1u, w_.variable) : w_.variable);

    switch (goal.kind()) {
      case TypeKind::Unit:
      case TypeKind::Passive:
      case TypeKind::Actor:
        if (!roomy) options.emplace_back(P::Leaf, w_.leaf);
        break;
      case TypeKind::Bestowed:
        if (budget >= 2) options.emplace_back(P::Bestow, w_.bestow);
        break;
      case TypeKind::Arrow:
        if (budget >= minSize(goal)) options.emplace_back(P::Lambda, 1);
        break;
    }
    if (goal.kind() == TypeKind::Unit) {
      if (budget >= 2) options.emplace_back(P::Mutate, w_.mutate);
      if (budget >= 3) options.emplace_back(P::Send, w_.send);
    }
    if (budget >= 2 + minSize(goal) + 1) options.emplace_back(P::Let, w_.let);
    if (budget >= 3 && !arrowsTo(env, goal).empty()) options.emplace_back(P::ApplyVar, w_.applyVar);

    if (options.empty() && roomy) return gen(env, goal, kRoomy);
    if (options.empty()) throw GenerationFailed("no production fits goal " + goal.str());

    switch (pick(options)) {
      case P::Var: return Expr::var(vars[uniform(vars.size())]);
      case P::Leaf:
        if (goal.kind() == TypeKind::Passive) return Expr::newPassive();
        if (goal.kind() == TypeKind::Actor) return Expr::newActor();
        return Expr::unit();
      case P::Bestow: return Expr::bestow(gen(env, Type::passive(), budget - 1));
      case P::Lambda: {
        std::string x = fresh();
        return Expr::lambda(x, goal.dom(), gen(env.extended(x, goal.dom()), goal.cod(), budget - 1));
      }
      case P::Mutate: return Expr::mutate(gen(env, Type::passive(), budget - 1));
      case P::Send: return send(env, budget);
      case P::Let: return let(env, goal, budget);
      case P::ApplyVar: {
        const auto fs = arrowsTo(env, goal);
        const auto& [f, dom] = fs[uniform(fs.size())];
        if (budget < 2 + minSize(dom)) return gen(env, goal, std::min<std::size_t>(budget, minSize(goal)));
        return Expr::app(Expr::var(f), gen(env, dom, budget - 2));
      }
    }
    throw GenerationFailed("unreachable production");
  }

private:
  // target ! (\x:p. body), body typed under the active part of env.
  Expr send(const TypeEnv& env, std::size_t budget) {
    std::vector<Type> targets;
    for (const Type& t : {Type::actor(), Type::bestowed()}) {
      if (budget >= 2 + minSize(t)) targets.push_back(t);
    }
    const Type target = targets[uniform(targets.size())];
    const std::size_t forTarget = split(minSize(target), budget - 2);
    Expr targetExpr = gen(env, target, forTarget);
    const std::size_t rest = budget - 1 - size(targetExpr);

    std::string x = fresh();
    std::vector<Type> goals;
    for (const Type& t : ground()) {
      if (rest >= minSize(t)) goals.push_back(t);
    }
    const Type bodyGoal = goals[uniform(goals.size())];
    Expr body = gen(restrictActive(env).extended(x, Type::passive()), bodyGoal, rest);
    return Expr::send(std::move(targetExpr), Value(Lambda{x, Type::passive(), std::move(body)}));
  }

  // (\x:t. body) arg
  Expr let(const TypeEnv& env, const Type& goal, std::size_t budget) {
    std::vector<Type> bound;
    for (const Type& t : ground()) {
      if (budget >= 2 + minSize(goal) + minSize(t)) bound.push_back(t);
    }
    const Type t = bound[uniform(bound.size())];
    const std::size_t forArg = split(minSize(t), budget - 2 - minSize(goal));
    Expr arg = gen(env, t, forArg);
    std::string x = fresh();
    Expr body = gen(env.extended(x, t), goal, budget - 2 - size(arg));
    return Expr::app(Expr::lambda(x, t, std::move(body)), std::move(arg));
  }

  std::vector<std::string> varsOfType(const TypeEnv& env, const Type& t) const {
    std::vector<std::string> out;
    for (const auto& [name, bound] : env.bindings()) {
      if (bound == t) out.push_back(name);
    }
    return out;
  }

  std::vector<std::pair<std::string, Type>> arrowsTo(const TypeEnv& env, const Type& goal) const {
    std::vector<std::pair<std::string, Type>> out;
    for (const auto& [name, bound] : env.bindings()) {
      if (bound.kind() == TypeKind::Arrow && bound.cod() == goal) out.emplace_back(name, bound.dom());
    }
    return out;
  }

  /// A budget in [lo, hi], biased towards small subterms.
  std::size_t split(std::size_t lo, std::size_t hi) {
    if (hi <= lo) return lo;
    std::size_t a = lo + uniform(hi - lo + 1);
    std::size_t b = lo + uniform(hi - lo + 1);
    return std::min(a, b);
  }

  template <class T>
  T pick(const std::vector<std::pair<T, unsigned>>& options) {
    unsigned total = 0;
    for (const auto& [opt, weight] : options) total += weight;
    if (total == 0) return options.front().first;
    unsigned r = static_cast<unsigned>(uniform(total));
    for (const auto& [opt, weight] : options) {
      if (r < weight) return opt;
      r -= weight;
    }
    return options.back().first;
  }

  std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::string fresh() { return "x" + std::to_string(counter_++); }

  std::mt19937_64 rng_;
  GeneratorWeights w_;
  unsigned counter_ = 0;
};

}  // namespace

Generated generateWellTyped(std::uint64_t seed, std::size_t sizeBudget, const GeneratorWeights& weights) {
  if (sizeBudget == 0) throw GenerationFailed("size budget must be at least 1");
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::mt19937_64 goalRng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(attempt));
    std::vector<Type> goals;
    for (const Type& t : ground()) {
      if (sizeBudget >= minSize(t)) goals.push_back(t);
    }
    // Half the programs aim for Unit, the only goal a send can produce.
    const std::size_t pickGoal = std::uniform_int_distribution<std::size_t>(0, 2 * goals.size() - 1)(goalRng);
    const Type goal = pickGoal < goals.size() ? goals[pickGoal] : Type::unit();
    try {
      Generator g(goalRng(), weights);
      Expr e = g.gen(TypeEnv{}, goal, sizeBudget);
      TypeResult t = typecheck(TypeEnv{}, e);
      if (t && t.type() == goal && size(e) <= sizeBudget) return Generated{e, goal};
    } catch (const GenerationFailed&) {
    }
  }
  throw GenerationFailed("no well-typed term after " + std::to_string(kAttempts) + " attempts (seed " +
                         std::to_string(seed) + ")");
}

}  // namespace bestow::calculus
