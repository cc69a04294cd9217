#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <vker/bisim.hpp>
#include <vker/correct.hpp>
#include <vker/dynamics.hpp>
#include <vker/gen.hpp>
#include <vker/translate.hpp>

using namespace vker;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;    // incorrect net, stuck reduction
constexpr int kUsage = 2;     // bad flags or unreadable input
constexpr int kInternal = 3;  // theorem violation: an implementation bug

std::string slurp(const std::string& input) {
  if (input == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream f(input);
  if (f.good()) {
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
  }
  return input;  // literal term/net text
}

int error_record(const std::string& kind, const std::string& detail, int code) {
  ordered_json j;
  j["error"] = kind;
  j["detail"] = detail;
  std::cerr << j.dump() << "\n";
  return code;
}

std::set<std::string> parse_weakenings(const std::string& csv) {
  std::set<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "leftmost") return Strategy::Leftmost;
  if (s == "rightmost") return Strategy::Rightmost;
  if (s == "random") return Strategy::Random;
  throw CLI::ValidationError("--strategy", "must be leftmost, rightmost or random");
}

ordered_json term_to_json(const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return {{"var", t->name}};
    case TermKind::Abs: return {{"abs", t->name}, {"body", term_to_json(t->left)}};
    case TermKind::App: return {{"app", term_to_json(t->left)}, {"arg", term_to_json(t->right)}};
    case TermKind::Sub:
      return {{"body", term_to_json(t->left)}, {"sub", t->name}, {"def", term_to_json(t->right)}};
  }
  return {};
}

struct Options {
  std::string input;
  std::string weakenings;
  std::string strategy = "leftmost";
  std::string format = "text";
  std::uint64_t fuel = 1000;
  std::uint64_t seed = 0;
  // fuzz only
  std::uint64_t count = 100;
  int size = 25;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--input", opt.input, "file, - for stdin, or literal text")->required();
  cmd->add_option("--weakenings", opt.weakenings, "comma-separated variable names");
  cmd->add_option("--strategy", opt.strategy, "leftmost|rightmost|random");
  cmd->add_option("--fuel", opt.fuel, "maximum number of steps");
  cmd->add_option("--seed", opt.seed, "seed for random choices");
  cmd->add_option("--format", opt.format, "json|text");
}

Term read_term(const Options& opt) { return well_name(parse_term(slurp(opt.input))); }
Net read_net(const Options& opt) { return deserialize(slurp(opt.input)); }

int cmd_parse(const Options& opt) {
  Term t = parse_term(slurp(opt.input));
  if (opt.format == "json")
    std::cout << term_to_json(t).dump(2) << "\n";
  else
    std::cout << show(t) << "\n";
  return kOk;
}

int cmd_translate(const Options& opt) {
  Net g = translate(read_term(opt), parse_weakenings(opt.weakenings));
  std::cout << serialize(g) << "\n";
  return kOk;
}

int cmd_check(const Options& opt) {
  Net g = read_net(opt);
  ValidationReport v = validate_net(g);
  CorrectnessReport c = v.ok() ? check_correct(g) : CorrectnessReport{};
  bool ok = v.ok() && c.ok();
  if (opt.format == "json") {
    ordered_json j;
    j["valid"] = v.ok();
    j["correct"] = ok;
    j["violations"] = ordered_json::array();
    for (const auto& viol : v.violations)
      j["violations"].push_back({{"condition", viol.condition}, {"detail", viol.detail}});
    for (const auto& viol : c.violations)
      j["violations"].push_back({{"condition", viol.condition}, {"detail", viol.detail}});
    std::cout << j.dump(2) << "\n";
  } else {
    if (!v.ok()) std::cout << v.to_string();
    else std::cout << c.to_string() << "\n";
  }
  return ok ? kOk : kDomain;
}

int cmd_reduce_term(const Options& opt) {
  Term t = read_term(opt);
  Strategy strat = parse_strategy(opt.strategy);
  std::mt19937_64 rng(opt.seed);
  std::uint64_t steps = 0;
  for (; steps < opt.fuel; steps++) {
    auto redexes = find_redexes(t);
    if (redexes.empty()) break;
    std::size_t pick = strat == Strategy::Leftmost    ? 0
                       : strat == Strategy::Rightmost ? redexes.size() - 1
                       : rng() % redexes.size();
    t = step(t, redexes[pick]);
    std::cout << (redexes[pick].kind == StepKind::M ? "m " : "e ") << show(t) << "\n";
  }
  bool normal = find_redexes(t).empty();
  std::cout << (normal ? "normal " : "fuel-exhausted ") << show(t) << "\n";
  return kOk;
}

int cmd_reduce_net(const Options& opt) {
  Net g = read_net(opt);
  {
    ValidationReport v = validate_net(g);
    if (!v.ok()) return error_record("invalid-net", v.to_string(), kDomain);
  }
  std::mt19937_64 rng(opt.seed);
  Strategy strat = parse_strategy(opt.strategy);
  for (std::uint64_t i = 0; i < opt.fuel; i++) {
    auto cuts = find_cuts(g);
    if (cuts.empty()) break;
    std::size_t pick = strat == Strategy::Leftmost    ? 0
                       : strat == Strategy::Rightmost ? cuts.size() - 1
                       : rng() % cuts.size();
    std::cout << (cuts[pick].kind == StepKind::M ? "m " : "e ") << cuts[pick].node << "\n";
    g = step_net(g, cuts[pick]);
  }
  std::cout << serialize(g) << "\n";
  return kOk;
}

int cmd_readback(const Options& opt) {
  Net g = read_net(opt);
  Readback rb = sequentialize(g);
  if (opt.format == "json") {
    ordered_json j;
    j["term"] = show(rb.term);
    j["weakenings"] = rb.weakenings;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << show(rb.term) << "\n";
    for (const auto& x : rb.weakenings) std::cout << "weakened " << x << "\n";
  }
  return kOk;
}

int cmd_cosim(const Options& opt) {
  Term t = read_term(opt);
  CosimResult res = cosimulate(t, parse_weakenings(opt.weakenings), parse_strategy(opt.strategy),
                               opt.fuel, opt.seed, &std::cout);
  std::cout << (res.normal ? "normal " : "fuel-exhausted ") << show(res.term) << " (m="
            << res.m_steps << " e=" << res.e_steps << ")\n";
  return kOk;
}

int cmd_fuzz(const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  GenOptions gen;
  gen.size = opt.size;
  std::set<std::string> X = parse_weakenings(opt.weakenings);
  for (std::uint64_t i = 0; i < opt.count; i++) {
    Term t = gen_term(rng, gen);
    Net g = translate(t, X);
    ValidationReport v = validate_net(g);
    if (!v.ok()) return error_record("fuzz-invalid", show(t) + "\n" + v.to_string(), kInternal);
    CorrectnessReport c = check_correct(g);
    if (!c.ok()) return error_record("fuzz-incorrect", show(t) + "\n" + c.to_string(), kInternal);
    Readback rb = sequentialize(g);
    if (!vo_equiv(t, rb.term))
      return error_record("fuzz-roundtrip", show(t) + " vs " + show(rb.term), kInternal);
    cosimulate(t, X, Strategy::Random, opt.fuel, opt.seed + i);
  }
  std::cout << "ok " << opt.count << "\n";
  return kOk;
}

int cmd_dot(const Options& opt) {
  std::string text = slurp(opt.input);
  try {
    std::cout << export_dot(deserialize(text));
  } catch (const FormatError&) {
    std::cout << export_dot(translate(well_name(parse_term(text)), parse_weakenings(opt.weakenings)));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lambda-vker terms and their proof nets"};
  app.require_subcommand(1);
  Options opt;
  std::map<std::string, std::function<int(const Options&)>> handlers = {
      {"parse", cmd_parse},           {"translate", cmd_translate},
      {"check", cmd_check},           {"reduce-term", cmd_reduce_term},
      {"reduce-net", cmd_reduce_net}, {"readback", cmd_readback},
      {"cosim", cmd_cosim},           {"fuzz", cmd_fuzz},
      {"dot", cmd_dot}};
  add_common(app.add_subcommand("parse", "parse a term and print its AST"), opt);
  add_common(app.add_subcommand("translate", "translate a term to a net"), opt);
  add_common(app.add_subcommand("check", "validate a net and check correctness"), opt);
  add_common(app.add_subcommand("reduce-term", "reduce a term step by step"), opt);
  add_common(app.add_subcommand("reduce-net", "eliminate cuts step by step"), opt);
  add_common(app.add_subcommand("readback", "sequentialize a net into a term"), opt);
  add_common(app.add_subcommand("cosim", "co-simulate a term and its net"), opt);
  {
    CLI::App* fuzz = app.add_subcommand("fuzz", "random co-simulations and round-trips");
    fuzz->add_option("--count", opt.count, "number of random terms");
    fuzz->add_option("--size", opt.size, "approximate term size");
    opt.input = "unused";
    add_common(fuzz, opt);
    fuzz->get_option("--input")->required(false);
  }
  add_common(app.add_subcommand("dot", "emit DOT for a net (or a term's translation)"), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  try {
    return handlers.at(app.get_subcommands().front()->get_name())(opt);
  } catch (const SyntaxError& e) {
    return error_record("syntax", e.what(), kUsage);
  } catch (const IteratedApplication& e) {
    return error_record("iterated-application", e.what(), kUsage);
  } catch (const FormatError& e) {
    return error_record("format", e.what(), kUsage);
  } catch (const NotCorrect& e) {
    return error_record("not-correct", e.what(), kDomain);
  } catch (const BijectionMismatch& e) {
    return error_record("bijection-mismatch", e.what(), kInternal);
  } catch (const DivergenceDetected& e) {
    return error_record("divergence", e.what(), kInternal);
  } catch (const std::exception& e) {
    return error_record("error", e.what(), kInternal);
  }
}
