#include "sqlp/session.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace sqlp {

// ---------------------------------------------------------------- session

void Session::load_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  load_text(buffer.str());
}

void Session::load_text(std::string_view text) {
  Program program = parse_program(text);
  SimilarityRelation relation = SimilarityRelation::close(
      program.similarity_generators, program.domain, program.signature);
  TransformedProgram transformed = eliminate(program, relation, full_sim_);
  program_ = std::move(program);
  relation_ = std::move(relation);
  transformed_ = std::move(transformed);
  loaded_ = true;
}

void Session::set_full_sim_clauses(bool on) {
  full_sim_ = on;
  if (loaded_) transformed_ = eliminate(program_, relation_, full_sim_);
}

void Session::require_loaded() const {
  if (!loaded_) throw error("no program loaded");
}

const Program& Session::program() const {
  require_loaded();
  return program_;
}

const SimilarityRelation& Session::relation() const {
  require_loaded();
  return relation_;
}

const TransformedProgram& Session::transformed() const {
  require_loaded();
  return transformed_;
}

Goal Session::parse_goal_text(const std::string& goal_text) const {
  require_loaded();
  return parse_goal(goal_text, program_);
}

SolveResult Session::solve_goal(const std::string& goal_text,
                                const AnswerSink& sink) const {
  require_loaded();
  Goal goal = parse_goal(goal_text, program_);
  return solve(transformed_, goal, options_, sink);
}

ModelTable Session::model(int term_depth, int max_rounds) const {
  require_loaded();
  return fixpoint_model(program_, relation_, term_depth, max_rounds);
}

AxiomReport Session::check_domain_axioms(int random_triples) const {
  require_loaded();
  const Domain& dom = program_.domain;
  AxiomReport report = check_axioms(dom, grid_samples(dom));
  std::mt19937 rng(0x5117);
  std::vector<std::array<Value, 3>> triples;
  triples.reserve(random_triples);
  for (int i = 0; i < random_triples; ++i)
    triples.push_back({random_value(dom, rng), random_value(dom, rng),
                       random_value(dom, rng)});
  AxiomReport sweep = check_axiom_triples(dom, triples);
  report.violations.insert(report.violations.end(), sweep.violations.begin(),
                           sweep.violations.end());
  return report;
}

// ------------------------------------------------------------------ batch

namespace {

void print_axiom_report(const AxiomReport& report, const Domain& dom,
                        std::ostream& out) {
  if (report.ok()) {
    out << "domain " << dom.name() << ": all axioms hold\n";
    return;
  }
  out << "domain " << dom.name() << ": " << report.violations.size()
      << " violation(s)\n";
  size_t shown = 0;
  for (const AxiomViolation& v : report.violations) {
    if (++shown > 8) {
      out << "  ...\n";
      break;
    }
    out << "  " << v.axiom << " at (";
    for (size_t i = 0; i < v.witness.size(); ++i)
      out << (i ? ", " : "") << v.witness[i].str();
    out << ")\n";
  }
}

int exit_usage(const CLI::App& app, const CLI::ParseError& e, std::ostream& out,
               std::ostream& err) {
  if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
    out << app.help();
    return 0;
  }
  err << "error: " << e.what() << "\n";
  return 1;
}

} // namespace

int run_batch(const std::vector<std::string>& args, std::istream& in,
              std::ostream& out, std::ostream& err) {
  CLI::App app{"similarity-based qualified logic programming engine"};
  app.require_subcommand(1);

  std::string file;
  std::string goal_text;
  int max_depth = 512;
  int max_answers = -1;
  int model_depth = 3;
  int model_rounds = 256;
  bool no_prune = false;
  bool full_sim = false;
  bool provenance = false;
  int expect_answers = -1;

  auto* run = app.add_subcommand("run", "load a program and solve a goal");
  run->add_option("file", file)->required();
  run->add_option("--goal", goal_text, "goal, e.g. \"pet(A)#W | W >= 0.50\"");
  run->add_option("--max-depth", max_depth, "resolution-step budget");
  run->add_option("--max-answers", max_answers, "stop after N answers");
  run->add_flag("--no-prune", no_prune, "disable threshold pruning");
  run->add_flag("--full-sim-clauses", full_sim,
                "emit similarity clauses even for left-linear programs");
  run->add_option("--expect-answers", expect_answers,
                  "exit 3 unless exactly N answers are found");

  auto* transform = app.add_subcommand("transform", "print the transformed program");
  transform->add_option("file", file)->required();
  transform->add_flag("--full-sim-clauses", full_sim,
                      "emit similarity clauses even for left-linear programs");
  transform->add_flag("--provenance", provenance,
                      "comment each clause with its origin");

  auto* model = app.add_subcommand("model", "dump the bounded least-model table");
  model->add_option("file", file)->required();
  model->add_option("--max-depth", model_depth, "ground-term depth bound");
  model->add_option("--max-rounds", model_rounds, "iteration bound");

  auto* check = app.add_subcommand("check", "check the domain axioms");
  check->add_option("file", file)->required();

  auto* repl = app.add_subcommand("repl", "interactive session");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return exit_usage(app, e, out, err);
  }

  try {
    if (repl->parsed()) return repl_loop(in, out, err);

    Session session;
    session.set_full_sim_clauses(full_sim);
    session.load_file(file);
    session.options().max_depth = max_depth;
    session.options().prune = !no_prune;
    if (max_answers >= 0)
      session.options().max_answers = static_cast<std::size_t>(max_answers);

    if (run->parsed()) {
      if (goal_text.empty()) {
        const Program& p = session.program();
        out << "loaded " << file << ": " << p.clauses.size() << " clauses, "
            << session.relation().table().size() << " similarity entries\n";
        return 0;
      }
      Goal goal = session.parse_goal_text(goal_text);
      SolveResult result =
          solve(session.transformed(), goal, session.options(),
                [&](const Answer& answer) {
                  out << format_answer(answer, goal) << "\n";
                  return true;
                });
      out << format_summary(result) << "\n";
      if (expect_answers >= 0 &&
          result.answers.size() != static_cast<size_t>(expect_answers)) {
        err << "expected " << expect_answers << " answers, found "
            << result.answers.size() << "\n";
        return 3;
      }
      return 0;
    }
    if (transform->parsed()) {
      out << transform_listing(session.transformed(), provenance);
      return 0;
    }
    if (model->parsed()) {
      ModelTable table = session.model(model_depth, model_rounds);
      table.dump(out);
      if (!table.saturated())
        out << "% not saturated after " << table.rounds_used() << " rounds\n";
      return 0;
    }
    if (check->parsed()) {
      AxiomReport report = session.check_domain_axioms();
      print_axiom_report(report, session.program().domain, out);
      if (!session.program().domain.strict()) {
        AxiomReport strict = check_axioms(session.program().domain,
                                          grid_samples(session.program().domain),
                                          AxiomSet::Strict);
        if (!strict.ok()) {
          const AxiomViolation& v = strict.violations.front();
          out << "note: strict 2(d) fails on this quasi domain, e.g. at (";
          for (size_t i = 0; i < v.witness.size(); ++i)
            out << (i ? ", " : "") << v.witness[i].str();
          out << ")\n";
        }
      }
      return report.ok() ? 0 : 2;
    }
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

// ------------------------------------------------------------------- repl

namespace {

const char kReplHelp[] =
    "commands:\n"
    "  :load <path>        load a .sqlp program\n"
    "  :transform          print the transformed program\n"
    "  :solve <goal>       solve, stepping through answers\n"
    "  :model [depth]      dump the bounded least-model table\n"
    "  :check-axioms       check the domain axioms\n"
    "  :set depth <n>      set the resolution-step budget\n"
    "  :set answers <n>    cap the number of answers\n"
    "  :quit               leave\n";

} // namespace

int repl_loop(std::istream& in, std::ostream& out, std::ostream& err) {
  Session session;
  std::string line;
  for (;;) {
    out << (session.has_program()
                ? "sqlp(" + session.program().domain.name() + ")> "
                : "sqlp> ");
    out.flush();
    if (!std::getline(in, line)) break;
    out << "\n"; // input is not echoed; keep command output at column 0
    size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);

    std::string command = line.substr(0, line.find(' '));
    std::string rest =
        line.size() > command.size() ? line.substr(command.size() + 1) : "";
    b = rest.find_first_not_of(" \t");
    rest = b == std::string::npos ? "" : rest.substr(b);

    try {
      if (command == ":quit" || command == ":q") {
        break;
      } else if (command == ":load") {
        if (rest.empty()) throw error("usage: :load <path>");
        session.load_file(rest);
        out << "loaded " << rest << ": " << session.program().clauses.size()
            << " clauses, " << session.relation().table().size()
            << " similarity entries\n";
      } else if (command == ":transform") {
        out << transform_listing(session.transformed(), false);
      } else if (command == ":solve") {
        if (rest.empty()) throw error("usage: :solve <goal>");
        Goal goal = session.parse_goal_text(rest);
        size_t shown = 0;
        bool stopped = false;
        SolveResult result =
            solve(session.transformed(), goal, session.options(),
                  [&](const Answer& answer) {
                    out << format_answer(answer, goal) << "\n";
                    out << "sol." << ++shown << ", more solutions (y/n)? ";
                    out.flush();
                    std::string reply;
                    bool more = std::getline(in, reply) &&
                                (reply.empty() || (reply[0] != 'n' && reply[0] != 'N'));
                    out << "\n";
                    if (!more) stopped = true;
                    return more;
                  });
        if (!stopped) {
          out << "no\n";
          out << format_summary(result) << "\n";
        }
      } else if (command == ":model") {
        int depth = 3;
        if (!rest.empty()) depth = std::stoi(rest);
        ModelTable table = session.model(depth);
        table.dump(out);
        if (!table.saturated())
          out << "% not saturated after " << table.rounds_used() << " rounds\n";
      } else if (command == ":check-axioms") {
        AxiomReport report = session.check_domain_axioms();
        print_axiom_report(report, session.program().domain, out);
      } else if (command == ":set") {
        std::istringstream iss(rest);
        std::string what;
        long n = 0;
        if (!(iss >> what >> n)) throw error("usage: :set depth|answers <n>");
        if (what == "depth")
          session.options().max_depth = static_cast<int>(n);
        else if (what == "answers")
          session.options().max_answers = static_cast<std::size_t>(n);
        else
          throw error("usage: :set depth|answers <n>");
      } else {
        out << kReplHelp;
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
    }
  }
  return 0;
}

} // namespace sqlp
