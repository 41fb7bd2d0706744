#include "chainlab/cli_app.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chainlab/chainspec.hpp"
#include "chainlab/checks.hpp"
#include "chainlab/report.hpp"
#include "chainlab/verify_suite.hpp"

namespace chainlab {

namespace {

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file '" + path + "'");
  out << text;
}

std::string render(const std::vector<ParamReport>& reps,
                   const std::string& format) {
  if (format == "csv") return reports_to_csv(reps);
  if (reps.size() == 1) return report_to_json(reps.front());
  return reports_to_json(reps);
}

void print_check_lines(const SuiteResult& r, bool verbose) {
  for (const auto& c : r.checks) {
    if (!verbose && c.status != CheckStatus::violated) continue;
    std::printf("%-9s %-28s %-34s", to_string(c.status), c.name.c_str(),
                r.chain.c_str());
    if (c.status == CheckStatus::skipped)
      std::printf(" %s\n", c.note.c_str());
    else
      std::printf(" lhs=%s rhs=%s slack=%s %s\n", format_decimal(c.lhs).c_str(),
                  format_decimal(c.rhs).c_str(), format_decimal(c.slack).c_str(),
                  c.note.c_str());
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"laboratory for mixing and hitting parameters of finite chains"};
  app.require_subcommand(1);

  std::string chain_arg, format = "json", output;
  AnalyzeOptions opt;
  std::string family, param = "n";
  Index from = 0, to = 0, step = 1;
  bool corpus = false, verbose = false, no_checks = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--epsilon", opt.epsilon, "tv threshold level")
        ->check(CLI::Range(1e-9, 0.999999));
    cmd->add_option("--sep-level", opt.sep_level, "separation threshold level")
        ->check(CLI::Range(1e-9, 0.999999));
    cmd->add_option("--alpha", opt.alpha, "stationary mass level for set hitting")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--horizon", opt.horizon, "threshold search horizon");
    cmd->add_option("--tol", opt.tol, "verification tolerance");
    cmd->add_option("--seed", opt.seed, "seed for randomized components");
    cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", output, "write to a file instead of stdout");
  };

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "full parameter report for one chain");
  analyze_cmd->add_option("chain", chain_arg,
                          "shorthand, inline JSON, or @file")
      ->required();
  analyze_cmd->add_flag("--no-checks", no_checks, "omit the inequality battery");
  add_common(analyze_cmd);

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run the inequality battery; exit 2 on any violation");
  verify_cmd->add_option("chain", chain_arg,
                         "shorthand, inline JSON, or @file (default: corpus)");
  verify_cmd->add_flag("--corpus", corpus, "run over the built-in corpus");
  verify_cmd->add_flag("--verbose", verbose, "print every check, not just violations");
  add_common(verify_cmd);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "parameter reports across one family, csv by default");
  sweep_cmd->add_option("--family", family, "generator family name")->required();
  sweep_cmd->add_option("--param", param, "swept integer parameter");
  sweep_cmd->add_option("--from", from, "first value")->required();
  sweep_cmd->add_option("--to", to, "last value")->required();
  sweep_cmd->add_option("--step", step, "increment");
  add_common(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze_cmd->parsed()) {
      opt.with_checks = !no_checks;
      const ChainDescription d = resolve_chain_argument(chain_arg);
      const ParamReport rep = analyze(d.chain, d.name, opt);
      write_out(render({rep}, format), output);
      return 0;
    }

    if (verify_cmd->parsed()) {
      VerifyOptions vopt;
      vopt.epsilon = opt.epsilon;
      vopt.sep_level = opt.sep_level;
      vopt.alpha = opt.alpha;
      vopt.horizon = opt.horizon;
      std::size_t violations = 0;
      std::vector<ParamReport> rows;
      auto absorb = [&](const SuiteResult& r) {
        violations += count_violations(r.checks);
        print_check_lines(r, verbose);
        if (!output.empty() || format == "csv") {
          ParamReport rep;
          rep.chain = r.chain;
          rep.inequalities = r.checks;
          rows.push_back(std::move(rep));
        }
      };
      if (corpus || chain_arg.empty()) {
        verify_corpus(vopt, absorb);
      } else {
        const ChainDescription d = resolve_chain_argument(chain_arg);
        SuiteResult r;
        r.chain = d.name;
        r.checks = verify_chain(d.chain, vopt);
        absorb(r);
      }
      if (!rows.empty() && (format == "csv" || !output.empty()))
        write_out(format == "csv" ? reports_to_csv(rows) : reports_to_json(rows),
                  output);
      std::printf("violations: %zu\n", violations);
      return violations == 0 ? 0 : 2;
    }

    if (sweep_cmd->parsed()) {
      if (format == "json" && sweep_cmd->count("--format") == 0) format = "csv";
      const auto reps = sweep_family(family, param, from, to, step, opt);
      write_out(render(reps, format), output);
      return 0;
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ChainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace chainlab
