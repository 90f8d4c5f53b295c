// qrigid: JSON batch interface to the library.
//   exit 0  success
//   exit 1  a checked property failed (report still written)
//   exit 2  malformed input, unknown command or profile
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"

using namespace qrigid;

namespace {

void add_flag(CLI::App* leaf, const std::string& name, cli::JobConfig& job) {
  static const std::map<std::string, std::pair<std::string cli::JobConfig::*, const char*>> text = {
      {"type", {&cli::JobConfig::type, "root system type, e.g. A2"}},
      {"word", {&cli::JobConfig::word, "reduced word, 1-based letters: 1,2,1"}},
      {"coweight", {&cli::JobConfig::coweight, "coweight coordinates: 1,1"}},
      {"twist", {&cli::JobConfig::twist, "r(a_i,a_j) for i<j row by row: r1,q^-1*r2"}},
      {"ray", {&cli::JobConfig::ray, "ray generator: 1,0,1"}},
      {"exp", {&cli::JobConfig::exp, "exponent vector: 1,1,1"}},
      {"c", {&cli::JobConfig::c, "scalar, e.g. 1/2 or q^-1+r1"}},
      {"degrees", {&cli::JobConfig::degrees, "degree vector (default all 1)"}},
      {"convention", {&cli::JobConfig::convention, "from-zero or from-one"}},
      {"profile", {&cli::JobConfig::profile, "smoke or full"}},
  };
  if (name == "height") {
    leaf->add_option("--height", job.height, "maximal height");
  } else if (name == "bound") {
    leaf->add_option("--bound", job.bound, "lambda-degree up to which the images are known");
  } else {
    auto [member, help] = text.at(name);
    leaf->add_option("--" + name, job.*member, help);
  }
}

int write_report(const Json& report, const std::string& out) {
  std::string text = report.dump();
  if (out.empty()) {
    std::cout << text << '\n';
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "qrigid: cannot write " << out << '\n';
    return 2;
  }
  f << text << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrigid: quantum tori, unipotent automorphisms, U_q^- and deleting derivations"};
  app.require_subcommand(1);
  app.fallthrough();
  cli::JobConfig job;
  app.add_option("--cutoff", job.cutoff, "degree cutoff M (default: QRIGID_CUTOFF or 12)");
  app.add_option("--out", job.out, "write the JSON report to this file");

  const cli::CommandInfo* chosen = nullptr;
  std::map<std::string, CLI::App*> groups;
  for (const auto& info : cli::commands()) {
    auto& g = groups[info.group];
    if (!g) {
      g = app.add_subcommand(info.group);
      g->require_subcommand(1);
      g->fallthrough();
    }
    auto* leaf = g->add_subcommand(info.command, info.summary);
    leaf->fallthrough();
    for (const auto& f : info.flags) add_flag(leaf, f, job);
    if (info.max_inputs > 0)
      leaf->add_option("inputs", job.inputs, "JSON input files")->expected(info.min_inputs, info.max_inputs)->required();
    leaf->callback([&chosen, &info] { chosen = &info; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qrigid: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (job.cutoff && *job.cutoff < 1) {
    std::cerr << "qrigid: --cutoff must be at least 1\n";
    return 2;
  }

  try {
    auto result = chosen->run(job);
    int w = write_report(result.report, job.out);
    return w ? w : result.exit_code;
  } catch (const InputError& e) {
    std::cerr << "qrigid: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const ScalarError& e) {
    std::cerr << "qrigid: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "qrigid: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    // domain failures: braiding violations, kernel rays, obstructions, non-nilpotent derivations
    std::cerr << "qrigid: " << e.what() << '\n';
    return 1;
  }
}
