#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "prodcert/error.hpp"
#include "prodcert/expr.hpp"
#include "prodcert/report.hpp"

namespace {

struct Args {
  std::string spec;
  long prefix = 0;
  std::string target_radius = "1e-6";
  long precision = prodcert::kDefaultPrecision;
  int d_max = 0;
  std::string format = "text";
  std::string out;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("spec", a.spec, "spec file (JSON)")->required();
  cmd->add_option("--prefix", a.prefix, "prefix length N (check) or term cap (eval)")->check(CLI::PositiveNumber);
  cmd->add_option("--target-radius", a.target_radius, "enclosure radius to reach, e.g. 1e-30");
  cmd->add_option("--precision", a.precision, "working precision in bits")->check(CLI::Range(16L, 1L << 24));
  cmd->add_option("--d-max", a.d_max, "check D = 1..d_max")->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", a.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  cmd->add_option("--out", a.out, "write the report here instead of standard output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prodcert: certificates, enclosures and lemma checks for infinite products"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check", "check the hypotheses of the degree criteria on a prefix"},
      {"eval", "enclose the product to a target radius"},
      {"lemmas", "verify the lemma cases of a lemma spec"},
      {"heights", "height, house and Mahler measure tables with inequality checks"},
      {"report", "every analysis that applies to the input"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto format = args.format == "structured" ? prodcert::ReportFormat::structured : prodcert::ReportFormat::text;

  prodcert::RunResult result;
  try {
    prodcert::RunOptions options;
    if (args.prefix > 0) options.prefix = args.prefix;
    options.target_radius = prodcert::parse_rational(args.target_radius);
    if (options.target_radius <= 0) {
      throw prodcert::Error(prodcert::ErrorKind::InvalidArgument, "cli", "--target-radius must be positive");
    }
    options.precision = static_cast<prodcert::Precision>(args.precision);
    options.d_max = args.d_max;
    result = prodcert::run_command(command, prodcert::load_spec(args.spec), options);
  } catch (const std::exception& e) {
    result = prodcert::error_result(command, args.spec, e);
  }

  const std::string text = prodcert::render(result.report, format);
  if (args.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(args.out);
    if (!out) {
      std::cerr << "cannot write " << args.out << "\n";
      return 2;
    }
    out << text;
  }
  if (result.report.contains("error")) {
    std::cerr << "prodcert: " << result.report["error"]["kind"].get<std::string>() << ": "
              << result.report["error"]["message"].get<std::string>() << " (" << result.report["error"]["where"].get<std::string>() << ")\n";
  }
  return result.exit_code;
}
