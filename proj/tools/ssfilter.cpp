// ssfilter: E1/E2 pages and Betti tables of semi-simplicially filtered families.

#include <fstream>
#include <sstream>
#include <iostream>

#include <CLI11.hpp>

#include "ssfilter/cli.hpp"
#include "ssfilter/errors.hpp"

namespace {

using ssfilter::JobConfig;

struct Flags {
  std::string config_file;
  std::string family;
  int n = 0, g = 0, r = 0, m = 0;
  std::string betti;
  std::string convention;
  std::string format;
  std::string artifacts;
  std::string out;
  bool labels = false;
  bool reverse_order = false;
  int fault_face = 0;
  int pmax = 10;
  std::string families;
};

void add_job_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "key = value config file (flags override it)");
  cmd->add_option("--family", f.family, "uconf-plane | uconf-general | tuples | pencils-p1 | pencils-curve");
  cmd->add_option("-n,--n", f.n, "degree n");
  cmd->add_option("-g,--genus", f.g, "genus g (pencils-curve)");
  cmd->add_option("-r,--r", f.r, "number of polynomials r (tuples)");
  cmd->add_option("-m,--m", f.m, "Grassmannian rank minus one (pencils-p1)");
  cmd->add_option("--betti", f.betti, "Betti table of X as degree:rank,... (uconf-general)");
  cmd->add_option("--convention", f.convention, "compact-support | ordinary (uconf-general)");
}

std::set<std::string> split_set(const std::string& s) {
  std::set<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

JobConfig assemble(const CLI::App* cmd, const Flags& f) {
  JobConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw ssfilter::ConfigError("cannot read config file " + f.config_file);
    c = ssfilter::parse_config(in);
  }
  auto given = [&](const char* name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--family")) c.family = f.family;
  if (given("--n")) c.n = f.n;
  if (given("--genus")) c.g = f.g;
  if (given("--r")) c.r = f.r;
  if (given("--m")) c.m = f.m;
  if (given("--convention")) c.convention = f.convention;
  if (given("--betti")) {
    c.betti = {};
    for (const auto& item : split_set(f.betti)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ssfilter::ConfigError("--betti expects degree:rank pairs");
      try {
        c.betti.add(std::stoi(item.substr(0, colon)), std::stoul(item.substr(colon + 1)));
      } catch (const std::exception&) {
        throw ssfilter::ConfigError("--betti expects integer degree:rank pairs, got '" + item + "'");
      }
    }
  }
  if (given("--format")) c.format = f.format;
  if (given("--artifacts")) c.artifacts = split_set(f.artifacts);
  if (given("--out")) c.out = f.out;
  if (given("--labels")) c.labels = true;
  if (given("--reverse-order")) c.reverse_order = true;
  if (given("--inject-fault")) c.fault_face = f.fault_face;
  if (given("--pmax")) c.pmax = f.pmax;
  if (given("--families")) c.families = split_set(f.families);
  return c;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw ssfilter::ConfigError("cannot write " + out);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral sequences of semi-simplicially filtered families over Q"};
  app.require_subcommand(1);
  Flags f;

  auto* compute = app.add_subcommand("compute", "build E1/E2 pages and Betti tables");
  add_job_options(compute, f);
  compute->add_option("--artifacts", f.artifacts, "comma list of e1,e2,betti,checks");
  compute->add_option("--format", f.format, "text | json | csv");
  compute->add_option("--out", f.out, "write the report here instead of stdout");
  compute->add_flag("--labels", f.labels, "attach E1 basis labels");
  compute->add_flag("--reverse-order", f.reverse_order, "enumerate bases in reverse order");
  compute->add_option("--inject-fault", f.fault_face, "flip the sign of one face (testing only)")->group("");

  auto* checkcmd = app.add_subcommand("check", "run the structural checks");
  checkcmd->add_option("--config", f.config_file, "key = value config file (flags override it)");
  checkcmd->add_option("--pmax", f.pmax, "largest simplex for the stalk check");
  checkcmd->add_option("--families", f.families, "comma list of families or 'all'");
  checkcmd->add_option("--format", f.format, "text | json | csv");
  checkcmd->add_option("--out", f.out, "write the report here instead of stdout");
  checkcmd->add_option("--inject-fault", f.fault_face, "flip the sign of one face (testing only)")->group("");

  auto* explaincmd = app.add_subcommand("explain", "print the differential template and conventions");
  add_job_options(explaincmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compute->parsed()) {
      const JobConfig c = assemble(compute, f);
      const auto report = ssfilter::run(c);
      emit(ssfilter::render(report, c.format), c.out);
      return report.all_checks_passed() ? 0 : 4;
    }
    if (checkcmd->parsed()) {
      const JobConfig c = assemble(checkcmd, f);
      if (c.format != "text" && c.format != "json" && c.format != "csv")
        throw ssfilter::ConfigError("unknown format '" + c.format + "'");
      const auto report = ssfilter::check(c);
      emit(ssfilter::render(report, c.format), c.out);
      return report.all_checks_passed() ? 0 : 4;
    }
    const JobConfig c = assemble(explaincmd, f);
    std::cout << ssfilter::explain(c);
    return 0;
  } catch (const ssfilter::Error& e) {
    std::cerr << "ssfilter: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "ssfilter: internal error: " << e.what() << "\n";
    return 4;
  }
}
