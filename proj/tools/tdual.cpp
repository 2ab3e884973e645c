// Command-line front end: enumerate parabolics, verify bundled or user specs,
// list restrictions and assemble reports.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "tdual/io/bundled.hpp"
#include "tdual/io/json.hpp"
#include "tdual/io/report.hpp"
#include "tdual/verify/suites.hpp"

namespace {

using tdual::io::Json;

constexpr int kFailed = 1;
constexpr int kUsage = 2;

double default_tolerance() {
  if (const char* env = std::getenv("TDUAL_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
    throw tdual::ValidationError(std::string("TDUAL_TOL is not a positive number: '") + env + "'");
  }
  return 1e-9;
}

/// A path to a spec file, or the name of a bundled spec.
tdual::GroupSpec resolve_spec(const std::string& arg) {
  if (std::filesystem::exists(arg)) return tdual::io::load_spec(arg);
  for (auto& s : tdual::bundled::all())
    if (s.name == arg) return s;
  throw tdual::Error("no spec file or bundled spec named '" + arg + "'");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw tdual::Error("cannot write '" + path + "'");
  out << text;
}

int cmd_enumerate(int n, int max_n, const std::string& format) {
  if (n < 1 || n > max_n) {
    std::cerr << "enumerate: n must lie in [1, " << max_n << "]\n";
    return kUsage;
  }
  const auto parabolics = tdual::enumerate_parabolics(n);
  const auto classes = tdual::associate_classes(n);
  auto class_of = [&](const tdual::Composition& c) {
    for (std::size_t k = 0; k < classes.size(); ++k)
      if (classes[k].partition == c.multiset()) return k;
    return classes.size();
  };
  if (format == "json") {
    Json j;
    j["n"] = n;
    j["parabolics"] = Json::array();
    for (const auto& p : parabolics) {
      const auto w = tdual::weyl_group(p);
      j["parabolics"].push_back({{"levi", p.parts},
                                 {"class", class_of(p)},
                                 {"representative", classes[class_of(p)].representative.parts},
                                 {"weyl_order", w.order()}});
    }
    j["classes"] = classes.size();
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "n = " << n << ": " << parabolics.size() << " standard parabolics, " << classes.size()
            << " associate classes\n";
  std::cout << std::left << std::setw(18) << "levi" << std::setw(8) << "class" << std::setw(18) << "representative"
            << "|W|\n";
  for (const auto& p : parabolics) {
    const auto k = class_of(p);
    std::cout << std::setw(18) << p.str() << std::setw(8) << k << std::setw(18) << classes[k].representative.str()
              << tdual::weyl_group(p).order() << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& spec_arg, const std::string& suite, const tdual::verify::Options& opt,
               const std::string& format, const std::string& out) {
  const auto setting = tdual::build_setting(resolve_spec(spec_arg));
  const auto report = tdual::verify::run(setting, suite, opt);
  emit(format == "json" ? tdual::io::report_to_json(report).dump(2) + "\n" : tdual::io::report_to_text(report), out);
  return report.passed() ? 0 : kFailed;
}

int cmd_restrict(const std::string& spec_arg, const std::string& descriptor, const std::string& format) {
  const auto setting = tdual::build_setting(resolve_spec(spec_arg));
  const auto l = tdual::verify::restriction_listing(setting, descriptor);
  if (format == "json") {
    Json j;
    j["spec"] = setting.spec.name;
    j["representation"] = l.descriptor;
    j["dimension"] = l.dim;
    j["constituents"] = Json::array();
    for (const auto& e : l.constituents)
      j["constituents"].push_back({{"irrep", e.irrep}, {"dimension", e.rank}, {"multiplicity", e.multiplicity}});
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "Res " << l.descriptor << " = " << l.str() << "\n";
  for (const auto& e : l.constituents)
    std::cout << "  " << e.irrep << "  dimension " << e.rank << "  multiplicity " << e.multiplicity << "\n";
  std::cout << "total dimension " << l.dim << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& specs, const tdual::verify::Options& opt, const std::string& format,
               const std::string& out) {
  std::vector<tdual::Report> reports;
  for (const auto& s : specs) reports.push_back(tdual::verify::run(tdual::build_setting(resolve_spec(s)), "all", opt));
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (format == "json") {
    Json j;
    j["passed"] = ok;
    j["reports"] = Json::array();
    for (const auto& r : reports) j["reports"].push_back(tdual::io::report_to_json(r));
    emit(j.dump(2) + "\n", out);
  } else {
    std::string text;
    for (const auto& r : reports) text += tdual::io::report_to_text(r) + "\n";
    text += ok ? "REPORT PASSED\n" : "REPORT FAILED\n";
    emit(text, out);
  }
  return ok ? 0 : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tempered dual toolkit: parabolic induction and restriction on finite models"};
  app.require_subcommand(1);

  std::string format = "text";
  const std::vector<std::string> formats{"text", "json"};

  int n = 0, max_n = 8;
  auto* en = app.add_subcommand("enumerate", "Standard parabolics of GL(n), their associate classes and Weyl groups");
  en->add_option("n", n, "Rank")->required();
  en->add_option("--max", max_n, "Largest accepted n");
  en->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));

  std::string spec, suite = "all", out, descriptor;
  tdual::verify::Options opt;
  std::vector<std::string> specs;

  std::vector<std::string> suites{"all"};
  for (const auto& s : tdual::verify::suite_names()) suites.push_back(s);

  auto* ve = app.add_subcommand("verify", "Run verification suites on a spec");
  ve->add_option("spec", spec, "Spec file, or the name of a bundled spec")->required();
  ve->add_option("--suite", suite, "Suite to run")->check(CLI::IsMember(suites));
  ve->add_option("--seed", opt.seed, "Random seed");
  auto* ve_tol = ve->add_option("--tol", opt.tol, "Tolerance (default: TDUAL_TOL or 1e-9)");
  ve->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  ve->add_option("-o,--output", out, "Write the report to a file");

  auto* re = app.add_subcommand("restrict", "Decompose the restriction of a representation");
  re->add_option("spec", spec, "Spec file, or the name of a bundled spec")->required();
  re->add_option("representation", descriptor, "Descriptor such as PS0@1, PS1@0#1 or DS+@pt")->required();
  re->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));

  auto* rp = app.add_subcommand("report", "Run every suite on several specs and collect one report");
  rp->add_option("specs", specs, "Spec files or bundled names (default: all bundled specs)");
  rp->add_option("--seed", opt.seed, "Random seed");
  auto* rp_tol = rp->add_option("--tol", opt.tol, "Tolerance (default: TDUAL_TOL or 1e-9)");
  rp->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
  rp->add_option("-o,--output", out, "Write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    if (en->parsed()) return cmd_enumerate(n, max_n, format);
    if ((ve->parsed() && ve_tol->count() == 0) || (rp->parsed() && rp_tol->count() == 0)) opt.tol = default_tolerance();
    if (ve->parsed()) return cmd_verify(spec, suite, opt, format, out);
    if (re->parsed()) return cmd_restrict(spec, descriptor, format);
    if (rp->parsed()) {
      if (specs.empty())
        for (const auto& s : tdual::bundled::all()) specs.push_back(s.name);
      return cmd_report(specs, opt, format, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
