// kenlab: verify | convergence | presets

#include "kenlab/presets.hpp"
#include "kenlab/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace kenlab;

namespace {

struct source_flags {
  std::string config;
  std::string preset;
};

run_config load(const source_flags& src) {
  if (!src.config.empty() && !src.preset.empty())
    throw error(error_kind::config, "give either --config or --preset, not both");
  if (!src.preset.empty()) return preset_config(src.preset);
  if (src.config.empty()) throw error(error_kind::config, "one of --config or --preset is required");
  return load_config(src.config);
}

void write_json(const json& doc, const std::string& path) {
  std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(error_kind::config, "cannot write " + path);
  out << text;
}

void print_summary(const json& rep) {
  for (const auto& s : rep["suites"]) {
    std::cout << s["name"].get<std::string>() << ": " << s["status"].get<std::string>();
    if (s.contains("note")) std::cout << " (" << s["note"].get<std::string>() << ")";
    std::cout << "\n";
    for (const auto& r : s["residuals"])
      if (!r["pass"].get<bool>()) std::cout << "  FAIL " << r["name"].get<std::string>() << " = " << r["value"] << "\n";
    for (const auto& c : s["checks"])
      if (!c["pass"].get<bool>()) std::cout << "  FAIL " << c["name"].get<std::string>() << "\n";
  }
  for (const auto& c : rep["constants"]) {
    std::cout << c["source"].get<std::string>() << "." << c["name"].get<std::string>() << " = " << c["value"];
    if (!c["predicted"].is_null()) std::cout << " (predicted " << c["predicted"] << ")";
    std::cout << "\n";
  }
  if (rep.contains("error")) std::cerr << "kenlab: " << rep["error"]["message"].get<std::string>() << "\n";
  std::cout << "exit " << rep["exit_code"] << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kenlab: numerical verification of weak beta-Kenmotsu f-manifold identities"};
  app.set_help_flag("--help", "print this help and exit");  // --h is the step size
  app.require_subcommand(1);

  source_flags src;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> h;
  std::vector<std::string> suites;
  std::string json_path;
  bool timing = false;

  auto* verify = app.add_subcommand("verify", "run the verification suites and write a JSON report");
  auto* conv = app.add_subcommand("convergence", "residual-vs-h table for a fixed identity set");
  for (auto* sub : {verify, conv}) {
    sub->add_option("--config", src.config, "config file (JSON)");
    sub->add_option("--preset", src.preset, "shipped preset name");
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--points", points, "number of sample points");
    sub->add_option("--json", json_path, "write the JSON document here instead of standard output");
  }
  verify->add_option("--h", h, "finite-difference step");
  verify->add_option("--suite", suites, "suites to run: validate, identities, curvature, soliton")
      ->delimiter(',');
  verify->add_flag("--timing", timing, "include wall-clock seconds per suite (breaks byte identity)");
  std::vector<double> steps;
  conv->add_option("--steps", steps, "step sizes, comma separated")->delimiter(',')->required();

  auto* pre = app.add_subcommand("presets", "list, show or write the shipped presets");
  std::string show, write_dir;
  pre->add_option("--show", show, "print one preset");
  pre->add_option("--write", write_dir, "write every preset as <dir>/<name>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_pass : exit_input;
  }

  try {
    if (pre->parsed()) {
      if (!show.empty()) {
        auto p = find_preset(show);
        if (!p) throw error(error_kind::config, "unknown preset \"" + show + "\"");
        std::cout << p->text << "\n";
      } else if (!write_dir.empty()) {
        for (const auto& p : presets()) {
          auto path = std::filesystem::path(write_dir) / (p.name + ".json");
          std::ofstream out(path, std::ios::binary);
          if (!out) throw error(error_kind::config, "cannot write " + path.string());
          out << p.text << "\n";
        }
      } else {
        for (const auto& p : presets()) {
          auto c = parse_config_text(p.text);
          std::cout << p.name << "  " << c.description << "\n";
        }
      }
      return exit_pass;
    }

    run_overrides o;
    o.seed = seed;
    o.points = points;
    if (h) o.h = static_cast<real>(*h);
    o.suites = suites;
    o.timing = timing;
    auto cfg = load(src);

    if (verify->parsed()) {
      auto res = run_verify(cfg, o);
      write_json(res.report, json_path);
      if (!json_path.empty() && json_path != "-") print_summary(res.report);
      else if (res.report.contains("error"))
        std::cerr << "kenlab: " << res.report["error"]["message"].get<std::string>() << "\n";
      return res.exit_code;
    }

    std::vector<real> hs(steps.begin(), steps.end());
    auto res = run_convergence(cfg, hs, o);
    for (const auto& w : res.table["warnings"]) std::cerr << "kenlab: warning: " << w.get<std::string>() << "\n";
    write_json(res.table, json_path);
    return res.exit_code;
  } catch (const error& e) {
    std::cerr << "kenlab: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "kenlab: internal error: " << e.what() << "\n";
    return exit_internal;
  }
}
