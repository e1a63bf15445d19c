// Command-line front end: run mechanisms, sweeps, the LP adversary and the lower-bound families.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "lineup/lineup.hpp"

namespace {

using namespace lineup;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int cmd_run(const std::string& instance_path, const std::string& mechanism, const std::string& info_text,
            const std::string& out_path) {
  const MetricInstance inst = io::read_instance(instance_path);
  if (!validate_metric(inst).accepted()) {
    std::cerr << "instance violates the metric axioms\n";
    return 1;
  }
  const MechanismEntry& mech = find_mechanism(mechanism);
  const InfoKind kind = info_text.empty() ? mech.needs : parse_info_kind(info_text);
  ExperimentReport report;
  report.rows.push_back(score_instance(inst, mech, kind));
  Output out(out_path);
  write_csv(out.stream(), report);
  return report.all_within_bounds() ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, const std::string& dump_dir) {
  const io::SweepConfig cfg = io::sweep_from_json(io::read_json_file(config_path));
  const ExperimentReport report = run_experiment(cfg.runs, cfg.trials, cfg.threads);
  Output out(out_path);
  write_csv(out.stream(), report);
  if (!dump_dir.empty()) {
    std::filesystem::create_directories(dump_dir);
    for (std::size_t r = 0; r < report.worst.size(); ++r) {
      if (!report.worst[r]) continue;
      io::write_json_file((std::filesystem::path(dump_dir) / ("max_run" + std::to_string(r) + ".json")).string(),
                          io::instance_to_json(*report.worst[r]));
    }
  }
  return report.all_within_bounds() ? 0 : 1;
}

int cmd_worstcase(const std::string& info_text, const std::string& instance_path, const std::string& matching_text,
                  const std::string& witness_path, double bound, bool rational) {
  const MetricInstance inst = io::read_instance(instance_path);
  const InfoSet info = make_info(inst, parse_info_kind(info_text));
  const Matching matching = io::parse_matching(matching_text, inst.n_positions());
  lp::Options options;
  options.rational_check = rational;
  const AdversaryResult result = worst_case_distortion(info, matching, options);
  std::cout << "info,matching,value,binding_alternative\n" << std::setprecision(12) << info_text << ",\"";
  for (std::size_t p = 0; p < matching.size(); ++p) std::cout << (p ? "," : "") << 'p' << p << ":c" << matching[p];
  std::cout << "\"," << result.value << ",\"";
  for (std::size_t p = 0; p < result.binding_alternative.size(); ++p) {
    std::cout << (p ? "," : "") << 'p' << p << ":c" << result.binding_alternative[p];
  }
  std::cout << "\"\n";
  if (!witness_path.empty() && result.witness) {
    io::write_json_file(witness_path, io::instance_to_json(witness_instance(info.shape, *result.witness)));
  }
  return result.value <= bound + 1e-6 ? 0 : 1;
}

int cmd_lowerbound(const std::string& name, double eps) {
  const LowerBoundInstance lb = lower_bound_instance(name, eps);
  const double ratio = empirical_distortion(lb.instance, lb.forced_choice);
  const double closed = lower_bound_closed_form(name, eps);
  const bool ok = std::abs(ratio - closed) <= 1e-9 * std::abs(closed);
  std::cout << "name,eps,ratio,closed_form,limit,matches\n"
            << std::setprecision(12) << name << ',' << eps << ',' << ratio << ',' << closed << ',' << lb.limit << ','
            << (ok ? "true" : "false") << '\n';
  return ok ? 0 : 1;
}

int cmd_validate(const std::string& path) {
  const ValidationReport report = validate_metric(io::read_instance(path));
  std::cout << io::to_json(report).dump(2) << '\n';
  return report.accepted() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line-up elections over metric spaces"};
  app.require_subcommand(1);

  std::string instance, mechanism, info, out, config, dump, matching, witness, name, file;
  double eps = 1e-3;
  double bound = kInfinity;
  bool rational = false;

  auto* run = app.add_subcommand("run", "Run one mechanism on one instance");
  run->add_option("--instance", instance, "Instance JSON")->required();
  run->add_option("--mechanism", mechanism, "Mechanism name")->required();
  run->add_option("--info", info, "Information kind (defaults to what the mechanism needs)");
  run->add_option("--out", out, "CSV output file");

  auto* sweep = app.add_subcommand("sweep", "Run a seeded experiment from a config file");
  sweep->add_option("--config", config, "Sweep config JSON")->required();
  sweep->add_option("--out", out, "CSV output file");
  sweep->add_option("--dump-dir", dump, "Directory for max-ratio instances");

  auto* worst = app.add_subcommand("worstcase", "Worst-case distortion of a matching by linear programming");
  worst->add_option("--info", info, "vp, pp, vp+pp, loc or loc+vp")->required();
  worst->add_option("--instance", instance, "Instance JSON")->required();
  worst->add_option("--matching", matching, "e.g. p0:c2,p1:c0")->required();
  worst->add_option("--emit-witness", witness, "Write the witness metric as instance JSON");
  worst->add_option("--bound", bound, "Fail when the value exceeds this");
  worst->add_flag("--rational", rational, "Re-check the final basis in exact arithmetic");

  auto* lower = app.add_subcommand("lowerbound", "Evaluate a lower-bound family");
  lower->add_option("--name", name, "Family name")->required();
  lower->add_option("--eps", eps, "Epsilon in (0, 1/8)");

  auto* validate = app.add_subcommand("validate", "Check an instance file against the metric axioms");
  validate->add_option("file", file, "Instance JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(instance, mechanism, info, out);
    if (*sweep) return cmd_sweep(config, out, dump);
    if (*worst) return cmd_worstcase(info, instance, matching, witness, bound, rational);
    if (*lower) return cmd_lowerbound(name, eps);
    if (*validate) return cmd_validate(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
