// poisson_lab -- command-line harness for the Poisson feedback channel.
//
//   poisson_lab simulate --scheme binary --A 10 --horizon 5
//   poisson_lab sweep    --scheme binary --horizon 1 --axis A=1,2,3
//   poisson_lab frontier --target-error 0.02 --dark-current 1
//   poisson_lab verify   identity converse
//
// Exit status: 0 success, 1 invalid input, 2 runtime failure, 3 failed checks.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poisson_lab/harness/commands.hpp"
#include "poisson_lab/harness/config.hpp"
#include "poisson_lab/harness/report.hpp"

namespace {

using namespace poisson_lab;
using namespace poisson_lab::harness;

enum ExitCode { kOk = 0, kInvalid = 1, kRuntime = 2, kChecksFailed = 3 };

struct CommonFlags {
  std::string config;
  std::string scheme;
  int M = 0;
  double A = 0, horizon = 0, dark = 0;
  std::uint64_t trials = 0, seed = 0;
  std::string format, out, messages;

  CLI::Option* o_M = nullptr;
  CLI::Option* o_A = nullptr;
  CLI::Option* o_horizon = nullptr;
  CLI::Option* o_dark = nullptr;
  CLI::Option* o_trials = nullptr;
  CLI::Option* o_seed = nullptr;

  void add_to(CLI::App& app, bool scheme_flags) {
    app.add_option("--config", config, "Configuration file (sectioned key = value)");
    if (scheme_flags) {
      app.add_option("--scheme", scheme, "binary-zero-dark | binary-dark-window | mary-zero-dark | mary-dark-window");
      o_horizon = app.add_option("--horizon", horizon, "Observation horizon T (window length for dark-window kinds)");
      app.add_option("--messages", messages, "Comma-separated subset of messages to simulate");
    }
    o_M = app.add_option("--M", M, "Number of messages");
    o_A = app.add_option("--A", A, "Transmit power");
    o_dark = app.add_option("--dark-current", dark, "Dark current rate");
    o_trials = app.add_option("--trials", trials, "Monte Carlo trials (per message)");
    o_seed = app.add_option("--seed", seed, "Base random seed");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out, "Output file (default: stdout)");
  }

  ConfigOverrides overrides() const {
    ConfigOverrides o;
    if (!scheme.empty()) o.scheme = scheme;
    if (o_M && o_M->count()) o.M = M;
    if (o_A && o_A->count()) o.A = A;
    if (o_horizon && o_horizon->count()) o.horizon = horizon;
    if (o_dark && o_dark->count()) o.dark_current = dark;
    if (o_trials && o_trials->count()) o.trials = trials;
    if (o_seed && o_seed->count()) o.seed = seed;
    if (!format.empty()) o.format = format;
    if (!out.empty()) o.out = out;
    if (!messages.empty()) o.messages = messages;
    return o;
  }
};

// Renders first so a failure never leaves a partial file behind.
void emit(const Table& table, OutputFormat format, const std::optional<std::string>& path) {
  std::ostringstream buf;
  write_table(buf, table, format);
  if (!path) {
    std::cout << buf.str();
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + *path);
  f << buf.str();
  if (!f) throw std::runtime_error("failed writing " + *path);
}

std::optional<KeyValueFile> load_config(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return KeyValueFile::load(path);
}

template <class T, class Parse>
void from_file(KeyValueFile& file, const std::string& key, T& target, Parse parse) {
  if (auto e = file.take(key)) {
    try {
      target = parse(e->value);
    } catch (const ConfigError& err) {
      file.fail(*e, key, err.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analytics for the Poisson channel with feedback"};
  app.require_subcommand(1);

  CommonFlags sim_flags, sweep_flags, frontier_flags, verify_flags;

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one scheme");
  sim_flags.add_to(*simulate, true);

  auto* sweep = app.add_subcommand("sweep", "Simulate over a one- or two-parameter grid");
  sweep_flags.add_to(*sweep, true);
  std::vector<std::string> axes_text;
  sweep->add_option("--axis", axes_text, "NAME=v1,v2,... | NAME=lin:START:STOP:N | NAME=log:START:STOP:N");

  auto* frontier = app.add_subcommand("frontier", "Least average energy meeting an error target");
  frontier_flags.add_to(*frontier, false);
  FrontierQuery fq;
  CLI::Option* o_eps = frontier->add_option("--target-error", fq.target_error, "Average error target in (0, 1)");
  CLI::Option* o_amin = frontier->add_option("--A-min", fq.A_min, "Smallest power searched");
  CLI::Option* o_amax = frontier->add_option("--A-max", fq.A_max, "Largest power searched");
  CLI::Option* o_hmin = frontier->add_option("--horizon-min", fq.horizon_min, "Shortest horizon searched");
  CLI::Option* o_hmax = frontier->add_option("--horizon-max", fq.horizon_max, "Longest horizon searched");

  auto* verify = app.add_subcommand("verify", "Run identity and property suites");
  verify_flags.add_to(*verify, false);
  std::vector<std::string> suites;
  VerifyOptions vo;
  verify->add_option("suites", suites, "identity | converse | oracle | substrate | all");
  CLI::Option* o_fuzz = verify->add_option("--fuzz-count", vo.fuzz_count, "Fuzzed policies per suite");
  CLI::Option* o_oracle = verify->add_option("--oracle-trials", vo.oracle_trials, "Trials per oracle-grid message");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (simulate->parsed() || sweep->parsed()) {
      CommonFlags& flags = simulate->parsed() ? sim_flags : sweep_flags;
      auto file = load_config(flags.config);
      std::vector<SweepAxis> axes;
      if (sweep->parsed() && file) {
        for (const auto& e : file->take_all("sweep.axis")) {
          try {
            axes.push_back(parse_axis(e.value));
          } catch (const ConfigError& err) {
            file->fail(e, "sweep.axis", err.what());
          }
        }
      }
      const ExperimentConfig cfg = resolve_config(file ? &*file : nullptr, flags.overrides());
      if (file) file->reject_unused();

      std::vector<ReportRow> rows;
      if (simulate->parsed()) {
        rows = cmd_simulate(cfg);
      } else {
        if (!axes_text.empty()) axes.clear();
        for (const auto& t : axes_text) axes.push_back(parse_axis(t));
        rows = cmd_sweep(cfg, axes);
      }
      emit(to_table(rows), cfg.format, cfg.out_path);
      return kOk;
    }

    if (frontier->parsed()) {
      auto file = load_config(frontier_flags.config);
      OutputFormat format = OutputFormat::Csv;
      std::optional<std::string> out;
      if (file) {
        auto d = [](const std::string& key) {
          return [key](const std::string& v) { return parse_double(v, key); };
        };
        from_file(*file, "frontier.target_error", fq.target_error, d("target_error"));
        from_file(*file, "frontier.dark_current", fq.dark_current, d("dark_current"));
        from_file(*file, "frontier.M", fq.M, [](const std::string& v) { return parse_int(v, "M"); });
        from_file(*file, "frontier.A_min", fq.A_min, d("A_min"));
        from_file(*file, "frontier.A_max", fq.A_max, d("A_max"));
        from_file(*file, "frontier.horizon_min", fq.horizon_min, d("horizon_min"));
        from_file(*file, "frontier.horizon_max", fq.horizon_max, d("horizon_max"));
        from_file(*file, "run.trials", fq.n_trials, [](const std::string& v) { return parse_uint(v, "trials"); });
        from_file(*file, "run.seed", fq.seed, [](const std::string& v) { return parse_uint(v, "seed"); });
        from_file(*file, "output.format", format, [](const std::string& v) { return parse_output_format(v); });
        from_file(*file, "output.path", out, [](const std::string& v) { return std::optional<std::string>(v); });
        file->reject_unused();
      }
      // Flags override the file.
      FrontierQuery q = fq;
      if (o_eps->count()) q.target_error = o_eps->as<double>();
      if (o_amin->count()) q.A_min = o_amin->as<double>();
      if (o_amax->count()) q.A_max = o_amax->as<double>();
      if (o_hmin->count()) q.horizon_min = o_hmin->as<double>();
      if (o_hmax->count()) q.horizon_max = o_hmax->as<double>();
      const auto& f = frontier_flags;
      if (f.o_M->count()) q.M = f.M;
      if (f.o_dark->count()) q.dark_current = f.dark;
      if (f.o_trials->count()) q.n_trials = f.trials;
      if (f.o_seed->count()) q.seed = f.seed;
      if (f.o_A->count()) q.A_min = q.A_max = f.A;
      if (!f.format.empty()) format = parse_output_format(f.format);
      if (!f.out.empty()) out = f.out;

      const FrontierResult r = cmd_frontier(q);
      emit(frontier_table(q, r), format, out);
      return kOk;
    }

    if (verify->parsed()) {
      auto file = load_config(verify_flags.config);
      OutputFormat format = OutputFormat::Csv;
      std::optional<std::string> out;
      if (file) {
        if (suites.empty()) {
          if (auto e = file->take("verify.suites")) {
            std::stringstream ss(e->value);
            for (std::string s; std::getline(ss, s, ',');) suites.push_back(s);
          }
        } else {
          file->take("verify.suites");
        }
        if (!o_fuzz->count()) {
          from_file(*file, "verify.fuzz_count", vo.fuzz_count,
                    [](const std::string& v) { return parse_int(v, "fuzz_count"); });
        } else {
          file->take("verify.fuzz_count");
        }
        from_file(*file, "run.trials", vo.n_trials, [](const std::string& v) { return parse_uint(v, "trials"); });
        from_file(*file, "run.seed", vo.seed, [](const std::string& v) { return parse_uint(v, "seed"); });
        if (!o_oracle->count()) {
          from_file(*file, "verify.oracle_trials", vo.oracle_trials,
                    [](const std::string& v) { return parse_uint(v, "oracle_trials"); });
        } else {
          file->take("verify.oracle_trials");
        }
        from_file(*file, "output.format", format, [](const std::string& v) { return parse_output_format(v); });
        from_file(*file, "output.path", out, [](const std::string& v) { return std::optional<std::string>(v); });
        file->reject_unused();
      }
      const auto& f = verify_flags;
      if (f.o_trials->count()) vo.n_trials = f.trials;
      if (f.o_seed->count()) vo.seed = f.seed;
      if (!f.format.empty()) format = parse_output_format(f.format);
      if (!f.out.empty()) out = f.out;

      const auto checks = cmd_verify(suites, vo);
      emit(verify_table(checks), format, out);
      const bool all_pass = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
      return all_pass ? kOk : kChecksFailed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
