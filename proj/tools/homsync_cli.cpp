// homsync: bidirectional HOM clock-synchronization experiments.
//
//   homsync sync                          # reference experiment, CSV in .
//   homsync dip-scan --config run.json --out results --format json
//   homsync security --seed 7
//   homsync curves --out figs

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "homsync/commands.hpp"
#include "homsync/config_io.hpp"
#include "homsync/errors.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> frames;
  std::optional<unsigned> threads;
  bool event_log = false;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Master seed (overrides the file)");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--frames", flags.frames, "Frames per delay-line setting")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", flags.threads, "Worker threads (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-coherent-pulse HOM clock synchronization simulator"};
  app.require_subcommand(1);

  Flags flags;
  auto* dip = app.add_subcommand("dip-scan", "Path-balancing scans and inverted-Gaussian fits");
  auto* sync = app.add_subcommand("sync", "Full bidirectional offset estimation");
  auto* security = app.add_subcommand("security", "Intercept-resend detection and attack tables");
  auto* curves = app.add_subcommand("curves", "Analytic coincidence-probability curves");
  for (auto* cmd : {dip, sync, security, curves}) add_common(cmd, flags);
  dip->add_flag("--event-log", flags.event_log,
                "Also write the event log of the frame nearest each fitted optimum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? homsync::kExitOk : homsync::kExitConfigError;
  }

  homsync::ExperimentConfig cfg;
  try {
    if (!flags.config_path.empty()) cfg = homsync::load_config(flags.config_path, &std::cerr);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.out_dir) cfg.output.path = *flags.out_dir;
    if (flags.format) {
      cfg.output.format =
          *flags.format == "json" ? homsync::OutputFormat::Json : homsync::OutputFormat::Csv;
    }
    if (flags.frames) cfg.scan.frames = *flags.frames;
    if (flags.threads) cfg.threads = *flags.threads;
    homsync::validate(cfg);
  } catch (const homsync::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return homsync::kExitConfigError;
  }

  homsync::CommandOptions options;
  options.out_dir = cfg.output.path;
  options.event_log = flags.event_log;

  if (dip->parsed()) return homsync::cmd_dip_scan(cfg, options, std::cerr);
  if (sync->parsed()) return homsync::cmd_sync(cfg, options, std::cerr);
  if (security->parsed()) return homsync::cmd_security(cfg, options, std::cerr);
  return homsync::cmd_curves(cfg, options, std::cerr);
}
