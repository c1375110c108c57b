#include "homsync/commands.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "homsync/errors.hpp"
#include "homsync/event_log.hpp"
#include "homsync/pipeline.hpp"
#include "homsync/report.hpp"

namespace homsync {
namespace {

void print_written(std::ostream& log, const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) log << "wrote " << f.string() << '\n';
}

// Runs `body`, translating library errors into exit codes and an error
// record next to the normal outputs.
template <class Body>
int guarded(const char* command, const ExperimentConfig& cfg, const CommandOptions& options,
            std::ostream& log, Body&& body) {
  int code = kExitOk;
  std::string message;
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    code = kExitConfigError;
    message = e.what();
  } catch (const FitError& e) {
    code = kExitFitFailure;
    const auto& p = e.last_iterate();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  " (last iterate: baseline %.9g depth %.9g center %.9g width %.9g after %d "
                  "iterations)",
                  p[0], p[1], p[2], p[3], e.iterations());
    message = std::string(e.what()) + buf;
  } catch (const NoDipError& e) {
    code = kExitFitFailure;
    message = e.what();
  } catch (const InsufficientDataError& e) {
    code = kExitInsufficientData;
    message = e.what();
  } catch (const std::domain_error& e) {
    code = kExitConfigError;
    message = e.what();
  } catch (const std::exception& e) {
    code = kExitFailure;
    message = e.what();
  }
  log << command << ": error: " << message << '\n';
  try {
    const auto path =
        write_error_record(options.out_dir, cfg.output.format, cfg, command, message, code);
    log << "wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    log << command << ": could not write error record: " << e.what() << '\n';
  }
  return code;
}

void write_event_logs(const ExperimentConfig& cfg, const CommandOptions& options,
                      const DipScanResult& scan, std::ostream& log) {
  std::filesystem::create_directories(options.out_dir);
  const auto frames = frames_at(cfg, scan.direction, scan.nearest_index);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto name = std::string("events_") +
                      (scan.direction == Direction::AtoB ? "a_to_b" : "b_to_a") + "_frame" +
                      std::to_string(f) + ".log";
    const auto path = options.out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_event_log(out, frames[f]);
    log << "wrote " << path.string() << '\n';
  }
}

}  // namespace

int cmd_dip_scan(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log) {
  return guarded("dip-scan", cfg, options, log, [&] {
    const std::array<DipScanResult, 2> scans{run_dip_scan(cfg, Direction::AtoB),
                                             run_dip_scan(cfg, Direction::BtoA)};
    for (const auto& s : scans) {
      char line[160];
      std::snprintf(line, sizeof line, "%s: center %.6f +/- %.6f ns, width %.4f ns\n",
                    std::string(to_string(s.direction)).c_str(), s.fit.center,
                    s.fit.center_stderr, s.fit.width);
      log << line;
    }
    print_written(log, write_dip_scan_outputs(options.out_dir, cfg.output.format, cfg, scans));
    if (options.event_log) {
      for (const auto& s : scans) write_event_logs(cfg, options, s, log);
    }
  });
}

int cmd_sync(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log) {
  return guarded("sync", cfg, options, log, [&] {
    const auto sync = run_sync(cfg);
    const auto& e = sync.estimate;
    char line[200];
    std::snprintf(line, sizeof line,
                  "k = %d, k' = %d, delta_hat = %.6f +/- %.6f ns (true %.6f, accuracy %.1f ps)\n",
                  e.k, e.k_prime, e.delta_hat, e.delta_stderr, sync.delta_true,
                  1e3 * sync.accuracy);
    log << line;
    print_written(log, write_sync_outputs(options.out_dir, cfg.output.format, cfg, sync));
  });
}

int cmd_security(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log) {
  return guarded("security", cfg, options, log, [&] {
    const auto result = run_security(cfg);
    for (const auto* c : {&result.honest, &result.attacked}) {
      char line[200];
      std::snprintf(line, sizeof line, "%s: rate %.5f over %lld trials, threshold %.5f -> %s\n",
                    c->label.c_str(), c->verdict.observed_rate,
                    static_cast<long long>(c->verdict.n_trials), c->verdict.threshold,
                    c->verdict.flagged ? "FLAGGED" : "ok");
      log << line;
    }
    for (const auto& w : result.warnings) log << "warning: " << w << '\n';
    print_written(log, write_security_outputs(options.out_dir, cfg.output.format, cfg, result));
  });
}

int cmd_curves(const ExperimentConfig& cfg, const CommandOptions& options, std::ostream& log) {
  return guarded("curves", cfg, options, log, [&] {
    const auto rows = run_curves(cfg);
    print_written(log, write_curves_outputs(options.out_dir, cfg.output.format, cfg, rows));
  });
}

}  // namespace homsync
