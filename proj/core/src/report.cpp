#include "homsync/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "homsync/config_io.hpp"
#include "homsync/errors.hpp"
#include "homsync/interference.hpp"

namespace homsync {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

// Builds one comma-separated, newline-terminated row.
class CsvRow {
 public:
  CsvRow& add(double v) { return field(format_real(v)); }
  CsvRow& add(std::int64_t v) { return field(std::to_string(v)); }
  CsvRow& add(int v) { return field(std::to_string(v)); }
  CsvRow& add(bool v) { return field(v ? "true" : "false"); }
  CsvRow& add(std::string_view v) { return field(std::string(v)); }
  CsvRow& add(const char* v) { return field(v); }

  void write(std::ostream& out) const { out << text_ << '\n'; }

 private:
  CsvRow& field(const std::string& s) {
    if (!first_) text_ += ',';
    text_ += s;
    first_ = false;
    return *this;
  }
  std::string text_;
  bool first_ = true;
};

void preamble(std::ostream& out, const OutputMeta& meta, const char* schema, const char* header) {
  out << "# homsync " << schema << '/' << kSchemaVersion << " config_hash=" << meta.config_hash
      << " seed=" << meta.seed << '\n'
      << header << '\n';
}

json meta_json(const OutputMeta& meta, const char* schema) {
  return {{"schema", schema},
          {"version", kSchemaVersion},
          {"config_hash", meta.config_hash},
          {"seed", meta.seed}};
}

json fit_json(const DipFit& f) {
  json cov = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(f.covariance(i, j));
    cov.push_back(row);
  }
  return {{"baseline", f.baseline},   {"depth", f.depth},
          {"center", f.center},       {"width", f.width},
          {"center_stderr", f.center_stderr},
          {"covariance", cov},        {"chi_square", f.chi_square},
          {"degrees_of_freedom", f.degrees_of_freedom},
          {"iterations", f.iterations}};
}

json scan_json(const DipScanResult& r) {
  json points = json::array();
  for (const auto& p : r.scan) {
    points.push_back({{"delay", p.delay},
                      {"rate", p.rate},
                      {"stderr", p.std_error},
                      {"n_trials", p.n_trials},
                      {"n_coincidences", p.n_coincidences}});
  }
  return {{"direction", to_string(r.direction)}, {"points", points}, {"fit", fit_json(r.fit)}};
}

json correlation_json(const DirectionResult& d) {
  json rows = json::array();
  for (const auto& c : d.correlation) {
    rows.push_back({{"k", c.k},
                    {"rate", c.rate},
                    {"stderr", c.std_error},
                    {"n_trials", c.n_trials},
                    {"n_coincidences", c.n_coincidences}});
  }
  return rows;
}

json verdict_json(const ChannelCheck& c) {
  const auto& v = c.verdict;
  return {{"channel", c.label},
          {"observed_rate", v.observed_rate},
          {"n_trials", v.n_trials},
          {"honest_floor", v.honest_floor},
          {"attacked_floor", v.attacked_floor},
          {"threshold", v.threshold},
          {"z_score", v.z_score},
          {"flagged", v.flagged},
          {"rect_rate", c.counts.rect_rate()},
          {"rect_trials", c.counts.rect_trials},
          {"diag_rate", c.counts.diag_rate()},
          {"diag_trials", c.counts.diag_trials}};
}

fs::path open_for(const fs::path& dir, const std::string& name, std::ofstream& out) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return path;
}

template <class WriteFn>
fs::path emit(const fs::path& dir, const std::string& name, WriteFn&& write) {
  std::ofstream out;
  const auto path = open_for(dir, name, out);
  write(out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
  return path;
}

fs::path emit_json(const fs::path& dir, const std::string& name, const json& doc) {
  return emit(dir, name, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

}  // namespace

OutputMeta OutputMeta::from(const ExperimentConfig& cfg) {
  return {homsync::config_hash(cfg), cfg.seed};
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_scan_csv(std::ostream& out, const OutputMeta& meta,
                    std::span<const DipScanResult> scans) {
  preamble(out, meta, "dip-scan", "direction,delay,rate,stderr,n_trials,n_coincidences");
  for (const auto& s : scans) {
    for (const auto& p : s.scan) {
      CsvRow()
          .add(to_string(s.direction))
          .add(p.delay)
          .add(p.rate)
          .add(p.std_error)
          .add(p.n_trials)
          .add(p.n_coincidences)
          .write(out);
    }
  }
}

void write_fit_csv(std::ostream& out, const OutputMeta& meta, std::span<const DipScanResult> scans,
                   double mu_effective) {
  preamble(out, meta, "dip-fit",
           "direction,baseline,baseline_stderr,depth,depth_stderr,center,center_stderr,width,"
           "width_stderr,minimum,minimum_stderr,chi_square,dof,iterations,theory_baseline,"
           "theory_minimum");
  for (const auto& s : scans) {
    const auto& f = s.fit;
    CsvRow()
        .add(to_string(s.direction))
        .add(f.baseline)
        .add(f.stderr_of(DipFit::kBaseline))
        .add(f.depth)
        .add(f.stderr_of(DipFit::kDepth))
        .add(f.center)
        .add(f.center_stderr)
        .add(f.width)
        .add(f.stderr_of(DipFit::kWidth))
        .add(f.minimum())
        .add(f.minimum_stderr())
        .add(f.chi_square)
        .add(f.degrees_of_freedom)
        .add(f.iterations)
        .add(distinguishable_probability(mu_effective))
        .add(postselected_min(mu_effective))
        .write(out);
  }
}

void write_sync_csv(std::ostream& out, const OutputMeta& meta, const SyncResult& sync) {
  preamble(out, meta, "sync", "quantity,value,stderr");
  const auto& e = sync.estimate;
  CsvRow().add("optimal_delay_bb").add(e.dt_bb.value).add(e.dt_bb.std_error).write(out);
  CsvRow().add("optimal_delay_aa").add(e.dt_aa.value).add(e.dt_aa.std_error).write(out);
  CsvRow().add("index_offset_k").add(e.k).add("").write(out);
  CsvRow().add("index_offset_k_prime").add(e.k_prime).add("").write(out);
  CsvRow().add("rep_period").add(e.rep_period).add("").write(out);
  CsvRow().add("delta_hat").add(e.delta_hat).add(e.delta_stderr).write(out);
  CsvRow().add("delta_true").add(sync.delta_true).add("").write(out);
  CsvRow().add("accuracy").add(sync.accuracy).add("").write(out);
  CsvRow().add("predicted_asymmetry_bias").add(sync.predicted_bias).add("").write(out);
}

void write_correlation_csv(std::ostream& out, const OutputMeta& meta, const SyncResult& sync) {
  preamble(out, meta, "correlation", "direction,k,rate,stderr,n_trials,n_coincidences");
  for (const auto* d : {&sync.a_to_b, &sync.b_to_a}) {
    for (const auto& c : d->correlation) {
      CsvRow()
          .add(to_string(d->dip.direction))
          .add(c.k)
          .add(c.rate)
          .add(c.std_error)
          .add(c.n_trials)
          .add(c.n_coincidences)
          .write(out);
    }
  }
}

void write_verdict_csv(std::ostream& out, const OutputMeta& meta, const SecurityResult& security) {
  preamble(out, meta, "verdict",
           "channel,observed_rate,n_trials,honest_floor,attacked_floor,threshold,z_score,flagged,"
           "rect_rate,rect_trials,diag_rate,diag_trials");
  for (const auto* c : {&security.honest, &security.attacked}) {
    const auto& v = c->verdict;
    CsvRow()
        .add(c->label)
        .add(v.observed_rate)
        .add(v.n_trials)
        .add(v.honest_floor)
        .add(v.attacked_floor)
        .add(v.threshold)
        .add(v.z_score)
        .add(v.flagged)
        .add(c->counts.rect_rate())
        .add(c->counts.rect_trials)
        .add(c->counts.diag_rate())
        .add(c->counts.diag_trials)
        .write(out);
  }
}

void write_sweep_csv(std::ostream& out, const OutputMeta& meta, std::span<const SweepRow> rows) {
  preamble(out, meta, "attack-sweep",
           "mu,honest_analytic,honest_mc,honest_err,ir_analytic,ir_mc,ir_err,floor_eq10");
  for (const auto& r : rows) {
    CsvRow()
        .add(r.mu)
        .add(r.honest_analytic)
        .add(r.honest_mc)
        .add(r.honest_err)
        .add(r.ir_analytic)
        .add(r.ir_mc)
        .add(r.ir_err)
        .add(r.floor_uncorrelated)
        .write(out);
  }
}

void write_attack_dip_csv(std::ostream& out, const OutputMeta& meta,
                          std::span<const AttackDipRow> rows) {
  preamble(out, meta, "attack-dip",
           "tau,honest_analytic,honest_mc,honest_err,ir_analytic,ir_mc,ir_err");
  for (const auto& r : rows) {
    CsvRow()
        .add(r.tau)
        .add(r.honest_analytic)
        .add(r.honest_mc)
        .add(r.honest_err)
        .add(r.ir_analytic)
        .add(r.ir_mc)
        .add(r.ir_err)
        .write(out);
  }
}

void write_curves_csv(std::ostream& out, const OutputMeta& meta, std::span<const CurveRow> rows) {
  preamble(out, meta, "curves", "family,mu,phi,sigma_t,tau,probability");
  for (const auto& r : rows) {
    CsvRow().add(r.family).add(r.mu).add(r.phi).add(r.sigma_t).add(r.tau).add(r.probability).write(out);
  }
}

std::vector<fs::path> write_dip_scan_outputs(const fs::path& dir, OutputFormat format,
                                             const ExperimentConfig& cfg,
                                             std::span<const DipScanResult> scans) {
  const auto meta = OutputMeta::from(cfg);
  const double mu = effective_mu(cfg);
  if (format == OutputFormat::Json) {
    json doc{{"meta", meta_json(meta, "dip-scan")}, {"scans", json::array()}};
    for (const auto& s : scans) {
      auto entry = scan_json(s);
      entry["fit"]["theory_baseline"] = distinguishable_probability(mu);
      entry["fit"]["theory_minimum"] = postselected_min(mu);
      doc["scans"].push_back(entry);
    }
    return {emit_json(dir, "dip_scan.json", doc)};
  }
  return {emit(dir, "dip_scan.csv", [&](std::ostream& o) { write_scan_csv(o, meta, scans); }),
          emit(dir, "dip_fit.csv", [&](std::ostream& o) { write_fit_csv(o, meta, scans, mu); })};
}

std::vector<fs::path> write_sync_outputs(const fs::path& dir, OutputFormat format,
                                         const ExperimentConfig& cfg, const SyncResult& sync) {
  const auto meta = OutputMeta::from(cfg);
  if (format == OutputFormat::Json) {
    const auto& e = sync.estimate;
    json doc{{"meta", meta_json(meta, "sync")},
             {"estimate",
              {{"optimal_delay_bb", e.dt_bb.value},
               {"optimal_delay_bb_stderr", e.dt_bb.std_error},
               {"optimal_delay_aa", e.dt_aa.value},
               {"optimal_delay_aa_stderr", e.dt_aa.std_error},
               {"index_offset_k", e.k},
               {"index_offset_k_prime", e.k_prime},
               {"rep_period", e.rep_period},
               {"delta_hat", e.delta_hat},
               {"delta_stderr", e.delta_stderr},
               {"delta_true", sync.delta_true},
               {"accuracy", sync.accuracy},
               {"predicted_asymmetry_bias", sync.predicted_bias}}},
             {"a_to_b",
              {{"fit", fit_json(sync.a_to_b.dip.fit)}, {"correlation", correlation_json(sync.a_to_b)}}},
             {"b_to_a",
              {{"fit", fit_json(sync.b_to_a.dip.fit)}, {"correlation", correlation_json(sync.b_to_a)}}}};
    return {emit_json(dir, "sync.json", doc)};
  }
  const std::array<DipScanResult, 2> scans{sync.a_to_b.dip, sync.b_to_a.dip};
  const double mu = effective_mu(cfg);
  return {emit(dir, "sync.csv", [&](std::ostream& o) { write_sync_csv(o, meta, sync); }),
          emit(dir, "correlation.csv", [&](std::ostream& o) { write_correlation_csv(o, meta, sync); }),
          emit(dir, "dip_fit.csv", [&](std::ostream& o) { write_fit_csv(o, meta, scans, mu); })};
}

std::vector<fs::path> write_security_outputs(const fs::path& dir, OutputFormat format,
                                             const ExperimentConfig& cfg,
                                             const SecurityResult& security) {
  const auto meta = OutputMeta::from(cfg);
  if (format == OutputFormat::Json) {
    json sweep = json::array();
    for (const auto& r : security.sweep) {
      sweep.push_back({{"mu", r.mu},
                       {"honest_analytic", r.honest_analytic},
                       {"honest_mc", r.honest_mc},
                       {"honest_err", r.honest_err},
                       {"ir_analytic", r.ir_analytic},
                       {"ir_mc", r.ir_mc},
                       {"ir_err", r.ir_err},
                       {"floor_eq10", r.floor_uncorrelated}});
    }
    json dip = json::array();
    for (const auto& r : security.dip) {
      dip.push_back({{"tau", r.tau},
                     {"honest_analytic", r.honest_analytic},
                     {"honest_mc", r.honest_mc},
                     {"honest_err", r.honest_err},
                     {"ir_analytic", r.ir_analytic},
                     {"ir_mc", r.ir_mc},
                     {"ir_err", r.ir_err}});
    }
    json doc{{"meta", meta_json(meta, "security")},
             {"verdicts", {verdict_json(security.honest), verdict_json(security.attacked)}},
             {"warnings", security.warnings},
             {"sweep", sweep},
             {"attack_dip", dip}};
    return {emit_json(dir, "security.json", doc)};
  }
  std::vector<fs::path> files{
      emit(dir, "verdict.csv", [&](std::ostream& o) { write_verdict_csv(o, meta, security); }),
      emit(dir, "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, meta, security.sweep); }),
      emit(dir, "attack_dip.csv",
           [&](std::ostream& o) { write_attack_dip_csv(o, meta, security.dip); })};
  if (!security.warnings.empty()) {
    files.push_back(emit(dir, "warnings.csv", [&](std::ostream& o) {
      preamble(o, meta, "warnings", "message");
      for (const auto& w : security.warnings) CsvRow().add(w).write(o);
    }));
  }
  return files;
}

std::vector<fs::path> write_curves_outputs(const fs::path& dir, OutputFormat format,
                                           const ExperimentConfig& cfg,
                                           std::span<const CurveRow> rows) {
  const auto meta = OutputMeta::from(cfg);
  if (format == OutputFormat::Json) {
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back({{"family", r.family},
                       {"mu", r.mu},
                       {"phi", r.phi},
                       {"sigma_t", r.sigma_t},
                       {"tau", r.tau},
                       {"probability", r.probability}});
    }
    return {emit_json(dir, "curves.json", {{"meta", meta_json(meta, "curves")}, {"rows", table}})};
  }
  return {emit(dir, "curves.csv", [&](std::ostream& o) { write_curves_csv(o, meta, rows); })};
}

fs::path write_error_record(const fs::path& dir, OutputFormat format, const ExperimentConfig& cfg,
                            const std::string& command, const std::string& message,
                            int exit_code) {
  const auto meta = OutputMeta::from(cfg);
  if (format == OutputFormat::Json) {
    return emit_json(dir, "error.json",
                     {{"meta", meta_json(meta, "error")},
                      {"command", command},
                      {"message", message},
                      {"exit_code", exit_code}});
  }
  return emit(dir, "error.csv", [&](std::ostream& o) {
    preamble(o, meta, "error", "command,exit_code,message");
    std::string quoted = "\"";
    for (char c : message) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    CsvRow().add(command).add(exit_code).add(quoted).write(o);
  });
}

}  // namespace homsync
