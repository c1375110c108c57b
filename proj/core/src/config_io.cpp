#include "homsync/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "homsync/errors.hpp"

namespace homsync {
namespace {

using nlohmann::json;

// Reads fields out of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    node_ = &root.at(name_);
    if (!node_->is_object()) throw ConfigError(name_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  void mark(const char* key) { seen_.insert(key); }

  bool has(const char* key) const { return node_ && node_->contains(key); }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, _] : node_->items()) {
      if (!seen_.count(key)) throw ConfigError(name_ + "." + key + ": unknown key");
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

template <class Enum>
Enum parse_enum(const std::string& field, const std::string& text,
                std::initializer_list<std::pair<const char*, Enum>> options) {
  for (const auto& [name, value] : options) {
    if (text == name) return value;
  }
  throw ConfigError(field + ": unrecognized value '" + text + "'");
}

const char* name_of(WidthConvention c) { return c == WidthConvention::Fwhm ? "fwhm" : "stddev"; }
const char* name_of(JitterModel m) {
  return m == JitterModel::SingleDetector ? "single_detector" : "both_detectors";
}
const char* name_of(AttackKind k) {
  return k == AttackKind::InterceptResend ? "intercept_resend" : "none";
}
const char* name_of(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, std::ostream* log) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  static const std::set<std::string> kSections{"source", "channel", "detector", "clocks",
                                               "scan",   "attack",  "security", "curves",
                                               "output", "seed",    "threads"};
  for (const auto& [key, _] : root.items()) {
    if (!kSections.count(key)) throw ConfigError(key + ": unknown section");
  }

  std::string text;

  Section channel(root, "channel");
  channel.get("prop_delay_ab", cfg.channel.prop_delay_ab);
  channel.get("prop_delay_ba", cfg.channel.prop_delay_ba);
  channel.get("loss_db", cfg.channel.loss_db);
  channel.get("reciprocal", cfg.channel.reciprocal);
  channel.finish();

  Section detector(root, "detector");
  detector.get("efficiency", cfg.detector.efficiency);
  detector.get("jitter_fwhm_ps", cfg.detector.jitter_fwhm_ps);
  detector.get("dark_count_probability", cfg.detector.dark_count_probability);
  text = name_of(cfg.detector.jitter_model);
  detector.get("jitter_model", text);
  cfg.detector.jitter_model =
      parse_enum<JitterModel>("detector.jitter_model", text,
                              {{"both_detectors", JitterModel::BothDetectors},
                               {"single_detector", JitterModel::SingleDetector}});
  detector.finish();

  Section source(root, "source");
  source.get("n_pulses", cfg.source.n_pulses);
  source.get("rep_period", cfg.source.rep_period);
  source.get("temporal_width", cfg.source.temporal_width);
  source.get("wavelength_nm", cfg.source.wavelength_nm);
  text = name_of(cfg.source.width_convention);
  source.get("width_convention", text);
  cfg.source.width_convention = parse_enum<WidthConvention>(
      "source.width_convention", text,
      {{"stddev", WidthConvention::StdDev}, {"fwhm", WidthConvention::Fwhm}});
  if (source.has("mu_source") && source.has("mu_effective")) {
    throw ConfigError("source: give either mu_source or mu_effective, not both");
  }
  double mu_effective = -1.0;
  source.get("mu_source", cfg.source.mu_source);
  source.get("mu_effective", mu_effective);
  const bool derive_mu = !source.has("mu_source") &&
                         (source.has("mu_effective") || channel.has("loss_db") ||
                          detector.has("efficiency"));
  if (derive_mu && (!(cfg.detector.efficiency > 0.0 && cfg.detector.efficiency <= 1.0) ||
                    !(cfg.channel.loss_db >= 0.0))) {
    throw ConfigError("source.mu_source: cannot derive from invalid loss_db or efficiency");
  }
  if (source.has("mu_effective")) {
    if (!(mu_effective >= 0.0)) throw ConfigError("source.mu_effective: must be >= 0");
    cfg.source.mu_source =
        source_mu_for(mu_effective, cfg.channel.loss_db, cfg.detector.efficiency);
    if (log) {
      char line[160];
      std::snprintf(line, sizeof line,
                    "config: mu_effective %.9g -> mu_source %.9g (loss %.9g dB, efficiency %.9g)\n",
                    mu_effective, cfg.source.mu_source, cfg.channel.loss_db,
                    cfg.detector.efficiency);
      *log << line;
    }
  } else if (!source.has("mu_source") && !channel.has("loss_db") && !detector.has("efficiency")) {
    // Defaults already hold the back-computed value.
  } else if (!source.has("mu_source")) {
    cfg.source.mu_source = source_mu_for(1.0, cfg.channel.loss_db, cfg.detector.efficiency);
  }
  source.finish();

  Section clocks(root, "clocks");
  clocks.get("delta_true", cfg.clocks.delta_true);
  clocks.finish();

  Section scan(root, "scan");
  scan.get("vdl_step", cfg.scan.vdl_step);
  if (scan.has("vdl_span")) {
    double span = 0.0;
    scan.get("vdl_span", span);
    cfg.scan.vdl_span = span;
  }
  scan.mark("vdl_span");
  scan.get("k_range", cfg.scan.k_range);
  scan.get("frames", cfg.scan.frames);
  scan.get("coarse_resolution", cfg.scan.coarse_resolution);
  scan.finish();

  Section attack(root, "attack");
  text = name_of(cfg.attack.kind);
  attack.get("kind", text);
  cfg.attack.kind = parse_enum<AttackKind>(
      "attack.kind", text,
      {{"none", AttackKind::None}, {"intercept_resend", AttackKind::InterceptResend}});
  text = "uniform_random";
  attack.get("eve_basis_strategy", text);
  cfg.attack.eve_basis_strategy = parse_enum<EveBasisStrategy>(
      "attack.eve_basis_strategy", text, {{"uniform_random", EveBasisStrategy::UniformRandom}});
  attack.finish();

  Section security(root, "security");
  security.get("significance", cfg.security.significance);
  security.get("mu_values", cfg.security.mu_values);
  security.get("trials_per_point", cfg.security.trials_per_point);
  security.get("tau_span", cfg.security.tau_span);
  security.get("tau_step", cfg.security.tau_step);
  security.finish();

  Section curves(root, "curves");
  curves.get("mu_values", cfg.curves.mu_values);
  curves.get("phi_values", cfg.curves.phi_values);
  curves.get("sigma_t_values", cfg.curves.sigma_t_values);
  curves.get("fixed_sigma_t", cfg.curves.fixed_sigma_t);
  curves.get("tau_span", cfg.curves.tau_span);
  curves.get("tau_step", cfg.curves.tau_step);
  curves.finish();

  Section output(root, "output");
  text = name_of(cfg.output.format);
  output.get("format", text);
  cfg.output.format = parse_enum<OutputFormat>(
      "output.format", text, {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});
  output.get("path", cfg.output.path);
  output.finish();

  try {
    if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("threads")) cfg.threads = root.at("threads").get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("seed/threads: ") + e.what());
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::ostream* log) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), log);
}

std::string to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["source"] = {{"n_pulses", cfg.source.n_pulses},
                 {"rep_period", cfg.source.rep_period},
                 {"mu_source", cfg.source.mu_source},
                 {"temporal_width", cfg.source.temporal_width},
                 {"width_convention", name_of(cfg.source.width_convention)},
                 {"wavelength_nm", cfg.source.wavelength_nm}};
  j["channel"] = {{"prop_delay_ab", cfg.channel.prop_delay_ab},
                  {"prop_delay_ba", cfg.channel.prop_delay_ba},
                  {"loss_db", cfg.channel.loss_db},
                  {"reciprocal", cfg.channel.reciprocal}};
  j["detector"] = {{"efficiency", cfg.detector.efficiency},
                   {"jitter_fwhm_ps", cfg.detector.jitter_fwhm_ps},
                   {"dark_count_probability", cfg.detector.dark_count_probability},
                   {"jitter_model", name_of(cfg.detector.jitter_model)}};
  j["clocks"] = {{"delta_true", cfg.clocks.delta_true}};
  j["scan"] = {{"vdl_step", cfg.scan.vdl_step},
               {"k_range", cfg.scan.k_range},
               {"frames", cfg.scan.frames},
               {"coarse_resolution", cfg.scan.coarse_resolution}};
  if (cfg.scan.vdl_span) j["scan"]["vdl_span"] = *cfg.scan.vdl_span;
  j["attack"] = {{"kind", name_of(cfg.attack.kind)}, {"eve_basis_strategy", "uniform_random"}};
  j["security"] = {{"significance", cfg.security.significance},
                   {"mu_values", cfg.security.mu_values},
                   {"trials_per_point", cfg.security.trials_per_point},
                   {"tau_span", cfg.security.tau_span},
                   {"tau_step", cfg.security.tau_step}};
  j["curves"] = {{"mu_values", cfg.curves.mu_values},
                 {"phi_values", cfg.curves.phi_values},
                 {"sigma_t_values", cfg.curves.sigma_t_values},
                 {"fixed_sigma_t", cfg.curves.fixed_sigma_t},
                 {"tau_span", cfg.curves.tau_span},
                 {"tau_step", cfg.curves.tau_step}};
  j["output"] = {{"format", name_of(cfg.output.format)}, {"path", cfg.output.path}};
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Output location and thread count do not change results.
  ExperimentConfig hashed = cfg;
  hashed.output = OutputConfig{};
  hashed.threads = 0;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json_text(hashed)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace homsync
