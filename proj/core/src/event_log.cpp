#include "homsync/event_log.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "homsync/errors.hpp"

namespace homsync {
namespace {

constexpr const char* kColumns =
    "remote_index local_index tau_ns remote_state local_state channel_state coincided";

Bb84State state_or_throw(const std::string& token) {
  if (auto s = parse_bb84_state(token)) return *s;
  throw Error("event log: bad state '" + token + "'");
}

}  // namespace

void write_event_log(std::ostream& out, const FrameRecord& frame) {
  char line[256];
  std::snprintf(line, sizeof line, "# homsync-events/1 direction=%s vdl=%.17g n_trials=%lld\n",
                frame.direction == Direction::AtoB ? "A->B" : "B->A", frame.vdl_setting,
                static_cast<long long>(frame.n_trials));
  out << line << kColumns << '\n';
  for (const auto& p : frame.pairs) {
    std::snprintf(line, sizeof line, "%lld %lld %.17g %s %s %s %d\n",
                  static_cast<long long>(p.remote_index), static_cast<long long>(p.local_index),
                  p.tau_effective, to_string(p.remote_state).data(),
                  to_string(p.local_state).data(), to_string(p.channel_state).data(),
                  p.coincided ? 1 : 0);
    out << line;
  }
}

FrameRecord read_event_log(std::istream& in) {
  FrameRecord frame;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# homsync-events/1 ", 0) != 0) {
    throw Error("event log: missing header");
  }
  {
    std::istringstream head(line.substr(19));
    std::string field;
    long long n = -1;
    while (head >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw Error("event log: bad header field '" + field + "'");
      const auto key = field.substr(0, eq);
      const auto value = field.substr(eq + 1);
      if (key == "direction") {
        if (value == "A->B") frame.direction = Direction::AtoB;
        else if (value == "B->A") frame.direction = Direction::BtoA;
        else throw Error("event log: bad direction '" + value + "'");
      } else if (key == "vdl") {
        frame.vdl_setting = std::stod(value);
      } else if (key == "n_trials") {
        n = std::stoll(value);
      }
    }
    if (n < 0) throw Error("event log: header lacks n_trials");
    frame.n_trials = n;
  }
  if (!std::getline(in, line) || line != kColumns) throw Error("event log: missing column line");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    long long r = 0, l = 0;
    int hit = 0;
    PairEvent ev;
    std::string rs, ls, cs;
    if (!(row >> r >> l >> ev.tau_effective >> rs >> ls >> cs >> hit) || (hit != 0 && hit != 1)) {
      throw Error("event log: malformed row '" + line + "'");
    }
    ev.remote_index = r;
    ev.local_index = l;
    ev.remote_state = state_or_throw(rs);
    ev.local_state = state_or_throw(ls);
    ev.channel_state = state_or_throw(cs);
    ev.coincided = hit == 1;
    frame.pairs.push_back(ev);
  }
  if (static_cast<std::int64_t>(frame.pairs.size()) != frame.n_trials) {
    throw Error("event log: row count does not match n_trials");
  }
  return frame;
}

}  // namespace homsync
