#pragma once

#include <iosfwd>

#include "homsync/simulator.hpp"

namespace homsync {

// Line-oriented frame log:
//
//   # homsync-events/1 direction=A->B vdl=50030.456 n_trials=99998
//   remote_index local_index tau_ns remote_state local_state channel_state coincided
//   0 2 0.0123 H H H 0
//   ...
//
// tau is written with 17 significant digits so a log reads back exactly.
void write_event_log(std::ostream& out, const FrameRecord& frame);

/// Throws homsync::Error on malformed input.
FrameRecord read_event_log(std::istream& in);

}  // namespace homsync
