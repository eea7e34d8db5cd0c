// io.hpp: lossless serialization of solution data and reports.
#pragma once

#include <string>

#include "renorm/asymptotics.hpp"
#include "renorm/fixpoint.hpp"
#include "renorm/verifier.hpp"

namespace renorm {
namespace io {

// Bundle <-> JSON.  Function payloads carry the piecewise coefficients
// verbatim, so a reloaded bundle evaluates bit-identically.
std::string bundle_to_json(const SolutionBundle& bundle, int indent = 2);
SolutionBundle bundle_from_json(const std::string& text);

std::string bounds_report_to_json(const BoundsReport& report,
                                  const std::string& title, int indent = 2);
std::string trace_to_json(const IterationTrace& trace, int indent = 2);

// shortest round-trip decimal form of a double
std::string format_double(double x);

}  // namespace io
}  // namespace renorm
