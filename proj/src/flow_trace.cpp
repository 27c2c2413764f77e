#include "shrinkflow/flow_trace.hpp"

#include <stdexcept>

namespace shrinkflow {

std::string to_string(TraceSource s) {
  switch (s) {
    case TraceSource::lagrangian: return "lagrangian";
    case TraceSource::levelset_extracted: return "levelset-extracted";
    case TraceSource::analytic: return "analytic";
  }
  return "analytic";
}

TraceSource trace_source_from_string(const std::string& s) {
  if (s == "lagrangian") return TraceSource::lagrangian;
  if (s == "levelset-extracted") return TraceSource::levelset_extracted;
  if (s == "analytic") return TraceSource::analytic;
  throw std::invalid_argument("unknown trace source: " + s);
}

void FlowTrace::validate() const {
  if (times.size() != slices.size())
    throw std::invalid_argument("flow trace: times/slices size mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("flow trace: times must be strictly increasing");
}

}  // namespace shrinkflow
