#pragma once

#include <map>
#include <string>
#include <vector>

#include "shrinkflow/mesh.hpp"

namespace shrinkflow {

enum class TraceSource { lagrangian, levelset_extracted, analytic };

std::string to_string(TraceSource s);
TraceSource trace_source_from_string(const std::string& s);

// Time-indexed mesh slices at unit multiplicity. Lagrangian traces share
// connectivity across slices; extracted traces do not.
struct FlowTrace {
  std::vector<double> times;
  std::vector<SurfaceMesh> slices;
  TraceSource source = TraceSource::analytic;
  std::string halt_reason;                // set by the Lagrangian stepper
  std::map<std::string, double> params;   // echoed run parameters

  std::size_t size() const { return times.size(); }
  void validate() const;  // strictly increasing times, matching sizes
};

}  // namespace shrinkflow
