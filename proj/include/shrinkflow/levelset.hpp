#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shrinkflow/fields.hpp"
#include "shrinkflow/flow_trace.hpp"

namespace shrinkflow {

struct LevelSetParams {
  double dt = 0;            // 0 selects h^2 / (4 (n+1)); larger values are rejected
  double t_max = 1.0;
  int reinit_every = 20;    // redistancing cadence in steps
  int reinit_iters = 10;    // Hamilton-Jacobi sweeps per redistancing
  int snap_every = 0;       // snapshot cadence in steps; 0 picks ~24 snapshots
  int band_cells = 9;       // half-width of the active band, in cells
  double delta_reg = 1e-6;  // regularisation of |Du|^2 at critical points
};

struct LevelSetTrace {
  std::vector<double> times;
  std::vector<GridField> snapshots;
  LevelSetParams params;
  double dt = 0;                          // the step actually used
  std::optional<double> extinction_time;  // stepper-observed emptying time
  bool hit_t_max = false;
};

// Explicit narrow-band integration of the Evans-Spruck level-set equation
// u_t = sum (delta_ij - u_i u_j / |Du|^2) u_ij with periodic redistancing.
// Terminates when the zero set empties or t reaches params.t_max.
LevelSetTrace evolve(const GridField& field0, LevelSetParams params);

// Extinction time refined by bisection: re-runs the stepper from the last
// non-empty snapshot to localise the emptying time. Throws when the trace
// ran out of t_max while still non-empty.
double extinction_time(const LevelSetTrace& trace);

// Spacetime point (y, s): s refined as above, y the centroid of the last
// non-empty extracted interface.
std::pair<Vec3, double> extinction_point(const LevelSetTrace& trace);

// Lebesgue volume of {|u| < delta} / (2 delta) at the snapshot nearest t.
double fattening_metric(const LevelSetTrace& trace, double t, double delta);

// Flagged when the metric fails to stabilise as delta halves.
bool is_fattening(const LevelSetTrace& trace, double t, double delta);

struct AvoidanceReport {
  std::vector<double> times;
  std::vector<double> gaps;  // minimum distance between the two interfaces
  bool pass = true;          // non-decreasing up to the 2h tolerance
  double tolerance = 0;
};

AvoidanceReport avoidance_check(const LevelSetTrace& a, const LevelSetTrace& b);

// Interface meshes of every snapshot as a flow trace.
FlowTrace extract_trace(const LevelSetTrace& trace);

// Mean interface radius about a centre, for radius-law checks.
double interface_radius(const GridField& field, const Vec3& center);

}  // namespace shrinkflow
