#pragma once
#include <string>

#include "json.hpp"

#include "geoflow/analysis.hpp"
#include "geoflow/dynamics.hpp"
#include "geoflow/integrals.hpp"
#include "geoflow/lattices.hpp"

// Serialization: trajectories to CSV and JSON (bit-exact double round trip),
// lattice specs and drift reports to JSON, and atomic file writes.

namespace geoflow {

/// CSV with header t,x,y,z,pA,pB,pG at full double precision.
std::string trajectory_to_csv(const Trajectory& traj);

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json drift_report_to_json(const DriftReport& report);

nlohmann::json lattice_spec_to_json(const LatticeSpec& spec);

/// CSV of integral values along a trajectory: t, then one column per entry.
std::string integral_values_csv(const Trajectory& traj,
                                const IntegralSuite& suite);

/// CSV of section crossings, same columns as a trajectory.
std::string section_csv(const std::vector<SectionCrossing>& crossings,
                        Model model);

/// Write via a temporary file in the same directory plus rename.
void atomic_write_text(const std::string& path, const std::string& text);

}  // namespace geoflow
