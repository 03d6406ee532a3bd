// Copyright 2026 The levisim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Lossless CSV exchange formats for trajectories and spectra.

#include <iosfwd>
#include <string>

#include "levisim/detection.hpp"
#include "levisim/dynamics.hpp"

namespace levisim::io {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Header `t,x,vx,y,vy,z,vz`, one row per sample.
void write_trajectory_csv(std::ostream& out, const dynamics::Trajectory& traj);

/// Parses the trajectory format. The sample period is taken from the time
/// column, which must be uniform. Throws ConfigError on malformed input.
dynamics::Trajectory read_trajectory_csv(std::istream& in);

/// Header `omega_rad_s,psd`.
void write_spectrum_csv(std::ostream& out, const detection::Spectrum& sp);

/// Reads grid and values only; metadata is left at defaults.
detection::Spectrum read_spectrum_csv(std::istream& in);

}  // namespace levisim::io
