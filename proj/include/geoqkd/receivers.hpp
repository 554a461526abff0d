// Copyright 2026 The geoqkd Authors.
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

namespace geoqkd::receivers {

/// Per-pulse inputs shared by the three receiver models.
struct ReceiverInputs {
  double mu = 0.0;         // mean photon number of the pulse
  double eta_sys = 1.0;    // end-to-end transmittance including detector efficiency
  double e_mis = 0.0;      // misalignment probability
  double p_ap = 0.0;       // afterpulse probability per preceding detection
  double p_noise = 0.0;    // per-detector noise click, active receiver
  double p_noise_Z = 0.0;  // per-detector noise click in the Z arm, passive receivers
  double p_noise_X = 0.0;  // per-detector noise click in the X arm, passive receivers
  double s = 0.5;          // fraction routed to the X arm, passive receivers

  void validate_active() const;
  void validate_passive() const;
};

/// Expected per-pulse click statistics.
///
/// For the active receiver Q_Z = Q_X carry the basis-matched gain and
/// E_Z = E_X the error probability; Q_mc is zero and P_empty = 1 - Q.
/// For the passive receivers P_empty + Q_Z + Q_X + Q_mc = 1.
struct ClickStatistics {
  double Q_Z = 0.0;
  double Q_X = 0.0;
  double E_Z = 0.0;
  double E_X = 0.0;
  double Q_mc = 0.0;
  double P_empty = 0.0;
};

/// Detector pair behind an active basis choice.
ClickStatistics active_statistics(const ReceiverInputs& in);

/// Four-detector passive receiver with an unbalanced splitter.
/// Only single clicks are kept; the other arm acts as a veto.
ClickStatistics passive_asym_statistics(const ReceiverInputs& in);

/// Balanced passive receiver. Matching-arm double clicks are kept with a
/// random bit; Q_mc collects the events with clicks in both arms.
ClickStatistics passive_sym_statistics(const ReceiverInputs& in);

/// Vacuum single-click parameter of one arm, for identical detectors.
double vacuum_single_click(double basis_probability, double p_dark);

}  // namespace geoqkd::receivers
