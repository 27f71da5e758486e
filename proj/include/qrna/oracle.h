// Copyright 2026 The QRNA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Flat replay of a trace: every physical operation the engine recorded is re-applied to one
// big density matrix built from explicit Kronecker products. It shares no kernels with the
// engine, so agreement between the two is meaningful.

#ifndef QRNA_ORACLE_H
#define QRNA_ORACLE_H

#include <string>
#include <vector>

#include "qrna/density.h"
#include "qrna/trace.h"

namespace qrna {

struct OracleCheck {
    uint64_t seq = 0;
    std::string node;
    std::string request;
    bool state_request = false;
    double reported_f = 0;
    double reported_s = 0;
    double oracle_f = 0;
    double oracle_s = 0;
    DensityMatrix state;
};

struct OracleReport {
    std::vector<OracleCheck> checks;
    size_t operations = 0;
    size_t measurements = 0;
    size_t peak_qubits = 0;
    /// |recorded branch probability - replayed probability|, worst case.
    double max_probability_error = 0;
    /// |p(0) + p(1) - 1| over every measurement, worst case.
    double max_branch_sum_error = 0;

    double max_fidelity_error() const;
    double max_entropy_error() const;
    bool consistent(double tolerance) const;
};

OracleReport replay_trace(const Trace &trace, size_t max_qubits = 12);

std::string format_oracle_report(const OracleReport &report);

}  // namespace qrna

#endif
