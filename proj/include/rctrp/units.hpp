// rctrp - statistics toolkit for reverberation-chamber TRP measurements
// Copyright (C) 2026 the rctrp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RCTRP_UNITS_HPP
#define RCTRP_UNITS_HPP

#include <cmath>
#include <stdexcept>

namespace rctrp {

// All internal power math is linear watts; dBm/dB appear only at I/O
// boundaries.

inline double dbm_to_watts(double dbm) {
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watts_to_dbm(double watts) {
    if (!(watts > 0.0))
        throw std::domain_error("watts_to_dbm: power must be > 0 W");
    return 10.0 * std::log10(watts) + 30.0;
}

inline double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double x) {
    if (!(x > 0.0))
        throw std::domain_error("linear_to_db: value must be > 0");
    return 10.0 * std::log10(x);
}

} // namespace rctrp

#endif
