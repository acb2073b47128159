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

#ifndef RCTRP_RCTRP_HPP
#define RCTRP_RCTRP_HPP

#include "rctrp/analysis.hpp"
#include "rctrp/correlation.hpp"
#include "rctrp/estimation.hpp"
#include "rctrp/gof.hpp"
#include "rctrp/io.hpp"
#include "rctrp/model.hpp"
#include "rctrp/rng.hpp"
#include "rctrp/sampling.hpp"
#include "rctrp/simulator.hpp"
#include "rctrp/units.hpp"
#include "rctrp/version.hpp"

#endif
