// Copyright 2026 The fairprice Authors
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

#include "fairprice/audit.hpp"
#include "fairprice/decomposition.hpp"
#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/fit.hpp"
#include "fairprice/noise.hpp"
#include "fairprice/ope.hpp"
#include "fairprice/optimize.hpp"
#include "fairprice/parallel.hpp"
#include "fairprice/parity.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"
#include "fairprice/rng.hpp"
#include "fairprice/share.hpp"
#include "fairprice/sim.hpp"

namespace fairprice {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairprice
