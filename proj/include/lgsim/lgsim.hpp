// Copyright 2026 The lgsim Authors
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

#include "lgsim/numerics.hpp"
#include "lgsim/qop.hpp"
#include "lgsim/golden_section.hpp"
#include "lgsim/lg_protocol.hpp"
#include "lgsim/inrm_ancilla.hpp"
#include "lgsim/cg_map.hpp"
#include "lgsim/ledger.hpp"
#include "lgsim/noise.hpp"
