// Copyright 2026 The lcltlab Authors
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

#include "bounds.hpp"
#include "continuum.hpp"
#include "decomposition.hpp"
#include "distribution.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "experiment.hpp"
#include "geograph.hpp"
#include "lattice_perc.hpp"
#include "local_clt.hpp"
#include "motif.hpp"
#include "points.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "span.hpp"
#include "union_find.hpp"
