// Copyright 2026 The Authors.
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

#include "scg/common.hpp"
#include "scg/config.hpp"
#include "scg/constraint.hpp"
#include "scg/experiment.hpp"
#include "scg/io.hpp"
#include "scg/multilinear.hpp"
#include "scg/objective.hpp"
#include "scg/optimize.hpp"
#include "scg/rating_matrix.hpp"
#include "scg/rng.hpp"
#include "scg/rounding.hpp"
#include "scg/verify.hpp"
