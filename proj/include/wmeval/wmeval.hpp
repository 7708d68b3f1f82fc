// Copyright 2026 The wmeval Authors. All Rights Reserved.
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


#ifndef WMEVAL_WMEVAL_HPP
#define WMEVAL_WMEVAL_HPP

#include "wmeval/action.hpp"
#include "wmeval/downstream.hpp"
#include "wmeval/engine.hpp"
#include "wmeval/error.hpp"
#include "wmeval/generation.hpp"
#include "wmeval/interchange/artifacts.hpp"
#include "wmeval/interchange/manifest.hpp"
#include "wmeval/interchange/tensor.hpp"
#include "wmeval/metrics.hpp"
#include "wmeval/numerics/assignment.hpp"
#include "wmeval/numerics/image_quality.hpp"
#include "wmeval/numerics/matrix.hpp"
#include "wmeval/numerics/morphology.hpp"
#include "wmeval/numerics/statistics.hpp"
#include "wmeval/preference.hpp"
#include "wmeval/reconstruction.hpp"
#include "wmeval/report.hpp"

#endif  // WMEVAL_WMEVAL_HPP
