// Copyright 2026 The splitstream Authors.
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

#include "splitstream/codec.hpp"
#include "splitstream/metrics/bd_rate.hpp"
#include "splitstream/metrics/rate.hpp"
#include "splitstream/metrics/yolo.hpp"
#include "splitstream/qlayer.hpp"
#include "splitstream/splitnet/dataset.hpp"
#include "splitstream/splitnet/network.hpp"
#include "splitstream/splitnet/profile.hpp"
#include "splitstream/splitnet/split.hpp"
#include "splitstream/splitnet/train.hpp"
#include "splitstream/tensor.hpp"
#include "splitstream/tiler.hpp"
