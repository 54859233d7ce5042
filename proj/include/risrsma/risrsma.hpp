// SPDX-License-Identifier: Apache-2.0
//
// risrsma — downlink RIS-assisted RSMA link-level simulator
// Copyright (C) 2026 the risrsma authors
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

#pragma once

#include "risrsma/channel.hpp"
#include "risrsma/harness.hpp"
#include "risrsma/io.hpp"
#include "risrsma/optimizer.hpp"
#include "risrsma/rates.hpp"
#include "risrsma/scenario.hpp"
#include "risrsma/version.hpp"
