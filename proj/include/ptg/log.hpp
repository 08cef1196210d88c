/*
 * Copyright 2026 The ptgsolve authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iostream>

namespace ptg::logging {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

/// Trace verbosity from the SPTG_LOG environment variable ("info"/"debug").
Level level();

}  // namespace ptg::logging

#define PTG_LOG_INFO(expr)                                         \
  do {                                                             \
    if (::ptg::logging::level() >= ::ptg::logging::Level::Info)    \
      std::cerr << "[ptg] " << expr << '\n';                       \
  } while (0)

#define PTG_LOG_DEBUG(expr)                                        \
  do {                                                             \
    if (::ptg::logging::level() >= ::ptg::logging::Level::Debug)   \
      std::cerr << "[ptg:debug] " << expr << '\n';                 \
  } while (0)
