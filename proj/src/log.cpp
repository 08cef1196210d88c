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

#include "ptg/log.hpp"

#include <cstdlib>
#include <cstring>

namespace ptg::logging {

Level level() {
  static Level cached = [] {
    const char* env = std::getenv("SPTG_LOG");
    if (env == nullptr) return Level::Quiet;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    return Level::Quiet;
  }();
  return cached;
}

}  // namespace ptg::logging
