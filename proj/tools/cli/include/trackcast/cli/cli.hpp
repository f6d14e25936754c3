/* Copyright 2026 The trackcast Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trackcast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;     ///< unreadable input, bad flags or config
inline constexpr int kExitNumeric = 3;   ///< training diverged
inline constexpr int kExitMismatch = 4;  ///< checkpoint / config hash mismatch

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "TRACKCAST_OUT";

/// Parses `args` (without the program name), runs the command and maps
/// failures to the exit codes above. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trackcast::cli
