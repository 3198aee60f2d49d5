// Copyright 2026 The Datacube Authors. All Rights Reserved.
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
//

#ifndef DATACUBE_CLI_APP_H_
#define DATACUBE_CLI_APP_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace datacube::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

// Environment variable naming a catalog config file. --config overrides
// it; --load and --dependency add to whichever config is in effect.
inline constexpr char kConfigEnv[] = "DATACUBE_CONFIG";

// The datacube command line. `args` excludes the program name. Results go
// to `out`, diagnostics and usage text to `err`. Returns kExitOk,
// kExitUserError (bad flags, bad input, query errors) or
// kExitInternalError.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, std::optional<std::string> config_env);

// As above, reading the config path from the environment.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace datacube::cli

#endif  // DATACUBE_CLI_APP_H_
