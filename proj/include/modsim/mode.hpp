/*
   Copyright 2026 The ModSim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modsim {

enum class Mode { none, builderMod, userMod };

inline std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::none: return "none";
        case Mode::builderMod: return "builderMod";
        case Mode::userMod: return "userMod";
    }
    return "unknown";
}

inline Mode mode_from_string(std::string_view name) {
    if (name == "none") return Mode::none;
    if (name == "builderMod" || name == "buildermod" || name == "builder") return Mode::builderMod;
    if (name == "userMod" || name == "usermod" || name == "user") return Mode::userMod;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "' (expected none, builderMod or userMod)");
}

}  // namespace modsim
