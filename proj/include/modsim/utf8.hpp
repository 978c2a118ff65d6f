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

#include <optional>
#include <string>
#include <string_view>

#include "modsim/bytes.hpp"

namespace modsim::utf8 {

// Strict decoder: rejects overlong forms, surrogates and code points above U+10FFFF.
std::optional<std::u32string> decode(ByteView data);
std::string encode(std::u32string_view code_points);

bool is_valid(ByteView data);

// C0/C1 control codes, except tab, line feed and carriage return.
bool is_control(char32_t cp);
bool is_alphabetic(char32_t cp);

// Simple (one-to-one) case folding: C.UTF-8 lowercase mapping plus the fold-only entries
// such as final sigma and the micro sign. No one-to-many folds (ß stays ß).
std::u32string fold_case(std::u32string_view text);

}  // namespace modsim::utf8
