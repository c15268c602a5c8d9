// Copyright 2026 The Campusgate Authors
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

#ifndef CAMPUSGATE_FILEIO_HPP_
#define CAMPUSGATE_FILEIO_HPP_

#include <filesystem>
#include <string>

namespace campusgate {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a temporary file in the same directory and renames it into
// place, so readers never observe a truncated file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace campusgate

#endif  // CAMPUSGATE_FILEIO_HPP_
