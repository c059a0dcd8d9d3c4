/*
 * Copyright 2026 The MPDT Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MPDT_FILEIO_HPP_
#define MPDT_FILEIO_HPP_

#include <filesystem>
#include <string_view>

namespace mpdt {

// Writes through a sibling temporary file and renames it into place, so
// readers never see a partial file. Throws std::runtime_error.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mpdt

#endif  // MPDT_FILEIO_HPP_
