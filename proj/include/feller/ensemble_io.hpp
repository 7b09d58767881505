/*
 * Copyright (C) 2026 The feller-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "feller/paths.hpp"

namespace feller {

/*
 * FLPE ensemble files:
 *   "FLPE" | u32 version | u64 header length | header JSON | f64 positions
 * Integers and doubles are little-endian. Positions are stored path by path,
 * each path as its states at the stored times. The header carries no
 * timestamps, so equal ensembles give equal files.
 */
inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

std::vector<std::uint8_t> serialize_ensemble(const PathEnsemble& e);
PathEnsemble deserialize_ensemble(const std::vector<std::uint8_t>& bytes);

void write_ensemble(const PathEnsemble& e, const std::filesystem::path& file);
PathEnsemble read_ensemble(const std::filesystem::path& file);

/* One row per (path, time): path,t,x1,...,xd. Meant for small runs. */
void write_ensemble_csv(const PathEnsemble& e, const std::filesystem::path& file);

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n);
std::uint64_t file_checksum(const std::filesystem::path& file);
std::string checksum_hex(std::uint64_t c);

}  // namespace feller
