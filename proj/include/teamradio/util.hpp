// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_UTIL_HPP_
#define TEAMRADIO_UTIL_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace teamradio {

// Git-style blob hash: sha1("blob <len>\0" + content), lowercase hex.
std::string git_blob_sha1(const std::string& content);

std::string read_file(const std::string& path);     // throws on failure
void write_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);

// Every artifact directory gets a manifest tying outputs to their inputs.
struct RunManifest {
  std::string command;
  std::string config_path;  // empty when defaults were used
  uint64_t seed = 0;
  std::string out_dir;
  std::vector<std::pair<std::string, std::string>> input_hashes;  // path -> blob sha1
};

void write_manifest(const RunManifest& manifest);

}  // namespace teamradio

#endif  // TEAMRADIO_UTIL_HPP_
