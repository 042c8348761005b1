// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TEAMRADIO_DATASET_HPP_
#define TEAMRADIO_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "teamradio/percept.hpp"
#include "teamradio/types.hpp"

namespace teamradio {

// Imitation dataset record: the encoded observation (33*121 float32, fixed
// little-endian layout), the action label, the 6-bit action mask and the
// message pair attached to that step.
struct DatasetRecord {
  EncodedObservation obs;
  uint8_t action = 0;
  uint8_t mask_bits = 0x3f;
  Message message = kNoMessage;
};

class DatasetWriter {
 public:
  DatasetWriter(const std::string& path);  // throws on IO failure
  ~DatasetWriter();
  void append(const DatasetRecord& rec);
  void close();  // finalizes the record count in the header
  uint64_t count() const { return count_; }

 private:
  struct Impl;
  Impl* impl_;
  uint64_t count_ = 0;
};

class DatasetReader {
 public:
  explicit DatasetReader(const std::string& path);  // throws on bad file
  ~DatasetReader();
  uint64_t count() const { return count_; }
  DatasetRecord read(uint64_t index) const;  // random access

 private:
  struct Impl;
  Impl* impl_;
  uint64_t count_ = 0;
};

}  // namespace teamradio

#endif  // TEAMRADIO_DATASET_HPP_
