// Copyright 2026 The TeamRadio Authors
// SPDX-License-Identifier: Apache-2.0

#include "teamradio/dataset.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace teamradio {

namespace {

constexpr char kMagic[4] = {'T', 'R', 'D', 'S'};
constexpr uint32_t kVersion = 1;
// header: magic, version, channels, cells, count
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 4 + 8;
constexpr std::size_t kRecordSize = sizeof(float) * kObsValues + 4;

}  // namespace

struct DatasetWriter::Impl {
  std::ofstream out;
};

DatasetWriter::DatasetWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("dataset: cannot write " + path);
  }
  impl_->out.write(kMagic, 4);
  uint32_t v = kVersion, ch = kObsChannels, cells = kNumCells;
  uint64_t count = 0;
  impl_->out.write(reinterpret_cast<const char*>(&v), 4);
  impl_->out.write(reinterpret_cast<const char*>(&ch), 4);
  impl_->out.write(reinterpret_cast<const char*>(&cells), 4);
  impl_->out.write(reinterpret_cast<const char*>(&count), 8);
}

DatasetWriter::~DatasetWriter() {
  close();
  delete impl_;
}

void DatasetWriter::append(const DatasetRecord& rec) {
  impl_->out.write(reinterpret_cast<const char*>(rec.obs.v.data()),
                   sizeof(float) * kObsValues);
  uint8_t tail[4] = {rec.action, rec.mask_bits, rec.message.word1, rec.message.word2};
  impl_->out.write(reinterpret_cast<const char*>(tail), 4);
  ++count_;
}

void DatasetWriter::close() {
  if (!impl_->out.is_open()) return;
  impl_->out.seekp(4 + 4 + 4 + 4, std::ios::beg);
  impl_->out.write(reinterpret_cast<const char*>(&count_), 8);
  impl_->out.close();
  if (impl_->out.fail()) throw std::runtime_error("dataset: finalize failed");
}

struct DatasetReader::Impl {
  mutable std::ifstream in;
};

DatasetReader::DatasetReader(const std::string& path) : impl_(new Impl) {
  impl_->in.open(path, std::ios::binary);
  if (!impl_->in) {
    delete impl_;
    throw std::runtime_error("dataset: cannot read " + path);
  }
  char magic[4];
  uint32_t v = 0, ch = 0, cells = 0;
  impl_->in.read(magic, 4);
  impl_->in.read(reinterpret_cast<char*>(&v), 4);
  impl_->in.read(reinterpret_cast<char*>(&ch), 4);
  impl_->in.read(reinterpret_cast<char*>(&cells), 4);
  impl_->in.read(reinterpret_cast<char*>(&count_), 8);
  if (!impl_->in || std::memcmp(magic, kMagic, 4) != 0 || v != kVersion ||
      ch != kObsChannels || cells != kNumCells) {
    delete impl_;
    throw std::runtime_error("dataset: bad header in " + path);
  }
}

DatasetReader::~DatasetReader() { delete impl_; }

DatasetRecord DatasetReader::read(uint64_t index) const {
  if (index >= count_) throw std::out_of_range("dataset: record index out of range");
  DatasetRecord rec;
  impl_->in.seekg(static_cast<std::streamoff>(kHeaderSize + index * kRecordSize),
                  std::ios::beg);
  impl_->in.read(reinterpret_cast<char*>(rec.obs.v.data()), sizeof(float) * kObsValues);
  uint8_t tail[4];
  impl_->in.read(reinterpret_cast<char*>(tail), 4);
  if (!impl_->in) throw std::runtime_error("dataset: truncated record");
  rec.action = tail[0];
  rec.mask_bits = tail[1];
  rec.message = Message{tail[2], tail[3]};
  return rec;
}

}  // namespace teamradio
