#include "replay_weights/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rw {

namespace {

constexpr char kMagic[8] = {'R', 'W', 'S', 'N', 'A', 'P', '0', '1'};

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void put_u8(std::ostream& out, std::uint8_t v) { put_bytes(out, &v, 1); }

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_i32(std::ostream& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void get_bytes(std::istream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("snapshot truncated");
}

std::uint8_t get_u8(std::istream& in) {
  std::uint8_t v;
  get_bytes(in, &v, 1);
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  get_bytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  get_bytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::int32_t get_i32(std::istream& in) { return static_cast<std::int32_t>(get_u32(in)); }

void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
  put_u32(out, static_cast<std::uint32_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(out, v[i]);
}

Eigen::VectorXd get_vector(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  Eigen::VectorXd v(n);
  for (std::uint32_t i = 0; i < n; ++i) v[i] = get_f64(in);
  return v;
}

void put_transition(std::ostream& out, const Transition& t) {
  put_vector(out, t.state);
  put_vector(out, t.next_state);
  put_i32(out, t.action);
  put_f64(out, t.reward);
  put_u8(out, t.terminal ? 1 : 0);
}

Transition get_transition(std::istream& in) {
  Transition t;
  t.state = get_vector(in);
  t.next_state = get_vector(in);
  t.action = get_i32(in);
  t.reward = get_f64(in);
  t.terminal = get_u8(in) != 0;
  return t;
}

void put_header(std::ostream& out, std::uint8_t kind, std::uint64_t capacity,
                std::uint64_t size, std::uint64_t cursor) {
  put_bytes(out, kMagic, sizeof(kMagic));
  put_u8(out, kind);
  put_u64(out, capacity);
  put_u64(out, size);
  put_u64(out, cursor);
}

std::uint8_t check_header(std::istream& in, std::uint64_t& capacity, std::uint64_t& size,
                          std::uint64_t& cursor) {
  char magic[8];
  get_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a replay snapshot (bad magic or unsupported version)");
  }
  const std::uint8_t kind = get_u8(in);
  capacity = get_u64(in);
  size = get_u64(in);
  cursor = get_u64(in);
  if (capacity == 0 || size > capacity || cursor >= capacity) {
    throw std::runtime_error("snapshot header is inconsistent");
  }
  return kind;
}

}  // namespace

void SnapshotCodec::save(const UniformBuffer& buffer, std::ostream& out) {
  put_header(out, 0, buffer.capacity_, buffer.size_, buffer.cursor_);
  for (std::size_t i = 0; i < buffer.size_; ++i) put_transition(out, buffer.storage_[i]);
}

void SnapshotCodec::save(const PrioritizedBuffer& buffer, std::ostream& out) {
  put_header(out, 1, buffer.capacity_, buffer.size_, buffer.cursor_);
  for (std::size_t i = 0; i < buffer.size_; ++i) put_transition(out, buffer.storage_[i]);
  for (std::size_t i = 0; i < buffer.size_; ++i) {
    put_f64(out, buffer.tree_.get(i));
    put_u64(out, buffer.stamps_[i]);
  }
  put_u64(out, buffer.next_stamp_);
  put_u64(out, buffer.stale_updates_);
  put_f64(out, buffer.config_.alpha);
  put_f64(out, buffer.config_.beta_start);
  put_f64(out, buffer.config_.beta_end);
  put_f64(out, buffer.config_.epsilon_priority);
}

UniformBuffer SnapshotCodec::load_uniform(std::istream& in) {
  std::uint64_t capacity, size, cursor;
  if (check_header(in, capacity, size, cursor) != 0) {
    throw std::runtime_error("snapshot holds a prioritized buffer, not a uniform one");
  }
  UniformBuffer buffer(capacity);
  for (std::uint64_t i = 0; i < size; ++i) buffer.storage_[i] = get_transition(in);
  buffer.size_ = size;
  buffer.cursor_ = cursor;
  return buffer;
}

PrioritizedBuffer SnapshotCodec::load_prioritized(std::istream& in) {
  std::uint64_t capacity, size, cursor;
  if (check_header(in, capacity, size, cursor) != 1) {
    throw std::runtime_error("snapshot holds a uniform buffer, not a prioritized one");
  }
  PrioritizedBuffer buffer(capacity, PerConfig{});
  for (std::uint64_t i = 0; i < size; ++i) buffer.storage_[i] = get_transition(in);
  for (std::uint64_t i = 0; i < size; ++i) {
    buffer.tree_.set(i, get_f64(in));
    buffer.stamps_[i] = get_u64(in);
  }
  buffer.next_stamp_ = get_u64(in);
  buffer.stale_updates_ = get_u64(in);
  buffer.config_.alpha = get_f64(in);
  buffer.config_.beta_start = get_f64(in);
  buffer.config_.beta_end = get_f64(in);
  buffer.config_.epsilon_priority = get_f64(in);
  buffer.size_ = size;
  buffer.cursor_ = cursor;
  return buffer;
}

void save_snapshot(const UniformBuffer& buffer, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  SnapshotCodec::save(buffer, out);
}

void save_snapshot(const PrioritizedBuffer& buffer, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  SnapshotCodec::save(buffer, out);
}

UniformBuffer load_uniform_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return SnapshotCodec::load_uniform(in);
}

PrioritizedBuffer load_prioritized_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return SnapshotCodec::load_prioritized(in);
}

}  // namespace rw
