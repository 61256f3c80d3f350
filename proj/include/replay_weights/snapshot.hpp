#pragma once

// Versioned binary snapshots of replay buffers for checkpointing.
//
// Layout (all integers and IEEE-754 doubles little-endian):
//   magic   "RWSNAP01"                      8 bytes
//   kind    u8                              0 = uniform, 1 = prioritized
//   capacity u64, size u64, cursor u64
//   size transitions, each length-prefixed:
//     state_dim u32, state_dim doubles,
//     next_dim u32, next_dim doubles,
//     action i32, reward f64, terminal u8
//   prioritized only, per stored slot: leaf_priority f64, stamp u64;
//   then next_stamp u64, stale_updates u64,
//   alpha f64, beta_start f64, beta_end f64, epsilon_priority f64

#include <iosfwd>
#include <string>

#include "replay_weights/replay.hpp"

namespace rw {

class SnapshotCodec {
 public:
  static void save(const UniformBuffer& buffer, std::ostream& out);
  static void save(const PrioritizedBuffer& buffer, std::ostream& out);
  static UniformBuffer load_uniform(std::istream& in);
  static PrioritizedBuffer load_prioritized(std::istream& in);
};

void save_snapshot(const UniformBuffer& buffer, const std::string& path);
void save_snapshot(const PrioritizedBuffer& buffer, const std::string& path);
UniformBuffer load_uniform_snapshot(const std::string& path);
PrioritizedBuffer load_prioritized_snapshot(const std::string& path);

}  // namespace rw
