#pragma once

#include <cstdint>
#include <random>

namespace adaptci {

using Rng = std::mt19937_64;

/// Sub-streams owned by one replication. Each is seeded independently from
/// (base seed, replication index, stream id), so replications can run in any
/// order and on any number of threads without changing their draws.
enum class Stream : std::uint64_t {
  kEnvironment = 1,
  kDesign = 2,
  kPosterior = 3,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for replication `index` of a run with `base_seed`.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index);

/// Seed for one sub-stream of a replication.
std::uint64_t stream_seed(std::uint64_t replication_seed, Stream stream);

Rng make_stream(std::uint64_t replication_seed, Stream stream);

struct ReplicationStreams {
  Rng environment;
  Rng design;
  Rng posterior;

  static ReplicationStreams for_replication(std::uint64_t base_seed,
                                            std::uint64_t index);
};

}  // namespace adaptci
