#include "adaptci/rng.hpp"

namespace adaptci {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) {
  return mix64(mix64(base_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t stream_seed(std::uint64_t rep_seed, Stream stream) {
  return mix64(rep_seed ^ (static_cast<std::uint64_t>(stream) *
                           0xd6e8feb86659fd93ULL));
}

Rng make_stream(std::uint64_t rep_seed, Stream stream) {
  return Rng(stream_seed(rep_seed, stream));
}

ReplicationStreams ReplicationStreams::for_replication(std::uint64_t base_seed,
                                                       std::uint64_t index) {
  const std::uint64_t seed = replication_seed(base_seed, index);
  return ReplicationStreams{make_stream(seed, Stream::kEnvironment),
                            make_stream(seed, Stream::kDesign),
                            make_stream(seed, Stream::kPosterior)};
}

}  // namespace adaptci
