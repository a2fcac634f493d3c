#include "mcloc/rng.hpp"

#include <cmath>

#include "mcloc/types.hpp"

namespace mcloc {

std::string_view to_string(StreamLabel label) {
  switch (label) {
    case StreamLabel::Mobility:
      return "mobility";
    case StreamLabel::Workload:
      return "workload";
    case StreamLabel::CodeMigration:
      return "code-migration";
    case StreamLabel::Protocol:
      return "protocol";
  }
  return "?";
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t label_hash(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, StreamLabel label)
    : seed_(seed), label_(label), engine_(mix64(seed ^ mix64(label_hash(to_string(label))))) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw SimError("RngStream::below: empty range");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw ParameterError("exponential rate must be positive");
  return -std::log1p(-uniform()) / rate;
}

}  // namespace mcloc
