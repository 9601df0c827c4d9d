#include "degen/rng.hpp"

namespace degen {
namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

uint64_t Rng::next_u64() {
  const uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

int Rng::uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

Vec Rng::in_ball(int dim, double radius) {
  Vec x(dim, 0.0);
  if (radius <= 0.0 || dim == 0) return x;
  for (;;) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      x[i] = uniform(-radius, radius);
      s += x[i] * x[i];
    }
    if (s <= radius * radius) return x;
  }
}

}  // namespace degen
