#include "pgakit/random.hpp"

#include <cmath>

namespace pgakit {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix(mix(seed) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL)));
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

double SplitMix64::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  double rad = std::sqrt(-2.0 * std::log(u1));
  double th = 6.283185307179586476925 * u2;
  spare_ = rad * std::sin(th);
  have_spare_ = true;
  return rad * std::cos(th);
}

std::uint64_t SplitMix64::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

Vec SplitMix64::normal_vector(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Mat random_orthonormal(SplitMix64& rng, int d, int k) {
  Mat A(d, k);
  for (int j = 0; j < k; ++j) A.col(j) = rng.normal_vector(d);
  Eigen::HouseholderQR<Mat> qr(A);
  return qr.householderQ() * Mat::Identity(d, k);
}

}  // namespace pgakit
