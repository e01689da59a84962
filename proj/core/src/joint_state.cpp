#include "bqkd/joint_state.hpp"

#include <cmath>

#include "bqkd/errors.hpp"

namespace bqkd {

JointState::JointState(const StateVector& travel)
    : travel_dim_(travel.dim()), ancilla_dim_(1), amps_(travel.amps()) {}

JointState::JointState(int travel_dim, int ancilla_dim, std::vector<Complex> amps)
    : travel_dim_(travel_dim), ancilla_dim_(ancilla_dim), amps_(std::move(amps)) {
  if (travel_dim < 2 || ancilla_dim < 1 ||
      amps_.size() != static_cast<std::size_t>(travel_dim) * static_cast<std::size_t>(ancilla_dim)) {
    throw Error(ErrorCode::DimensionMismatch, "joint state shape");
  }
  if (std::abs(norm() - 1.0) > kTolerance) throw Error(ErrorCode::NotNormalized, "joint state norm");
}

double JointState::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

void JointState::entangle(const AncillaMap& map) {
  if (map.d_travel() != travel_dim_) throw Error(ErrorCode::DimensionMismatch, "ancilla map travel dim");
  const int e = map.d_eve();
  const std::size_t new_anc = static_cast<std::size_t>(ancilla_dim_) * static_cast<std::size_t>(e);
  std::vector<Complex> out(static_cast<std::size_t>(travel_dim_) * new_anc);
  for (int i = 0; i < travel_dim_; ++i) {
    for (int a = 0; a < ancilla_dim_; ++a) {
      const Complex psi = amps_[static_cast<std::size_t>(i * ancilla_dim_ + a)];
      if (psi == Complex{}) continue;
      for (int j = 0; j < travel_dim_; ++j) {
        const auto& eij = map.at(i, j);
        const std::size_t base = static_cast<std::size_t>(j) * new_anc + static_cast<std::size_t>(a) * e;
        for (int k = 0; k < e; ++k) out[base + static_cast<std::size_t>(k)] += psi * eij(k);
      }
    }
  }
  amps_ = std::move(out);
  ancilla_dim_ = static_cast<int>(new_anc);
}

std::vector<Complex> JointState::project_amplitudes(const StateVector& v) const {
  std::vector<Complex> phi(static_cast<std::size_t>(ancilla_dim_));
  for (int t = 0; t < travel_dim_; ++t) {
    const Complex c = std::conj(v[t]);
    if (c == Complex{}) continue;
    const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(ancilla_dim_);
    for (int a = 0; a < ancilla_dim_; ++a) phi[static_cast<std::size_t>(a)] += c * amps_[base + static_cast<std::size_t>(a)];
  }
  return phi;
}

std::vector<double> JointState::travel_probabilities(const Basis& b) const {
  if (b.dim != travel_dim_) throw Error(ErrorCode::DimensionMismatch, "basis vs travel dim");
  std::vector<double> probs;
  probs.reserve(b.vectors.size());
  for (const auto& v : b.vectors) {
    double p = 0.0;
    for (const auto& x : project_amplitudes(v)) p += std::norm(x);
    probs.push_back(p);
  }
  return probs;
}

double JointState::collapse_travel(const Basis& b, int k) {
  const auto& v = b.vectors.at(static_cast<std::size_t>(k));
  auto phi = project_amplitudes(v);
  double p = 0.0;
  for (const auto& x : phi) p += std::norm(x);
  if (p <= 0.0) throw Error(ErrorCode::IndexOutOfRange, "collapse onto a zero-probability outcome");
  const double scale = 1.0 / std::sqrt(p);
  for (int t = 0; t < travel_dim_; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(ancilla_dim_);
    for (int a = 0; a < ancilla_dim_; ++a) amps_[base + static_cast<std::size_t>(a)] = v[t] * phi[static_cast<std::size_t>(a)] * scale;
  }
  return p;
}

int JointState::measure_travel(const Basis& b, Rng& rng) {
  const auto probs = travel_probabilities(b);
  const int k = rng.sample(probs);
  collapse_travel(b, k);
  return k;
}

double JointState::block_weight(const std::vector<int>& block) const {
  double w = 0.0;
  for (int t : block) {
    const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(ancilla_dim_);
    for (int a = 0; a < ancilla_dim_; ++a) w += std::norm(amps_[base + static_cast<std::size_t>(a)]);
  }
  return w;
}

double JointState::collapse_block(const std::vector<int>& block) {
  const double w = block_weight(block);
  if (w <= 0.0) throw Error(ErrorCode::IndexOutOfRange, "collapse onto an empty block");
  std::vector<char> keep(static_cast<std::size_t>(travel_dim_), 0);
  for (int t : block) keep.at(static_cast<std::size_t>(t)) = 1;
  const double scale = 1.0 / std::sqrt(w);
  for (int t = 0; t < travel_dim_; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(ancilla_dim_);
    for (int a = 0; a < ancilla_dim_; ++a) {
      auto& x = amps_[base + static_cast<std::size_t>(a)];
      x = keep[static_cast<std::size_t>(t)] ? x * scale : Complex{};
    }
  }
  return w;
}

int JointState::project_travel(const Partition& blocks, Rng& rng) {
  validate_partition(blocks, travel_dim_);
  std::vector<double> weights;
  for (const auto& block : blocks) weights.push_back(block_weight(block));
  const int chosen = rng.sample(weights);
  collapse_block(blocks[static_cast<std::size_t>(chosen)]);
  return chosen;
}

StateVector JointState::travel_state() const {
  if (ancilla_dim_ != 1) throw Error(ErrorCode::DimensionMismatch, "travel qudit is entangled with an ancilla");
  return StateVector(amps_);
}

}  // namespace bqkd
