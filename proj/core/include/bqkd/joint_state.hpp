#pragma once

#include <vector>

#include "bqkd/qudit.hpp"

namespace bqkd {

/// Pure state of the travelling qudit together with every ancilla Eve has
/// attached so far. Amplitudes are indexed travel * ancilla_dim + ancilla,
/// where the ancilla index is row-major over registers in attachment order.
///
/// Parties only ever act on the travel factor; with ancilla_dim() == 1 this
/// is an ordinary single-qudit state.
class JointState {
 public:
  explicit JointState(const StateVector& travel);

  /// Raw constructor for deserialization; validates the shape and norm.
  JointState(int travel_dim, int ancilla_dim, std::vector<Complex> amps);

  int travel_dim() const noexcept { return travel_dim_; }
  int ancilla_dim() const noexcept { return ancilla_dim_; }
  const std::vector<Complex>& amps() const noexcept { return amps_; }

  double norm() const;

  /// Applies |i>|0> -> sum_j |j>|E_ij> with a fresh register appended.
  void entangle(const AncillaMap& map);

  /// Outcome distribution of a travel-factor measurement in `b`.
  std::vector<double> travel_probabilities(const Basis& b) const;

  /// Partial projection onto the sampled basis vector, then renormalization.
  int measure_travel(const Basis& b, Rng& rng);

  /// Collapses onto outcome k; returns its probability. Used for exact branching.
  double collapse_travel(const Basis& b, int k);

  /// Weight of the travel factor inside span{|t> : t in block}.
  double block_weight(const std::vector<int>& block) const;

  /// Projects onto the block's span and renormalizes; returns the weight.
  double collapse_block(const std::vector<int>& block);

  /// Block measurement on the travel factor; returns the block index.
  int project_travel(const Partition& blocks, Rng& rng);

  /// The travel state when no ancilla is attached.
  StateVector travel_state() const;

  bool operator==(const JointState&) const = default;

 private:
  // phi_k[a] = sum_t conj(b_k[t]) psi[t, a]
  std::vector<Complex> project_amplitudes(const StateVector& v) const;

  int travel_dim_;
  int ancilla_dim_;
  std::vector<Complex> amps_;
};

}  // namespace bqkd
