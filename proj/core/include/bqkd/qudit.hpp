#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bqkd/rng.hpp"

namespace bqkd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Absolute tolerance for amplitude-level checks.
inline constexpr double kTolerance = 1e-9;

/// A normalized pure state of a single qudit.
class StateVector {
 public:
  /// Validates dim >= 2 and unit norm; throws NotNormalized / DimensionTooSmall.
  explicit StateVector(std::vector<Complex> amps);

  static StateVector basis_state(int dim, int k);

  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  const std::vector<Complex>& amps() const noexcept { return amps_; }
  Complex operator[](int i) const { return amps_[static_cast<std::size_t>(i)]; }

  double norm() const;

 private:
  std::vector<Complex> amps_;
};

/// <a|b>
Complex inner(const StateVector& a, const StateVector& b);

struct Basis {
  int dim = 0;
  std::vector<StateVector> vectors;
  std::vector<std::string> labels;
};

enum class BasisId { B0, B1, B2, Fourier };

std::string_view to_string(BasisId b);
std::optional<BasisId> parse_basis_id(std::string_view s);

/// The three protocol bases for even d plus the Fourier basis used by the
/// two-basis baselines.
///
/// B1 index 2m+s holds (|2m> + (-1)^s |2m+1>)/sqrt2; B2 index 2m+s holds
/// (|2m+1> + (-1)^s |(2m+2) mod d>)/sqrt2. For d = 4 this labels the B2 pairs
/// (1,2) and (3,0), the same vectors as the (0,3)/(1,2) listing used for
/// ququarts.
struct BasisFamily {
  int dim = 0;
  Basis b0;
  Basis b1;
  Basis b2;
  Basis fourier;

  const Basis& get(BasisId id) const;
};

/// Throws DimensionNotEven for odd d and DimensionTooSmall for d < 4.
BasisFamily build_bases(int d);

/// Computational and Fourier bases only, for the two-basis baselines (d >= 2).
/// b1 and b2 are left empty.
BasisFamily baseline_bases(int d);

Basis computational_basis(int d);
Basis fourier_basis(int d);

/// The two computational indices (first, second) of the superposition pair
/// `pair` in B1 or B2; the basis state with index 2*pair+s is
/// (|first> + (-1)^s |second>)/sqrt2.
std::pair<int, int> pair_members(int d, BasisId basis, int pair);

/// Pair index in B1 or B2 that contains computational index k.
int pair_of(int d, BasisId basis, int k);

/// Entry k is |<b_k|s>|^2. Throws DimensionMismatch.
std::vector<double> born_probabilities(const StateVector& s, const Basis& b);

struct Measurement {
  int outcome;
  StateVector post_state;
};

/// Projective measurement with collapse onto the sampled basis vector.
Measurement measure(const StateVector& s, const Basis& b, Rng& rng);

using Partition = std::vector<std::vector<int>>;

/// Throws InvalidPartition unless `blocks` partitions {0..d-1} into nonempty blocks.
void validate_partition(const Partition& blocks, int d);

struct BlockProjection {
  int block;
  StateVector post_state;
};

/// Coarse-grained measurement: samples a block by its total weight and
/// renormalizes the projection onto that block.
BlockProjection project_subspace(const StateVector& s, const Partition& blocks, Rng& rng);

/// Eve's sub-normalized ancilla vectors E_ij from U(|i>|0>) = sum_j |j>|E_ij>.
class AncillaMap {
 public:
  /// vectors[i][j] is E_ij. Checks the unitarity sum rule; throws NotUnitary
  /// or DimensionMismatch.
  AncillaMap(int d_travel, int d_eve, std::vector<std::vector<Eigen::VectorXcd>> vectors);

  int d_travel() const noexcept { return d_travel_; }
  int d_eve() const noexcept { return d_eve_; }
  const Eigen::VectorXcd& at(int i, int j) const {
    return vectors_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  /// max over (i, i') of |sum_j <E_i'j|E_ij> - delta_i'i|.
  double sum_rule_violation() const;

  static AncillaMap identity(int d, int d_eve);
  /// |i>|0> -> |i>|i>.
  static AncillaMap copy(int d);

 private:
  int d_travel_;
  int d_eve_;
  std::vector<std::vector<Eigen::VectorXcd>> vectors_;
};

/// Max-entry deviation of U^dagger U from the identity.
double unitarity_error(const Matrix& u);

/// Partial inner products (<j| x I) U (|i> x |0>) over the ordering
/// index = travel * d_eve + ancilla.
AncillaMap extract_ancilla_map(const Matrix& u, int d, int d_eve);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal folded back into Q.
Matrix random_unitary(int dim, Rng& rng);

}  // namespace bqkd
