#include "bqkd/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bqkd/errors.hpp"

namespace bqkd {

namespace {

std::string ket(int k) { return "|" + std::to_string(k) + "⟩"; }

StateVector pair_state(int d, int a, int b, int sign) {
  std::vector<Complex> amps(static_cast<std::size_t>(d));
  const double h = 1.0 / std::numbers::sqrt2;
  amps[static_cast<std::size_t>(a)] = h;
  amps[static_cast<std::size_t>(b)] = sign * h;
  return StateVector(std::move(amps));
}

Basis pair_basis(int d, BasisId id) {
  Basis basis;
  basis.dim = d;
  for (int m = 0; m < d / 2; ++m) {
    auto [a, b] = pair_members(d, id, m);
    for (int s = 0; s < 2; ++s) {
      basis.vectors.push_back(pair_state(d, a, b, s == 0 ? 1 : -1));
      basis.labels.push_back("(" + ket(a) + (s == 0 ? "+" : "−") + ket(b) + ")/√2");
    }
  }
  return basis;
}

void require_same_dim(int a, int b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
  if (amps_.size() < 2) {
    throw Error(ErrorCode::DimensionTooSmall, "state dimension must be at least 2");
  }
  if (std::abs(norm() - 1.0) > kTolerance) {
    throw Error(ErrorCode::NotNormalized, "state norm " + std::to_string(norm()));
  }
}

StateVector StateVector::basis_state(int dim, int k) {
  if (k < 0 || k >= dim) throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(k));
  std::vector<Complex> amps(static_cast<std::size_t>(dim));
  amps[static_cast<std::size_t>(k)] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim());
  Complex sum = 0.0;
  for (int i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

std::string_view to_string(BasisId b) {
  switch (b) {
    case BasisId::B0: return "B0";
    case BasisId::B1: return "B1";
    case BasisId::B2: return "B2";
    case BasisId::Fourier: return "F";
  }
  return "?";
}

std::optional<BasisId> parse_basis_id(std::string_view s) {
  if (s == "B0") return BasisId::B0;
  if (s == "B1") return BasisId::B1;
  if (s == "B2") return BasisId::B2;
  if (s == "F" || s == "Fourier") return BasisId::Fourier;
  return std::nullopt;
}

const Basis& BasisFamily::get(BasisId id) const {
  switch (id) {
    case BasisId::B0: return b0;
    case BasisId::B1: return b1;
    case BasisId::B2: return b2;
    case BasisId::Fourier: return fourier;
  }
  return b0;
}

std::pair<int, int> pair_members(int d, BasisId basis, int pair) {
  if (pair < 0 || pair >= d / 2) {
    throw Error(ErrorCode::IndexOutOfRange, "pair index " + std::to_string(pair));
  }
  switch (basis) {
    case BasisId::B1: return {2 * pair, 2 * pair + 1};
    case BasisId::B2: return {2 * pair + 1, (2 * pair + 2) % d};
    default: throw Error(ErrorCode::IndexOutOfRange, "basis has no pair structure");
  }
}

int pair_of(int d, BasisId basis, int k) {
  if (k < 0 || k >= d) throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(k));
  switch (basis) {
    case BasisId::B1: return k / 2;
    case BasisId::B2: return k % 2 == 1 ? (k - 1) / 2 : (k == 0 ? d / 2 - 1 : k / 2 - 1);
    default: throw Error(ErrorCode::IndexOutOfRange, "basis has no pair structure");
  }
}

Basis computational_basis(int d) {
  Basis basis;
  basis.dim = d;
  for (int k = 0; k < d; ++k) {
    basis.vectors.push_back(StateVector::basis_state(d, k));
    basis.labels.push_back(ket(k));
  }
  return basis;
}

Basis fourier_basis(int d) {
  Basis basis;
  basis.dim = d;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    std::vector<Complex> amps(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      // Reduce j*k mod d first so the phase argument stays small.
      const double phase = 2.0 * std::numbers::pi * ((j * k) % d) / d;
      amps[static_cast<std::size_t>(j)] = std::polar(scale, phase);
    }
    basis.vectors.emplace_back(std::move(amps));
    basis.labels.push_back("|f" + std::to_string(k) + "⟩");
  }
  return basis;
}

BasisFamily build_bases(int d) {
  if (d % 2 != 0) throw Error(ErrorCode::DimensionNotEven, "d = " + std::to_string(d));
  if (d < 4) throw Error(ErrorCode::DimensionTooSmall, "d = " + std::to_string(d));
  BasisFamily family;
  family.dim = d;
  family.b0 = computational_basis(d);
  family.b1 = pair_basis(d, BasisId::B1);
  family.b2 = pair_basis(d, BasisId::B2);
  family.fourier = fourier_basis(d);
  return family;
}

BasisFamily baseline_bases(int d) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "d = " + std::to_string(d));
  BasisFamily family;
  family.dim = d;
  family.b0 = computational_basis(d);
  family.fourier = fourier_basis(d);
  return family;
}

std::vector<double> born_probabilities(const StateVector& s, const Basis& b) {
  require_same_dim(s.dim(), b.dim);
  std::vector<double> probs;
  probs.reserve(b.vectors.size());
  for (const auto& v : b.vectors) probs.push_back(std::norm(inner(v, s)));
  return probs;
}

Measurement measure(const StateVector& s, const Basis& b, Rng& rng) {
  const auto probs = born_probabilities(s, b);
  const int k = rng.sample(probs);
  return {k, b.vectors[static_cast<std::size_t>(k)]};
}

void validate_partition(const Partition& blocks, int d) {
  std::vector<int> seen(static_cast<std::size_t>(d), 0);
  for (const auto& block : blocks) {
    if (block.empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
    for (int i : block) {
      if (i < 0 || i >= d) throw Error(ErrorCode::InvalidPartition, "index " + std::to_string(i));
      if (seen[static_cast<std::size_t>(i)]++) {
        throw Error(ErrorCode::InvalidPartition, "index " + std::to_string(i) + " repeated");
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(ErrorCode::InvalidPartition, "blocks do not cover every index");
  }
}

BlockProjection project_subspace(const StateVector& s, const Partition& blocks, Rng& rng) {
  validate_partition(blocks, s.dim());
  std::vector<double> weights;
  weights.reserve(blocks.size());
  for (const auto& block : blocks) {
    double w = 0.0;
    for (int i : block) w += std::norm(s[i]);
    weights.push_back(w);
  }
  const int chosen = rng.sample(weights);
  const double scale = 1.0 / std::sqrt(weights[static_cast<std::size_t>(chosen)]);
  std::vector<Complex> amps(static_cast<std::size_t>(s.dim()));
  for (int i : blocks[static_cast<std::size_t>(chosen)]) amps[static_cast<std::size_t>(i)] = s[i] * scale;
  return {chosen, StateVector(std::move(amps))};
}

AncillaMap::AncillaMap(int d_travel, int d_eve, std::vector<std::vector<Eigen::VectorXcd>> vectors)
    : d_travel_(d_travel), d_eve_(d_eve), vectors_(std::move(vectors)) {
  if (d_travel < 1 || d_eve < 1 || static_cast<int>(vectors_.size()) != d_travel) {
    throw Error(ErrorCode::DimensionMismatch, "ancilla map shape");
  }
  for (const auto& row : vectors_) {
    if (static_cast<int>(row.size()) != d_travel) throw Error(ErrorCode::DimensionMismatch, "ancilla map row");
    for (const auto& v : row) {
      if (v.size() != d_eve) throw Error(ErrorCode::DimensionMismatch, "ancilla vector length");
    }
  }
  if (sum_rule_violation() > kTolerance) {
    throw Error(ErrorCode::NotUnitary, "ancilla vectors violate the unitarity sum rule");
  }
}

double AncillaMap::sum_rule_violation() const {
  double worst = 0.0;
  for (int i = 0; i < d_travel_; ++i) {
    for (int ip = 0; ip < d_travel_; ++ip) {
      Complex sum = 0.0;
      for (int j = 0; j < d_travel_; ++j) sum += at(ip, j).dot(at(i, j));
      worst = std::max(worst, std::abs(sum - (i == ip ? 1.0 : 0.0)));
    }
  }
  return worst;
}

AncillaMap AncillaMap::identity(int d, int d_eve) {
  std::vector<std::vector<Eigen::VectorXcd>> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d_eve);
      if (i == j) e(0) = 1.0;
      v[static_cast<std::size_t>(i)].push_back(std::move(e));
    }
  }
  return AncillaMap(d, d_eve, std::move(v));
}

AncillaMap AncillaMap::copy(int d) {
  std::vector<std::vector<Eigen::VectorXcd>> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
      if (i == j) e(i) = 1.0;
      v[static_cast<std::size_t>(i)].push_back(std::move(e));
    }
  }
  return AncillaMap(d, d, std::move(v));
}

double unitarity_error(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

AncillaMap extract_ancilla_map(const Matrix& u, int d, int d_eve) {
  if (d < 1 || d_eve < 1 || u.rows() != static_cast<Eigen::Index>(d) * d_eve || u.cols() != u.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "unitary is not (d*d_eve) x (d*d_eve)");
  }
  if (unitarity_error(u) > kTolerance) throw Error(ErrorCode::NotUnitary, "U^dagger U != I");
  std::vector<std::vector<Eigen::VectorXcd>> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const Eigen::Index column = static_cast<Eigen::Index>(i) * d_eve;
    for (int j = 0; j < d; ++j) {
      v[static_cast<std::size_t>(i)].push_back(u.block(static_cast<Eigen::Index>(j) * d_eve, column, d_eve, 1));
    }
  }
  return AncillaMap(d, d_eve, std::move(v));
}

Matrix random_unitary(int dim, Rng& rng) {
  Matrix g(dim, dim);
  // Column-major fill order, fixed so the result is a pure function of the seed.
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = Complex(re, im) / std::numbers::sqrt2;
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

}  // namespace bqkd
