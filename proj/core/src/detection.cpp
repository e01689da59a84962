#include "bqkd/detection.hpp"

#include <array>
#include <cmath>

#include "bqkd/errors.hpp"
#include "bqkd/sift.hpp"

namespace bqkd {

namespace {

using Vec = Eigen::VectorXcd;

constexpr double kReachable = 1e-15;

bool is_pair_basis(BasisId b) { return b == BasisId::B1 || b == BasisId::B2; }

// (first, second, sign) of a B1/B2 basis state: (|first> + sign |second>)/sqrt2.
struct PairState {
  int first;
  int second;
  double sign;
};

PairState pair_state(int d, BasisId b, int index) {
  const auto [a, c] = pair_members(d, b, index / 2);
  return {a, c, index % 2 == 0 ? 1.0 : -1.0};
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void check_index(int d, int k) {
  if (k < 0 || k >= d) throw Error(ErrorCode::IndexOutOfRange, "state index " + std::to_string(k));
}

// Branches of a joint state: (probability, state).
using Branches = std::vector<std::pair<double, JointState>>;

Branches eve_branches(const EveStrategy& s, Direction dir, JointState in, std::optional<BasisId> eve_basis,
                      const BasisFamily& family) {
  Branches out;
  if (const auto* sub = std::get_if<SubspaceAttack>(&s)) {
    if (dir == Direction::Backward) return {{1.0, std::move(in)}};
    for (const auto& block : sub->blocks) {
      if (in.block_weight(block) <= kReachable) continue;
      JointState b = in;
      const double w = b.collapse_block(block);
      out.emplace_back(w, std::move(b));
    }
    return out;
  }
  if (const auto* ir = std::get_if<InterceptResend>(&s)) {
    if (dir == Direction::Backward) return {{1.0, std::move(in)}};
    std::vector<BasisId> bases = ir->bases;
    if (eve_basis) bases = {*eve_basis};
    for (BasisId e : bases) {
      const auto& basis = family.get(e);
      const auto probs = in.travel_probabilities(basis);
      for (int o = 0; o < basis.dim; ++o) {
        if (probs[static_cast<std::size_t>(o)] <= kReachable) continue;
        JointState b = in;
        const double w = b.collapse_travel(basis, o);
        out.emplace_back(w / static_cast<double>(bases.size()), std::move(b));
      }
    }
    return out;
  }
  if (dir == Direction::Forward && std::holds_alternative<EntangleMeasureCopy>(s)) {
    in.entangle(AncillaMap::copy(in.travel_dim()));
  } else if (const auto* g = std::get_if<GeneralEntangle>(&s); g && dir == Direction::Forward) {
    in.entangle(g->map);
  } else if (const auto* t = std::get_if<TwoWayEntangle>(&s)) {
    in.entangle(dir == Direction::Forward ? t->forward : t->backward);
  }
  return {{1.0, std::move(in)}};
}

}  // namespace

double detection_within(double p_round, int l) { return 1.0 - std::pow(1.0 - p_round, l); }

double subspace_detection(int l) { return detection_within(0.5, l); }

std::optional<double> intercept_resend_error(int d, BasisId alice, BasisId bob, BasisId eve) {
  const auto family = build_bases(d);
  double keep = 0.0;
  double err = 0.0;
  for (int ai = 0; ai < d; ++ai) {
    const auto& sent = family.get(alice).vectors[static_cast<std::size_t>(ai)];
    const auto pe = born_probabilities(sent, family.get(eve));
    for (int eo = 0; eo < d; ++eo) {
      if (pe[static_cast<std::size_t>(eo)] <= kReachable) continue;
      const auto pb = born_probabilities(family.get(eve).vectors[static_cast<std::size_t>(eo)], family.get(bob));
      for (int bo = 0; bo < d; ++bo) {
        const double w = pe[static_cast<std::size_t>(eo)] * pb[static_cast<std::size_t>(bo)];
        if (w <= kReachable) continue;
        const auto v = sift_symbol(d, alice, ai, bob, bo);
        if (!v.kept()) continue;
        keep += w;
        if (v.alice.symbol != v.bob.symbol) err += w;
      }
    }
  }
  if (keep <= 0.0) return std::nullopt;
  return err / keep;
}

double gea_correct_probability(const AncillaMap& e, BasisId ab, int ai, BasisId bb) {
  const int d = e.d_travel();
  check_index(d, ai);
  if (ab == BasisId::B0 && bb == BasisId::B0) return e.at(ai, ai).squaredNorm();
  if (ab == bb && is_pair_basis(ab)) {
    const auto p = pair_state(d, ab, ai);
    const int i = p.first, j = p.second;
    const double s = p.sign;
    return (0.5 * (e.at(i, i) + s * e.at(i, j) + s * e.at(j, i) + e.at(j, j))).squaredNorm();
  }
  if (ab == BasisId::B0 && is_pair_basis(bb)) {
    const auto [a, c] = pair_members(d, bb, pair_of(d, bb, ai));
    const int k = a == ai ? c : a;
    const double plus = 0.5 * (e.at(ai, ai) + e.at(ai, k)).squaredNorm();
    const double minus = 0.5 * (e.at(ai, ai) - e.at(ai, k)).squaredNorm();
    return plus + minus;
  }
  if (is_pair_basis(ab) && bb == BasisId::B0) {
    const auto p = pair_state(d, ab, ai);
    const int i = p.first, j = p.second;
    const double s = p.sign;
    const double pi = 0.5 * (e.at(i, i) + s * e.at(j, i)).squaredNorm();
    const double pj = 0.5 * (e.at(i, j) + s * e.at(j, j)).squaredNorm();
    return pi + pj;
  }
  throw Error(ErrorCode::NoClosedForm, "no closed form for " + std::string(to_string(ab)) + " x " +
                                           std::string(to_string(bb)));
}

double gea_detection(const AncillaMap& e, BasisId ab, int ai, BasisId bb) {
  return 1.0 - gea_correct_probability(e, ab, ai, bb);
}

double two_way_measure_correct(const AncillaMap& e, const AncillaMap& f, BasisId ab, int ai) {
  const int d = e.d_travel();
  check_index(d, ai);
  if (ab == BasisId::B0) return e.at(ai, ai).squaredNorm() * f.at(ai, ai).squaredNorm();
  if (!is_pair_basis(ab)) throw Error(ErrorCode::NoClosedForm, "measure case needs B0, B1 or B2");
  const auto p = pair_state(d, ab, ai);
  const int i = p.first, j = p.second;
  const double s = p.sign;
  const double p_si = 0.5 * (e.at(i, i) + s * e.at(j, i)).squaredNorm();
  const double p_sj = 0.5 * (e.at(i, j) + s * e.at(j, j)).squaredNorm();
  const double p_i = f.at(i, i).squaredNorm() + f.at(i, j).squaredNorm();
  const double p_j = f.at(j, j).squaredNorm() + f.at(j, i).squaredNorm();
  return p_si * p_i + p_sj * p_j;
}

double two_way_reflect_correct(const AncillaMap& e, const AncillaMap& f, BasisId ab, int ai) {
  const int d = e.d_travel();
  check_index(d, ai);
  if (ab == BasisId::B0) {
    Vec sum = Vec::Zero(e.d_eve() * f.d_eve());
    for (int j = 0; j < d; ++j) sum += kron(e.at(ai, j), f.at(j, ai));
    return sum.squaredNorm();
  }
  if (!is_pair_basis(ab)) throw Error(ErrorCode::NoClosedForm, "reflect case needs B0, B1 or B2");
  const auto p = pair_state(d, ab, ai);
  const std::array<int, 2> idx{p.first, p.second};
  const std::array<double, 2> c{1.0, p.sign};
  Vec sum = Vec::Zero(e.d_eve() * f.d_eve());
  for (int k = 0; k < d; ++k) {
    for (int m = 0; m < 2; ++m) {
      for (int n = 0; n < 2; ++n) sum += c[m] * c[n] * kron(e.at(idx[m], k), f.at(k, idx[n]));
    }
  }
  return 0.25 * sum.squaredNorm();
}

double closed_form_detection(const EveStrategy& s, int d, BasisId ab, int ai, std::optional<BasisId> bb) {
  if (std::holds_alternative<EntangleMeasureCopy>(s)) {
    if (!bb) throw Error(ErrorCode::MissingAncillaMap, "copy attack has no backward map");
    return gea_detection(AncillaMap::copy(d), ab, ai, *bb);
  }
  if (const auto* g = std::get_if<GeneralEntangle>(&s)) {
    if (!bb) throw Error(ErrorCode::MissingAncillaMap, "general attack has no backward map");
    return gea_detection(g->map, ab, ai, *bb);
  }
  if (const auto* t = std::get_if<TwoWayEntangle>(&s)) {
    if (bb && *bb != BasisId::B0) throw Error(ErrorCode::NoClosedForm, "Bob measures only in B0 here");
    return 1.0 - (bb ? two_way_measure_correct(t->forward, t->backward, ab, ai)
                     : two_way_reflect_correct(t->forward, t->backward, ab, ai));
  }
  throw Error(ErrorCode::MissingAncillaMap, strategy_name(s) + " carries no ancilla map");
}

std::optional<double> exact_class_error(const RunConfig& cfg, RoundClass cls, std::optional<BasisId> eve_basis,
                                        std::optional<int> alice_index) {
  const int d = cfg.dim;
  const auto family = protocol_family(cfg.protocol, d);
  const bool two_way = is_two_way(cfg.protocol);
  if (two_way && cls.bob_basis && *cls.bob_basis != BasisId::B0) return std::nullopt;
  if (!two_way && !cls.bob_basis) return std::nullopt;
  const auto& abasis = family.get(cls.alice_basis);

  double keep = 0.0;
  double err = 0.0;
  for (int ai = 0; ai < d; ++ai) {
    if (alice_index && *alice_index != ai) continue;
    RoundRecord probe;
    probe.protocol = cfg.protocol;
    probe.alice_basis = cls.alice_basis;
    probe.alice_index = ai;
    probe.bob_basis = cls.bob_basis;
    for (auto& [wf, sf] : eve_branches(cfg.eve, Direction::Forward, JointState(abasis.vectors[static_cast<std::size_t>(ai)]),
                                       eve_basis, family)) {
      const auto& bbasis = family.get(cls.bob_basis.value_or(BasisId::B0));
      const auto pb = sf.travel_probabilities(bbasis);
      const int outcomes = cls.bob_basis ? d : 1;
      for (int bo = 0; bo < outcomes; ++bo) {
        double w = wf;
        JointState s = sf;
        if (cls.bob_basis) {
          if (pb[static_cast<std::size_t>(bo)] <= kReachable) continue;
          w *= s.collapse_travel(bbasis, bo);
          probe.bob_outcome = bo;
        }
        if (!two_way) {
          probe.sift = one_way_views(cfg.protocol, d, cls.alice_basis, ai, *cls.bob_basis, bo);
          if (!probe.sift.kept()) continue;
          keep += w;
          if (check_error(probe, d)) err += w;
          continue;
        }
        probe.sift = two_way_views(cfg.protocol, d, cls.alice_basis, ai, probe.measured(), bo);
        if (!checkable(probe)) continue;
        for (auto& [wb, sb] : eve_branches(cfg.eve, Direction::Backward, s, eve_basis, family)) {
          const auto pr = sb.travel_probabilities(abasis);
          for (int ret = 0; ret < d; ++ret) {
            const double wr = w * wb * pr[static_cast<std::size_t>(ret)];
            if (wr <= kReachable) continue;
            probe.alice_return_outcome = ret;
            keep += wr;
            if (check_error(probe, d)) err += wr;
          }
        }
      }
    }
  }
  if (keep <= 0.0) return std::nullopt;
  return err / keep;
}

}  // namespace bqkd
