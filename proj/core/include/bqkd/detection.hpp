#pragma once

#include <optional>

#include "bqkd/records.hpp"

namespace bqkd {

/// Probability that at least one of l independent checks fails: 1 - (1-p)^l.
double detection_within(double p_round, int l);

/// Subspace attack {0,1}/{2,3} on the (B2,B2) class: 1 - 0.5^l.
double subspace_detection(int l);

/// Intercept-resend with Eve's basis fixed: error rate on key-capable bQKD
/// rounds of class (alice, bob), by Born-rule enumeration over Alice's
/// states, Eve's outcomes and Bob's outcomes. Empty when the class never
/// yields a key symbol.
std::optional<double> intercept_resend_error(int d, BasisId alice, BasisId bob, BasisId eve);

// One-way entangling attack |i>|0> -> sum_j |j>|E_ij>. Probability that Bob's
// result agrees with Alice's state (same basis) or lies in the right pair or
// index set (B0 vs B1/B2). Throws NoClosedForm for B1 x B2.
double gea_correct_probability(const AncillaMap& e, BasisId alice_basis, int alice_index, BasisId bob_basis);
double gea_detection(const AncillaMap& e, BasisId alice_basis, int alice_index, BasisId bob_basis);

// Two-way attack with forward map E and backward map F. Measure case: Bob
// measures B0, Alice measures the return in her basis. Reflect case: Alice
// measures the reflected state.
double two_way_measure_correct(const AncillaMap& e, const AncillaMap& f, BasisId alice_basis, int alice_index);
double two_way_reflect_correct(const AncillaMap& e, const AncillaMap& f, BasisId alice_basis, int alice_index);

/// Dispatches on the configured strategy; bob_basis empty = reflect.
/// Throws MissingAncillaMap when the strategy carries no ancilla map.
double closed_form_detection(const EveStrategy& s, int d, BasisId alice_basis, int alice_index,
                             std::optional<BasisId> bob_basis);

/// Exact check-error rate of one round class under cfg's strategy,
/// conditioned on the round being key-capable (or a reflect round), from
/// branching the joint state through every random choice. `eve_basis`
/// restricts intercept-resend to one basis; `alice_index` fixes the state.
/// Empty when the class is never compared.
std::optional<double> exact_class_error(const RunConfig& cfg, RoundClass cls,
                                        std::optional<BasisId> eve_basis = std::nullopt,
                                        std::optional<int> alice_index = std::nullopt);

}  // namespace bqkd
