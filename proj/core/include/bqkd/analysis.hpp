#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bqkd/sift.hpp"

namespace bqkd {

/// -sum p log2 p with 0 log 0 = 0. Throws NotNormalized unless the entries
/// are nonnegative and sum to 1 within 1e-9.
double shannon_entropy(const std::vector<double>& p);

struct KgrClass {
  RoundClass cls;
  double probability = 0.0;
  /// Expected key bits per round of this class.
  double bits = 0.0;
};

struct KgrBreakdown {
  std::vector<KgrClass> classes;
  double total = 0.0;
};

/// Per-class decomposition for bQKD. B1 x B2 classes use the entropy of the
/// surviving symbol distribution for d = 4n+2. Empty probs = uniform.
/// Throws UnsupportedDimension for odd d or d < 4.
KgrBreakdown kgr_bqkd(int d, const std::vector<double>& alice = {}, const std::vector<double>& bob = {});

/// Same, but B1 x B2 classes for d = 4n+2 count log2(alphabet) per kept
/// symbol. Agrees with kgr_bqkd except for d = 4n+2 with n >= 2.
KgrBreakdown kgr_bqkd_alphabet(int d, const std::vector<double>& alice = {}, const std::vector<double>& bob = {});

/// log2(d)/2 with uniform bases.
double kgr_bb84(int d);
/// q [ pa(B0) log2 d + (pa(B1) + pa(B2)) log2(d/2) ]; (4/3) q for d = 4.
double kgr_bsqkd(int d, double q, const std::vector<double>& alice = {});
/// q pa(B0) log2 d.
double kgr_sqkd07(int d, double q, double alice_b0 = 0.5);

/// Closed-form KGR of the configured protocol and basis probabilities.
double analytic_kgr(const RunConfig& cfg);
/// Like analytic_kgr, but the alphabet variant for bQKD.
double analytic_kgr_alphabet(const RunConfig& cfg);

struct RatioPoint {
  int d;
  double kgr_bqkd;
  double kgr_bb84;
  double ratio;
};

std::vector<RatioPoint> kgr_ratio_curve(const std::vector<int>& dims);

struct DetectionPoint {
  int l = 0;
  double analytic = 0.0;
  double empirical = 0.0;
  /// Number of windows (single run) or trials behind `empirical`.
  long samples = 0;
};

struct DetectionCurve {
  RoundClass cls;
  /// Per-round check error probability used for the analytic column.
  double p_round = 0.0;
  std::vector<DetectionPoint> points;
};

/// Key of the omniscient error table: round class plus Eve's forward basis
/// (empty when Eve did not measure in a basis).
struct EveClassKey {
  RoundClass cls;
  std::optional<BasisId> eve_basis;

  auto operator<=>(const EveClassKey&) const = default;
};

std::string to_string(const EveClassKey& k);

struct SimReport {
  Protocol protocol = Protocol::BQKD;
  int dim = 0;
  long rounds = 0;
  bool aborted = false;

  /// Key bits over all rounds; check rounds excluded from the numerator.
  double empirical_kgr = 0.0;
  /// Check rounds counted as key too (no check overhead).
  double empirical_kgr_no_check = 0.0;
  /// Entropy of the observed symbol distribution per class, no check overhead.
  double empirical_kgr_entropy = 0.0;
  double analytic_kgr = 0.0;
  double analytic_kgr_alphabet = 0.0;
  double delta = 0.0;
  double delta_no_check = 0.0;
  double delta_entropy = 0.0;

  std::map<RoundClass, ClassStats> qber_by_class;
  /// Every checkable round, whether compared or not.
  std::map<RoundClass, ClassStats> error_by_class;
  std::map<EveClassKey, ClassStats> error_by_eve_basis;

  std::vector<DetectionCurve> detection;

  long eve_guesses = 0;
  long eve_observed_key_rounds = 0;
  double eve_correct_rate = 0.0;
  long eve_matched_rounds = 0;
  double eve_matched_correct_rate = 0.0;

  long key_length = 0;
  long key_mismatches = 0;
};

struct SummaryOptions {
  int max_l = 10;
  /// Attach analytic detection probabilities from exact enumeration.
  bool analytic_detection = true;
};

/// Aggregates a finished run. Single-run detection estimates use disjoint
/// windows of l consecutive check rounds of a class.
SimReport summarize(const std::vector<RoundRecord>& records, const RunConfig& cfg, const SummaryOptions& opt = {});

/// P(at least one error among the first l check rounds of cls), across
/// independent trials. Trials with fewer than l such rounds are skipped for l.
DetectionCurve detection_curve(const std::vector<std::vector<RoundRecord>>& trials, int d, const RoundClass& cls,
                               int max_l, double p_round);

nlohmann::json to_json(const SimReport& r);
nlohmann::json to_json(const KgrBreakdown& k);

/// d,kgr_bqkd,kgr_bb84,ratio
void write_ratio_csv(std::ostream& os, const std::vector<RatioPoint>& curve);
/// l,p_detect_analytic,p_detect_empirical (one block per class, prefixed by
/// a "# class" comment line when there is more than one curve)
void write_detection_csv(std::ostream& os, const std::vector<DetectionCurve>& curves);

}  // namespace bqkd
