#include "bqkd/analysis.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bqkd/detection.hpp"
#include "bqkd/errors.hpp"

namespace bqkd {

namespace {

constexpr std::array<BasisId, 3> kThree{BasisId::B0, BasisId::B1, BasisId::B2};

std::vector<double> uniform_or(const std::vector<double>& p, std::size_t n) {
  if (p.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (p.size() != n) throw Error(ErrorCode::ConfigInvalid, "expected " + std::to_string(n) + " basis probabilities");
  return p;
}

void check_bqkd_dim(int d) {
  if (d < 4 || d % 2 != 0) throw Error(ErrorCode::UnsupportedDimension, "bQKD needs even d >= 4, got " + std::to_string(d));
}

// B1 x B2 bits per round of one ordered class.
double cross_pair_bits(int d, bool entropy) {
  if (d == 4) return 0.0;
  if (d % 4 == 0) return 0.5 * std::log2(d / 4.0);
  const int n = (d - 2) / 4;
  const double survive = static_cast<double>(n) / (2.0 * n + 1.0);
  if (!entropy) return survive * std::log2(n + 1.0);
  std::vector<double> p(static_cast<std::size_t>(n + 1), 1.0 / n);
  p.front() = p.back() = 0.5 / n;
  return survive * shannon_entropy(p);
}

KgrBreakdown bqkd_breakdown(int d, const std::vector<double>& alice, const std::vector<double>& bob, bool entropy) {
  check_bqkd_dim(d);
  const auto pa = uniform_or(alice, 3);
  const auto pb = uniform_or(bob, 3);
  KgrBreakdown out;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      KgrClass c;
      c.cls = {kThree[a], kThree[b]};
      c.probability = pa[a] * pb[b];
      if (a == b) {
        c.bits = std::log2(d);
      } else if (a == 0 || b == 0) {
        c.bits = std::log2(d / 2.0);
      } else {
        c.bits = cross_pair_bits(d, entropy);
      }
      out.total += c.probability * c.bits;
      out.classes.push_back(c);
    }
  }
  return out;
}

double log2_alphabet(const SiftOutcome& s) { return std::log2(static_cast<double>(s.alphabet)); }

}  // namespace

double shannon_entropy(const std::vector<double>& p) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -1e-12 || !std::isfinite(x)) throw Error(ErrorCode::NotNormalized, "negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::NotNormalized, "probabilities sum to " + std::to_string(sum));
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

KgrBreakdown kgr_bqkd(int d, const std::vector<double>& alice, const std::vector<double>& bob) {
  return bqkd_breakdown(d, alice, bob, true);
}

KgrBreakdown kgr_bqkd_alphabet(int d, const std::vector<double>& alice, const std::vector<double>& bob) {
  return bqkd_breakdown(d, alice, bob, false);
}

double kgr_bb84(int d) { return std::log2(d) / 2.0; }

double kgr_bsqkd(int d, double q, const std::vector<double>& alice) {
  check_bqkd_dim(d);
  const auto pa = uniform_or(alice, 3);
  return q * (pa[0] * std::log2(d) + (pa[1] + pa[2]) * std::log2(d / 2.0));
}

double kgr_sqkd07(int d, double q, double alice_b0) { return q * alice_b0 * std::log2(d); }

double analytic_kgr(const RunConfig& cfg) {
  const auto pa = alice_probs(cfg);
  switch (cfg.protocol) {
    case Protocol::BQKD:
      return kgr_bqkd(cfg.dim, pa, bob_probs(cfg)).total;
    case Protocol::BSQKD:
      return kgr_bsqkd(cfg.dim, cfg.bob_measure_prob, pa);
    case Protocol::BB84Qudit: {
      const auto pb = bob_probs(cfg);
      double same = 0.0;
      for (std::size_t i = 0; i < pa.size(); ++i) same += pa[i] * pb[i];
      return same * std::log2(cfg.dim);
    }
    case Protocol::SQKD07:
      return kgr_sqkd07(cfg.dim, cfg.bob_measure_prob, pa[0]);
  }
  return 0.0;
}

double analytic_kgr_alphabet(const RunConfig& cfg) {
  if (cfg.protocol == Protocol::BQKD) return kgr_bqkd_alphabet(cfg.dim, alice_probs(cfg), bob_probs(cfg)).total;
  return analytic_kgr(cfg);
}

std::vector<RatioPoint> kgr_ratio_curve(const std::vector<int>& dims) {
  std::vector<RatioPoint> out;
  out.reserve(dims.size());
  for (int d : dims) {
    const double b = kgr_bqkd(d).total;
    const double r = kgr_bb84(d);
    out.push_back({d, b, r, b / r});
  }
  return out;
}

std::string to_string(const EveClassKey& k) {
  return to_string(k.cls) + "|" + (k.eve_basis ? std::string(to_string(*k.eve_basis)) : std::string("-"));
}

SimReport summarize(const std::vector<RoundRecord>& records, const RunConfig& cfg, const SummaryOptions& opt) {
  SimReport r;
  r.protocol = cfg.protocol;
  r.dim = cfg.dim;
  r.rounds = static_cast<long>(records.size());

  const auto s = sift(records, cfg);
  r.aborted = s.abort;
  r.qber_by_class = s.qber_by_class;
  r.key_length = static_cast<long>(s.alice_key.size());
  for (std::size_t i = 0; i < s.alice_key.size(); ++i) {
    if (s.alice_key[i] != s.bob_key[i]) ++r.key_mismatches;
  }

  double bits = 0.0;
  double bits_all = 0.0;
  std::map<RoundClass, std::map<int, long>> symbols;
  std::map<RoundClass, std::vector<bool>> check_seq;
  long eve_correct = 0;
  long matched_correct = 0;
  for (const auto& rec : records) {
    const auto cls = rec.round_class();
    if (rec.sift.kept()) {
      const double b = log2_alphabet(rec.sift.alice);
      bits_all += b;
      if (!rec.in_check_set) bits += b;
      ++symbols[cls][rec.sift.alice.symbol];

      if (rec.eve_forward) {
        ++r.eve_observed_key_rounds;
        const bool correct = rec.eve_guess && *rec.eve_guess == rec.sift.alice.symbol;
        if (rec.eve_guess) ++r.eve_guesses;
        if (correct) ++eve_correct;
        if (rec.eve_forward->basis && *rec.eve_forward->basis == rec.alice_basis && rec.bob_basis &&
            *rec.bob_basis == rec.alice_basis) {
          ++r.eve_matched_rounds;
          if (correct) ++matched_correct;
        }
      }
    }
    if (checkable(rec)) {
      const bool e = check_error(rec, cfg.dim);
      auto& st = r.error_by_class[cls];
      ++st.checked;
      if (e) ++st.errors;
      auto& se = r.error_by_eve_basis[{cls, rec.eve_forward ? rec.eve_forward->basis : std::nullopt}];
      ++se.checked;
      if (e) ++se.errors;
      if (rec.in_check_set) check_seq[cls].push_back(e);
    }
  }

  double bits_entropy = 0.0;
  for (const auto& [cls, counts] : symbols) {
    long total = 0;
    for (const auto& [sym, n] : counts) total += n;
    std::vector<double> p;
    for (const auto& [sym, n] : counts) p.push_back(static_cast<double>(n) / static_cast<double>(total));
    bits_entropy += static_cast<double>(total) * shannon_entropy(p);
  }

  const double n = r.rounds > 0 ? static_cast<double>(r.rounds) : 1.0;
  r.empirical_kgr = bits / n;
  r.empirical_kgr_no_check = bits_all / n;
  r.empirical_kgr_entropy = bits_entropy / n;
  r.analytic_kgr = analytic_kgr(cfg);
  r.analytic_kgr_alphabet = analytic_kgr_alphabet(cfg);
  r.delta = r.empirical_kgr - r.analytic_kgr;
  r.delta_no_check = r.empirical_kgr_no_check - r.analytic_kgr_alphabet;
  r.delta_entropy = r.empirical_kgr_entropy - r.analytic_kgr;

  if (r.eve_observed_key_rounds > 0)
    r.eve_correct_rate = static_cast<double>(eve_correct) / static_cast<double>(r.eve_observed_key_rounds);
  if (r.eve_matched_rounds > 0)
    r.eve_matched_correct_rate = static_cast<double>(matched_correct) / static_cast<double>(r.eve_matched_rounds);

  for (const auto& [cls, seq] : check_seq) {
    DetectionCurve c;
    c.cls = cls;
    if (opt.analytic_detection) c.p_round = exact_class_error(cfg, cls).value_or(0.0);
    for (int l = 1; l <= opt.max_l; ++l) {
      DetectionPoint pt;
      pt.l = l;
      pt.analytic = detection_within(c.p_round, l);
      long hit = 0;
      const std::size_t windows = seq.size() / static_cast<std::size_t>(l);
      for (std::size_t w = 0; w < windows; ++w) {
        for (int k = 0; k < l; ++k) {
          if (seq[w * static_cast<std::size_t>(l) + static_cast<std::size_t>(k)]) {
            ++hit;
            break;
          }
        }
      }
      pt.samples = static_cast<long>(windows);
      pt.empirical = windows > 0 ? static_cast<double>(hit) / static_cast<double>(windows) : 0.0;
      c.points.push_back(pt);
    }
    r.detection.push_back(std::move(c));
  }
  return r;
}

DetectionCurve detection_curve(const std::vector<std::vector<RoundRecord>>& trials, int d, const RoundClass& cls,
                               int max_l, double p_round) {
  DetectionCurve c;
  c.cls = cls;
  c.p_round = p_round;
  std::vector<long> hits(static_cast<std::size_t>(max_l) + 1, 0);
  std::vector<long> used(static_cast<std::size_t>(max_l) + 1, 0);
  for (const auto& recs : trials) {
    int seen = 0;
    bool any = false;
    for (const auto& rec : recs) {
      if (seen >= max_l) break;
      if (!rec.in_check_set || rec.round_class() != cls) continue;
      ++seen;
      any = any || check_error(rec, d);
      ++used[static_cast<std::size_t>(seen)];
      if (any) ++hits[static_cast<std::size_t>(seen)];
    }
  }
  for (int l = 1; l <= max_l; ++l) {
    const auto k = static_cast<std::size_t>(l);
    DetectionPoint pt;
    pt.l = l;
    pt.analytic = detection_within(p_round, l);
    pt.samples = used[k];
    pt.empirical = used[k] > 0 ? static_cast<double>(hits[k]) / static_cast<double>(used[k]) : 0.0;
    c.points.push_back(pt);
  }
  return c;
}

namespace {

nlohmann::json stats_json(const ClassStats& s) {
  return {{"checked", s.checked}, {"errors", s.errors}, {"rate", s.rate()}};
}

}  // namespace

nlohmann::json to_json(const KgrBreakdown& k) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : k.classes) {
    classes.push_back({{"class", to_string(c.cls)}, {"probability", c.probability}, {"bits", c.bits}});
  }
  return {{"classes", classes}, {"total", k.total}};
}

nlohmann::json to_json(const SimReport& r) {
  nlohmann::json j;
  j["protocol"] = std::string(to_string(r.protocol));
  j["dim"] = r.dim;
  j["rounds"] = r.rounds;
  j["aborted"] = r.aborted;
  j["empirical_kgr"] = r.empirical_kgr;
  j["empirical_kgr_no_check"] = r.empirical_kgr_no_check;
  j["empirical_kgr_entropy"] = r.empirical_kgr_entropy;
  j["analytic_kgr"] = r.analytic_kgr;
  j["analytic_kgr_alphabet"] = r.analytic_kgr_alphabet;
  j["deltas"] = {{"kgr", r.delta}, {"kgr_no_check", r.delta_no_check}, {"kgr_entropy", r.delta_entropy}};
  j["key_length"] = r.key_length;
  j["key_mismatches"] = r.key_mismatches;

  auto& q = j["qber_by_class"] = nlohmann::json::object();
  for (const auto& [cls, st] : r.qber_by_class) q[to_string(cls)] = stats_json(st);
  auto& e = j["error_by_class"] = nlohmann::json::object();
  for (const auto& [cls, st] : r.error_by_class) e[to_string(cls)] = stats_json(st);
  auto& eb = j["error_by_eve_basis"] = nlohmann::json::object();
  for (const auto& [k, st] : r.error_by_eve_basis) eb[to_string(k)] = stats_json(st);

  auto& det = j["detection_probability"] = nlohmann::json::object();
  for (const auto& c : r.detection) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.points) {
      pts.push_back({{"l", p.l}, {"analytic", p.analytic}, {"empirical", p.empirical}, {"samples", p.samples}});
    }
    det[to_string(c.cls)] = {{"p_round", c.p_round}, {"curve", pts}};
  }

  j["eve"] = {{"observed_key_rounds", r.eve_observed_key_rounds},
              {"guesses", r.eve_guesses},
              {"correct_rate", r.eve_correct_rate},
              {"matched_rounds", r.eve_matched_rounds},
              {"matched_correct_rate", r.eve_matched_correct_rate}};
  j["eve_correct_rate"] = r.eve_correct_rate;
  return j;
}

void write_ratio_csv(std::ostream& os, const std::vector<RatioPoint>& curve) {
  os << "d,kgr_bqkd,kgr_bb84,ratio\n";
  char buf[128];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f\n", p.d, p.kgr_bqkd, p.kgr_bb84, p.ratio);
    os << buf;
  }
}

void write_detection_csv(std::ostream& os, const std::vector<DetectionCurve>& curves) {
  os << "l,p_detect_analytic,p_detect_empirical\n";
  char buf[128];
  for (const auto& c : curves) {
    if (curves.size() > 1) os << "# " << to_string(c.cls) << "\n";
    for (const auto& p : c.points) {
      std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f\n", p.l, p.analytic, p.empirical);
      os << buf;
    }
  }
}

}  // namespace bqkd
