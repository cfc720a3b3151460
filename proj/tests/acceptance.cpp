// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "cli.hpp"

#include "opspace/crplab.hpp"
#include "opspace/ohnorm.hpp"
#include "opspace/random.hpp"
#include "opspace/witnesses.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace {

using namespace opspace;

double npow(Eigen::Index n, double e) { return std::pow(static_cast<double>(n), e); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Tracks the worst deviation seen and the first failing case.
class Tally {
 public:
  void check(bool ok, double deviation, const std::string& where) {
    worst_ = std::max(worst_, deviation);
    if (!ok && pass_) first_failure_ = where;
    pass_ = pass_ && ok;
  }
  Verdict verdict(const std::string& what) const {
    std::string detail = fmt::format("{}; worst deviation {:.3g}", what, worst_);
    if (!pass_) detail += "; first failure at " + first_failure_;
    return {pass_, detail};
  }

 private:
  bool pass_ = true;
  double worst_ = 0.0;
  std::string first_failure_;
};

const std::vector<PExponent> kGrid = {PExponent::finite(1),   PExponent::finite(1.5), PExponent::finite(2),
                                      PExponent::finite(3),   PExponent::finite(4),   PExponent::infinity()};

Verdict block_norm_lemma() {
  Tally t;
  for (Eigen::Index n = 1; n <= 16; ++n) {
    for (const auto& p : kGrid) {
      const auto [a, b] = verify_block_norms(n, p, 1e-9);
      t.check(a.pass, std::abs(a.observed - a.expected), fmt::format("A n={} p={}", n, p.to_string()));
      t.check(b.pass, std::abs(b.observed - b.expected), fmt::format("B n={} p={}", n, p.to_string()));
    }
  }
  return t.verdict("n=1..16, p in {1,1.5,2,3,4,inf}");
}

Verdict oh_transpose_value() {
  Tally t;
  for (Eigen::Index n = 1; n <= 16; ++n) {
    const auto outcome = verify_oh_transpose(n, 1e-9);
    t.check(outcome.pass, std::abs(outcome.observed - outcome.expected), fmt::format("n={}", n));
    std::vector<ComplexMatrix> entries;
    for (Eigen::Index i = 1; i <= n; ++i) entries.push_back(matrix_unit(1, i, n));
    const double closed = oh_column_norm(entries);
    const double gram = oh_matrix_norm(pad_to_square(block_transpose(make_A(n))));
    const double dev = std::max(std::abs(closed - gram), std::abs(closed - npow(n, 0.25)));
    t.check(dev <= 1e-9, dev, fmt::format("column lemma n={}", n));
  }
  return t.verdict("n=1..16, Gram arrangement vs column closed form");
}

Verdict witness_reproduction() {
  Tally t;
  for (Eigen::Index n = 2; n <= 8; ++n) {
    for (double p : {3.0, 4.0}) {
      const auto w = compression_witness(n, PExponent::finite(p));
      const double v = schatten_norm(flatten(compress(w.a, make_A(n), w.b)), PExponent::finite(p));
      const double dev = std::abs(v - npow(n, 0.5 - 1 / (2 * p)));
      t.check(dev <= 1e-9, dev, fmt::format("A n={} p={}", n, p));
    }
    for (double p : {1.0, 1.5}) {
      const auto w = compression_witness(n, PExponent::finite(p));
      const double v = schatten_norm(flatten(compress(w.a, make_B(n), w.b)), PExponent::finite(p));
      const double dev = std::abs(v - npow(n, 1 / (2 * p)));
      t.check(dev <= 1e-9, dev, fmt::format("B n={} p={}", n, p));
    }
  }
  return t.verdict("n=2..8");
}

Verdict optimizer_soundness() {
  OptimizerConfig cfg;  // 64 restarts
  Tally t;
  std::string values;
  for (Eigen::Index n = 2; n <= 4; ++n) {
    const double lower = mn_schatten_norm(make_A(n), PExponent::finite(4), cfg).lower;
    const double target = npow(n, 3.0 / 8.0);
    t.check(lower >= target - 1e-6, std::max(0.0, target - lower), fmt::format("p=4 n={}", n));
  }
  for (Eigen::Index n = 2; n <= 3; ++n) {
    const double lower = mn_schatten_norm(make_A(n), PExponent::finite(1), cfg).lower;
    const bool ok = lower >= 1 - 1e-4 && lower <= 1 + 1e-6;
    t.check(ok, std::abs(lower - 1), fmt::format("p=1 n={} lower={}", n, lower));
  }
  return t.verdict("A_n at p=4 (n=2..4) and p=1 (n=2,3), 64 restarts, no warm starts");
}

Verdict interpolation_consistency() {
  OptimizerConfig cfg;
  Tally t;
  for (Eigen::Index n = 2; n <= 4; ++n) {
    for (double p : {3.0, 4.0}) {
      const double lower = mn_schatten_norm(block_transpose(make_A(n)), PExponent::finite(p), cfg).lower;
      const double bound = npow(n, 1 / (2 * p));
      t.check(lower <= bound + 1e-6, std::max(0.0, lower - bound), fmt::format("t(A) n={} p={}", n, p));
    }
  }
  for (Eigen::Index n = 2; n <= 3; ++n) {
    for (double p : {1.0, 1.5}) {
      const double lower = mn_schatten_norm(block_transpose(make_B(n)), PExponent::finite(p), cfg).lower;
      const double bound = npow(n, PExponent::finite(p).conjugate().reciprocal() / 2);
      t.check(lower <= bound + 1e-6, std::max(0.0, lower - bound), fmt::format("t(B) n={} p={}", n, p));
    }
  }
  return t.verdict("estimates never exceed the interpolation values");
}

Verdict s1_contraction() {
  OptimizerConfig cfg;
  Tally t;
  for (Eigen::Index n = 2; n <= 4; ++n) {
    const auto dual = m1_norm_dual(make_A(n), cfg);
    const auto report = verify_s1_contraction(n, 1000, cfg.seed, {*dual.witness->y});
    t.check(report.pass && report.max_lhs <= 1 + 1e-9, std::max(0.0, report.max_lhs - 1), fmt::format("n={}", n));
  }
  return t.verdict("1000 trials per n=2..4 plus the dual maximizer on A_n");
}

Verdict dual_direct() {
  OptimizerConfig cfg;
  cfg.restarts = 128;
  Tally t;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const BlockMatrix x = random_block_matrix(2, 2, 2, 2, 7, k);
    const double dual = m1_norm_dual(x, cfg).lower;
    const double direct = mn_schatten_norm(x, PExponent::finite(1), cfg).lower;
    const double dev = std::abs(dual - direct);
    t.check(dev <= 1e-4, dev, fmt::format("instance {}", k));
  }
  return t.verdict("20 random instances n=m=2, 128 restarts");
}

Verdict cb_transpose() {
  Tally t;
  for (Eigen::Index n = 1; n <= 9; ++n) {
    const auto outcome = verify_cb_transpose(n, 1e-9);
    t.check(outcome.pass, std::abs(outcome.observed - outcome.expected), fmt::format("n={}", n));
  }
  return t.verdict("n=1..9");
}

Verdict crp_campaign() {
  OptimizerConfig cfg;
  Tally t;
  std::vector<Eigen::Index> ns{2, 3, 4, 5, 6};
  const auto four = crp_ratio_campaign(PExponent::finite(4), ns, cfg);
  for (const auto& row : four.rows) {
    const double dev = std::abs(row.ratio_lower - npow(row.n, 0.25));
    t.check(row.certified && dev <= 1e-9, dev, fmt::format("p=4 n={}", row.n));
  }
  t.check(std::abs(four.fitted_exponent - 0.25) <= 0.01, std::abs(four.fitted_exponent - 0.25), "p=4 slope");
  const auto one = crp_ratio_campaign(PExponent::finite(1), ns, cfg);
  for (const auto& row : one.rows) t.check(row.certified, 0.0, fmt::format("p=1 n={} not certified", row.n));
  t.check(std::abs(one.fitted_exponent - 0.5) <= 0.01, std::abs(one.fitted_exponent - 0.5), "p=1 slope");
  return t.verdict(fmt::format("slopes {:.6f} (p=4), {:.6f} (p=1)", four.fitted_exponent, one.fitted_exponent));
}

Verdict cmp_oh() {
  const auto c = cmp_campaign(3, 3, 500, 42, 1e-9);
  return {c.failures == 0, fmt::format("500 samples, {} failures, worst margin {:.3g}", c.failures, c.worst_margin)};
}

Verdict gradient_oracle() {
  Tally t;
  const double h = 1e-5;
  for (double pv : {1.5, 3.0, 4.0}) {
    const PExponent p = PExponent::finite(pv);
    for (std::uint64_t k = 0; k < 50; ++k) {
      auto gen = seeded_stream(42, k, 0x9ad);
      const ComplexMatrix m = gaussian_matrix(3, 3, gen);
      const ComplexMatrix g = schatten_gradient(m, p);
      // d||m||_p = Re tr(G^* dm): real directions give Re G, imaginary ones Im G.
      ComplexMatrix fd(3, 3);
      for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
          double parts[2];
          for (int part = 0; part < 2; ++part) {
            ComplexMatrix e = ComplexMatrix::Zero(3, 3);
            e(i, j) = part == 0 ? Complex{h, 0} : Complex{0, h};
            parts[part] = (schatten_norm(ComplexMatrix(m + e), p) - schatten_norm(ComplexMatrix(m - e), p)) / (2 * h);
          }
          fd(i, j) = Complex{parts[0], parts[1]};
        }
      }
      const double rel = (fd - g).norm() / g.norm();
      t.check(rel <= 1e-5, rel, fmt::format("p={} point {}", pv, k));
    }
  }
  return t.verdict("50 points per p in {1.5,3,4}, relative error of the full gradient");
}

Verdict determinism() {
  const std::vector<std::string> args{"verify", "lemmas", "--n-max", "4", "--p-grid", "1,1.5,3,4,inf"};
  std::ostringstream out1, out2, err;
  const int c1 = cli::run(args, out1, err);
  const int c2 = cli::run(args, out2, err);
  const bool same = out1.str() == out2.str();
  return {same && c1 == c2 && !out1.str().empty(),
          fmt::format("two runs of verify lemmas: exit {} and {}, {} bytes, {}", c1, c2, out1.str().size(),
                      same ? "identical" : "different")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double budget_seconds;  // 0 = no runtime clause
  };
  const std::vector<Criterion> criteria{
      {1, "block-norm lemma", block_norm_lemma, 10},
      {2, "OH transpose value", oh_transpose_value, 10},
      {3, "witness reproduction", witness_reproduction, 0},
      {4, "optimizer soundness and power", optimizer_soundness, 300},
      {5, "interpolation consistency", interpolation_consistency, 0},
      {6, "S_1 contraction property", s1_contraction, 0},
      {7, "dual/direct cross-oracle", dual_direct, 0},
      {8, "cb-transpose witness", cb_transpose, 0},
      {9, "CRP ratio campaign", crp_campaign, 0},
      {10, "CMP for OH", cmp_oh, 0},
      {11, "gradient oracle", gradient_oracle, 0},
      {12, "determinism", determinism, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      v.pass = false;
      v.detail += fmt::format("; over the {} s budget", c.budget_seconds);
    }
    if (!v.pass) ++failures;
    fmt::print("{} criterion {:2}: {} [{}] ({:.2f} s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail, seconds);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
