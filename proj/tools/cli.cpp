#include "cli.hpp"

#include "opspace/crplab.hpp"
#include "opspace/io.hpp"
#include "opspace/ohnorm.hpp"
#include "opspace/witnesses.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#ifndef OPSPACE_VERSION
#define OPSPACE_VERSION "0.0.0"
#endif

namespace opspace::cli {

namespace {

struct RunConfig {
  std::string command;
  // input selection
  std::string file;
  std::string family;
  int n = 0;
  bool transpose = false;
  // exponents and ranges
  std::string p;
  std::string p_grid = "1,1.5,3,4,inf";
  std::string n_range;
  int n_max = 4;
  std::optional<double> s1_upper;
  // optimizer
  int restarts = 64;
  int max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  std::string step_rule = "power";
  // campaigns
  int trials = 1000;
  int samples = 500;
  int m = 3;
  int candidates = 8;
  int refinements = 8;
  // output
  std::string format;
  std::string output;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (!c.file.empty()) j["file"] = c.file;
  if (!c.family.empty()) {
    j["family"] = c.family;
    j["n"] = c.n;
  }
  if (c.transpose) j["transpose"] = true;
  if (!c.p.empty()) j["p"] = c.p;
  if (c.command == "verify lemmas") {
    j["n_max"] = c.n_max;
    j["p_grid"] = c.p_grid;
    j["trials"] = c.trials;
  }
  if (!c.n_range.empty()) j["n_range"] = c.n_range;
  if (c.s1_upper) j["s1_upper"] = *c.s1_upper;
  j["restarts"] = c.restarts;
  j["max_iters"] = c.max_iters;
  j["tol"] = c.tol;
  j["step_rule"] = c.step_rule;
  if (c.command == "cmp-check") {
    j["samples"] = c.samples;
    j["m"] = c.m;
    j["n"] = c.n;
  }
  if (c.command == "sandwich") {
    j["n"] = c.n;
    j["candidates"] = c.candidates;
    j["refinements"] = c.refinements;
  }
  return j;
}

Json envelope(const RunConfig& c) {
  Json j;
  j["version"] = OPSPACE_VERSION;
  j["seed"] = c.seed;
  j["config"] = config_json(c);
  return j;
}

OptimizerConfig optimizer_config(const RunConfig& c) {
  OptimizerConfig cfg;
  cfg.restarts = c.restarts;
  cfg.max_iters = c.max_iters;
  cfg.tol = c.tol;
  cfg.seed = c.seed;
  cfg.step_rule = parse_step_rule(c.step_rule);
  cfg.validate();
  return cfg;
}

PExponent required_p(const RunConfig& c) {
  if (c.p.empty()) throw UsageError("--p is required");
  return PExponent::parse(c.p);
}

std::vector<PExponent> parse_grid(const std::string& text) {
  std::vector<PExponent> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError(fmt::format("empty entry in exponent list '{}'", text));
    grid.push_back(PExponent::parse(item));
  }
  if (grid.empty()) throw UsageError("exponent list is empty");
  return grid;
}

std::vector<Eigen::Index> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError(fmt::format("range '{}' must look like a..b", text));
  long long lo = 0;
  long long hi = 0;
  try {
    std::size_t used = 0;
    lo = std::stoll(text.substr(0, dots), &used);
    if (used != dots) throw UsageError("bad range start");
    const std::string tail = text.substr(dots + 2);
    hi = std::stoll(tail, &used);
    if (used != tail.size()) throw UsageError("bad range end");
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("range '{}' must look like a..b with integers", text));
  }
  if (lo < 1 || hi < lo) throw UsageError(fmt::format("range '{}' must satisfy 1 <= a <= b", text));
  std::vector<Eigen::Index> out;
  for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<Eigen::Index>(v));
  return out;
}

BlockMatrix load_input(const RunConfig& c) {
  const bool has_file = !c.file.empty();
  const bool has_family = !c.family.empty();
  if (has_file == has_family) throw UsageError("give exactly one of --file or --family");
  BlockMatrix x = [&] {
    if (has_family) {
      if (c.n < 1) throw UsageError("--family needs --n >= 1");
      return make_family(parse_witness_name(c.family), c.n).payload;
    }
    auto doc = read_matrix_file(c.file);
    if (auto* blocks = std::get_if<BlockMatrix>(&doc)) return *blocks;
    const auto& single = std::get<ComplexMatrix>(doc);
    BlockMatrix one(1, 1, single.rows(), single.cols());
    one.set_block(0, 0, single);
    return one;
  }();
  return c.transpose ? block_transpose(x) : x;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void check_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  if (std::none_of(allowed.begin(), allowed.end(), [&](const char* f) { return c.format == f; })) {
    throw UsageError(fmt::format("--format {} is not supported by {}", c.format, c.command));
  }
}

int cmd_schatten(const RunConfig& c, std::string& text) {
  check_format(c, {"text", "json"});
  if (c.file.empty()) throw UsageError("schatten needs --file");
  const PExponent p = required_p(c);
  auto doc = read_matrix_file(c.file);
  const ComplexMatrix x = std::holds_alternative<ComplexMatrix>(doc) ? std::get<ComplexMatrix>(doc)
                                                                     : flatten(std::get<BlockMatrix>(doc));
  const double value = schatten_norm(x, p);
  if (!std::isfinite(value)) throw NumericalError("Schatten norm is not finite");
  if (c.format == "text") {
    text = format_number(value) + "\n";
  } else {
    Json j = envelope(c);
    j["value"] = value;
    text = dump(j);
  }
  return kOk;
}

int cmd_mn_norm(const RunConfig& c, std::string& text) {
  check_format(c, {"json"});
  NormHints hints;
  hints.s1_upper = c.s1_upper;
  const NormEstimate est = mn_schatten_norm(load_input(c), required_p(c), optimizer_config(c), hints);
  Json j = envelope(c);
  j["estimate"] = to_json(est);
  text = dump(j);
  return kOk;
}

int cmd_oh_norm(const RunConfig& c, std::string& text) {
  check_format(c, {"text", "json"});
  const BlockMatrix x = load_input(c);
  const double value = oh_matrix_norm(x);
  if (c.format == "text") {
    text = format_number(value) + "\n";
    return kOk;
  }
  Json j = envelope(c);
  j["value"] = value;
  if (x.outer_cols() == 1) {
    std::vector<ComplexMatrix> entries;
    for (Eigen::Index i = 0; i < x.outer_rows(); ++i) entries.push_back(x.block(i, 0));
    j["column_closed_form"] = oh_column_norm(entries);
  }
  text = dump(j);
  return kOk;
}

int cmd_m1_dual(const RunConfig& c, std::string& text) {
  check_format(c, {"json"});
  const NormEstimate est = m1_norm_dual(load_input(c), optimizer_config(c));
  Json j = envelope(c);
  j["estimate"] = to_json(est);
  text = dump(j);
  return kOk;
}

int cmd_verify_lemmas(const RunConfig& c, std::string& text) {
  check_format(c, {"json"});
  if (c.n_max < 1) throw UsageError("--n-max must be >= 1");
  const auto grid = parse_grid(c.p_grid);
  const OptimizerConfig cfg = optimizer_config(c);
  bool all_pass = true;
  Json block_norms = Json::array();
  Json oh = Json::array();
  Json s1 = Json::array();
  Json cb = Json::array();
  for (Eigen::Index n = 1; n <= c.n_max; ++n) {
    for (const auto& p : grid) {
      const auto [a, b] = verify_block_norms(n, p);
      all_pass = all_pass && a.pass && b.pass;
      block_norms.push_back(to_json(a));
      block_norms.push_back(to_json(b));
    }
    const auto t = verify_oh_transpose(n);
    all_pass = all_pass && t.pass;
    oh.push_back(to_json(t));

    // The dual maximizer on A_n is the hardest contraction we know of for
    // the S_1 inequality; the dual search is only affordable for small n.
    std::vector<BlockMatrix> adversarial;
    if (n <= 4) adversarial.push_back(*m1_norm_dual(make_A(n), cfg).witness->y);
    const auto report = verify_s1_contraction(n, c.trials, c.seed, adversarial);
    all_pass = all_pass && report.pass;
    Json r = to_json(report);
    r["adversarial"] = !adversarial.empty();
    s1.push_back(std::move(r));

    const auto w = verify_cb_transpose(n);
    all_pass = all_pass && w.pass;
    cb.push_back(to_json(w));
  }
  Json j = envelope(c);
  j["block_norms"] = std::move(block_norms);
  j["oh_transpose"] = std::move(oh);
  j["s1_contraction"] = std::move(s1);
  j["cb_transpose"] = std::move(cb);
  j["pass"] = all_pass;
  text = dump(j);
  return all_pass ? kOk : kAssertionFailed;
}

int cmd_crp_ratio(const RunConfig& c, std::string& text) {
  check_format(c, {"csv", "json"});
  if (c.n_range.empty()) throw UsageError("crp-ratio needs --n-range a..b");
  const PExponent p = required_p(c);
  if (!p.is_infinite() && p.value() == 2.0) throw UsageError("crp-ratio is undefined at p = 2");
  const CrpReport report = crp_ratio_campaign(p, parse_range(c.n_range), optimizer_config(c));
  const bool certified = std::all_of(report.rows.begin(), report.rows.end(), [](const CrpRow& r) { return r.certified; });
  const bool pass = certified && std::abs(report.fitted_exponent - report.target_exponent) <= 0.01;
  if (c.format == "csv") {
    text = to_csv(report);
  } else {
    Json j = envelope(c);
    j["report"] = to_json(report);
    j["pass"] = pass;
    text = dump(j);
  }
  return pass ? kOk : kAssertionFailed;
}

int cmd_sandwich(const RunConfig& c, std::string& text) {
  check_format(c, {"json"});
  if (c.n < 1) throw UsageError("sandwich needs --n >= 1");
  const PExponent p = required_p(c);
  if (!p.is_infinite() && p.value() == 2.0) throw UsageError("sandwich is undefined at p = 2");
  const SandwichProbe probe = sandwich_probe(p, c.n, optimizer_config(c), c.candidates, c.refinements);
  Json j = envelope(c);
  j["probe"] = to_json(probe);
  text = dump(j);
  return probe.within ? kOk : kAssertionFailed;
}

int cmd_cmp_check(const RunConfig& c, std::string& text) {
  check_format(c, {"json"});
  if (c.samples < 1 || c.n < 1 || c.m < 1) throw UsageError("cmp-check needs positive --samples, --n and --m");
  const CmpCampaign campaign = cmp_campaign(c.n, c.m, c.samples, c.seed);
  Json j = envelope(c);
  j["campaign"] = to_json(campaign);
  text = dump(j);
  return campaign.failures == 0 ? kOk : kAssertionFailed;
}

void add_optimizer_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--restarts", c.restarts, "Random restarts")->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", c.max_iters, "Iterations per restart")->check(CLI::PositiveNumber);
  sub->add_option("--tol", c.tol, "Relative improvement stopping tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--step-rule", c.step_rule, "power or gradient")->check(CLI::IsMember({"power", "gradient"}));
}

void add_input_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--file", c.file, "BlockMatrix or ComplexMatrix JSON file");
  sub->add_option("--family", c.family, "Witness family: A, B or cbt");
  sub->add_option("--n", c.n, "Witness dimension");
  sub->add_flag("--transpose", c.transpose, "Apply the block transpose t(x) first");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Operator-space norms over Schatten classes and column-row checks", "opspace"};
  app.set_version_flag("--version", OPSPACE_VERSION);
  app.require_subcommand(1);
  app.add_option("--seed", c.seed, "Base seed for every random stream")->capture_default_str();
  app.add_option("--format", c.format, "Output format: json, csv or text");
  app.add_option("--output", c.output, "Write results to this file instead of stdout");
  app.fallthrough();

  auto* schatten = app.add_subcommand("schatten", "Schatten norm of a matrix file");
  schatten->add_option("--file", c.file, "Matrix JSON file")->required();
  schatten->add_option("--p", c.p, "Exponent in [1, inf]")->required();

  auto* mn = app.add_subcommand("mn-norm", "Estimate of the vector-valued norm ||x||_{M_n(S_p)}");
  add_input_flags(mn, c);
  add_optimizer_flags(mn, c);
  mn->add_option("--p", c.p, "Exponent in [1, inf]")->required();
  mn->add_option("--s1-upper", c.s1_upper, "Certified upper bound for the M_n(S_1) norm of the input");

  auto* oh = app.add_subcommand("oh-norm", "Exact norm over the operator Hilbert space S_2");
  add_input_flags(oh, c);

  auto* m1 = app.add_subcommand("m1-dual", "M_n(S_1) lower bound through the dual pairing");
  add_input_flags(m1, c);
  add_optimizer_flags(m1, c);

  auto* verify = app.add_subcommand("verify", "Verification campaigns");
  verify->require_subcommand(1);
  auto* lemmas = verify->add_subcommand("lemmas", "Block norms, OH transpose, S_1 contraction, cb transpose");
  lemmas->add_option("--n-max", c.n_max, "Largest n")->check(CLI::PositiveNumber);
  lemmas->add_option("--p-grid", c.p_grid, "Comma-separated exponents, e.g. 1,1.5,3,4,inf");
  lemmas->add_option("--trials", c.trials, "Random trials for the S_1 contraction check")->check(CLI::PositiveNumber);
  add_optimizer_flags(lemmas, c);

  auto* crp = app.add_subcommand("crp-ratio", "Certified row/column ratio growth over a range of n");
  crp->add_option("--p", c.p, "Exponent, p != 2")->required();
  crp->add_option("--n-range", c.n_range, "Range a..b")->required();
  add_optimizer_flags(crp, c);

  auto* sandwich = app.add_subcommand("sandwich", "Search for the transpose ratio inside the two-sided estimate");
  sandwich->add_option("--p", c.p, "Exponent, p != 2")->required();
  sandwich->add_option("--n", c.n, "Dimension")->required();
  sandwich->add_option("--candidates", c.candidates, "Random columns")->check(CLI::NonNegativeNumber);
  sandwich->add_option("--refinements", c.refinements, "Perturbation rounds")->check(CLI::NonNegativeNumber);
  add_optimizer_flags(sandwich, c);

  auto* cmp = app.add_subcommand("cmp-check", "Column-matrix inequality on random OH matrices");
  cmp->add_option("--samples", c.samples, "Random instances")->check(CLI::PositiveNumber);
  cmp->add_option("--m", c.m, "Inner dimension")->check(CLI::PositiveNumber);
  cmp->add_option("--n", c.n, "Outer dimension")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      std::ostringstream help_out;
      std::ostringstream help_err;
      app.exit(e, help_out, help_err);
      out << help_out.str();
      return kOk;
    }
    std::ostringstream sink;
    app.exit(e, sink, err);
    return kParseError;
  }

  using Handler = int (*)(const RunConfig&, std::string&);
  Handler handler = nullptr;
  if (*schatten) {
    c.command = "schatten";
    handler = cmd_schatten;
  } else if (*mn) {
    c.command = "mn-norm";
    handler = cmd_mn_norm;
  } else if (*oh) {
    c.command = "oh-norm";
    handler = cmd_oh_norm;
  } else if (*m1) {
    c.command = "m1-dual";
    handler = cmd_m1_dual;
  } else if (*lemmas) {
    c.command = "verify lemmas";
    handler = cmd_verify_lemmas;
  } else if (*crp) {
    c.command = "crp-ratio";
    handler = cmd_crp_ratio;
  } else if (*sandwich) {
    c.command = "sandwich";
    handler = cmd_sandwich;
  } else if (*cmp) {
    c.command = "cmp-check";
    if (c.n == 0) c.n = 3;
    handler = cmd_cmp_check;
  }
  if (c.format.empty()) {
    c.format = c.command == "schatten" ? "text" : c.command == "crp-ratio" ? "csv" : "json";
  }

  std::string text;
  int code = kOk;
  try {
    code = handler(c, text);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kParseError;
  } catch (const std::out_of_range& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }

  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream file(c.output, std::ios::binary);
    if (!file) {
      err << "cannot write '" << c.output << "'\n";
      return kParseError;
    }
    file << text;
  }
  return code;
}

}  // namespace opspace::cli
