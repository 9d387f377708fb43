// uentropy CLI: compute entropy tables for probability vectors, verify the
// identity diagram connecting the entropy families, and compare the dual
// formula against the brute-force oracle.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/parse error, 3 domain
// error (violated precondition).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uentropy/uentropy.hpp"

namespace {

using uentropy::ExtReal;
using uentropy::ProbVector;
using uentropy::UtilitySpec;

// Command-line/file input problems: reported with position info, exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double_token(const std::string& tok, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError(where + ": cannot parse number '" + tok + "'");
  }
}

// ---------------------------------------------------------------------------
// Utility descriptors: log | iso:<gamma> | affine:<a>:<b>:<inner>
// | rescale:<k>:<inner>, composable left to right.

UtilitySpec parse_utility_tokens(const std::vector<std::string>& t, std::size_t i,
                                 const std::string& desc) {
  auto need = [&](std::size_t extra) {
    if (i + extra >= t.size())
      throw UsageError("utility descriptor '" + desc + "': missing arguments after '" + t[i] +
                       "'");
  };
  if (t[i] == "log") {
    if (i + 1 != t.size())
      throw UsageError("utility descriptor '" + desc + "': trailing tokens after 'log'");
    return uentropy::log_utility();
  }
  if (t[i] == "iso") {
    need(1);
    if (i + 2 != t.size())
      throw UsageError("utility descriptor '" + desc + "': trailing tokens after gamma");
    return uentropy::isoelastic_utility(parse_double_token(t[i + 1], "descriptor '" + desc + "'"));
  }
  if (t[i] == "affine") {
    need(3);
    const double a = parse_double_token(t[i + 1], "descriptor '" + desc + "'");
    const double b = parse_double_token(t[i + 2], "descriptor '" + desc + "'");
    return uentropy::affine_transform(parse_utility_tokens(t, i + 3, desc), a, b);
  }
  if (t[i] == "rescale") {
    need(2);
    const double k = parse_double_token(t[i + 1], "descriptor '" + desc + "'");
    return uentropy::rescale(parse_utility_tokens(t, i + 2, desc), k);
  }
  throw UsageError("unknown utility family '" + t[i] + "' in descriptor '" + desc +
                   "' (expected log, iso, affine, rescale)");
}

UtilitySpec parse_utility(const std::string& desc) {
  return parse_utility_tokens(split(desc, ':'), 0, desc);
}

// Gamma of the innermost family; empty for log. Drives the Renyi /
// Sharma-Mittal order alpha = 1/(1-gamma) for closed-form quantities.
std::optional<double> innermost_gamma(const std::string& desc) {
  const auto t = split(desc, ':');
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] == "iso" && i + 1 < t.size())
      return parse_double_token(t[i + 1], "descriptor '" + desc + "'");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Vector inputs: inline comma lists or files (.json with {"p":[],"q":[]},
// anything else CSV with one vector per line).

struct ParsedVectors {
  std::vector<double> p;
  std::optional<std::vector<double>> q;
};

bool looks_inline(const std::string& arg) {
  return arg.find_first_not_of("0123456789.,+-eE ") == std::string::npos;
}

std::vector<double> parse_inline_vector(const std::string& arg, const std::string& flag) {
  const auto toks = split(arg, ',');
  std::vector<double> v;
  v.reserve(toks.size());
  for (std::size_t c = 0; c < toks.size(); ++c)
    v.push_back(parse_double_token(toks[c], flag + " column " + std::to_string(c + 1)));
  return v;
}

std::vector<double> json_array_to_vector(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array()) throw UsageError(where + ": expected an array of numbers");
  std::vector<double> v;
  v.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number()) throw UsageError(where + ": expected an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

ParsedVectors parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  ParsedVectors out;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(path + ": " + e.what());
    }
    if (!j.contains("p")) throw UsageError(path + ": missing key \"p\"");
    out.p = json_array_to_vector(j["p"], path + " key \"p\"");
    if (j.contains("q") && !j["q"].is_null())
      out.q = json_array_to_vector(j["q"], path + " key \"q\"");
    return out;
  }
  // CSV: one comma-separated vector per line, p first, optional q second.
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto toks = split(line, ',');
    std::vector<double> v;
    for (std::size_t c = 0; c < toks.size(); ++c)
      v.push_back(parse_double_token(toks[c], path + " line " + std::to_string(lineno) +
                                                   " column " + std::to_string(c + 1)));
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw UsageError(path + ": no vectors found");
  if (rows.size() > 2) throw UsageError(path + ": expected at most two vectors (p and q)");
  out.p = std::move(rows[0]);
  if (rows.size() == 2) out.q = std::move(rows[1]);
  return out;
}

ParsedVectors parse_vector_arg(const std::string& arg, const std::string& flag) {
  if (looks_inline(arg)) return {parse_inline_vector(arg, flag), std::nullopt};
  return parse_file(arg);
}

// ---------------------------------------------------------------------------
// Output rendering.

struct Row {
  std::string utility;
  std::string quantity;
  ExtReal value;
  std::optional<double> lambda;
  std::optional<std::vector<double>> allocation;
  std::optional<double> delta_cap;  // frittelli only
};

std::string fmt6(ExtReal v) {
  if (!v.is_finite()) return v.is_pos_inf() ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v.value());
  return buf;
}

std::string fmt17(ExtReal v) {
  if (!v.is_finite()) return v.is_pos_inf() ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v.value());
  return buf;
}

void print_table(const std::vector<Row>& rows, bool with_alloc) {
  std::size_t uw = 7, qw = 8;
  for (const auto& r : rows) {
    uw = std::max(uw, r.utility.size());
    qw = std::max(qw, r.quantity.size());
  }
  std::printf("%-*s  %-*s  %12s  %12s%s\n", static_cast<int>(uw), "utility",
              static_cast<int>(qw), "quantity", "value", "lambda",
              with_alloc ? "  allocation" : "");
  for (const auto& r : rows) {
    std::string lam = "-";
    if (r.lambda) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.6f", *r.lambda);
      lam = buf;
    }
    std::printf("%-*s  %-*s  %12s  %12s", static_cast<int>(uw), r.utility.c_str(),
                static_cast<int>(qw), r.quantity.c_str(), fmt6(r.value).c_str(), lam.c_str());
    if (with_alloc) {
      std::string alloc = "-";
      if (r.allocation) {
        alloc.clear();
        for (std::size_t i = 0; i < r.allocation->size(); ++i) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.6f", (*r.allocation)[i]);
          alloc += (i ? "," : "") + std::string(buf);
        }
      }
      std::printf("  %s", alloc.c_str());
    }
    std::printf("\n");
  }
}

void print_csv(const std::vector<Row>& rows, bool with_alloc) {
  std::printf("utility,quantity,value,lambda%s\n", with_alloc ? ",allocation" : "");
  for (const auto& r : rows) {
    std::string lam;
    if (r.lambda) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", *r.lambda);
      lam = buf;
    }
    std::printf("%s,%s,%s,%s", r.utility.c_str(), r.quantity.c_str(), fmt17(r.value).c_str(),
                lam.c_str());
    if (with_alloc) {
      std::string alloc;
      if (r.allocation) {
        for (std::size_t i = 0; i < r.allocation->size(); ++i) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.17g", (*r.allocation)[i]);
          alloc += (i ? ";" : "") + std::string(buf);
        }
      }
      std::printf(",%s", alloc.c_str());
    }
    std::printf("\n");
  }
}

void print_json(const std::vector<Row>& rows, const std::vector<double>& p,
                const std::optional<std::vector<double>>& q, bool with_alloc) {
  nlohmann::json j;
  j["p"] = p;
  j["q"] = q ? nlohmann::json(*q) : nlohmann::json(nullptr);
  j["results"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["utility"] = r.utility;
    row["quantity"] = r.quantity;
    if (r.value.is_finite())
      row["value"] = r.value.value();
    else
      row["value"] = r.value.str();
    if (r.lambda) row["lambda"] = *r.lambda;
    if (r.delta_cap) row["delta_cap"] = *r.delta_cap;
    if (with_alloc && r.allocation) row["allocation"] = *r.allocation;
    j["results"].push_back(std::move(row));
  }
  std::printf("%s\n", j.dump(2).c_str());
}

// ---------------------------------------------------------------------------
// compute

uentropy::OrderAlpha order_for(const std::string& desc) {
  const auto gamma = innermost_gamma(desc);
  if (!gamma) throw UsageError("internal: order_for called without an isoelastic family");
  return uentropy::OrderAlpha::from_gamma(*gamma);
}

Row compute_row(const std::string& udesc, const UtilitySpec& u, const std::string& quantity,
                const ProbVector& p, const std::optional<ProbVector>& q) {
  auto need_q = [&]() -> const ProbVector& {
    if (!q) throw UsageError("quantity '" + quantity + "' requires --pq");
    return *q;
  };
  Row row{udesc, quantity, ExtReal(0.0), {}, {}, {}};
  if (quantity == "h") {
    const auto rep = uentropy::h_u(u, p);
    row.value = rep.entropy;
    row.lambda = rep.lambda;
    row.allocation = rep.allocation;
  } else if (quantity == "n") {
    const auto r = uentropy::n_u(u, p);
    row.value = r.value;
    row.lambda = r.lambda.lambda;
    row.allocation = r.allocation;
  } else if (quantity == "H") {
    const auto rep = uentropy::relative_H(u, p, need_q());
    row.value = rep.entropy;
    row.lambda = rep.lambda;
    row.allocation = rep.allocation;
  } else if (quantity == "N") {
    const auto r = uentropy::relative_N(u, p, need_q());
    row.value = r.value;
    if (r.lambda) row.lambda = r.lambda->lambda;
    row.allocation = r.allocation;
  } else if (quantity == "fhs_D") {
    row.value = uentropy::fhs_relative(u, p, need_q());
  } else if (quantity == "fhs_H") {
    row.value = uentropy::fhs_entropy(u, p);
  } else if (quantity == "arimoto") {
    row.value = uentropy::arimoto(u, p);
  } else if (quantity == "frittelli") {
    // q is the pricing measure mu, p the target nu: distance = e^{H(p||q)}-1.
    const auto fr = uentropy::frittelli(u, need_q(), p);
    row.value = fr.distance;
    row.lambda = fr.lambda_star;
    if (fr.delta_cap.is_finite()) row.delta_cap = fr.delta_cap.value();
  } else if (quantity == "shannon") {
    row.value = q ? uentropy::shannon(p, *q) : uentropy::shannon(p);
  } else if (quantity == "renyi") {
    const auto gamma = innermost_gamma(udesc);
    if (!gamma)  // alpha -> 1 limit: the Renyi family degenerates to Shannon
      row.value = q ? uentropy::shannon(p, *q) : uentropy::shannon(p);
    else
      row.value = q ? uentropy::renyi(order_for(udesc), p, *q)
                    : uentropy::renyi(order_for(udesc), p);
  } else if (quantity == "sharma_mittal") {
    const auto gamma = innermost_gamma(udesc);
    if (!gamma)
      row.value = uentropy::shannon(p, need_q());
    else
      row.value = uentropy::sharma_mittal(order_for(udesc), p, need_q());
  } else {
    throw UsageError("unknown quantity '" + quantity +
                     "' (expected h, H, n, N, fhs_D, fhs_H, arimoto, frittelli, shannon, "
                     "renyi, sharma_mittal)");
  }
  return row;
}

int run_compute(const std::string& p_arg, const std::string& q_arg,
                const std::vector<std::string>& utilities,
                const std::vector<std::string>& quantities, const std::string& format,
                bool renormalize, bool with_alloc) {
  ParsedVectors pv = parse_vector_arg(p_arg, "--p");
  if (!q_arg.empty()) {
    ParsedVectors qv = parse_vector_arg(q_arg, "--pq");
    pv.q = std::move(qv.p);
  }
  const ProbVector p(pv.p, renormalize);
  std::optional<ProbVector> q;
  if (pv.q) q.emplace(*pv.q, renormalize);

  std::vector<Row> rows;
  for (const auto& udesc : utilities) {
    const UtilitySpec u = parse_utility(udesc);
    for (const auto& quantity : quantities)
      rows.push_back(compute_row(udesc, u, quantity, p, q));
  }
  if (format == "table")
    print_table(rows, with_alloc);
  else if (format == "csv")
    print_csv(rows, with_alloc);
  else if (format == "json")
    print_json(rows, pv.p, pv.q, with_alloc);
  else
    throw UsageError("unknown format '" + format + "' (expected table, json, csv)");
  return 0;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(std::uint64_t seed, int trials, const std::vector<std::string>& utilities) {
  if (trials < 1) throw UsageError("--trials must be >= 1");
  std::vector<double> gammas;
  bool with_log = false;
  if (utilities.empty()) {
    gammas = uentropy::default_gamma_sweep();
    with_log = true;
  } else {
    for (const auto& d : utilities) {
      if (d == "log") {
        with_log = true;
      } else {
        const auto g = innermost_gamma(d);
        const auto toks = split(d, ':');
        if (!g || toks.size() != 2 || toks[0] != "iso")
          throw UsageError("verify draws utilities from the log/iso families; got '" + d + "'");
        gammas.push_back(*g);
      }
    }
  }

  uentropy::IdentityTolerances tol;
  if (const char* env = std::getenv("UENTROPY_TOL")) {
    tol.override_all(parse_double_token(env, "UENTROPY_TOL"));
  }

  uentropy::TrialRng rng(seed);
  uentropy::IdentityDeviations acc;
  struct Counterexample {
    std::string identity;
    std::string utility;
    std::string p, q;
    double dev;
  };
  std::vector<Counterexample> failures;

  auto vec_str = [](const ProbVector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      s += (i ? "," : "") + std::string(buf);
    }
    return s + "]";
  };

  for (int t = 0; t < trials; ++t) {
    uentropy::TrialCase c = [&]() {
      // Redraw until the drawn family is in the allowed set (draw_trial
      // mixes the logarithmic family in with the listed gammas).
      for (;;) {
        uentropy::TrialCase cand = uentropy::draw_trial(rng, gammas);
        if (!cand.gamma && !with_log) continue;
        return cand;
      }
    }();
    const uentropy::IdentityDeviations dev = uentropy::run_identity_trial(c);
    const std::vector<std::pair<const char*, std::pair<double, double>>> checks = {
        {"fhs_relative", {dev.fhs_relative, tol.fhs_relative}},
        {"fhs_entropy", {dev.fhs_entropy, tol.fhs_entropy}},
        {"arimoto", {dev.arimoto, tol.arimoto}},
        {"frittelli_delta", {dev.frittelli_delta, tol.frittelli}},
        {"frittelli_distance", {dev.frittelli_distance, tol.frittelli}},
        {"entropy_closed_form", {dev.entropy_closed_form, tol.closed_form}},
        {"relative_closed_form", {dev.relative_closed_form, tol.closed_form}},
        {"sharma_mittal", {dev.sharma_mittal, tol.sharma_mittal}}};
    for (const auto& [name, dt] : checks)
      if (dt.first > dt.second)
        failures.push_back({name, c.u.label, vec_str(c.p), vec_str(c.q), dt.first});
    acc.merge(dev);
  }

  std::printf("verify: seed=%llu trials=%d\n", static_cast<unsigned long long>(seed), trials);
  auto line = [&](const char* name, double dev, double t) {
    std::printf("%-22s max_dev=%.3e tol=%.1e %s\n", name, dev, t, dev <= t ? "ok" : "FAIL");
  };
  line("fhs_relative", acc.fhs_relative, tol.fhs_relative);
  line("fhs_entropy", acc.fhs_entropy, tol.fhs_entropy);
  line("arimoto", acc.arimoto, tol.arimoto);
  line("frittelli_delta", acc.frittelli_delta, tol.frittelli);
  line("frittelli_distance", acc.frittelli_distance, tol.frittelli);
  line("entropy_closed_form", acc.entropy_closed_form, tol.closed_form);
  line("relative_closed_form", acc.relative_closed_form, tol.closed_form);
  line("sharma_mittal", acc.sharma_mittal, tol.sharma_mittal);

  if (failures.empty()) {
    std::printf("all identities within tolerance\n");
    return 0;
  }
  for (const auto& f : failures)
    std::printf("FAIL %s dev=%.3e utility=%s p=%s q=%s\n", f.identity.c_str(), f.dev,
                f.utility.c_str(), f.p.c_str(), f.q.c_str());
  return 1;
}

// ---------------------------------------------------------------------------
// oracle

int run_oracle(const std::string& p_arg, const std::string& udesc, int resolution,
               bool renormalize) {
  ParsedVectors pv = parse_vector_arg(p_arg, "--p");
  const ProbVector p(pv.p, renormalize);
  const UtilitySpec u = parse_utility(udesc);
  const auto r = uentropy::n_u(u, p);
  const ExtReal b = uentropy::brute_force_n_u(u, p, resolution);
  const double gap = r.value.value() - b.value();
  const double bound = 5.0 / resolution;
  std::printf("n_u (dual formula)     = %.17g\n", r.value.value());
  std::printf("brute force (res=%d) = %.17g\n", resolution, b.value());
  std::printf("gap                    = %.6e  (bound [-1e-09, %.6e])\n", gap, bound);
  const bool ok = gap >= -1e-9 && gap <= bound;
  std::printf("%s\n", ok ? "ok" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"utility-maximising entropies of discrete probability vectors"};
  app.require_subcommand(1);

  std::string p_arg, q_arg;
  std::vector<std::string> utilities{"log"};
  std::vector<std::string> quantities{"h"};
  std::string format = "table";
  bool renormalize = false;
  bool with_alloc = false;

  auto* compute = app.add_subcommand("compute", "compute entropy quantities for p (and q)");
  compute->add_option("--p", p_arg, "probability vector: inline '0.5,0.5' or a file path")
      ->required();
  compute->add_option("--pq", q_arg, "reference vector q (same forms as --p)");
  compute->add_option("--u", utilities, "utility descriptors (repeatable)");
  compute->add_option("--q", quantities, "quantities (repeatable): h H n N fhs_D fhs_H arimoto "
                                         "frittelli shannon renyi sharma_mittal");
  compute->add_option("--format", format, "output format: table | json | csv");
  compute->add_flag("--renormalize", renormalize, "renormalize inputs that are off unit mass");
  compute->add_flag("--alloc", with_alloc, "include the optimal allocation w*");

  std::uint64_t seed = 42;
  int trials = 100;
  std::vector<std::string> verify_utilities;
  auto* verify = app.add_subcommand("verify", "run the identity verification suite");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--trials", trials, "number of random (utility,p,q) draws");
  verify->add_option("--u", verify_utilities, "restrict to these log/iso descriptors");

  std::string oracle_p, oracle_u = "log";
  int resolution = 10000;
  bool oracle_renorm = false;
  auto* oracle = app.add_subcommand("oracle", "compare n_u against the brute-force grid oracle");
  oracle->add_option("--p", oracle_p, "probability vector (k <= 4)")->required();
  oracle->add_option("--u", oracle_u, "utility descriptor");
  oracle->add_option("--resolution", resolution, "simplex grid resolution");
  oracle->add_flag("--renormalize", oracle_renorm, "renormalize inputs that are off unit mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (compute->parsed())
      return run_compute(p_arg, q_arg, utilities, quantities, format, renormalize, with_alloc);
    if (verify->parsed()) return run_verify(seed, trials, verify_utilities);
    return run_oracle(oracle_p, oracle_u, resolution, oracle_renorm);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const uentropy::InvalidGamma& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const uentropy::InvalidScale& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const uentropy::InvalidAlpha& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const uentropy::InvalidProbVector& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const uentropy::BadGrid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const uentropy::Error& e) {
    // Domain preconditions: absolute continuity, normalization, size caps,
    // solver failures.
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  }
}
