#include "attain/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attain/classify.hpp"
#include "attain/errors.hpp"
#include "attain/numlab.hpp"
#include "attain/report.hpp"
#include "attain/specfile.hpp"

namespace attain::cli {

namespace {

constexpr std::size_t kIdentitySample = 1000;
constexpr std::size_t kVerifyWitnessVectors = 10;

std::string join(const std::vector<std::string>& parts, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <typename Range>
std::string braces(const Range& values) {
  std::vector<std::string> parts;
  for (const auto& v : values) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Rational>) {
      parts.push_back(v.to_string());
    } else {
      parts.push_back(std::to_string(v));
    }
  }
  return "{" + join(parts) + "}";
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Fixed-width cell for the condition table.
std::string cell(const std::string& text) { return text + std::string(text.size() < 7 ? 7 - text.size() : 1, ' '); }

std::string optional_yes_no(const std::optional<bool>& b) { return b ? yes_no(*b) : "n/a"; }

std::string describe_reason(const NotANReason& reason) {
  if (const auto* multi = std::get_if<MultipleEssentialPoints>(&reason)) {
    return "essential spectrum has several points " + braces(multi->points);
  }
  const auto& below = std::get<InfinitelyManyBelowAlpha>(reason);
  return "infinitely many spectrum points below α = " + below.alpha.to_string() + " (strand " +
         std::to_string(below.strand_index) + ")";
}

std::string describe_witness(const Witness& witness) {
  if (const auto* c = std::get_if<CoordinateWitness>(&witness)) {
    return "coordinate subspace of strand " + std::to_string(c->strand_index) +
           ", excluded indices " + braces(c->excluded_indices);
  }
  const auto& m = std::get<MixedPairsWitness>(witness);
  return "mixed pairs e_a + t e_b, a = " + m.a.to_string() + " (strand " +
         std::to_string(m.a_strand) + ", from occurrence " + std::to_string(m.a_first_occurrence) +
         "), b = " + m.b.to_string() + " (strand " + std::to_string(m.b_strand) + ")";
}

std::string branch_tag(const ShiftConditionReport& report) {
  return std::holds_alternative<InfiniteSpectrumConditions>(report.branch) ? "(i)(ii)(iii)"
                                                                           : "(i')(ii')";
}

void print_conditions(std::ostream& out, const ShiftConditionReport& report) {
  if (const auto* inf = std::get_if<InfiniteSpectrumConditions>(&report.branch)) {
    out << "condition  holds  detail\n";
    out << "(i)        " << cell(yes_no(inf->unique_limit_point)) << "unique limit point of {|w_n|}"
        << (inf->alpha ? ": α = " + inf->alpha->to_string() : std::string()) << "\n";
    out << "(ii)       " << cell(optional_yes_no(inf->finitely_repeated))
        << "values repeated infinitely often besides α: " << braces(inf->violating_values) << "\n";
    std::string below = "n/a";
    if (inf->below_alpha_indices) {
      if (const auto* finite = std::get_if<std::set<Index>>(&*inf->below_alpha_indices)) {
        below = "indices " + braces(*finite);
      } else {
        below = "infinitely many (strand " +
                std::to_string(std::get<InfiniteBelowIndices>(*inf->below_alpha_indices).strand_index) +
                ")";
      }
    }
    out << "(iii)      " << cell(optional_yes_no(inf->finitely_many_below)) << "|w_n| < α at " << below
        << "\n";
  } else {
    const auto& fin = std::get<FiniteSpectrumConditions>(report.branch);
    out << "condition  holds  detail\n";
    out << "(i')       " << cell(yes_no(fin.finite_spectrum)) << "σ(|T|) = " << braces(fin.sigma) << "\n";
    out << "(ii')      " << cell(yes_no(fin.single_infinite_value))
        << "values of infinite multiplicity " << braces(fin.infinite_multiplicity_values) << "\n";
  }
}

// Diagonal operator whose classification answers the question: the operator
// itself, or |T| for a shift.
std::optional<SequenceSpec> diagonal_symbol(const OperatorModel& model) {
  if (const auto* seq = std::get_if<SequenceSpec>(&model)) return *seq;
  if (const auto* shift = std::get_if<WeightedShift>(&model)) return modulus(*shift);
  return std::nullopt;
}

int cmd_classify(const OperatorModel& model, bool as_json, std::ostream& out) {
  const std::vector<std::size_t> sizes{10, 50, 200};
  if (as_json) {
    out << classify_report(model, sizes, tolerance::kVerification).dump(2) << "\n";
    return kExitOk;
  }
  if (const auto* op = std::get_if<CompositeOperator>(&model)) {
    try {
      const Certificate cert = an_certificate(*op, sizes, tolerance::kVerification);
      out << "AN: yes, α = " << op->alpha() << ", positive composite αI + K + F, rank F = "
          << cert.rank_f << "\n";
    } catch (const NotPositiveError& e) {
      out << "AN: not certified, composite is not positive (eigenvalue " << fmt_double(e.eigenvalue())
          << " at size " << e.truncation_size() << ")\n";
    }
    return kExitOk;
  }
  const SequenceSpec seq = *diagonal_symbol(model);
  const ANVerdict verdict = classify_an(seq);
  std::optional<ShiftConditionReport> conditions;
  if (const auto* shift = std::get_if<WeightedShift>(&model)) conditions = shift_conditions(*shift);
  const std::string branch = conditions ? ", branch " + branch_tag(*conditions) : std::string();

  if (const auto* yes = std::get_if<IsAN>(&verdict)) {
    out << "AN: yes, α = " << yes->alpha << branch << "\n";
  } else {
    const auto& no = std::get<NotAN>(verdict);
    out << "AN: no" << branch << "\n";
    out << "reason: " << describe_reason(no.reason) << "\n";
    out << "witness: " << describe_witness(no.witness) << ", sup " << witness_sup(no.witness)
        << " (not attained)\n";
  }
  if (conditions) print_conditions(out, *conditions);
  return kExitOk;
}

int cmd_decompose(const OperatorModel& model, std::size_t entries, std::ostream& out) {
  if (const auto* op = std::get_if<CompositeOperator>(&model)) {
    out << "α = " << op->alpha() << "\n";
    out << "F = Σ c_j u_j u_jᵀ with " << op->f_terms().size() << " term(s), rank " << op->f_rank()
        << ", support " << braces(op->f_support()) << "\n";
    for (std::size_t j = 0; j < op->f_terms().size(); ++j) {
      const auto& term = op->f_terms()[j];
      std::vector<std::string> parts;
      for (const auto& [index, value] : term.vector) parts.push_back(std::to_string(index) + " → " + value.to_string());
      out << "  term " << j << ": c = " << term.coefficient << ", u = {" << join(parts) << "}\n";
    }
    out << "K (first " << entries << " entries):\n";
    for (Index n = 1; n <= entries; ++n) out << "  " << n << "  " << op->k_diag().entry(n) << "\n";
    return kExitOk;
  }
  const SequenceSpec seq = *diagonal_symbol(model);
  const ANVerdict verdict = classify_an(seq);
  const auto* yes = std::get_if<IsAN>(&verdict);
  if (!yes) {
    throw Error(ErrorCode::NotApplicable,
                "operator is not AN (" + describe_reason(std::get<NotAN>(verdict).reason) +
                    "); no αI + K⁺ + F decomposition");
  }
  const Decomposition& d = yes->decomposition;
  out << "α = " << d.alpha() << "\n";
  std::vector<std::string> support;
  std::vector<std::string> values;
  for (const auto& [index, value] : d.f_entries()) {
    support.push_back(std::to_string(index));
    values.push_back(std::to_string(index) + " → " + value.to_string());
  }
  out << "F support: {" << join(support) << "}\n";
  out << "F values: {" << join(values) << "}\n";
  out << "K⁺ (first " << entries << " entries):\n";
  for (Index n = 1; n <= entries; ++n) out << "  " << n << "  " << d.kplus(n) << "\n";
  return kExitOk;
}

int cmd_witness(const OperatorModel& model, std::size_t pairs, std::ostream& out) {
  const std::optional<SequenceSpec> seq = diagonal_symbol(model);
  if (!seq) throw Error(ErrorCode::NotApplicable, "composite operators carry no witness");
  const ANVerdict verdict = classify_an(*seq);
  if (is_an(verdict)) {
    throw Error(ErrorCode::NotApplicable, "operator is AN; every subspace attains its norm");
  }
  const auto& no = std::get<NotAN>(verdict);
  out << "witness: " << describe_witness(no.witness) << "\n";
  if (const auto* m = std::get_if<MixedPairsWitness>(&no.witness)) {
    out << "pairs (a_index, b_index, v, u, μ, t²):\n";
    for (const auto& term : pair_terms(*seq, *m, pairs)) {
      out << "  " << term.a_index << "  " << term.b_index << "  " << term.v << "  " << term.u << "  "
          << term.mu << "  " << term.t_squared << "\n";
    }
  } else {
    std::vector<std::string> indices;
    for (const auto& term : coordinate_terms(*seq, std::get<CoordinateWitness>(no.witness), pairs)) {
      indices.push_back(std::to_string(term.index));
    }
    out << "indices: " << join(indices) << "\n";
  }
  std::vector<std::string> norms;
  for (const auto& p : predicted_norms(*seq, no.witness, pairs)) norms.push_back(p.to_string());
  out << "predicted norms: " << join(norms) << "\n";
  out << "sup " << witness_sup(no.witness) << " (not attained)\n";
  return kExitOk;
}

struct CheckLog {
  std::ostream& out;
  bool all_passed = true;

  void record(bool passed, const std::string& name, const std::string& detail) {
    all_passed &= passed;
    out << (passed ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  }
};

void verify_decomposition(const Decomposition& d, CheckLog& log) {
  const SequenceSpec& seq = d.sequence();
  bool identity = true, nonnegative = true, bounded = true;
  for (Index n = 1; n <= kIdentitySample; ++n) {
    const Rational k = d.kplus(n);
    identity &= (d.alpha() + k + d.f(n) == seq.entry(n));
    nonnegative &= k.sign() >= 0;
    if (!seq.is_overridden(n)) bounded &= k <= d.kplus_bound(n);
  }
  bool f_negative = true;
  for (const auto& [index, value] : d.f_entries()) f_negative &= value.sign() < 0;
  log.record(identity, "decomposition identity", "α + K⁺(n) + F(n) = entry(n) for n ≤ 1000");
  log.record(nonnegative && bounded, "K⁺ nonnegative and decaying", "n ≤ 1000");
  log.record(f_negative, "F finite and negative", std::to_string(d.f_entries().size()) + " entries");
}

void verify_sequence(const SequenceSpec& seq, const std::vector<std::size_t>& sizes, double tol,
                     CheckLog& log) {
  const ANVerdict verdict = classify_an(seq);
  if (const auto* yes = std::get_if<IsAN>(&verdict)) {
    log.out << "verdict: AN, α = " << yes->alpha << "\n";
    verify_decomposition(yes->decomposition, log);
    const double alpha = yes->alpha.to_double();
    for (std::size_t n : sizes) {
      std::size_t expected = 0;
      for (Index i = 1; i <= n; ++i) expected += seq.entry(i).to_double() < alpha - tol;
      const std::size_t counted = spectral_count_below(truncate_diagonal(seq, n), alpha, tol);
      log.record(counted == expected && counted <= yes->decomposition.f_entries().size(),
                 "eigenvalues below α at N=" + std::to_string(n),
                 std::to_string(counted) + " (rank F = " +
                     std::to_string(yes->decomposition.f_entries().size()) + ")");
    }
    return;
  }
  const auto& no = std::get<NotAN>(verdict);
  log.out << "verdict: not AN, " << describe_reason(no.reason) << "\n";
  for (std::size_t n : sizes) {
    std::size_t m = 0;
    while (m < kVerifyWitnessVectors && witness_extent(seq, no.witness, m + 1) <= n) ++m;
    const std::string name = "witness escape at N=" + std::to_string(n);
    if (m == 0) {
      log.out << "SKIP " << name << ": first witness vector lies beyond the truncation\n";
      continue;
    }
    try {
      const WitnessCheck check = verify_witness_numeric(seq, no.witness, m, n, tol);
      std::vector<std::string> nus;
      for (double nu : check.norms) nus.push_back(fmt_double(nu));
      log.record(check.passed(), name,
                 "ν = (" + join(nus) + ") < sup " + witness_sup(no.witness).to_string() +
                     (check.strictly_increasing ? ", strictly increasing" : ", NOT increasing"));
    } catch (const Error& e) {
      log.record(false, name, e.what());
    }
  }
}

void verify_shift_identity(const WeightedShift& shift, const std::vector<std::size_t>& sizes,
                           double tol, CheckLog& log) {
  for (std::size_t n : sizes) {
    const std::string name = "|T| identity at N=" + std::to_string(n);
    if (n < 2) {
      log.out << "SKIP " << name << ": needs N ≥ 2\n";
      continue;
    }
    try {
      const TruncatedMatrix root = matrix_sqrt(truncate_shift(shift, n).gram, tol);
      double worst = 0.0;
      for (Eigen::Index i = 0; i < root.size(); ++i) {
        for (Eigen::Index j = 0; j < root.size(); ++j) {
          double expected = 0.0;
          if (i == j && i + 1 < root.size()) {
            expected = shift.moduli().entry(static_cast<Index>(i) + 1).to_double();
          }
          worst = std::max(worst, std::abs(root(i, j) - expected));
        }
      }
      log.record(worst <= tolerance::kReconstruction, name, "max deviation " + fmt_double(worst));
    } catch (const Error& e) {
      log.record(false, name, e.what());
    }
  }
}

void verify_composite(const CompositeOperator& op, const std::vector<std::size_t>& sizes, double tol,
                      CheckLog& log) {
  Certificate cert;
  try {
    cert = an_certificate(op, sizes, tol);
  } catch (const NotPositiveError& e) {
    log.record(false, "positivity", e.what());
    return;
  }
  log.out << "verdict: AN (positive composite), α = " << op.alpha() << ", rank F = " << cert.rank_f << "\n";
  for (const auto& [n, lowest] : cert.min_eigenvalue_per_size) {
    log.record(true, "positivity at N=" + std::to_string(n), "λ_min = " + fmt_double(lowest));
  }
  const double alpha = op.alpha().to_double();
  for (std::size_t n : sizes) {
    const std::size_t counted = spectral_count_below(truncate_composite(op, n), alpha, tol);
    log.record(counted <= cert.rank_f, "eigenvalues below α at N=" + std::to_string(n),
               std::to_string(counted) + " ≤ rank F = " + std::to_string(cert.rank_f));
  }
}

int cmd_verify(const OperatorModel& model, const std::vector<std::size_t>& sizes, double tol,
               std::ostream& out) {
  CheckLog log{out};
  if (const auto* op = std::get_if<CompositeOperator>(&model)) {
    verify_composite(*op, sizes, tol, log);
  } else {
    verify_sequence(*diagonal_symbol(model), sizes, tol, log);
    if (const auto* shift = std::get_if<WeightedShift>(&model)) verify_shift_identity(*shift, sizes, tol, log);
  }
  out << (log.all_passed ? "all checks passed" : "verification FAILED") << "\n";
  return log.all_passed ? kExitOk : kExitVerificationFailed;
}

int cmd_spectrum(const OperatorModel& model, std::size_t n, const std::string& csv_path,
                 std::ostream& out) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "--truncate must be at least 1");
  Eigen::VectorXd eigenvalues;
  if (const auto* op = std::get_if<CompositeOperator>(&model)) {
    eigenvalues = jacobi_eigenvalues(truncate_composite(*op, n)).eigenvalues;
    out << "essential spectrum: {" << op->alpha() << "}\n";
    std::size_t below = 0;
    for (double lambda : eigenvalues) below += lambda < op->alpha().to_double() - tolerance::kVerification;
    out << "below α = " << op->alpha() << ": " << below << " truncated eigenvalue(s)\n";
  } else {
    const SequenceSpec seq = *diagonal_symbol(model);
    if (const auto* shift = std::get_if<WeightedShift>(&model)) {
      if (n < 2) throw Error(ErrorCode::InvalidSpec, "shift truncation needs --truncate ≥ 2");
      // Eigenvalues of |T_N| = (T_N^T T_N)^(1/2).
      eigenvalues = jacobi_eigenvalues(matrix_sqrt(truncate_shift(*shift, n).gram, tolerance::kVerification)).eigenvalues;
    } else {
      eigenvalues = jacobi_eigenvalues(truncate_diagonal(seq, n)).eigenvalues;
    }
    const auto essential = essential_spectrum(seq);
    out << "essential spectrum: " << braces(essential) << "\n";
    for (const Rational& point : essential) {
      const BelowThreshold below = spectrum_elements_below(seq, point);
      out << "below " << point << ": ";
      if (const auto* finite = std::get_if<FiniteBelow>(&below)) {
        out << "finite " << braces(finite->values) << "\n";
      } else {
        out << "infinite (strand " << std::get<InfiniteBelow>(below).strand_index << ")\n";
      }
    }
  }
  out << "truncated eigenvalues (N = " << n << "):\n";
  for (double lambda : eigenvalues) out << "  " << fmt_double(lambda) << "\n";
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw Error(ErrorCode::InvalidSpec, "cannot write " + csv_path);
    csv << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      csv << (i + 1) << "," << fmt_double(eigenvalues(i)) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Absolute norm attainment of positive diagonal, shift and composite operators"};
  app.name("attain");
  app.require_subcommand(1);

  std::string file;
  bool as_json = false;
  std::size_t entries = 20;
  std::size_t pairs = 10;
  std::vector<std::size_t> sizes{10, 50, 200};
  double tol = tolerance::kVerification;
  std::size_t truncate = 0;
  std::string csv_path;

  auto* classify = app.add_subcommand("classify", "Decide AN and explain the verdict");
  classify->add_option("file", file, "operator JSON file")->required();
  classify->add_flag("--json", as_json, "emit the machine-readable report");

  auto* decompose_cmd = app.add_subcommand("decompose", "Print the αI + K⁺ + F decomposition");
  decompose_cmd->add_option("file", file, "operator JSON file")->required();
  decompose_cmd->add_option("--entries", entries, "number of K⁺ entries to print")->capture_default_str();

  auto* witness = app.add_subcommand("witness", "Describe the non-attainment witness subspace");
  witness->add_option("file", file, "operator JSON file")->required();
  witness->add_option("--pairs", pairs, "number of witness basis vectors")->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run the numeric verification suite");
  verify->add_option("file", file, "operator JSON file")->required();
  verify->add_option("--sizes", sizes, "truncation sizes")->delimiter(',')->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "verification tolerance")->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* spectrum = app.add_subcommand("spectrum", "Truncated eigenvalues and essential spectrum");
  spectrum->add_option("file", file, "operator JSON file")->required();
  spectrum->add_option("--truncate", truncate, "truncation size N")->required();
  spectrum->add_option("--csv", csv_path, "write index,eigenvalue rows to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const OperatorModel model = parse_spec(file);
    if (classify->parsed()) return cmd_classify(model, as_json, out);
    if (decompose_cmd->parsed()) return cmd_decompose(model, entries, out);
    if (witness->parsed()) return cmd_witness(model, pairs, out);
    if (verify->parsed()) return cmd_verify(model, sizes, tol, out);
    return cmd_spectrum(model, truncate, csv_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace attain::cli
