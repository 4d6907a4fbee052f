#pragma once

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "brickwright/report.hpp"

namespace brickwright {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitFalsification = 3,
  kExitIo = 4,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Replaceable code paths for the theorem sweep. Tests inject faults here.
struct CliHooks {
  std::function<std::vector<BoxReport>(Int)> oracle = [](Int a) { return boxes_with_side(a); };
  std::function<ProofTrace(Int, Int)> engine = [](Int p, Int q) { return verify_semiprime_theorem(p, q); };
};

enum class OutputFormat { Text, Json, Csv };

namespace cli_detail {

inline Int parse_positive(const std::string& text, const char* what) {
  auto v = Int::parse(text);
  if (!v || *v < 1) throw UsageError(std::string(what) + ": positive integer required (got \"" + text + "\")");
  if (*v > kMaxSide)
    throw UsageError(std::string(what) + ": " + text + " exceeds the supported side " + Int(kMaxSide).to_string() +
                     " (intermediate squares would overflow 128 bits)");
  return *v;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads over contiguous slices.
template <typename Fn>
void parallel_indices(std::size_t count, unsigned jobs, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::string diag_text(const Diagonal& d) {
  return d.integral ? d.value.to_string() : "sqrt(" + d.value.to_string() + ")";
}

inline const char* kBoxCsvHeader = "a,b,c,d2,e2,f2,g2,d,e,f,g,classification";

inline void box_csv_row(std::ostream& os, const BoxReport& b) {
  const auto root = [](const Diagonal& d) { return d.integral ? d.value.to_string() : std::string(); };
  os << b.a << ',' << b.b << ',' << b.c << ',' << b.d.radicand() << ',' << b.e.radicand() << ',' << b.f.radicand() << ','
     << b.g.radicand() << ',' << root(b.d) << ',' << root(b.e) << ',' << root(b.f) << ',' << root(b.g) << ','
     << to_string(b.classification) << '\n';
}

inline void box_text_row(std::ostream& os, const BoxReport& b) {
  os << "  (" << b.a << ", " << b.b << ", " << b.c << ")  d=" << diag_text(b.d) << " e=" << diag_text(b.e)
     << " f=" << diag_text(b.f) << " g=" << diag_text(b.g) << "  " << to_string(b.classification) << '\n';
}

inline std::string witnesses_text(const BranchElimination& b) {
  std::string s;
  for (const auto& w : b.witness_values) s += (s.empty() ? "" : " ") + w.name + "=" + w.value.to_string();
  return s;
}

// ---------------------------------------------------------------------------
// Text and CSV renderers per payload.

inline void render(std::ostream& os, const PairsListing& v, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    os << "s,t,leg,hyp,status\n";
    for (const auto& r : v.rows)
      os << r.pair.s << ',' << r.pair.t << ',' << (r.leg ? r.leg->leg.to_string() : "") << ','
         << (r.leg ? r.leg->hyp.to_string() : "") << ',' << r.status << '\n';
    return;
  }
  os << "factor pairs of " << v.side << "^2 = " << square(v.side) << '\n';
  std::size_t legs = 0;
  for (const auto& r : v.rows) {
    os << "  (" << r.pair.s << ", " << r.pair.t << ")";
    if (r.leg) {
      os << "  leg=" << r.leg->leg << " hyp=" << r.leg->hyp;
      ++legs;
    } else {
      os << "  " << r.status;
    }
    os << '\n';
  }
  os << v.rows.size() << " pairs, " << legs << " legs\n";
}

inline void render(std::ostream& os, const ProofTrace& v, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    os << "branch,reason,witnesses\n";
    for (const auto& b : v.branches) os << b.branch_label << ',' << to_string(b.reason) << ',' << witnesses_text(b) << '\n';
    return;
  }
  if (v.p == 1)
    os << "prime side " << v.q << '\n';
  else
    os << "side " << v.p * v.q << " = " << v.p << " * " << v.q << '\n';
  for (const auto& b : v.branches)
    os << "  " << std::left << std::setw(34) << b.branch_label << std::setw(32) << to_string(b.reason) << witnesses_text(b)
       << '\n';
  os << "verdict: " << to_string(v.verdict) << '\n';
  if (v.counterexample) box_text_row(os, *v.counterexample);
}

inline void render(std::ostream& os, const TheoremSummary& v, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    os << "side,p,q,verdict,branches,oracle_perfect,agree\n";
    for (const auto& r : v.rows)
      os << r.side << ',' << r.p << ',' << r.q << ',' << to_string(r.verdict) << ',' << r.branches << ','
         << r.oracle_perfect << ',' << (r.agree ? "yes" : "no") << '\n';
    return;
  }
  const auto pct = [](Int num, Int den) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2)
      << (den == 0 ? 100.0 : 100.0 * static_cast<double>(num.to_int64()) / static_cast<double>(den.to_int64()));
    return s.str();
  };
  os << "semiprime sides <= " << v.max << '\n'
     << "  checked                 " << v.semiprimes_checked << '\n'
     << "  case engine eliminated  " << v.all_eliminated << '\n'
     << "  oracle perfect boxes    " << v.oracle_perfect_boxes << '\n'
     << "  path agreement          " << v.agreements << " (" << pct(v.agreements, v.semiprimes_checked) << "%)\n"
     << "prime-square sides (oracle only)\n"
     << "  checked                 " << v.prime_squares_checked << '\n'
     << "  perfect boxes           " << v.prime_square_perfect_boxes << '\n';
}

inline void render(std::ostream& os, const SideListing& v, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    os << kBoxCsvHeader << '\n';
    for (const auto& b : v.boxes) box_csv_row(os, b);
    return;
  }
  os << "side " << v.side << ": " << v.legs.size() << " legs";
  for (const auto& l : v.legs) os << ' ' << l.leg;
  os << '\n';
  for (const auto& b : v.boxes) box_text_row(os, b);
  if (v.boxes.empty()) os << "  no Euler brick has this side\n";
}

inline void render(std::ostream& os, const ScanReport& v, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    os << kBoxCsvHeader << '\n';
    for (const auto& b : v.perfect_hits) box_csv_row(os, b);
    for (const auto& b : v.brick_hits) box_csv_row(os, b);
    return;
  }
  os << "scan " << v.lo << ".." << v.hi << " filter=" << to_string(v.filter) << '\n';
  if (v.resumed_from) os << "  resumed after side " << *v.resumed_from << '\n';
  os << "  sides processed " << v.sides_processed << ", perfect " << v.perfect_count << ", bricks " << v.brick_count
     << '\n';
  for (const auto& b : v.perfect_hits) box_text_row(os, b);
  for (const auto& b : v.brick_hits) box_text_row(os, b);
}

inline void render(std::ostream& os, const CaseCatalogue& v, OutputFormat fmt) {
  const auto pattern_text = [](const CaseSystem& s, std::size_t i) { return render_pattern(s.patterns[i], s.provenance); };
  if (fmt == OutputFormat::Csv) {
    os << "kind,index,width,b_pair,c_pair,g_pair\n";
    const auto rows = [&](const char* kind, const std::vector<CaseSystem>& list) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& s = list[i];
        os << kind << ',' << i << ',' << s.width() << ",\"" << pattern_text(s, 0) << "\",\"" << pattern_text(s, 1)
           << "\",\"" << (s.patterns.size() > 2 ? pattern_text(s, 2) : "") << "\"\n";
      }
    };
    rows("leg_class", v.leg_classes);
    rows("system", v.systems);
    return;
  }
  os << "k = " << v.k << ": " << v.leg_classes.size() << " leg classes, " << v.systems.size() << " systems\n";
  for (const auto& s : v.leg_classes)
    os << "  legs  (d-b, d+b) = " << pattern_text(s, 0) << "  (e-c, e+c) = " << pattern_text(s, 1) << '\n';
  for (const auto& s : v.systems)
    os << "  system[w=" << s.width() << "]  b " << pattern_text(s, 0) << "  c " << pattern_text(s, 1) << "  g "
       << pattern_text(s, 2) << '\n';
  os << v.note << '\n';
}

// ---------------------------------------------------------------------------
// Commands.

inline PairsListing cmd_pairs(Int a) {
  PairsListing out{a, {}};
  for (const auto& pair : divisor_pairs_of_square(a)) {
    PairRow row{pair, leg_from_pair(pair), "leg"};
    if (!row.leg) row.status = pair.s == pair.t ? "zero_leg" : "parity";
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline SideListing cmd_side(Int a) { return {a, side_legs(a), boxes_with_side(a)}; }

inline CaseCatalogue cmd_cases(int k) {
  return {k, canonical_leg_classes(k), canonical_case_systems(k),
          "space-diagonal pattern exclusions (zero f, g pair equal to a leg pair) are carried over from the "
          "two-prime asymmetric case by analogy"};
}

struct TheoremOutcome {
  TheoremSummary summary;
  bool falsified = false;
};

inline TheoremOutcome cmd_theorem(Int max, unsigned jobs, const CliHooks& hooks) {
  struct Slot {
    enum Kind { Skip, Semiprime, PrimeSquare } kind = Skip;
    TheoremRow row;
    std::optional<ProofTrace> trace;
    Int oracle_perfect;
  };
  const std::size_t count = max < 2 ? 0 : static_cast<std::size_t>((max - 1).to_int64());
  std::vector<Slot> slots(count);
  parallel_indices(count, jobs, [&](std::size_t i) {
    const Int side = Int(static_cast<std::int64_t>(i)) + 2;
    const auto cls = classify_side(side);
    auto& slot = slots[i];
    const auto count_perfect = [&] {
      Int n;
      for (const auto& b : hooks.oracle(side))
        if (b.classification == BoxClass::Perfect) ++n;
      return n;
    };
    if (const auto* s = std::get_if<side::Semiprime>(&cls)) {
      slot.kind = Slot::Semiprime;
      ProofTrace trace = hooks.engine(s->p, s->q);
      const Int perfect = count_perfect();
      const bool agree = (trace.verdict == Verdict::AllEliminated) == (perfect == 0);
      slot.row = {side, s->p, s->q, trace.verdict, Int(static_cast<std::int64_t>(trace.branches.size())), perfect, agree};
      if (!agree || trace.verdict != Verdict::AllEliminated || perfect != 0) slot.trace = std::move(trace);
    } else if (std::holds_alternative<side::PrimeSquare>(cls)) {
      slot.kind = Slot::PrimeSquare;
      slot.oracle_perfect = count_perfect();
    }
  });

  TheoremOutcome out;
  auto& sum = out.summary;
  sum.max = max;
  for (auto& slot : slots) {
    if (slot.kind == Slot::PrimeSquare) {
      ++sum.prime_squares_checked;
      sum.prime_square_perfect_boxes += slot.oracle_perfect;
      if (slot.oracle_perfect != 0) out.falsified = true;
      continue;
    }
    if (slot.kind != Slot::Semiprime) continue;
    ++sum.semiprimes_checked;
    if (slot.row.verdict == Verdict::AllEliminated) ++sum.all_eliminated;
    sum.oracle_perfect_boxes += slot.row.oracle_perfect;
    if (slot.row.agree) ++sum.agreements;
    if (slot.trace) {
      out.falsified = true;
      sum.falsifications.push_back(std::move(*slot.trace));
    }
    sum.rows.push_back(slot.row);
  }
  return out;
}

inline void emit(std::ostream& out, const ReportEnvelope& env, OutputFormat fmt) {
  if (fmt == OutputFormat::Json) {
    out << json(env).dump(2) << '\n';
    return;
  }
  std::visit([&](const auto& p) { render(out, p, fmt); }, env.payload);
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name. Reports go to `out`, diagnostics to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const CliHooks& hooks = {}) {
  using namespace cli_detail;
  CLI::App app{"Exact verification of Euler-box side constraints", "brickwright"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BRICKWRIGHT_VERSION);

  std::string format = "text";
  const std::map<std::string, OutputFormat> formats{
      {"text", OutputFormat::Text}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};
  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  };
  unsigned jobs = 1;
  const auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  std::string a_text, p_text, q_text, max_text, lo_text, hi_text, filter_text = "all", checkpoint_text;
  int k = 0;
  bool ignore_checkpoint = false;

  auto* pairs = app.add_subcommand("pairs", "Factor pairs of a^2 and the legs they carry");
  pairs->add_option("a", a_text, "Side length")->required();
  add_format(pairs);

  auto* verify = app.add_subcommand("verify", "Proof trace for side p*q, or for a prime side p");
  verify->add_option("p", p_text, "Prime")->required();
  verify->add_option("q", q_text, "Second prime (omit for a prime side)");
  add_format(verify);

  auto* theorem = app.add_subcommand("theorem", "Check every semiprime side up to --max on both code paths");
  theorem->add_option("--max", max_text, "Largest side")->required();
  add_jobs(theorem);
  add_format(theorem);

  auto* side_cmd = app.add_subcommand("side", "All Euler bricks having the given side");
  side_cmd->add_option("a", a_text, "Side length")->required();
  add_format(side_cmd);

  auto* scan = app.add_subcommand("scan", "Search a range of sides");
  scan->add_option("lo", lo_text, "First side")->required();
  scan->add_option("hi", hi_text, "Last side")->required();
  scan->add_option("--filter", filter_text, "all | semiprime | prime")->check(CLI::IsMember({"all", "semiprime", "prime"}));
  scan->add_option("--checkpoint", checkpoint_text, "Checkpoint file (default: $BRICKWRIGHT_CHECKPOINT_DIR)");
  scan->add_flag("--ignore-checkpoint", ignore_checkpoint, "Discard any existing checkpoint and start over");
  add_jobs(scan);
  add_format(scan);

  auto* cases = app.add_subcommand("cases", "Canonical case systems for sides with k distinct prime factors");
  cases->add_option("--k", k, "Number of distinct primes (1..4)")->required();
  add_format(cases);

  std::vector<const char*> argv{"brickwright"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ReportEnvelope env;
  env.started = utc_timestamp();
  int exit_code = kExitOk;
  try {
    if (pairs->parsed()) {
      env.command = "pairs";
      const Int a = parse_positive(a_text, "pairs");
      env.inputs = {{"a", a.to_string()}};
      env.payload = cmd_pairs(a);
    } else if (verify->parsed()) {
      env.command = "verify";
      const Int p = parse_positive(p_text, "verify");
      if (q_text.empty()) {
        if (!is_prime(p)) throw UsageError("verify: argument must be prime (use two arguments for a semiprime side)");
        env.inputs = {{"p", p.to_string()}};
        env.payload = verify_prime_side(p);
      } else {
        const Int q = parse_positive(q_text, "verify");
        if (!is_prime(p) || !is_prime(q) || p == q) throw UsageError("verify: arguments must be distinct primes");
        if (p * q > kMaxSide) throw UsageError("verify: p*q exceeds the supported side " + Int(kMaxSide).to_string());
        env.inputs = {{"p", p.to_string()}, {"q", q.to_string()}};
        try {
          env.payload = hooks.engine(p, q);
        } catch (const UnresolvedBranch& e) {
          err << "FALSIFICATION CANDIDATE: " << e.what() << '\n';
          return kExitFalsification;
        }
      }
      if (std::get<ProofTrace>(env.payload).verdict != Verdict::AllEliminated) exit_code = kExitFalsification;
    } else if (theorem->parsed()) {
      env.command = "theorem";
      const Int max = parse_positive(max_text, "theorem --max");
      env.inputs = {{"max", max.to_string()}};
      auto outcome = cmd_theorem(max, jobs, hooks);
      if (outcome.falsified) {
        exit_code = kExitFalsification;
        err << "FALSIFICATION CANDIDATE: the case engine and the oracle disagree or a perfect box was found\n";
        for (const auto& t : outcome.summary.falsifications) err << json(t).dump(2) << '\n';
      }
      env.payload = std::move(outcome.summary);
    } else if (side_cmd->parsed()) {
      env.command = "side";
      const Int a = parse_positive(a_text, "side");
      env.inputs = {{"a", a.to_string()}};
      env.payload = cmd_side(a);
    } else if (scan->parsed()) {
      env.command = "scan";
      ScanOptions opt;
      opt.lo = parse_positive(lo_text, "scan lo");
      opt.hi = parse_positive(hi_text, "scan hi");
      if (opt.lo > opt.hi) throw UsageError("scan: lo must not exceed hi");
      opt.filter = *parse_side_filter(filter_text);
      opt.jobs = jobs;
      opt.ignore_checkpoint = ignore_checkpoint;
      if (!checkpoint_text.empty()) {
        opt.checkpoint = checkpoint_text;
      } else if (const char* dir = std::getenv("BRICKWRIGHT_CHECKPOINT_DIR"); dir && *dir) {
        opt.checkpoint = std::filesystem::path(dir) / ("scan-" + opt.lo.to_string() + "-" + opt.hi.to_string() + "-" +
                                                       to_string(opt.filter) + ".jsonl");
      }
      env.inputs = {{"lo", opt.lo.to_string()}, {"hi", opt.hi.to_string()}, {"filter", to_string(opt.filter)}};
      auto report = scan_range(opt);
      if (opt.filter != SideFilter::All && report.perfect_count != 0) {
        exit_code = kExitFalsification;
        err << "FALSIFICATION CANDIDATE: perfect box with a " << to_string(opt.filter) << " side\n";
      }
      env.payload = std::move(report);
    } else if (cases->parsed()) {
      env.command = "cases";
      if (k < 1 || k > 4) throw UsageError("cases: --k must be in 1..4");
      env.inputs = {{"k", std::to_string(k)}};
      env.payload = cmd_cases(k);
    }
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UnresolvedBranch& e) {
    err << "FALSIFICATION CANDIDATE: " << e.what() << '\n';
    return kExitFalsification;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    err << "error: value too large: " << e.what() << '\n';
    return kExitUsage;
  }
  env.finished = utc_timestamp();
  emit(out, env, formats.at(format));
  if (!out) {
    err << "error: failed writing report\n";
    return kExitIo;
  }
  return exit_code;
}

}  // namespace brickwright
