#pragma once

#include <chrono>
#include <ctime>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "brickwright/almostprime.hpp"
#include "brickwright/cases.hpp"
#include "brickwright/pairs.hpp"
#include "brickwright/search.hpp"

#ifndef BRICKWRIGHT_VERSION
#define BRICKWRIGHT_VERSION "0.1.0"
#endif

// Integers are JSON numbers while they fit in 64 bits and decimal strings
// beyond that; both forms are accepted on input.
namespace nlohmann {

template <>
struct adl_serializer<brickwright::Int> {
  static void to_json(json& j, const brickwright::Int& v) {
    if (v.fits_int64())
      j = v.to_int64();
    else if (v.fits_uint64())
      j = v.to_uint64();
    else
      j = v.to_string();
  }
  static void from_json(const json& j, brickwright::Int& v) {
    if (j.is_number_unsigned())
      v = j.get<std::uint64_t>();
    else if (j.is_number_integer())
      v = j.get<std::int64_t>();
    else if (j.is_string()) {
      auto parsed = brickwright::Int::parse(j.get<std::string>());
      if (!parsed) throw std::invalid_argument("malformed integer string \"" + j.get<std::string>() + "\"");
      v = *parsed;
    } else
      throw std::invalid_argument("expected an integer, got " + j.dump());
  }
};

template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v)
      j = *v;
    else
      j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null())
      v.reset();
    else
      v = j.get<T>();
  }
};

}  // namespace nlohmann

namespace brickwright {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Enums as strings.

namespace detail {

template <typename E, std::size_t N>
E enum_from(const json& j, const std::array<E, N>& values, const char* what) {
  const auto s = j.get<std::string>();
  for (E e : values)
    if (s == to_string(e)) return e;
  throw std::invalid_argument(std::string("unknown ") + what + " \"" + s + "\"");
}

inline constexpr std::array kBoxClasses{BoxClass::Perfect, BoxClass::EulerBrick, BoxClass::Partial, BoxClass::None};
inline constexpr std::array kFilters{SideFilter::All, SideFilter::SemiprimeOnly, SideFilter::PrimeOnly};
inline constexpr std::array kReasons{
    EliminationReason::NonzeroContradictionPolynomial, EliminationReason::NotPerfectSquare,
    EliminationReason::ZeroLeg, EliminationReason::DiagonalEqualsLeg,
    EliminationReason::ParityFailure, EliminationReason::UnitPairExcluded,
    EliminationReason::EqualLegPairs};
inline constexpr std::array kVerdicts{Verdict::AllEliminated, Verdict::CounterexampleFound};
inline constexpr std::array kCaseKinds{CaseKind::Case1, CaseKind::Case2};

}  // namespace detail

inline void to_json(json& j, BoxClass v) { j = to_string(v); }
inline void from_json(const json& j, BoxClass& v) { v = detail::enum_from(j, detail::kBoxClasses, "classification"); }
inline void to_json(json& j, SideFilter v) { j = to_string(v); }
inline void from_json(const json& j, SideFilter& v) { v = detail::enum_from(j, detail::kFilters, "filter"); }
inline void to_json(json& j, EliminationReason v) { j = to_string(v); }
inline void from_json(const json& j, EliminationReason& v) { v = detail::enum_from(j, detail::kReasons, "reason"); }
inline void to_json(json& j, Verdict v) { j = to_string(v); }
inline void from_json(const json& j, Verdict& v) { v = detail::enum_from(j, detail::kVerdicts, "verdict"); }
inline void to_json(json& j, CaseKind v) { j = to_string(v); }
inline void from_json(const json& j, CaseKind& v) { v = detail::enum_from(j, detail::kCaseKinds, "case"); }

// ---------------------------------------------------------------------------
// Domain types.

inline void to_json(json& j, const FactorPair& v) { j = json{{"s", v.s}, {"t", v.t}}; }
inline void from_json(const json& j, FactorPair& v) { v = FactorPair{j.at("s").get<Int>(), j.at("t").get<Int>()}; }

inline void to_json(json& j, const LegSolution& v) { j = json{{"leg", v.leg}, {"hyp", v.hyp}}; }
inline void from_json(const json& j, LegSolution& v) {
  v.leg = j.at("leg").get<Int>();
  v.hyp = j.at("hyp").get<Int>();
}

inline void to_json(json& j, const Diagonal& v) {
  j = v.integral ? json{{"value", v.value}} : json{{"nonsquare", v.value}};
}
inline void from_json(const json& j, Diagonal& v) {
  if (j.contains("value")) {
    v = {true, j.at("value").get<Int>()};
  } else {
    v = {false, j.at("nonsquare").get<Int>()};
  }
}

inline void to_json(json& j, const BoxReport& v) {
  j = json{{"a", v.a}, {"b", v.b}, {"c", v.c}, {"d", v.d}, {"e", v.e},
           {"f", v.f}, {"g", v.g}, {"classification", v.classification}};
}
inline void from_json(const json& j, BoxReport& v) {
  j.at("a").get_to(v.a);
  j.at("b").get_to(v.b);
  j.at("c").get_to(v.c);
  j.at("d").get_to(v.d);
  j.at("e").get_to(v.e);
  j.at("f").get_to(v.f);
  j.at("g").get_to(v.g);
  j.at("classification").get_to(v.classification);
}

inline void to_json(json& j, const Witness& v) { j = json{{"name", v.name}, {"value", v.value}}; }
inline void from_json(const json& j, Witness& v) {
  j.at("name").get_to(v.name);
  j.at("value").get_to(v.value);
}

inline void to_json(json& j, const BranchElimination& v) {
  j = json{{"branch_label", v.branch_label}, {"witness_values", v.witness_values}, {"reason", v.reason}};
}
inline void from_json(const json& j, BranchElimination& v) {
  j.at("branch_label").get_to(v.branch_label);
  j.at("witness_values").get_to(v.witness_values);
  j.at("reason").get_to(v.reason);
}

inline void to_json(json& j, const ProofTrace& v) {
  j = json{{"p", v.p}, {"q", v.q}, {"branches", v.branches}, {"verdict", v.verdict}, {"counterexample", v.counterexample}};
}
inline void from_json(const json& j, ProofTrace& v) {
  j.at("p").get_to(v.p);
  j.at("q").get_to(v.q);
  j.at("branches").get_to(v.branches);
  j.at("verdict").get_to(v.verdict);
  j.at("counterexample").get_to(v.counterexample);
  if ((v.verdict == Verdict::CounterexampleFound) != v.counterexample.has_value())
    throw std::invalid_argument("proof trace verdict disagrees with counterexample field");
}

inline void to_json(json& j, const ScanReport& v) {
  j = json{{"range", {{"lo", v.lo}, {"hi", v.hi}}},
           {"filter", v.filter},
           {"perfect_hits", v.perfect_hits},
           {"brick_hits", v.brick_hits},
           {"sides_processed", v.sides_processed},
           {"skipped_equal_legs", v.skipped_equal_legs},
           {"checkpoint", {{"completed_through", v.completed_through}, {"resumed_from", v.resumed_from}}},
           {"perfect_count", v.perfect_count},
           {"brick_count", v.brick_count}};
}
inline void from_json(const json& j, ScanReport& v) {
  j.at("range").at("lo").get_to(v.lo);
  j.at("range").at("hi").get_to(v.hi);
  j.at("filter").get_to(v.filter);
  j.at("perfect_hits").get_to(v.perfect_hits);
  j.at("brick_hits").get_to(v.brick_hits);
  j.at("sides_processed").get_to(v.sides_processed);
  j.at("skipped_equal_legs").get_to(v.skipped_equal_legs);
  j.at("checkpoint").at("completed_through").get_to(v.completed_through);
  j.at("checkpoint").at("resumed_from").get_to(v.resumed_from);
  j.at("perfect_count").get_to(v.perfect_count);
  j.at("brick_count").get_to(v.brick_count);
}

inline void to_json(json& j, const CaseSystem& v) {
  j = json{{"width", v.width()}, {"provenance", v.provenance}};
  j["b_pattern"] = v.patterns.at(0);
  j["c_pattern"] = v.patterns.at(1);
  if (v.patterns.size() > 2) j["g_pattern"] = v.patterns.at(2);
}
inline void from_json(const json& j, CaseSystem& v) {
  v.patterns = {j.at("b_pattern").get<ExponentPattern>(), j.at("c_pattern").get<ExponentPattern>()};
  if (j.contains("g_pattern")) v.patterns.push_back(j.at("g_pattern").get<ExponentPattern>());
  j.at("provenance").get_to(v.provenance);
  if (j.at("width").get<std::size_t>() != v.width()) throw std::invalid_argument("case system width mismatch");
}

// ---------------------------------------------------------------------------
// Command payloads.

struct PairRow {
  FactorPair pair;
  std::optional<LegSolution> leg;
  std::string status;  // "leg", "zero_leg" or "parity"
  friend bool operator==(const PairRow&, const PairRow&) = default;
};

struct PairsListing {
  Int side;
  std::vector<PairRow> rows;
  friend bool operator==(const PairsListing&, const PairsListing&) = default;
};

struct SideListing {
  Int side;
  std::vector<LegSolution> legs;
  std::vector<BoxReport> boxes;
  friend bool operator==(const SideListing&, const SideListing&) = default;
};

struct TheoremRow {
  Int side, p, q;
  Verdict verdict = Verdict::AllEliminated;
  Int branches;
  Int oracle_perfect;
  bool agree = true;
  friend bool operator==(const TheoremRow&, const TheoremRow&) = default;
};

struct TheoremSummary {
  Int max;
  Int semiprimes_checked;
  Int all_eliminated;
  Int oracle_perfect_boxes;
  Int agreements;
  Int prime_squares_checked;  // oracle only
  Int prime_square_perfect_boxes;
  std::vector<TheoremRow> rows;
  std::vector<ProofTrace> falsifications;
  friend bool operator==(const TheoremSummary&, const TheoremSummary&) = default;
};

struct CaseCatalogue {
  int k = 0;
  std::vector<CaseSystem> leg_classes;
  std::vector<CaseSystem> systems;
  std::string note;
  friend bool operator==(const CaseCatalogue&, const CaseCatalogue&) = default;
};

inline void to_json(json& j, const PairRow& v) { j = json{{"pair", v.pair}, {"leg", v.leg}, {"status", v.status}}; }
inline void from_json(const json& j, PairRow& v) {
  j.at("pair").get_to(v.pair);
  j.at("leg").get_to(v.leg);
  j.at("status").get_to(v.status);
}
inline void to_json(json& j, const PairsListing& v) { j = json{{"side", v.side}, {"rows", v.rows}}; }
inline void from_json(const json& j, PairsListing& v) {
  j.at("side").get_to(v.side);
  j.at("rows").get_to(v.rows);
}
inline void to_json(json& j, const SideListing& v) { j = json{{"side", v.side}, {"legs", v.legs}, {"boxes", v.boxes}}; }
inline void from_json(const json& j, SideListing& v) {
  j.at("side").get_to(v.side);
  j.at("legs").get_to(v.legs);
  j.at("boxes").get_to(v.boxes);
}
inline void to_json(json& j, const TheoremRow& v) {
  j = json{{"side", v.side},         {"p", v.p}, {"q", v.q}, {"verdict", v.verdict}, {"branches", v.branches},
           {"oracle_perfect", v.oracle_perfect}, {"agree", v.agree}};
}
inline void from_json(const json& j, TheoremRow& v) {
  j.at("side").get_to(v.side);
  j.at("p").get_to(v.p);
  j.at("q").get_to(v.q);
  j.at("verdict").get_to(v.verdict);
  j.at("branches").get_to(v.branches);
  j.at("oracle_perfect").get_to(v.oracle_perfect);
  j.at("agree").get_to(v.agree);
}
inline void to_json(json& j, const TheoremSummary& v) {
  j = json{{"max", v.max},
           {"semiprimes_checked", v.semiprimes_checked},
           {"all_eliminated", v.all_eliminated},
           {"oracle_perfect_boxes", v.oracle_perfect_boxes},
           {"agreements", v.agreements},
           {"prime_squares_checked", v.prime_squares_checked},
           {"prime_square_perfect_boxes", v.prime_square_perfect_boxes},
           {"rows", v.rows},
           {"falsifications", v.falsifications}};
}
inline void from_json(const json& j, TheoremSummary& v) {
  j.at("max").get_to(v.max);
  j.at("semiprimes_checked").get_to(v.semiprimes_checked);
  j.at("all_eliminated").get_to(v.all_eliminated);
  j.at("oracle_perfect_boxes").get_to(v.oracle_perfect_boxes);
  j.at("agreements").get_to(v.agreements);
  j.at("prime_squares_checked").get_to(v.prime_squares_checked);
  j.at("prime_square_perfect_boxes").get_to(v.prime_square_perfect_boxes);
  j.at("rows").get_to(v.rows);
  j.at("falsifications").get_to(v.falsifications);
}
inline void to_json(json& j, const CaseCatalogue& v) {
  j = json{{"k", v.k}, {"leg_classes", v.leg_classes}, {"systems", v.systems}, {"note", v.note}};
}
inline void from_json(const json& j, CaseCatalogue& v) {
  j.at("k").get_to(v.k);
  j.at("leg_classes").get_to(v.leg_classes);
  j.at("systems").get_to(v.systems);
  j.at("note").get_to(v.note);
}

// ---------------------------------------------------------------------------
// Envelope.

using Payload = std::variant<PairsListing, ProofTrace, TheoremSummary, SideListing, ScanReport, CaseCatalogue>;

struct ReportEnvelope {
  std::string tool_version = BRICKWRIGHT_VERSION;
  std::string command;
  std::map<std::string, std::string> inputs;
  std::string started;
  std::string finished;
  Payload payload;
  friend bool operator==(const ReportEnvelope&, const ReportEnvelope&) = default;
};

/// Payload alternative index expected for each command name.
inline std::size_t payload_index_for(std::string_view command) {
  if (command == "pairs") return 0;
  if (command == "verify") return 1;
  if (command == "theorem") return 2;
  if (command == "side") return 3;
  if (command == "scan") return 4;
  if (command == "cases") return 5;
  throw std::invalid_argument("unknown command \"" + std::string(command) + "\"");
}

inline void to_json(json& j, const ReportEnvelope& v) {
  if (payload_index_for(v.command) != v.payload.index())
    throw std::logic_error("payload type does not match command " + v.command);
  j = json{{"tool_version", v.tool_version}, {"command", v.command}, {"inputs", v.inputs},
           {"started", v.started},           {"finished", v.finished}};
  std::visit([&](const auto& p) { j["payload"] = p; }, v.payload);
}

inline void from_json(const json& j, ReportEnvelope& v) {
  j.at("tool_version").get_to(v.tool_version);
  j.at("command").get_to(v.command);
  j.at("inputs").get_to(v.inputs);
  j.at("started").get_to(v.started);
  j.at("finished").get_to(v.finished);
  const auto& p = j.at("payload");
  switch (payload_index_for(v.command)) {
    case 0: v.payload = p.get<PairsListing>(); break;
    case 1: v.payload = p.get<ProofTrace>(); break;
    case 2: v.payload = p.get<TheoremSummary>(); break;
    case 3: v.payload = p.get<SideListing>(); break;
    case 4: v.payload = p.get<ScanReport>(); break;
    case 5: v.payload = p.get<CaseCatalogue>(); break;
  }
}

/// UTC, RFC 3339, second precision.
inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace brickwright
