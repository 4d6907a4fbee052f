#pragma once

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "brickwright/arith.hpp"
#include "brickwright/pairs.hpp"

namespace brickwright {

/// A diagonal is either an exact root or the radicand that failed to be a square.
struct Diagonal {
  bool integral = false;
  Int value;  // root when integral, radicand otherwise

  static Diagonal of_radicand(Int radicand) {
    if (auto r = is_perfect_square(radicand)) return {true, *r};
    return {false, radicand};
  }
  Int radicand() const { return integral ? square(value) : value; }
  friend bool operator==(const Diagonal&, const Diagonal&) = default;
};

enum class BoxClass { Perfect, EulerBrick, Partial, None };

inline const char* to_string(BoxClass c) {
  switch (c) {
    case BoxClass::Perfect: return "Perfect";
    case BoxClass::EulerBrick: return "EulerBrick";
    case BoxClass::Partial: return "Partial";
    case BoxClass::None: return "None";
  }
  return "?";
}

struct BoxReport {
  Int a, b, c;
  Diagonal d, e, f, g;  // d: ab face, e: ac face, f: bc face, g: space
  BoxClass classification = BoxClass::None;
  friend bool operator==(const BoxReport&, const BoxReport&) = default;
};

inline BoxReport verify_box(Int a, Int b, Int c) {
  if (a < 1 || b < 1 || c < 1) throw std::invalid_argument("verify_box: positive side lengths required");
  const Int a2 = square(a), b2 = square(b), c2 = square(c);
  BoxReport r{a, b, c,
              Diagonal::of_radicand(a2 + b2), Diagonal::of_radicand(a2 + c2),
              Diagonal::of_radicand(b2 + c2), Diagonal::of_radicand(a2 + b2 + c2),
              BoxClass::None};
  const bool faces = r.d.integral && r.e.integral && r.f.integral;
  if (faces && r.g.integral)
    r.classification = BoxClass::Perfect;
  else if (faces)
    r.classification = BoxClass::EulerBrick;
  else if (r.d.integral || r.e.integral || r.f.integral || r.g.integral)
    r.classification = BoxClass::Partial;
  return r;
}

/// All legs b with a^2 + b^2 square, ascending.
inline std::vector<LegSolution> side_legs(Int a) {
  std::vector<LegSolution> legs;
  for (const auto& pair : divisor_pairs_of_square(a)) {
    if (auto leg = leg_from_pair(pair)) legs.push_back(*leg);
  }
  std::sort(legs.begin(), legs.end(), [](const LegSolution& x, const LegSolution& y) { return x.leg < y.leg; });
  return legs;
}

/// Every Euler brick or perfect box having `a` as a side, as (a, b, c) with b < c.
/// Exhaustive: both face diagonals through a force b and c into side_legs(a).
inline std::vector<BoxReport> boxes_with_side(Int a) {
  const auto legs = side_legs(a);
  std::vector<BoxReport> out;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    for (std::size_t j = i + 1; j < legs.size(); ++j) {
      // b == c cannot give an integral f (f^2 = 2c^2), and distinct pairs give distinct legs.
      auto box = verify_box(a, legs[i].leg, legs[j].leg);
      if (box.classification == BoxClass::Perfect || box.classification == BoxClass::EulerBrick)
        out.push_back(std::move(box));
    }
  }
  return out;
}

enum class SideFilter { All, SemiprimeOnly, PrimeOnly };

inline const char* to_string(SideFilter f) {
  switch (f) {
    case SideFilter::All: return "all";
    case SideFilter::SemiprimeOnly: return "semiprime";
    case SideFilter::PrimeOnly: return "prime";
  }
  return "?";
}

inline std::optional<SideFilter> parse_side_filter(std::string_view s) {
  if (s == "all") return SideFilter::All;
  if (s == "semiprime") return SideFilter::SemiprimeOnly;
  if (s == "prime") return SideFilter::PrimeOnly;
  return std::nullopt;
}

inline bool side_selected(Int a, SideFilter filter) {
  switch (filter) {
    case SideFilter::All: return true;
    case SideFilter::SemiprimeOnly: return std::holds_alternative<side::Semiprime>(classify_side(a));
    case SideFilter::PrimeOnly: return is_prime(a);
  }
  return false;
}

struct ScanReport {
  Int lo, hi;
  SideFilter filter = SideFilter::All;
  std::vector<BoxReport> perfect_hits;  // hits found in this run
  std::vector<BoxReport> brick_hits;
  Int sides_processed;     // selected sides examined in this run
  Int skipped_equal_legs;  // {b, b} leg pairs skipped, one per leg
  Int completed_through;   // checkpoint cursor: every side <= this is done
  Int perfect_count;       // totals, including any resumed prefix
  Int brick_count;
  std::optional<Int> resumed_from;
  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckpointRecord {
  Int completed_through;
  Int perfect;
  Int bricks;
  friend bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

inline std::string checkpoint_line(const CheckpointRecord& r) {
  // Fixed key order; sides are bounded by kMaxSide so every field fits in 64 bits.
  return "{\"completed_through\": " + r.completed_through.to_string() + ", \"perfect\": " + r.perfect.to_string() +
         ", \"bricks\": " + r.bricks.to_string() + "}";
}

/// Last record of a checkpoint file; absent when the file is missing or empty.
inline std::optional<CheckpointRecord> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    if (std::filesystem::exists(path)) throw CheckpointError("checkpoint " + path.string() + " is unreadable");
    return std::nullopt;
  }
  const auto corrupt = [&](std::size_t line_no, const std::string& why) {
    return CheckpointError("checkpoint " + path.string() + " is corrupt at line " + std::to_string(line_no) + " (" +
                           why + "); delete it to restart the scan, or pass --ignore-checkpoint");
  };
  std::optional<CheckpointRecord> last;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw corrupt(line_no, "not a JSON object");
    CheckpointRecord rec;
    for (auto [key, field] : {std::pair{"completed_through", &rec.completed_through},
                              std::pair{"perfect", &rec.perfect}, std::pair{"bricks", &rec.bricks}}) {
      auto it = doc.find(key);
      if (it == doc.end() || !it->is_number_integer() || it->template get<std::int64_t>() < 0)
        throw corrupt(line_no, std::string("missing or invalid \"") + key + "\"");
      *field = it->template get<std::int64_t>();
    }
    if (doc.size() != 3) throw corrupt(line_no, "unexpected fields");
    if (last && (rec.completed_through < last->completed_through || rec.perfect < last->perfect ||
                 rec.bricks < last->bricks))
      throw corrupt(line_no, "cursor moved backwards");
    last = rec;
  }
  return last;
}

struct ScanOptions {
  Int lo = 1, hi = 1;
  SideFilter filter = SideFilter::All;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> checkpoint;
  bool ignore_checkpoint = false;
  Int batch_size = 1000;  // sides per checkpoint record
};

namespace detail {

struct SideOutcome {
  bool selected = false;
  std::vector<BoxReport> boxes;
  Int legs;
};

inline SideOutcome scan_side(Int a, SideFilter filter) {
  SideOutcome out;
  if (!side_selected(a, filter)) return out;
  out.selected = true;
  out.legs = static_cast<std::int64_t>(side_legs(a).size());
  out.boxes = boxes_with_side(a);
  return out;
}

// Outcomes for [first, last], computed on up to `jobs` threads over contiguous
// slices and returned in side order.
inline std::vector<SideOutcome> scan_batch(Int first, Int last, SideFilter filter, unsigned jobs) {
  const std::int64_t count = (last - first + 1).to_int64();
  std::vector<SideOutcome> outcomes(static_cast<std::size_t>(count));
  const std::int64_t workers = std::max<std::int64_t>(1, std::min<std::int64_t>(jobs, count));
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) outcomes[static_cast<std::size_t>(i)] = scan_side(first + i, filter);
    return outcomes;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (std::int64_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::int64_t i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i)
          outcomes[static_cast<std::size_t>(i)] = scan_side(first + i, filter);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return outcomes;
}

}  // namespace detail

/// Scans sides lo..hi. With a checkpoint path, resumes after the last recorded
/// cursor and appends one record per completed batch.
inline ScanReport scan_range(const ScanOptions& opt) {
  if (opt.lo < 1) throw std::invalid_argument("scan_range: lo must be >= 1");
  if (opt.lo > opt.hi) throw std::invalid_argument("scan_range: lo > hi");
  if (opt.hi > kMaxSide) throw std::invalid_argument("scan_range: hi exceeds supported side " + Int(kMaxSide).to_string());
  if (opt.batch_size < 1) throw std::invalid_argument("scan_range: batch_size must be >= 1");

  ScanReport report;
  report.lo = opt.lo;
  report.hi = opt.hi;
  report.filter = opt.filter;
  report.completed_through = opt.lo - 1;

  std::ofstream checkpoint_out;
  if (opt.checkpoint) {
    std::optional<CheckpointRecord> resume;
    if (!opt.ignore_checkpoint) resume = read_checkpoint(*opt.checkpoint);
    if (resume) {
      if (resume->completed_through < opt.lo - 1 || resume->completed_through > opt.hi)
        throw CheckpointError("checkpoint " + opt.checkpoint->string() + " (completed_through " +
                              resume->completed_through.to_string() + ") does not belong to range " +
                              opt.lo.to_string() + ".." + opt.hi.to_string() +
                              "; delete it to restart the scan, or pass --ignore-checkpoint");
      report.completed_through = resume->completed_through;
      report.perfect_count = resume->perfect;
      report.brick_count = resume->bricks;
      report.resumed_from = resume->completed_through;
    }
    checkpoint_out.open(*opt.checkpoint, resume ? std::ios::app : std::ios::trunc);
    if (!checkpoint_out) throw CheckpointError("cannot write checkpoint " + opt.checkpoint->string());
  }

  while (report.completed_through < opt.hi) {
    const Int first = report.completed_through + 1;
    const Int last = std::min(opt.hi, first + opt.batch_size - 1);
    for (auto& outcome : detail::scan_batch(first, last, opt.filter, opt.jobs)) {
      if (!outcome.selected) continue;
      ++report.sides_processed;
      report.skipped_equal_legs += outcome.legs;
      for (auto& box : outcome.boxes) {
        if (box.classification == BoxClass::Perfect) {
          ++report.perfect_count;
          report.perfect_hits.push_back(std::move(box));
        } else {
          ++report.brick_count;
          report.brick_hits.push_back(std::move(box));
        }
      }
    }
    report.completed_through = last;
    if (checkpoint_out.is_open()) {
      checkpoint_out << checkpoint_line({last, report.perfect_count, report.brick_count}) << '\n';
      checkpoint_out.flush();
      if (!checkpoint_out) throw CheckpointError("failed writing checkpoint " + opt.checkpoint->string());
    }
  }
  return report;
}

}  // namespace brickwright
