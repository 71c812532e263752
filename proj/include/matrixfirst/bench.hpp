#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "matrixfirst/echelon.hpp"
#include "matrixfirst/eigen.hpp"
#include "matrixfirst/json_io.hpp"

namespace matrixfirst {

enum class SessionMode { ReduceToRef, ReduceToRref, Krylov };
enum class SessionStatus { InProgress, GoalReached };

std::string_view to_string(SessionMode m);
std::string_view to_string(SessionStatus s);
SessionMode session_mode_from_string(std::string_view s);

/// Krylov mode's only move: append A times the last iterate.
struct AppendIterate {
  friend bool operator==(const AppendIterate&, const AppendIterate&) = default;
};

using SessionOp = std::variant<RowOp<Rational>, AppendIterate>;

std::string describe(const SessionOp& op);
Json to_json(const SessionOp& op);
SessionOp session_op_from_json(const Json& j);

struct SessionStep {
  SessionOp op;
  std::string annotation;
  RationalMatrix after;
};

struct Hint {
  SessionOp suggested_op;
  std::string rationale;
  std::optional<Pivot> resulting_pivot;
};

struct WhatIf {
  RationalMatrix preview;
  bool would_reach_goal = false;
  std::optional<Polynomial> annihilator;  // Krylov mode, when the dependency appears
};

struct ApplyOutcome {
  bool accepted = false;
  std::string note;
};

/// A student's row reduction or Krylov iteration, validated step by step.
/// Row modes: current starts at A. Krylov mode: current is the matrix of
/// iterates [b, Ab, ...] and A is kept as the operator.
class Session {
 public:
  static Session create(std::string id, RationalMatrix a, SessionMode mode,
                        std::optional<RationalVector> b = std::nullopt);

  /// Illegal ops are rejected with accepted = false and leave the session
  /// untouched.
  ApplyOutcome apply(const SessionOp& op);

  /// The next op of the engine's own first-nonzero reduction, or the next
  /// iterate. Throws GoalReached.
  Hint hint() const;

  /// Pure preview. Throws IllegalRowOp for an op the session would reject.
  WhatIf whatif(const SessionOp& op) const;

  const std::string& id() const noexcept { return id_; }
  SessionMode mode() const noexcept { return mode_; }
  SessionStatus status() const noexcept { return status_; }
  const RationalMatrix& initial() const noexcept { return initial_; }
  const RationalMatrix& current() const noexcept { return current_; }
  const std::vector<SessionStep>& history() const noexcept { return history_; }
  const std::optional<RationalMatrix>& krylov_operator() const noexcept { return operator_; }
  const std::optional<KrylovResult>& krylov_result() const noexcept { return krylov_result_; }

  /// Product of the det effects of every applied row op, so that
  /// det(current) = det_factor * det(initial) for square sessions.
  const Rational& det_factor() const noexcept { return det_factor_; }

  /// Row-op history as an echelon trace (row modes).
  StepTrace<Rational> row_trace() const;

  /// {"id", "mode", "status", "current", "steps", "det_factor", ...}
  Json state_json() const;

  /// Full replayable transcript.
  Json export_transcript() const;

 private:
  Session(std::string id, RationalMatrix initial, SessionMode mode);
  bool goal(const RationalMatrix& m) const;
  std::optional<std::string> rejection(const SessionOp& op) const;
  void refresh_status();

  std::string id_;
  SessionMode mode_;
  RationalMatrix initial_;
  RationalMatrix current_;
  std::vector<SessionStep> history_;
  SessionStatus status_ = SessionStatus::InProgress;
  Rational det_factor_{1};
  std::optional<RationalMatrix> operator_;
  std::optional<KrylovIteration> krylov_;
  std::optional<KrylovResult> krylov_result_;
};

/// Replays a transcript from its initial matrix and compares every snapshot,
/// the final state and the goal status exactly.
ReplayCheck verify_transcript(const Json& transcript);

/// Rebuilds a live session from a transcript (after verifying it).
Session session_from_transcript(const Json& transcript);

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using SteadyClock = std::function<std::chrono::steady_clock::time_point()>;

struct RegistryOptions {
  std::chrono::seconds idle_expiry = std::chrono::hours(24);
  /// Append-only JSON-lines log, one line per create and per accepted op.
  std::optional<std::filesystem::path> log_path;
  /// Replay an existing log at construction.
  bool restore = true;
  SteadyClock clock = [] { return std::chrono::steady_clock::now(); };
};

/// Concurrent readers, serialized writers per session. Distinct sessions
/// never contend beyond the brief map lookup.
class SessionRegistry {
 public:
  explicit SessionRegistry(RegistryOptions opts = {});

  std::string create(RationalMatrix a, SessionMode mode, std::optional<RationalVector> b = std::nullopt);
  ApplyOutcome apply(const std::string& id, const SessionOp& op);
  Hint hint(const std::string& id);
  WhatIf whatif(const std::string& id, const SessionOp& op);
  Json state(const std::string& id);
  Json export_transcript(const std::string& id);

  /// Runs f(const Session&) under the session's shared lock.
  template <class F>
  auto inspect(const std::string& id, F&& f) {
    auto e = entry(id);
    std::shared_lock lock(e->mutex);
    return f(static_cast<const Session&>(e->session));
  }

  /// Drops sessions idle longer than the expiry. Returns the number removed.
  std::size_t expire_idle();
  std::size_t size() const;

  static std::string fresh_id();

 private:
  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::shared_mutex mutex;
    Session session;
    std::atomic<std::int64_t> last_used{0};  // steady clock ticks
  };

  std::shared_ptr<Entry> entry(const std::string& id);
  std::int64_t now_ticks() const { return opts_.clock().time_since_epoch().count(); }
  bool expired(const Entry& e) const;
  void log(const Json& line);
  void restore_from_log();

  RegistryOptions opts_;
  mutable std::shared_mutex map_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mutex log_mutex_;
};

}  // namespace matrixfirst
