#include "matrixfirst/bench.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace matrixfirst {

std::string_view to_string(SessionMode m) {
  switch (m) {
    case SessionMode::ReduceToRef: return "reduce_to_ref";
    case SessionMode::ReduceToRref: return "reduce_to_rref";
    case SessionMode::Krylov: return "krylov";
  }
  return "reduce_to_ref";
}

std::string_view to_string(SessionStatus s) {
  return s == SessionStatus::GoalReached ? "goal_reached" : "in_progress";
}

SessionMode session_mode_from_string(std::string_view s) {
  for (SessionMode m : {SessionMode::ReduceToRef, SessionMode::ReduceToRref, SessionMode::Krylov}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown session mode '" + std::string(s) + "'");
}

std::string describe(const SessionOp& op) {
  if (std::holds_alternative<AppendIterate>(op)) return "AppendIterate";
  return describe(std::get<RowOp<Rational>>(op));
}

Json to_json(const SessionOp& op) {
  if (std::holds_alternative<AppendIterate>(op)) return {{"kind", "AppendIterate"}};
  return to_json<Rational>(std::get<RowOp<Rational>>(op));
}

SessionOp session_op_from_json(const Json& j) {
  if (j.is_object() && j.value("kind", "") == "AppendIterate") return AppendIterate{};
  return row_op_from_json<Rational>(j);
}

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

Session::Session(std::string id, RationalMatrix initial, SessionMode mode)
    : id_(std::move(id)), mode_(mode), initial_(initial), current_(std::move(initial)) {}

Session Session::create(std::string id, RationalMatrix a, SessionMode mode, std::optional<RationalVector> b) {
  if (mode != SessionMode::Krylov) {
    if (b) throw Error(ErrorCode::InvalidArgument, "a start vector only applies to Krylov sessions");
    Session s(std::move(id), std::move(a), mode);
    s.refresh_status();
    return s;
  }
  if (!b) throw Error(ErrorCode::InvalidArgument, "Krylov sessions need a start vector b");
  KrylovIteration it(a, *b);
  Session s(std::move(id), RationalMatrix::from_columns({*b}), mode);
  s.operator_ = std::move(a);
  s.krylov_ = std::move(it);
  s.refresh_status();
  return s;
}

bool Session::goal(const RationalMatrix& m) const {
  switch (mode_) {
    case SessionMode::ReduceToRef: return is_ref(m);
    case SessionMode::ReduceToRref: return is_rref(m);
    case SessionMode::Krylov: return krylov_ && krylov_->done();
  }
  return false;
}

void Session::refresh_status() {
  status_ = goal(current_) ? SessionStatus::GoalReached : SessionStatus::InProgress;
}

std::optional<std::string> Session::rejection(const SessionOp& op) const {
  if (mode_ == SessionMode::Krylov) {
    if (!std::holds_alternative<AppendIterate>(op)) return "row operations are not part of a Krylov session";
    if (krylov_->done()) return "the iterates are already dependent";
    return std::nullopt;
  }
  if (std::holds_alternative<AppendIterate>(op)) return "AppendIterate only applies to Krylov sessions";
  return row_op_violation(std::get<RowOp<Rational>>(op), current_.rows());
}

ApplyOutcome Session::apply(const SessionOp& op) {
  if (auto why = rejection(op)) return {false, *why};
  const SessionStatus before = status_;
  std::string annotation;
  if (const auto* row = std::get_if<RowOp<Rational>>(&op)) {
    apply_row_op(current_, *row);
    det_factor_ *= det_effect(*row);
    annotation = describe(*row);
  } else {
    krylov_->append();
    current_ = krylov_->iterate_matrix();
    annotation = "append A^" + std::to_string(current_.cols() - 1) + " b";
    if (krylov_->done()) krylov_result_ = *krylov_->result();
  }
  history_.push_back({op, annotation, current_});
  refresh_status();
  std::string note = "applied " + describe(op);
  if (status_ == SessionStatus::GoalReached && before != status_) note += "; goal reached";
  return {true, note};
}

namespace {

std::optional<std::size_t> leading_column(const RationalMatrix& m, std::size_t row) {
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!m(row, c).is_zero()) return c;
  return std::nullopt;
}

}  // namespace

Hint Session::hint() const {
  if (status_ == SessionStatus::GoalReached) {
    throw Error(ErrorCode::GoalReached, "session goal already reached; no further step is needed");
  }
  if (mode_ == SessionMode::Krylov) {
    return {AppendIterate{},
            "append A^" + std::to_string(current_.cols()) + " b and test the iterates for a linear dependency",
            std::nullopt};
  }
  EchelonOptions opts;
  opts.strategy = PivotStrategy::FirstNonzero;
  const RefResult<Rational> r = mode_ == SessionMode::ReduceToRef ? ref(current_, opts) : rref(current_, opts);
  if (r.trace.empty()) throw Error(ErrorCode::GoalReached, "no reduction step remains");
  const auto& step = r.trace.steps.front();
  const std::size_t target = std::visit(
      [](const auto& o) -> std::size_t {
        using O = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<O, SwapRows>) {
          return std::min(o.i, o.j);
        } else if constexpr (std::is_same_v<O, ScaleRow<Rational>>) {
          return o.row;
        } else {
          return o.src;
        }
      },
      step.op);
  std::optional<Pivot> pivot;
  if (auto c = leading_column(step.after, target)) pivot = Pivot{target, *c};
  return {step.op, step.annotation, pivot};
}

WhatIf Session::whatif(const SessionOp& op) const {
  if (auto why = rejection(op)) throw Error(ErrorCode::IllegalRowOp, *why);
  Session copy = *this;
  copy.apply(op);
  WhatIf out{copy.current_, copy.status_ == SessionStatus::GoalReached, std::nullopt};
  if (copy.krylov_result_) out.annihilator = copy.krylov_result_->annihilator;
  return out;
}

StepTrace<Rational> Session::row_trace() const {
  StepTrace<Rational> t;
  for (const auto& s : history_) {
    if (const auto* row = std::get_if<RowOp<Rational>>(&s.op)) t.steps.push_back({*row, s.annotation, s.after});
  }
  return t;
}

Json Session::state_json() const {
  Json j{{"id", id_},
         {"mode", std::string(to_string(mode_))},
         {"status", std::string(to_string(status_))},
         {"initial", to_json(initial_)},
         {"current", to_json(current_)},
         {"steps", history_.size()},
         {"det_factor", to_json(det_factor_)}};
  if (operator_) j["operator"] = to_json(*operator_);
  if (krylov_result_) j["annihilator"] = to_json(krylov_result_->annihilator);
  if (mode_ != SessionMode::Krylov) {
    EchelonOptions opts;
    opts.record_trace = false;
    const auto r = ref(current_, opts);
    Json pivots = Json::array();
    for (const auto& p : r.pivots) pivots.push_back({p.row, p.col});
    j["pivots"] = std::move(pivots);
    j["free_cols"] = r.free_cols;
  }
  return j;
}

Json Session::export_transcript() const {
  Json steps = Json::array();
  for (const auto& s : history_) {
    steps.push_back({{"op", to_json(s.op)}, {"annotation", s.annotation}, {"after", rows_json(s.after)}});
  }
  Json j{{"version", "v1"},
         {"id", id_},
         {"mode", std::string(to_string(mode_))},
         {"initial", to_json(initial_)},
         {"steps", std::move(steps)},
         {"current", to_json(current_)},
         {"status", std::string(to_string(status_))},
         {"det_factor", to_json(det_factor_)}};
  if (operator_) j["operator"] = to_json(*operator_);
  return j;
}

namespace {

/// Replays a transcript; stops at the first divergence.
ReplayCheck replay(const Json& t, std::optional<Session>* out) {
  const SessionMode mode = session_mode_from_string(t.at("mode").get<std::string>());
  const RationalMatrix initial = matrix_from_json_as<Rational>(t.at("initial"));
  std::optional<RationalVector> b;
  RationalMatrix a = initial;
  if (mode == SessionMode::Krylov) {
    if (initial.cols() != 1) return {false, std::nullopt};
    b = initial.column(0);
    a = matrix_from_json_as<Rational>(t.at("operator"));
  }
  Session s = Session::create(t.value("id", std::string()), a, mode, b);
  const Json& steps = t.at("steps");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Json& step = steps.at(k);
    if (!s.apply(session_op_from_json(step.at("op"))).accepted) return {false, k};
    if (matrix_from_json_as<Rational>(step.at("after")) != s.current()) return {false, k};
  }
  const bool tail_ok = matrix_from_json_as<Rational>(t.at("current")) == s.current() &&
                       t.at("status").get<std::string>() == to_string(s.status()) &&
                       (!t.contains("det_factor") || rational_from_json(t.at("det_factor")) == s.det_factor());
  if (!tail_ok) return {false, steps.size()};
  if (out) *out = std::move(s);
  return {true, std::nullopt};
}

}  // namespace

ReplayCheck verify_transcript(const Json& transcript) {
  try {
    return replay(transcript, nullptr);
  } catch (const std::exception&) {
    return {false, std::nullopt};
  }
}

Session session_from_transcript(const Json& transcript) {
  std::optional<Session> s;
  ReplayCheck check;
  try {
    check = replay(transcript, &s);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed transcript: ") + e.what());
  }
  if (!check.ok) {
    throw Error(ErrorCode::InvalidArgument,
                "transcript does not replay" +
                    (check.first_mismatch ? " (first mismatch at step " + std::to_string(*check.first_mismatch) + ")"
                                          : std::string()));
  }
  return std::move(*s);
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

SessionRegistry::SessionRegistry(RegistryOptions opts) : opts_(std::move(opts)) {
  if (opts_.log_path && opts_.restore) restore_from_log();
}

std::string SessionRegistry::fresh_id() {
  static thread_local std::random_device rd;
  std::ostringstream os;
  os << std::hex;
  for (int i = 0; i < 4; ++i) {
    os.width(8);
    os.fill('0');
    os << static_cast<std::uint32_t>(rd());
  }
  return os.str();
}

bool SessionRegistry::expired(const Entry& e) const {
  const auto idle = std::chrono::steady_clock::duration(now_ticks() - e.last_used.load());
  return idle > opts_.idle_expiry;
}

std::shared_ptr<SessionRegistry::Entry> SessionRegistry::entry(const std::string& id) {
  std::shared_ptr<Entry> e;
  {
    std::shared_lock lock(map_mutex_);
    const auto it = sessions_.find(id);
    if (it != sessions_.end()) e = it->second;
  }
  if (!e || expired(*e)) throw Error(ErrorCode::UnknownSession, "unknown or expired session '" + id + "'");
  e->last_used = now_ticks();
  return e;
}

std::string SessionRegistry::create(RationalMatrix a, SessionMode mode, std::optional<RationalVector> b) {
  Json line{{"event", "create"}, {"mode", std::string(to_string(mode))}, {"matrix", to_json(a)}};
  if (b) line["b"] = to_json(*b);
  std::string id;
  {
    std::unique_lock lock(map_mutex_);
    do {
      id = fresh_id();
    } while (sessions_.contains(id));
    auto e = std::make_shared<Entry>(Session::create(id, std::move(a), mode, std::move(b)));
    e->last_used = now_ticks();
    sessions_.emplace(id, std::move(e));
  }
  line["id"] = id;
  log(line);
  return id;
}

ApplyOutcome SessionRegistry::apply(const std::string& id, const SessionOp& op) {
  auto e = entry(id);
  std::unique_lock lock(e->mutex);
  ApplyOutcome out = e->session.apply(op);
  if (out.accepted) log({{"event", "op"}, {"id", id}, {"op", to_json(op)}});
  return out;
}

Hint SessionRegistry::hint(const std::string& id) {
  return inspect(id, [](const Session& s) { return s.hint(); });
}

WhatIf SessionRegistry::whatif(const std::string& id, const SessionOp& op) {
  return inspect(id, [&](const Session& s) { return s.whatif(op); });
}

Json SessionRegistry::state(const std::string& id) {
  return inspect(id, [](const Session& s) { return s.state_json(); });
}

Json SessionRegistry::export_transcript(const std::string& id) {
  return inspect(id, [](const Session& s) { return s.export_transcript(); });
}

std::size_t SessionRegistry::expire_idle() {
  std::unique_lock lock(map_mutex_);
  return std::erase_if(sessions_, [&](const auto& kv) { return expired(*kv.second); });
}

std::size_t SessionRegistry::size() const {
  std::shared_lock lock(map_mutex_);
  return sessions_.size();
}

void SessionRegistry::log(const Json& line) {
  if (!opts_.log_path) return;
  std::lock_guard lock(log_mutex_);
  std::ofstream out(*opts_.log_path, std::ios::app);
  out << line.dump() << '\n';
}

void SessionRegistry::restore_from_log() {
  std::ifstream in(*opts_.log_path);
  if (!in) return;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    try {
      const Json line = Json::parse(text);
      const std::string id = line.at("id").get<std::string>();
      if (line.at("event") == "create") {
        std::optional<RationalVector> b;
        if (line.contains("b")) b = vector_from_json<Rational>(line.at("b"));
        auto e = std::make_shared<Entry>(Session::create(
            id, matrix_from_json_as<Rational>(line.at("matrix")),
            session_mode_from_string(line.at("mode").get<std::string>()), std::move(b)));
        e->last_used = now_ticks();
        sessions_[id] = std::move(e);
      } else if (line.at("event") == "op") {
        const auto it = sessions_.find(id);
        if (it != sessions_.end()) it->second->session.apply(session_op_from_json(line.at("op")));
      }
    } catch (const std::exception&) {
      // A torn final line from a crash is skipped; earlier lines still count.
    }
  }
}

}  // namespace matrixfirst
