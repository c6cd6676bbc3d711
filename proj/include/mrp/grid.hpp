#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mrp {

enum class ErrorCode {
  InfeasibleDims,
  NotFullyOccupied,
  WrongDims,
  OverlappingSwaps,
  NonAdjacentPair,
  ZeroDistance,
  NonAdjacentTiles,
  NotCirculation,
  NonSimpleInput,
  TooManySubflows,
  CardinalityMismatch,
  TileTooSmall,
  CaseBoundsViolated,
  Incompatible,
  SizeMismatch,
  DimsMismatch,
  SeparationViolated,
  BudgetExceeded,
  InfeasibleParams,
  NotMonotone,
  BadArity,
  InvalidInstance,
  Io,
  Parse,
  Internal,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InfeasibleDims: return "InfeasibleDims";
    case ErrorCode::NotFullyOccupied: return "NotFullyOccupied";
    case ErrorCode::WrongDims: return "WrongDims";
    case ErrorCode::OverlappingSwaps: return "OverlappingSwaps";
    case ErrorCode::NonAdjacentPair: return "NonAdjacentPair";
    case ErrorCode::ZeroDistance: return "ZeroDistance";
    case ErrorCode::NonAdjacentTiles: return "NonAdjacentTiles";
    case ErrorCode::NotCirculation: return "NotCirculation";
    case ErrorCode::NonSimpleInput: return "NonSimpleInput";
    case ErrorCode::TooManySubflows: return "TooManySubflows";
    case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorCode::TileTooSmall: return "TileTooSmall";
    case ErrorCode::CaseBoundsViolated: return "CaseBoundsViolated";
    case ErrorCode::Incompatible: return "Incompatible";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::SeparationViolated: return "SeparationViolated";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::BadArity: return "BadArity";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& msg)
      : std::runtime_error(std::string(error_name(c)) + ": " + msg), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define MRP_ASSERT(cond, msg)                                              \
  do {                                                                     \
    if (!(cond)) throw ::mrp::Error(::mrp::ErrorCode::Internal, (msg));    \
  } while (0)

struct Pos {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
  friend auto operator<=>(const Pos&, const Pos&) = default;
};

struct GridDims {
  int n1 = 1;
  int n2 = 1;
  friend bool operator==(const GridDims&, const GridDims&) = default;
  long cells() const { return long(n1) * n2; }
  bool contains(Pos p) const { return p.x >= 0 && p.y >= 0 && p.x < n1 && p.y < n2; }
  int index(Pos p) const { return p.y * n1 + p.x; }
  Pos at(int idx) const { return {idx % n1, idx / n1}; }
};

// Shapes on which some start/target pairs are unreachable.
inline bool infeasible_shape(GridDims g) {
  return g.n1 == 1 || g.n2 == 1 || (g.n1 == 2 && g.n2 == 2);
}

enum class Move : std::uint8_t { Wait = 0, North, East, South, West };

inline Pos apply_move(Pos p, Move m) {
  switch (m) {
    case Move::North: return {p.x, p.y + 1};
    case Move::East: return {p.x + 1, p.y};
    case Move::South: return {p.x, p.y - 1};
    case Move::West: return {p.x - 1, p.y};
    default: return p;
  }
}

inline Move inverse(Move m) {
  switch (m) {
    case Move::North: return Move::South;
    case Move::East: return Move::West;
    case Move::South: return Move::North;
    case Move::West: return Move::East;
    default: return Move::Wait;
  }
}

// Move taking a to the 4-neighbour b.
inline Move move_between(Pos a, Pos b) {
  if (b.x == a.x + 1 && b.y == a.y) return Move::East;
  if (b.x == a.x - 1 && b.y == a.y) return Move::West;
  if (b.y == a.y + 1 && b.x == a.x) return Move::North;
  if (b.y == a.y - 1 && b.x == a.x) return Move::South;
  if (a == b) return Move::Wait;
  throw Error(ErrorCode::Internal, "move_between: cells not adjacent");
}

inline char move_char(Move m) {
  switch (m) {
    case Move::North: return 'N';
    case Move::East: return 'E';
    case Move::South: return 'S';
    case Move::West: return 'W';
    default: return '.';
  }
}

inline std::optional<Move> move_from_char(char c) {
  switch (c) {
    case 'N': return Move::North;
    case 'E': return Move::East;
    case 'S': return Move::South;
    case 'W': return Move::West;
    case '.': return Move::Wait;
    default: return std::nullopt;
  }
}

inline int manhattan(Pos a, Pos b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// Robots are addressed by dense index 0..N-1; `ids` maps index to external label.
struct Instance {
  GridDims dims;
  std::vector<int> ids;
  std::vector<Pos> start;
  std::vector<Pos> target;
  std::vector<int> color;  // empty or one entry per robot

  std::size_t size() const { return start.size(); }
  bool fully_occupied() const { return long(size()) == dims.cells(); }

  void add(int id, Pos s, Pos t, int c = -1) {
    ids.push_back(id);
    start.push_back(s);
    target.push_back(t);
    if (c >= 0) {
      color.resize(ids.size() - 1, 0);
      color.push_back(c);
    } else if (!color.empty()) {
      color.push_back(0);
    }
  }
};

// Dense per-robot moves; an empty vector means every robot waits.
struct Step {
  std::vector<Move> moves;
  Move get(std::size_t r) const { return r < moves.size() ? moves[r] : Move::Wait; }
  bool idle() const {
    return std::all_of(moves.begin(), moves.end(), [](Move m) { return m == Move::Wait; });
  }
};

struct Schedule {
  std::vector<Step> steps;
  std::size_t makespan() const { return steps.size(); }
};

// Parallel composition of schedules over disjoint robot sets, padded with waits.
inline void merge_into(Schedule& dst, const Schedule& src) {
  if (dst.steps.size() < src.steps.size()) dst.steps.resize(src.steps.size());
  for (std::size_t k = 0; k < src.steps.size(); ++k) {
    const auto& sm = src.steps[k].moves;
    auto& dm = dst.steps[k].moves;
    if (dm.size() < sm.size()) dm.resize(sm.size(), Move::Wait);
    for (std::size_t r = 0; r < sm.size(); ++r)
      if (sm[r] != Move::Wait) dm[r] = sm[r];
  }
}

inline void append(Schedule& dst, const Schedule& src) {
  dst.steps.insert(dst.steps.end(), src.steps.begin(), src.steps.end());
}

inline Schedule reversed(const Schedule& s) {
  Schedule out;
  out.steps.reserve(s.steps.size());
  for (auto it = s.steps.rbegin(); it != s.steps.rend(); ++it) {
    Step st;
    st.moves.reserve(it->moves.size());
    for (Move m : it->moves) st.moves.push_back(inverse(m));
    out.steps.push_back(std::move(st));
  }
  return out;
}

struct Violation {
  enum Kind { None, OutOfBounds, Collision, Swap, BadConfiguration } kind = None;
  int robot_a = -1;
  int robot_b = -1;
  Pos cell{};
  std::string describe() const {
    switch (kind) {
      case OutOfBounds: return "OutOfBounds(robot " + std::to_string(robot_a) + ")";
      case Collision:
        return "Collision(cell " + std::to_string(cell.x) + "," + std::to_string(cell.y) + ")";
      case Swap:
        return "Swap(robots " + std::to_string(robot_a) + "," + std::to_string(robot_b) + ")";
      case BadConfiguration: return "BadConfiguration";
      default: return "None";
    }
  }
};

// Incremental configuration with an occupancy map; steps are checked before applying.
class GridState {
 public:
  GridState() = default;
  GridState(GridDims dims, std::vector<Pos> pos) : dims_(dims), pos_(std::move(pos)) {
    occ_.assign(dims_.cells(), -1);
    claim_.assign(dims_.cells(), -1);
    stamp_.assign(dims_.cells(), 0);
    for (std::size_t r = 0; r < pos_.size(); ++r) {
      if (!dims_.contains(pos_[r]) || occ_[dims_.index(pos_[r])] != -1) {
        bad_ = true;
        continue;
      }
      occ_[dims_.index(pos_[r])] = int(r);
    }
  }

  bool valid() const { return !bad_; }
  const GridDims& dims() const { return dims_; }
  const std::vector<Pos>& positions() const { return pos_; }
  Pos pos(int r) const { return pos_[r]; }
  int robot_at(Pos p) const { return occ_[dims_.index(p)]; }
  std::size_t size() const { return pos_.size(); }

  // Returns the first violation of `st`, leaving the state untouched.
  Violation check(const Step& st) {
    Violation v;
    ++epoch_;
    const std::size_t n = std::min(st.moves.size(), pos_.size());
    for (std::size_t r = 0; r < n; ++r) {
      Move m = st.moves[r];
      if (m == Move::Wait) continue;
      Pos np = apply_move(pos_[r], m);
      if (!dims_.contains(np)) return {Violation::OutOfBounds, int(r), -1, np};
      int c = dims_.index(np);
      if (stamp_[c] == epoch_) return {Violation::Collision, int(r), claim_[c], np};
      stamp_[c] = epoch_;
      claim_[c] = int(r);
    }
    for (std::size_t r = 0; r < n; ++r) {
      Move m = st.moves[r];
      if (m == Move::Wait) continue;
      Pos np = apply_move(pos_[r], m);
      int q = occ_[dims_.index(np)];
      if (q < 0) continue;
      Move mq = st.get(q);
      if (mq == Move::Wait) return {Violation::Collision, int(r), q, np};
      if (apply_move(np, mq) == pos_[r]) return {Violation::Swap, int(std::min<std::size_t>(r, q)), int(std::max<std::size_t>(r, q)), np};
    }
    return v;
  }

  void apply_unchecked(const Step& st) {
    const std::size_t n = std::min(st.moves.size(), pos_.size());
    for (std::size_t r = 0; r < n; ++r)
      if (st.moves[r] != Move::Wait) occ_[dims_.index(pos_[r])] = -1;
    for (std::size_t r = 0; r < n; ++r)
      if (st.moves[r] != Move::Wait) {
        pos_[r] = apply_move(pos_[r], st.moves[r]);
        occ_[dims_.index(pos_[r])] = int(r);
      }
  }

  Violation apply(const Step& st) {
    Violation v = check(st);
    if (v.kind == Violation::None) apply_unchecked(st);
    return v;
  }

 private:
  GridDims dims_;
  std::vector<Pos> pos_;
  std::vector<int> occ_;
  std::vector<int> claim_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  bool bad_ = false;
};

inline bool valid_configuration(GridDims dims, const std::vector<Pos>& pos) {
  return GridState(dims, pos).valid();
}

struct StepResult {
  std::vector<Pos> config;
  Violation violation;
  bool ok() const { return violation.kind == Violation::None; }
};

inline StepResult validate_step(GridDims dims, const std::vector<Pos>& c1, const Step& step) {
  GridState s(dims, c1);
  if (!s.valid()) return {c1, {Violation::BadConfiguration}};
  Violation v = s.apply(step);
  return {s.positions(), v};
}

struct ScheduleReport {
  enum Kind { Ok, StepViolation, TargetMismatch, BadInstance } kind = Ok;
  std::size_t step_index = 0;
  Violation violation;
  int robot = -1;
  Pos got{}, want{};
  std::vector<Pos> final_config;
  bool ok() const { return kind == Ok; }
  std::string describe() const {
    switch (kind) {
      case Ok: return "ok";
      case StepViolation:
        return "StepViolation(step " + std::to_string(step_index) + ", " + violation.describe() + ")";
      case TargetMismatch:
        return "TargetMismatch(robot " + std::to_string(robot) + ", got " + std::to_string(got.x) + "," +
               std::to_string(got.y) + ", want " + std::to_string(want.x) + "," + std::to_string(want.y) + ")";
      default: return "BadInstance";
    }
  }
};

inline ScheduleReport apply_schedule(const Instance& inst, const Schedule& s) {
  ScheduleReport rep;
  GridState st(inst.dims, inst.start);
  if (!st.valid() || !valid_configuration(inst.dims, inst.target) || inst.start.size() != inst.target.size()) {
    rep.kind = ScheduleReport::BadInstance;
    return rep;
  }
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    Violation v = st.apply(s.steps[k]);
    if (v.kind != Violation::None) {
      rep.kind = ScheduleReport::StepViolation;
      rep.step_index = k;
      rep.violation = v;
      rep.final_config = st.positions();
      return rep;
    }
  }
  rep.final_config = st.positions();
  for (std::size_t r = 0; r < inst.size(); ++r)
    if (rep.final_config[r] != inst.target[r]) {
      rep.kind = ScheduleReport::TargetMismatch;
      rep.robot = inst.ids.empty() ? int(r) : inst.ids[r];
      rep.got = rep.final_config[r];
      rep.want = inst.target[r];
      break;
    }
  return rep;
}

inline int max_distance(const Instance& inst) {
  int d = 0;
  for (std::size_t r = 0; r < inst.size(); ++r) d = std::max(d, manhattan(inst.start[r], inst.target[r]));
  return d;
}

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return den == 0 ? 0.0 : double(num) / double(den); }
};

inline Rational stretch(const Instance& inst, const Schedule& s) {
  int d = max_distance(inst);
  long long m = (long long)s.makespan();
  if (d == 0) {
    if (m == 0) return {0, 1};
    throw Error(ErrorCode::ZeroDistance, "d = 0 with makespan " + std::to_string(m));
  }
  return {m, d};
}

inline void check_instance(const Instance& inst) {
  if (inst.dims.n1 < 1 || inst.dims.n2 < 1) throw Error(ErrorCode::InvalidInstance, "grid dims must be positive");
  if (inst.start.size() != inst.target.size() || inst.ids.size() != inst.start.size())
    throw Error(ErrorCode::InvalidInstance, "start/target/id sizes differ");
  if (!valid_configuration(inst.dims, inst.start)) throw Error(ErrorCode::InvalidInstance, "start configuration invalid");
  if (!valid_configuration(inst.dims, inst.target)) throw Error(ErrorCode::InvalidInstance, "target configuration invalid");
}

}  // namespace mrp
