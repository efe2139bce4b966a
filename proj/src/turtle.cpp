#include "gorga/turtle.hpp"

#include "gorga/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <fmt/format.h>

namespace gorga {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

}  // namespace

double normalize_degrees(double degrees) {
    double r = std::fmod(degrees, 360.0);
    if (r < 0) r += 360.0;
    if (r >= 360.0) r = 0.0;  // fmod of tiny negatives can round up to 360
    return r;
}

TurtleState step_forward(const TurtleState& state) {
    TurtleState next = state;
    const double rad = state.heading * kDegToRad;
    next.x = state.x + state.step * std::cos(rad);
    next.y = state.y + state.step * std::sin(rad);
    return next;
}

TurtleState turn(const TurtleState& state, TurnDirection direction, double degrees) {
    TurtleState next = state;
    next.heading =
        normalize_degrees(state.heading + (direction == TurnDirection::Left ? degrees : -degrees));
    return next;
}

TurtleState spiral_turn(const TurtleState& state, double decay, double min_step) {
    const double decayed = state.step * decay;
    if (decayed < min_step) return state;
    TurtleState next = turn(state, TurnDirection::Right, state.turn_angle);
    next.step = decayed;
    ++next.spiral_count;
    return next;
}

void TurtleStack::push(TurtleState& state) {
    saved_.push_back(state);
    ++state.branch_depth;
}

void TurtleStack::unwind(std::size_t size) {
    if (saved_.size() > size) saved_.resize(size);
}

void TurtleStack::pop(TurtleState& state) {
    if (saved_.empty()) throw Error(ErrorCode::StackUnderflow, "']' without matching '['");
    state = saved_.back();
    saved_.pop_back();
}

// ---------------------------------------------------------------------------

Canvas::Canvas(ShapeMask mask, double clearance, double stroke_width, int palette_size)
    : mask_(mask),
      field_(mask.bounds(), clearance),
      stroke_width_(stroke_width),
      palette_size_(std::max(palette_size, 1)) {}

std::vector<std::int32_t> Canvas::contacts(std::int32_t anchor) const {
    if (anchor == kDetached) return {};
    if (anchor == kAtStart) return roots_;
    std::vector<std::int32_t> out{anchor};
    const auto& kids = children_[static_cast<std::size_t>(anchor)];
    out.insert(out.end(), kids.begin(), kids.end());
    return out;
}

std::int32_t Canvas::commit(Vec2 a, Vec2 b, std::int32_t parent, int branch_depth, int round) {
    const auto id = static_cast<std::int32_t>(segments_.size());
    segments_.push_back({a, b, stroke_width_, branch_depth % palette_size_, branch_depth,
                         parent, round});
    children_.emplace_back();
    if (parent >= 0) {
        children_[static_cast<std::size_t>(parent)].push_back(id);
    } else if (parent == kAtStart) {
        roots_.push_back(id);
    }
    field_.commit(id, a, b);
    return id;
}

bool move_admissible(const TurtleState& state, const Canvas& canvas) {
    const TurtleState next = step_forward(state);
    const Vec2 a = state.position();
    const Vec2 b = next.position();
    const Vec2 mid = (a + b) * 0.5;
    const auto& mask = canvas.mask();
    if (!mask.contains(a) || !mask.contains(mid) || !mask.contains(b)) return false;

    const auto contacts = canvas.contacts(state.anchor);
    const auto& field = canvas.field();
    if (field.blocked(a, b, contacts)) return false;
    for (const auto id : contacts) {
        const auto& s = canvas.segments()[static_cast<std::size_t>(id)];
        if (point_segment_distance(b, s.a, s.b) < field.clearance()) return false;
    }
    return field.claims_unwritten_cell(a, b);
}

std::optional<TurtleState> guarded_forward(const TurtleState& state, Canvas& canvas) {
    if (!move_admissible(state, canvas)) return std::nullopt;
    TurtleState next = step_forward(state);
    next.anchor = canvas.commit(state.position(), next.position(), state.anchor,
                                state.branch_depth, canvas.round());
    return next;
}

double least_occupied_heading(const TurtleState& state, const OccupancyField& field,
                              double max_deviation, int candidate_count,
                              std::span<const double> jitter) {
    if (candidate_count <= 1) return state.heading;
    double best_dev = 0.0;
    auto best_sum = std::numeric_limits<std::uint64_t>::max();
    bool have = false;
    for (int i = 0; i < candidate_count; ++i) {
        double dev = -max_deviation + 2.0 * max_deviation * i / (candidate_count - 1);
        if (static_cast<std::size_t>(i) < jitter.size()) dev += jitter[static_cast<std::size_t>(i)];
        const double rad = (state.heading + dev) * kDegToRad;
        const Vec2 ahead{state.x + state.step * std::cos(rad), state.y + state.step * std::sin(rad)};
        const auto sum = field.disc_sum(ahead, 3.0 * state.step);
        bool better = !have || sum < best_sum;
        if (have && sum == best_sum) {
            const double a = std::abs(dev);
            const double b = std::abs(best_dev);
            better = a < b || (a == b && dev > best_dev);
        }
        if (better) {
            best_dev = dev;
            best_sum = sum;
            have = true;
        }
    }
    return normalize_degrees(state.heading + best_dev);
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::IterationBudget: return "iteration_budget";
        case Termination::Saturated: return "saturated";
        case Termination::Stalled: return "stalled";
    }
    return "iteration_budget";
}

bool lineage_adjacent(const std::vector<Segment>& segments, std::size_t a, std::size_t b) {
    if (a == b) return true;
    const auto& sa = segments[a];
    const auto& sb = segments[b];
    if (sa.parent == static_cast<std::int32_t>(b) || sb.parent == static_cast<std::int32_t>(a)) {
        return true;
    }
    return sa.parent == sb.parent && sa.parent != kDetached;
}

// ---------------------------------------------------------------------------

namespace {

class Interpreter {
public:
    Interpreter(const Grammar& grammar, const RunConfig& config)
        : grammar_(grammar),
          config_(config),
          canvas_(config.shape, config.clearance, config.stroke_width,
                  static_cast<int>(config.palette.size())),
          rng_(config.seed) {
        const int n = static_cast<int>(std::ceil(360.0 / config.angle_deg - 1e-9));
        probe_count_ = std::clamp(n, 4, 72);
    }

    Drawing run() {
        const Vec2 start = config_.start.value_or(config_.shape.centroid());
        if (!config_.shape.contains(start)) {
            throw Error(ErrorCode::InvalidStart,
                        fmt::format("start ({}, {}) lies outside the mask", start.x, start.y));
        }
        TurtleState initial;
        initial.x = start.x;
        initial.y = start.y;
        initial.heading = normalize_degrees(config_.start_heading);
        initial.step = config_.step;
        initial.turn_angle = config_.angle_deg;

        Drawing drawing;
        drawing.termination = Termination::IterationBudget;
        for (int round = 0; round <= config_.iterations; ++round) {
            canvas_.set_round(round);
            const auto before = canvas_.segments().size();
            Status status = Status::Done;
            if (round == 0) {
                status = interpret_from(initial, grammar_.axiom(), false, kNone);
            } else {
                const auto parents = std::exchange(sites_, {});
                for (const auto& site : parents) {
                    status = interpret_from(site.state, *grammar_.successor(site.letter),
                                            site.guarded, site.segment);
                    if (status == Status::Halted) break;
                }
            }
            drawing.rounds.push_back(
                {round, canvas_.segments().size(), canvas_.field().total()});
            if (status == Status::Halted) {
                drawing.termination = Termination::Stalled;
                break;
            }
            if (canvas_.segments().size() == before) {
                drawing.termination = Termination::Saturated;
                break;
            }
        }

        drawing.mask = config_.shape;
        drawing.seed = config_.seed;
        drawing.config = config_;
        drawing.segments = std::move(canvas_).release();
        return drawing;
    }

private:
    enum class Status { Done, Trapped, Halted };
    static constexpr std::int32_t kNone = -1;

    // A rewritable symbol met during a round, with the pose it was met in.
    // Next round its successor is drawn from that pose.
    struct Site {
        TurtleState state;
        char letter = 'F';
        bool guarded = false;
        std::int32_t segment = kNone;  // the stroke an F delivered
    };

    Status interpret_from(const TurtleState& state, const Word& word, bool guarded,
                          std::int32_t retrace) {
        state_ = state;
        stack_ = TurtleStack{};
        guard_level_ = guarded ? 1 : 0;
        retrace_ = retrace;
        const Status status = walk(word);
        if (status == Status::Done && !stack_.empty()) {
            throw Error(ErrorCode::StackUnderflow, "unbalanced '[' in derived word");
        }
        return status == Status::Halted ? Status::Halted : Status::Done;
    }

    // A turtle boxed in inside a guard abandons the rest of that guard and
    // resumes from the pose it entered with.
    Status walk(const Word& word) {
        for (const auto& s : word) {
            Status status = Status::Done;
            if (s.kind == SymbolKind::Guarded) {
                const TurtleState entry = state_;
                const auto saved = stack_.size();
                ++guard_level_;
                status = walk(s.payload);
                --guard_level_;
                if (status == Status::Trapped) {
                    state_ = entry;
                    stack_.unwind(saved);
                    status = boxed_in() ? Status::Trapped : Status::Done;
                }
            } else {
                status = execute(s);
            }
            if (status != Status::Done) return status;
        }
        return Status::Done;
    }

    Status execute(const Symbol& s) {
        switch (s.kind) {
            case SymbolKind::Forward:
                return forward();
            case SymbolKind::Letter:
                if (grammar_.successor(s.letter)) {
                    sites_.push_back({state_, s.letter, guard_level_ > 0, kNone});
                }
                break;
            case SymbolKind::Guarded:
                break;
            case SymbolKind::TurnLeft:
                state_ = turn(state_, TurnDirection::Left, state_.turn_angle);
                break;
            case SymbolKind::TurnRight:
                state_ = turn(state_, TurnDirection::Right, state_.turn_angle);
                break;
            case SymbolKind::Push:
                stack_.push(state_);
                break;
            case SymbolKind::Pop:
                stack_.pop(state_);
                break;
            case SymbolKind::RandomTurn:
                random_turn();
                break;
            case SymbolKind::SpiralTurn:
                state_ = spiral_turn(state_, config_.spiral_decay, config_.min_step);
                break;
        }
        return Status::Done;
    }

    Status forward() {
        const TurtleState before = state_;
        Status status = Status::Done;
        if (retraces()) {
            state_ = step_forward(state_);
            state_.anchor = retrace_;
            retrace_ = kNone;
        } else if (guard_level_ > 0) {
            status = guarded_move();
        } else {
            plain_move();
        }
        if (state_.anchor >= 0 && state_.anchor != before.anchor && grammar_.successor('F')) {
            sites_.push_back({before, 'F', guard_level_ > 0, state_.anchor});
        }
        return status;
    }

    // The first move of a successor redraws the stroke it replaces.
    bool retraces() const {
        if (retrace_ == kNone) return false;
        const auto& seg = canvas_.segments()[static_cast<std::size_t>(retrace_)];
        const Vec2 end = step_forward(state_).position();
        return length(state_.position() - seg.a) < 1e-9 && length(end - seg.b) < 1e-9;
    }

    Status guarded_move() {
        if (auto next = guarded_forward(state_, canvas_)) {
            state_ = *next;
            stalls_ = 0;
            return Status::Done;
        }
        if (++stalls_ >= config_.stall_budget) return Status::Halted;
        return boxed_in() ? Status::Trapped : Status::Done;
    }

    // No heading the turns can reach from here admits a step of the current
    // length. Nothing commits while the turtle stays put, so the verdict holds
    // until it moves.
    bool boxed_in() const {
        TurtleState probe = state_;
        for (int i = 0; i < probe_count_; ++i) {
            probe.heading = normalize_degrees(state_.heading + 360.0 * i / probe_count_);
            if (move_admissible(probe, canvas_)) return false;
        }
        return true;
    }

    // Unguarded moves ignore other strokes but still never leave the mask.
    void plain_move() {
        TurtleState next = step_forward(state_);
        const Vec2 a = state_.position();
        const Vec2 b = next.position();
        const auto& mask = canvas_.mask();
        if (mask.contains(a) && mask.contains((a + b) * 0.5) && mask.contains(b)) {
            next.anchor = canvas_.commit(a, b, state_.anchor, state_.branch_depth, canvas_.round());
        } else {
            next.anchor = kDetached;
        }
        state_ = next;
    }

    void random_turn() {
        const int n = config_.candidate_count;
        jitter_.assign(static_cast<std::size_t>(std::max(n, 0)), 0.0);
        const double spread = state_.turn_angle / 10.0;
        for (int i = 0; i < n; ++i) {
            const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
            if (n % 2 == 1 && i == n / 2) continue;  // the straight-ahead candidate stays put
            jitter_[static_cast<std::size_t>(i)] = (2.0 * u - 1.0) * spread;
        }
        state_.heading =
            least_occupied_heading(state_, canvas_.field(), state_.turn_angle, n, jitter_);
    }

    const Grammar& grammar_;
    const RunConfig& config_;
    Canvas canvas_;
    std::mt19937_64 rng_;
    TurtleState state_;
    TurtleStack stack_;
    std::vector<double> jitter_;
    std::vector<Site> sites_;
    std::int32_t retrace_ = kNone;
    int stalls_ = 0;
    int guard_level_ = 0;
    int probe_count_ = 12;
};

}  // namespace

Drawing interpret(const Grammar& grammar, const RunConfig& config) {
    validate(config);
    return Interpreter(grammar, config).run();
}

Drawing interpret(const RunConfig& config) {
    return interpret(config.rule.grammar(), config);
}

}  // namespace gorga
