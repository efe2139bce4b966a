#pragma once

#include "gorga/config.hpp"
#include "gorga/geometry.hpp"
#include "gorga/lsystem.hpp"
#include "gorga/occupancy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gorga {

// Segment index sentinels for TurtleState::anchor.
inline constexpr std::int32_t kAtStart = -1;   // has not drawn yet on this lineage
inline constexpr std::int32_t kDetached = -2;  // moved without drawing

struct TurtleState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;     // degrees, [0, 360), counter-clockwise from +x
    double step = 1.0;        // d
    double turn_angle = 30.0; // delta
    int spiral_count = 0;
    int branch_depth = 0;
    // Last segment this lineage committed; the turtle sits on its far end.
    std::int32_t anchor = kAtStart;

    Vec2 position() const { return {x, y}; }
    friend bool operator==(const TurtleState&, const TurtleState&) = default;
};

double normalize_degrees(double degrees);

TurtleState step_forward(const TurtleState& state);

enum class TurnDirection { Left, Right };
TurtleState turn(const TurtleState& state, TurnDirection direction, double degrees);

// Turns right by turn_angle and shrinks the step by `decay`. Once the decayed
// step would fall below `min_step` the call leaves the state untouched.
TurtleState spiral_turn(const TurtleState& state, double decay, double min_step);

class TurtleStack {
public:
    void push(TurtleState& state);
    // Throws Error(StackUnderflow) when empty.
    void pop(TurtleState& state);
    // Drops saved states above `size` without restoring any of them.
    void unwind(std::size_t size);
    bool empty() const { return saved_.empty(); }
    std::size_t size() const { return saved_.size(); }

private:
    std::vector<TurtleState> saved_;
};

struct Segment {
    Vec2 a;
    Vec2 b;
    double stroke_width = 1.0;
    int color_index = 0;
    int branch_depth = 0;
    std::int32_t parent = kAtStart;  // segment whose far end this one starts from
    int round = 0;

    friend bool operator==(const Segment&, const Segment&) = default;
};

// Shared drawing surface of one run: the mask, the occupancy field and the
// committed segments with their contact structure.
class Canvas {
public:
    Canvas(ShapeMask mask, double clearance, double stroke_width, int palette_size);

    const ShapeMask& mask() const { return mask_; }
    const OccupancyField& field() const { return field_; }
    const std::vector<Segment>& segments() const { return segments_; }

    // Segments touching the turtle's current point: the anchor itself plus
    // every segment that starts where the anchor ends.
    std::vector<std::int32_t> contacts(std::int32_t anchor) const;

    std::int32_t commit(Vec2 a, Vec2 b, std::int32_t parent, int branch_depth, int round);

    void set_round(int round) { round_ = round; }
    int round() const { return round_; }

    std::vector<Segment> release() && { return std::move(segments_); }

private:
    ShapeMask mask_;
    OccupancyField field_;
    double stroke_width_;
    int palette_size_;
    int round_ = 0;
    std::vector<Segment> segments_;
    std::vector<std::vector<std::int32_t>> children_;
    std::vector<std::int32_t> roots_;
};

// One guarded step. Accepted iff the segment's endpoints and midpoint lie in
// the mask, no non-contact stroke occupies a cell within clearance of it, its
// far end keeps clearance from the contact strokes, and it claims at least one
// unwritten cell. On acceptance the segment is committed.
std::optional<TurtleState> guarded_forward(const TurtleState& state, Canvas& canvas);
// The acceptance test of guarded_forward without the commit.
bool move_admissible(const TurtleState& state, const Canvas& canvas);

// Picks among `candidate_count` headings spread evenly over
// [heading - max_deviation, heading + max_deviation] the one whose look-ahead
// disc (radius 3 steps, centered one step ahead) holds the least occupancy.
// Ties go to the smallest deviation, then to the positive (left) one.
// `jitter`, when given, is added to each candidate's deviation.
double least_occupied_heading(const TurtleState& state, const OccupancyField& field,
                              double max_deviation, int candidate_count,
                              std::span<const double> jitter = {});

enum class Termination { IterationBudget, Saturated, Stalled };

std::string_view to_string(Termination t);

struct RoundStats {
    int round = 0;
    std::size_t segments = 0;
    std::uint64_t occupancy = 0;
};

struct Drawing {
    std::vector<Segment> segments;
    ShapeMask mask = ShapeMask::rectangle({0, 0, 1, 1});
    std::uint64_t seed = 0;
    std::string rng = "mt19937_64";
    RunConfig config;
    Termination termination = Termination::IterationBudget;
    std::vector<RoundStats> rounds;
};

// Round 0 interprets the axiom from the start pose. Every later round draws
// what one rewrite adds: each symbol with a production met in the previous
// round (an F only if it delivered a stroke) has its successor interpreted
// from the pose it was met in, in order, against one shared canvas. A
// successor's leading F retraces the stroke it replaces. A rejected guarded
// move is skipped; once no reachable heading is open the turtle gives up the
// innermost guard it is in and returns to the pose it entered that guard with.
// Stops after config.iterations rounds, after a round that commits nothing,
// or once config.stall_budget consecutive guarded moves were rejected.
// Throws Error(InvalidStart) when the start point lies outside the mask.
Drawing interpret(const Grammar& grammar, const RunConfig& config);
Drawing interpret(const RunConfig& config);

// Segments a and b share an endpoint through the turtle lineage (parent and
// child, or two children of the same parent).
bool lineage_adjacent(const std::vector<Segment>& segments, std::size_t a, std::size_t b);

}  // namespace gorga
