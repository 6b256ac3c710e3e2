#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace veriplan {

// Ground-truth annotation for a contiguous block of frames [start, end).
struct Event {
  int start = 0;
  int end = 0;
  std::string action;
  std::string object;
  std::string receptacle;  // place only
  std::string relation;    // place only: "in" | "on"

  bool operator==(const Event&) const = default;
};

struct RawTrace {
  std::string id;
  std::vector<std::vector<double>> frames;  // T x d feature rows
  std::vector<Event> events;
  bool has_annotations = true;
};

struct Segment {
  int index = 0;
  std::string trace_id;
  std::vector<std::vector<double>> frames;  // exactly window rows, zero-padded tail
  std::vector<double> pooled;               // mean over the window, cached here
  std::vector<Event> events;                // annotations intersecting the segment
  bool has_annotations = true;
};

struct SegmentedTrace {
  std::string trace_id;
  int window = 0;
  std::size_t total_frames = 0;
  std::size_t frame_dim = 0;
  std::vector<Segment> segments;
};

// Splits a trace into ceil(T / window) non-overlapping segments; the last one
// is zero-padded to the window length. Events are carried into every segment
// whose frame range they intersect.
SegmentedTrace segment(const RawTrace& trace, int window);

// Wall-clock span of one segment at a given capture rate.
double segment_seconds(int window, double fps);

}  // namespace veriplan
