#include "veriplan/trace.hpp"

#include <algorithm>
#include <string>

#include "veriplan/error.hpp"

namespace veriplan {

SegmentedTrace segment(const RawTrace& trace, int window) {
  if (window < 1) raise(Errc::invalid_argument, "window must be >= 1, got " + std::to_string(window));
  if (trace.frames.empty()) raise(Errc::empty_trace, "trace '" + trace.id + "' has no frames");

  const std::size_t total = trace.frames.size();
  const std::size_t dim = trace.frames.front().size();
  for (const auto& frame : trace.frames) {
    if (frame.size() != dim) {
      raise(Errc::dimension_mismatch, "ragged frame rows in trace '" + trace.id + "'");
    }
  }

  SegmentedTrace out;
  out.trace_id = trace.id;
  out.window = window;
  out.total_frames = total;
  out.frame_dim = dim;

  const std::size_t w = static_cast<std::size_t>(window);
  const std::size_t count = (total + w - 1) / w;
  out.segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Segment seg;
    seg.index = static_cast<int>(s);
    seg.trace_id = trace.id;
    seg.has_annotations = trace.has_annotations;

    const std::size_t begin = s * w;
    const std::size_t end = std::min(begin + w, total);
    seg.frames.assign(trace.frames.begin() + static_cast<std::ptrdiff_t>(begin),
                      trace.frames.begin() + static_cast<std::ptrdiff_t>(end));
    seg.frames.resize(w, std::vector<double>(dim, 0.0));  // zero-pad the tail

    seg.pooled.assign(dim, 0.0);
    for (const auto& frame : seg.frames) {
      for (std::size_t i = 0; i < dim; ++i) seg.pooled[i] += frame[i];
    }
    for (double& v : seg.pooled) v /= static_cast<double>(w);

    for (const Event& ev : trace.events) {
      if (ev.start < static_cast<int>(end) && ev.end > static_cast<int>(begin)) {
        seg.events.push_back(ev);
      }
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

double segment_seconds(int window, double fps) {
  if (window < 1 || fps <= 0.0) raise(Errc::invalid_argument, "window and fps must be positive");
  return static_cast<double>(window) / fps;
}

}  // namespace veriplan
