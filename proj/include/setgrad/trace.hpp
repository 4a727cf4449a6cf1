#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "setgrad/descent.hpp"

namespace setgrad {

// Trace CSV layout (17 significant digits, bit-exact round trip):
//   iter,x0..x{n-1},f,eps,a_min_norm,h0..h{n-1},step,samples,status
// Direction cells are empty when the record has none. The last row is the
// terminal state with status "stationary" or "iter_limit"; wall-clock time
// stays in memory so identical runs produce identical bytes.

void write_trace_header(std::ostream& os, std::size_t dim);
void write_trace_row(std::ostream& os, const TrajectoryRecord& rec, std::size_t dim);
void write_trace_csv(const Trajectory& trajectory, std::ostream& os);

Trajectory read_trace_csv(std::istream& is);

/// {"final_x": [...], "final_f": ..., "iterations": ..., "status": ...,
///  "sign_alternations": ...}
nlohmann::json trajectory_summary(const Trajectory& trajectory);

std::string format_double(double v);  // %.17g

}  // namespace setgrad
