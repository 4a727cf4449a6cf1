#include "setgrad/trace.hpp"

#include <cctype>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "setgrad/errors.hpp"

namespace setgrad {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_header(std::ostream& os, std::size_t dim) {
  os << "iter";
  for (std::size_t d = 0; d < dim; ++d) os << ",x" << d;
  os << ",f,eps,a_min_norm";
  for (std::size_t d = 0; d < dim; ++d) os << ",h" << d;
  os << ",step,samples,status\n";
}

void write_trace_row(std::ostream& os, const TrajectoryRecord& rec, std::size_t dim) {
  os << rec.iter;
  for (std::size_t d = 0; d < dim; ++d) os << "," << format_double(rec.x[d]);
  os << "," << format_double(rec.f) << "," << format_double(rec.eps) << ","
     << format_double(rec.a_min_norm);
  for (std::size_t d = 0; d < dim; ++d) {
    os << ",";
    if (rec.direction) os << format_double((*rec.direction)[d]);
  }
  os << "," << format_double(rec.step) << "," << rec.samples << ","
     << step_status_name(rec.status) << "\n";
}

void write_trace_csv(const Trajectory& trajectory, std::ostream& os) {
  write_trace_header(os, trajectory.dim);
  for (const auto& rec : trajectory.records) write_trace_row(os, rec, trajectory.dim);
}

Trajectory read_trace_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw InvalidInputError("trace: missing header");
  std::size_t dim = 0;
  {
    std::stringstream ss(header);
    std::string cell;
    while (std::getline(ss, cell, ','))
      if (cell.size() >= 2 && cell[0] == 'x' && std::isdigit(static_cast<unsigned char>(cell[1])))
        ++dim;
  }
  if (dim == 0) throw InvalidInputError("trace: no coordinate columns in header");

  Trajectory traj;
  traj.dim = dim;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    // trailing empty cells are preserved by construction: status is last
    const std::size_t expected = 1 + dim + 3 + dim + 3;
    if (cells.size() != expected)
      throw InvalidInputError("trace: malformed row \"" + line + "\"");
    TrajectoryRecord rec;
    std::size_t c = 0;
    rec.iter = static_cast<std::size_t>(std::stoull(cells[c++]));
    rec.x.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) rec.x[d] = std::stod(cells[c++]);
    rec.f = std::stod(cells[c++]);
    rec.eps = std::stod(cells[c++]);
    rec.a_min_norm = std::stod(cells[c++]);
    bool has_dir = !cells[c].empty();
    if (has_dir) {
      Vec h(dim);
      for (std::size_t d = 0; d < dim; ++d) h[d] = std::stod(cells[c + d]);
      rec.direction = std::move(h);
    }
    c += dim;
    rec.step = std::stod(cells[c++]);
    rec.samples = static_cast<std::size_t>(std::stoull(cells[c++]));
    rec.status = step_status_from_name(cells[c++]);
    traj.records.push_back(std::move(rec));
  }
  if (traj.records.empty()) throw InvalidInputError("trace: no records");
  const auto& last = traj.records.back();
  traj.final_x = last.x;
  traj.final_f = last.f;
  traj.status = last.status == StepStatus::stationary
                    ? RunStatus::ApproximatelyStationary
                    : RunStatus::IterationLimit;
  return traj;
}

nlohmann::json trajectory_summary(const Trajectory& trajectory) {
  return {{"final_x", trajectory.final_x},
          {"final_f", trajectory.final_f},
          {"iterations", trajectory.records.empty() ? 0 : trajectory.records.size() - 1},
          {"status", trajectory.status == RunStatus::ApproximatelyStationary
                         ? "stationary"
                         : "iter_limit"},
          {"sign_alternations", sign_alternations(trajectory)}};
}

}  // namespace setgrad
