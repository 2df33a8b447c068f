// Instance (JSON) and trajectory (JSON Lines) file formats.
//
// Instance:
//   {"name": str, "sense": "min", "num_vars": int, "objective": [number...],
//    "constraints": [{"coefs": [[index, number]...], "op": "le",
//                     "rhs": number}...]}
//
// Trajectory, one record per line:
//   {"t", "time_s", "incumbent", "obj", "eta", "tau", "sigma", "destroyed",
//    "pool_objs", "chosen", "accepted", "best_obj"}

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spllns/ilp.hpp"

namespace spllns {

// Malformed input. `location` is a JSON pointer ("/constraints/3/coefs/0") or
// "line N" / "byte N" for syntax errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message),
        location_(std::move(location)),
        message_(message) {}
  const std::string& location() const { return location_; }
  const std::string& message() const { return message_; }

 private:
  std::string location_;
  std::string message_;
};

Instance parse_instance(std::string_view text);
// Integral values are written without a fractional part; everything else
// uses the shortest decimal text that round-trips.
std::string serialize_instance(const Instance& inst);

Instance read_instance_file(const std::filesystem::path& path);
void write_instance_file(const std::filesystem::path& path,
                         const Instance& inst);

struct TrajectoryRecord {
  long long t = 0;
  double time_s = 0.0;
  Assignment incumbent;  // after this iteration's accept step
  double obj = 0.0;      // c^T incumbent
  int eta = 0;
  double tau = 0.0;
  double sigma = 0.0;
  std::vector<int> destroyed;
  std::vector<double> pool_objs;
  Assignment chosen;  // candidate drawn from the pool (incumbent if empty)
  bool accepted = false;
  double best_obj = 0.0;

  friend bool operator==(const TrajectoryRecord&,
                         const TrajectoryRecord&) = default;
};

std::string trajectory_record_to_json(const TrajectoryRecord& r);
TrajectoryRecord parse_trajectory_record(std::string_view line);

void write_trajectory(std::ostream& out,
                      const std::vector<TrajectoryRecord>& records);
void write_trajectory_file(const std::filesystem::path& path,
                           const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> read_trajectory_file(
    const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace spllns
