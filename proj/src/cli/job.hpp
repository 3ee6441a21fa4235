#ifndef HBI_CLI_JOB_HPP
#define HBI_CLI_JOB_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbi/geometry.hpp"
#include "hbi/oracle.hpp"
#include "hbi/series.hpp"

namespace hbi::cli {

// Schema or validation failure in a job file; `field` names the offending key.
class JobError : public std::runtime_error {
 public:
  JobError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RandomPoints {
  int count = 0;
  double distance_min = 0.3;  // multiples of the first panel's diameter
  double distance_max = 2.0;
};

struct Job {
  double wavenumber = 0;
  std::vector<Panel<double>> panels;
  std::vector<Vec3<double>> points;
  std::vector<oracle::Quantity> quantities;
  TruncationPolicy truncation;
  bool compare_oracle = false;
  oracle::OracleConfig oracle;
  double tolerance = 1e-9;
  std::optional<RandomPoints> random_points;
};

Job parse_job(const std::string& text, std::uint64_t seed = 0);
Job load_job(const std::string& path, std::uint64_t seed = 0);

const char* quantity_name(oracle::Quantity q);

}  // namespace hbi::cli

#endif  // HBI_CLI_JOB_HPP
