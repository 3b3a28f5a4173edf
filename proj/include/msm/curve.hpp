#pragma once

#include <string>
#include <vector>

namespace msm {

// Sampled function: value[i] belongs to abscissa[i]. `std_error` is
// empty for analytic curves.
struct CorrelationCurve {
  std::string name;
  std::vector<double> abscissa;
  std::vector<double> value;
  std::vector<double> std_error;

  std::size_t size() const { return abscissa.size(); }
};

}  // namespace msm
