#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "svjd/model.hpp"

namespace svjd {

/// Result of one pricing run. Money amounts in currency units.
struct PriceReport {
  std::string method;  ///< fourier, mc, lsm, decomposition, eep, ...
  Measure measure = Measure::Q;
  double price = 0.0;
  double raw_price = 0.0;  ///< before the positive-part clamp
  std::optional<double> term1;
  std::optional<double> term2;
  std::optional<double> stderr_mc;
  std::optional<double> quad_err;
  bool clamp_flag = false;
  std::optional<std::uint64_t> seed;
  std::string config_hash;

  /// Decomposition extras: Qhat_i probabilities of the in-the-money event.
  std::optional<double> prob1;
  std::optional<double> prob2;
  std::optional<double> prob1_stderr;
  std::optional<double> prob2_stderr;
};

/// Column header shared by every price CSV.
std::string csv_header();
std::string csv_row(const PriceReport& r);
void write_csv(std::ostream& os, const std::vector<PriceReport>& rows);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace svjd
