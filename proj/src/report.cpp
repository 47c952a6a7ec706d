#include "svjd/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace svjd {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string csv_header() {
  return "method,measure,price,term1,term2,stderr,quad_err,clamp_flag,seed,config_hash";
}

std::string csv_row(const PriceReport& r) {
  std::ostringstream os;
  os << r.method << ',' << to_string(r.measure) << ',' << format_double(r.price) << ',' << opt(r.term1)
     << ',' << opt(r.term2) << ',' << opt(r.stderr_mc) << ',' << opt(r.quad_err) << ','
     << (r.clamp_flag ? 1 : 0) << ',';
  if (r.seed) os << *r.seed;
  os << ',' << r.config_hash;
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<PriceReport>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) os << csv_row(r) << '\n';
}

}  // namespace svjd
