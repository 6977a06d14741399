#include "iernn/harness.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace iernn {

namespace {

const char* const kAxes[] = {"x", "y", "z"};

void numbered(std::vector<std::string>& out, const std::string& prefix, int count)
{
  for (int i = 1; i <= count; ++i) {
    out.push_back(prefix + std::to_string(i));
  }
}

// Shortest representation that parses back to the same double.
void put(std::ostream& os, double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

void put_vec(std::ostream& os, const Vec& v)
{
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << ',';
    put(os, v(i));
  }
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s)
{
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("CSV: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> csv_header(const TrajectoryLog& log)
{
  std::vector<std::string> h{"t"};
  numbered(h, "theta_", log.n);
  numbered(h, "dtheta_", log.n);
  numbered(h, "ddtheta_", log.n);
  numbered(h, "y_", log.n + log.m);
  h.push_back("qp_residual");
  for (int i = 0; i < log.m; ++i) h.push_back(std::string("pos_") + kAxes[i]);
  for (int i = 0; i < log.m; ++i) h.push_back(std::string("eps_") + kAxes[i]);
  h.push_back("rms");
  if (log.has_tau) {
    numbered(h, "tau_", log.n);
  }
  return h;
}

void write_log_csv(const TrajectoryLog& log, std::ostream& os)
{
  const auto header = csv_header(log);
  for (std::size_t i = 0; i < header.size(); ++i) {
    os << (i ? "," : "") << header[i];
  }
  os << '\n';
  for (const auto& r : log.rows) {
    put(os, r.t);
    put_vec(os, r.theta);
    put_vec(os, r.dtheta);
    put_vec(os, r.ddtheta);
    put_vec(os, r.y);
    os << ',';
    put(os, r.qp_residual);
    put_vec(os, r.position);
    put_vec(os, r.eps);
    os << ',';
    put(os, r.rms);
    if (log.has_tau) {
      put_vec(os, r.tau);
    }
    os << '\n';
  }
}

TrajectoryLog read_log_csv(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line)) {
    throw ConfigError("CSV: missing header row");
  }
  const auto header = split(line);
  TrajectoryLog log;
  for (const auto& h : header) {
    if (h.rfind("theta_", 0) == 0) ++log.n;
    if (h.rfind("pos_", 0) == 0) ++log.m;
    if (h.rfind("tau_", 0) == 0) log.has_tau = true;
  }
  if (header != csv_header(log)) {
    throw ConfigError("CSV: header does not match the trajectory log layout");
  }
  const int n = log.n, m = log.m;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ConfigError("CSV: row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    }
    std::size_t at = 0;
    const auto take = [&](int count) {
      Vec v(count);
      for (int i = 0; i < count; ++i) v(i) = parse_double(cells[at++]);
      return v;
    };
    LogRow r;
    r.t = parse_double(cells[at++]);
    r.theta = take(n);
    r.dtheta = take(n);
    r.ddtheta = take(n);
    r.y = take(n + m);
    r.qp_residual = parse_double(cells[at++]);
    r.position = take(m);
    r.eps = take(m);
    r.rms = parse_double(cells[at++]);
    if (log.has_tau) {
      r.tau = take(n);
    }
    log.rows.push_back(std::move(r));
  }
  return log;
}

}  // namespace iernn
