#include "iernn/chain.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace iernn {

SerialChain::SerialChain(std::string name, std::vector<DhRow> rows, int task_dim,
                         std::optional<PlanarDynamicsParams> dynamics)
: name_(std::move(name)), rows_(std::move(rows)), task_dim_(task_dim),
  dynamics_(std::move(dynamics))
{
  if (task_dim_ != 2 && task_dim_ != 3) {
    throw ConfigError("chain '" + name_ + "': task_dim must be 2 or 3");
  }
  if (rows_.empty()) {
    throw ConfigError("chain '" + name_ + "': needs at least one joint");
  }
  if (dynamics_) {
    const auto n = rows_.size();
    if (dynamics_->masses.size() != n || dynamics_->com_offsets.size() != n ||
        dynamics_->inertias.size() != n) {
      throw ConfigError("chain '" + name_ + "': dynamics block needs one entry per link");
    }
    if (!is_planar()) {
      throw ConfigError("chain '" + name_ + "': dynamic parameters are supported for planar chains only");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(dynamics_->masses[i] > 0.0) || dynamics_->inertias[i] < 0.0) {
        throw ConfigError("chain '" + name_ + "': masses must be positive, inertias non-negative");
      }
    }
  }
}

bool SerialChain::is_planar() const
{
  for (const auto& r : rows_) {
    if (r.alpha != 0.0 || r.d != 0.0) {
      return false;
    }
  }
  return true;
}

JointState JointState::at_rest(Vec theta)
{
  const auto n = theta.size();
  return {std::move(theta), Vec::Zero(n), Vec::Zero(n)};
}

namespace {

using Eigen::Isometry3d;
using Eigen::Vector3d;

Isometry3d dh_transform(const DhRow& row, double q)
{
  const double th = q + row.theta_offset;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Isometry3d T = Isometry3d::Identity();
  T.linear() << ct, -st * ca, st * sa,
                st, ct * ca, -ct * sa,
                0.0, sa, ca;
  T.translation() << row.a * ct, row.a * st, row.d;
  return T;
}

struct Frames
{
  // Frame k (0 = base, n = end effector): origin and z axis in base coordinates.
  std::vector<Vector3d> origin;
  std::vector<Vector3d> z;
};

Frames chain_frames(const SerialChain& chain, const Vec& theta)
{
  const int n = chain.n_joints();
  require_dim(theta.size(), n, "joint vector for chain '" + chain.name() + "'");
  Frames f;
  f.origin.reserve(n + 1);
  f.z.reserve(n + 1);
  Isometry3d T = Isometry3d::Identity();
  f.origin.push_back(T.translation());
  f.z.push_back(T.linear().col(2));
  for (int i = 0; i < n; ++i) {
    T = T * dh_transform(chain.rows()[i], theta(i));
    f.origin.push_back(T.translation());
    f.z.push_back(T.linear().col(2));
  }
  return f;
}

}  // namespace

Vec forward_kinematics(const SerialChain& chain, const Vec& theta)
{
  const Frames f = chain_frames(chain, theta);
  return f.origin.back().head(chain.task_dim());
}

Mat jacobian(const SerialChain& chain, const Vec& theta)
{
  const Frames f = chain_frames(chain, theta);
  const int n = chain.n_joints();
  const Vector3d& pe = f.origin.back();
  Mat J(chain.task_dim(), n);
  for (int j = 0; j < n; ++j) {
    const Vector3d col = f.z[j].cross(pe - f.origin[j]);
    J.col(j) = col.head(chain.task_dim());
  }
  return J;
}

Mat jacobian_time_derivative(const SerialChain& chain, const JointState& state)
{
  const Frames f = chain_frames(chain, state.theta);
  const int n = chain.n_joints();
  require_dim(state.dtheta.size(), n, "joint velocity");

  // Angular velocity and origin velocity of every frame.
  std::vector<Vector3d> omega(n + 1, Vector3d::Zero());
  std::vector<Vector3d> vel(n + 1, Vector3d::Zero());
  for (int k = 1; k <= n; ++k) {
    omega[k] = omega[k - 1] + state.dtheta(k - 1) * f.z[k - 1];
    for (int j = 1; j <= k; ++j) {
      vel[k] += state.dtheta(j - 1) * f.z[j - 1].cross(f.origin[k] - f.origin[j - 1]);
    }
  }

  Mat dJ(chain.task_dim(), n);
  const Vector3d& pe = f.origin.back();
  for (int j = 0; j < n; ++j) {
    const Vector3d dz = omega[j].cross(f.z[j]);
    const Vector3d col = dz.cross(pe - f.origin[j]) + f.z[j].cross(vel[n] - vel[j]);
    dJ.col(j) = col.head(chain.task_dim());
  }
  return dJ;
}

namespace presets {

SerialChain planar(std::string name, const std::vector<double>& lengths,
                   const std::vector<double>& masses)
{
  if (lengths.size() != masses.size()) {
    throw ConfigError("planar preset: lengths and masses differ in count");
  }
  std::vector<DhRow> rows;
  PlanarDynamicsParams dyn;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    rows.push_back({lengths[i], 0.0, 0.0, 0.0});
    dyn.masses.push_back(masses[i]);
    dyn.com_offsets.push_back(0.5 * lengths[i]);
    dyn.inertias.push_back(masses[i] * lengths[i] * lengths[i] / 12.0);
  }
  return SerialChain(std::move(name), std::move(rows), 2, std::move(dyn));
}

SerialChain planar_two_link()
{
  // Not redundant for a 2-D task; kinematics and dynamics checks only.
  return planar("planar2", {1.0, 1.0}, {1.0, 1.0});
}

SerialChain planar_three_link()
{
  return planar("planar3", {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
}

SerialChain spatial_6r()
{
  using std::numbers::pi;
  // JACO2-like proportions (metres). Wrist links are tilted by 2*aa.
  const double D1 = 0.2755, D2 = 0.41, D3 = 0.2073, D4 = 0.0741, D5 = 0.0741, D6 = 0.16;
  const double e2 = 0.0098;
  const double aa = 11.0 * pi / 72.0;
  const double ratio = std::sin(aa) / std::sin(2.0 * aa);
  const double d4b = D3 + ratio * D4;
  const double d5b = ratio * (D4 + D5);
  const double d6b = ratio * D5 + D6;
  std::vector<DhRow> rows = {
      {0.0, pi / 2, D1, 0.0},
      {D2, pi, 0.0, -pi / 2},
      {0.0, pi / 2, -e2, pi / 2},
      {0.0, 2 * aa, -d4b, 0.0},
      {0.0, 2 * aa, -d5b, -pi},
      {0.0, pi, -d6b, pi / 2},
  };
  return SerialChain("spatial6r", std::move(rows), 3);
}

std::optional<SerialChain> by_name(const std::string& name)
{
  if (name == "planar2") return planar_two_link();
  if (name == "planar3") return planar_three_link();
  if (name == "spatial6r") return spatial_6r();
  return std::nullopt;
}

}  // namespace presets

namespace {

std::vector<double> numbers_in(const std::string& line, int lineno)
{
  std::istringstream is(line);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ConfigError("chain file line " + std::to_string(lineno) + ": not a number: '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

SerialChain parse_chain(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  std::string name = "chain";
  int task_dim = 3;
  std::vector<DhRow> rows;
  bool in_dynamics = false;
  PlanarDynamicsParams dyn;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream is(line);
    std::string head;
    if (!(is >> head)) {
      continue;
    }
    if (head == "name") {
      is >> name;
    } else if (head == "task_dim") {
      if (!(is >> task_dim)) {
        throw ConfigError("chain file line " + std::to_string(lineno) + ": bad task_dim");
      }
    } else if (head == "dynamics") {
      in_dynamics = true;
    } else if (head == "gravity") {
      if (!(is >> dyn.gravity)) {
        throw ConfigError("chain file line " + std::to_string(lineno) + ": bad gravity");
      }
    } else if (!in_dynamics) {
      const auto v = numbers_in(line, lineno);
      if (v.size() != 4) {
        throw ConfigError("chain file line " + std::to_string(lineno) +
                          ": DH row needs a alpha d theta_offset");
      }
      rows.push_back({v[0], v[1], v[2], v[3]});
    } else {
      const auto v = numbers_in(line, lineno);
      if (v.size() != 2 && v.size() != 3) {
        throw ConfigError("chain file line " + std::to_string(lineno) +
                          ": link row needs mass com_offset [inertia]");
      }
      const std::size_t link = dyn.masses.size();
      if (link >= rows.size()) {
        throw ConfigError("chain file line " + std::to_string(lineno) + ": more links than DH rows");
      }
      dyn.masses.push_back(v[0]);
      dyn.com_offsets.push_back(v[1]);
      const double a = rows[link].a;
      dyn.inertias.push_back(v.size() == 3 ? v[2] : v[0] * a * a / 12.0);
    }
  }
  if (rows.empty()) {
    throw ConfigError("chain file has no DH rows");
  }
  std::optional<PlanarDynamicsParams> dynamics;
  if (in_dynamics) {
    dynamics = std::move(dyn);
  }
  return SerialChain(name, std::move(rows), task_dim, std::move(dynamics));
}

SerialChain load_chain_file(const std::string& path)
{
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot open chain file '" + path + "'");
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_chain(ss.str());
}

std::string format_chain(const SerialChain& chain)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "name " << chain.name() << "\n";
  os << "task_dim " << chain.task_dim() << "\n";
  os << "# a alpha d theta_offset\n";
  for (const auto& r : chain.rows()) {
    os << r.a << " " << r.alpha << " " << r.d << " " << r.theta_offset << "\n";
  }
  if (const auto& dyn = chain.dynamics()) {
    os << "dynamics\n";
    os << "gravity " << dyn->gravity << "\n";
    os << "# mass com_offset inertia\n";
    for (std::size_t i = 0; i < dyn->masses.size(); ++i) {
      os << dyn->masses[i] << " " << dyn->com_offsets[i] << " " << dyn->inertias[i] << "\n";
    }
  }
  return os.str();
}

}  // namespace iernn
