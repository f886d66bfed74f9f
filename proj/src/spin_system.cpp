#include "djnmr/spin_system.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace djnmr {

SpinSystem::SpinSystem(std::vector<double> shift_hz, std::vector<std::vector<double>> coupling_hz,
                       double linewidth_hz)
    : shift_hz_(std::move(shift_hz)), coupling_hz_(std::move(coupling_hz)), linewidth_hz_(linewidth_hz) {
  const std::size_t n = shift_hz_.size();
  if (n < 1 || n > 3) {
    throw std::invalid_argument("SpinSystem: expected 1..3 spins, got " + std::to_string(n));
  }
  if (coupling_hz_.size() != n) {
    throw std::invalid_argument("SpinSystem: coupling matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (coupling_hz_[i].size() != n) {
      throw std::invalid_argument("SpinSystem: coupling matrix must be square");
    }
    if (!std::isfinite(shift_hz_[i])) throw std::invalid_argument("SpinSystem: non-finite chemical shift");
    if (coupling_hz_[i][i] != 0.0) {
      throw std::invalid_argument("SpinSystem: self-coupling of spin " + std::to_string(i + 1) + " must be zero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(coupling_hz_[i][j])) throw std::invalid_argument("SpinSystem: non-finite coupling");
      if (coupling_hz_[i][j] != coupling_hz_[j][i]) {
        throw std::invalid_argument("SpinSystem: coupling matrix is not symmetric");
      }
    }
  }
  if (!(linewidth_hz_ >= 0.0) || !std::isfinite(linewidth_hz_)) {
    throw std::invalid_argument("SpinSystem: linewidth must be finite and non-negative");
  }
}

double SpinSystem::shift_hz(int spin) const {
  if (spin < 1 || spin > n_spins()) throw std::out_of_range("SpinSystem: spin index out of range");
  return shift_hz_[spin - 1];
}

double SpinSystem::coupling_hz(int i, int j) const {
  if (i < 1 || i > n_spins() || j < 1 || j > n_spins()) {
    throw std::out_of_range("SpinSystem: spin index out of range");
  }
  return coupling_hz_[i - 1][j - 1];
}

SpinSystem SpinSystem::with_linewidth(double linewidth_hz) const {
  return SpinSystem(shift_hz_, coupling_hz_, linewidth_hz);
}

SpinSystem alanine_preset() {
  const double j12 = 54.06;
  const double j23 = 34.86;
  const double j13 = 1.03;
  return SpinSystem({5670.0, -3780.0, -6380.0},
                    {{0.0, j12, j13}, {j12, 0.0, j23}, {j13, j23, 0.0}},
                    1.0);
}

ComplexOperator hamiltonian(const SpinSystem& sys) {
  const int n = sys.n_spins();
  const int dim = 1 << n;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Eigen::VectorXcd diag(dim);
  for (int x = 0; x < dim; ++x) {
    double e = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double mi = spin_bit(x, i, n) ? -0.5 : 0.5;
      e += two_pi * sys.shift_hz(i) * mi;
      for (int j = i + 1; j <= n; ++j) {
        const double mj = spin_bit(x, j, n) ? -0.5 : 0.5;
        e += two_pi * sys.coupling_hz(i, j) * mi * mj;
      }
    }
    diag(x) = e;
  }
  return ComplexOperator::diagonal(diag);
}

ComplexOperator free_propagator(const SpinSystem& sys, double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("free_propagator: evolution time must be non-negative");
  }
  return unitary_exp_diagonal(hamiltonian(sys), t);
}

SpinSystem spin_system_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("spin system JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("spin system JSON: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "shift_hz" && key != "coupling_hz" && key != "linewidth_hz") {
      throw std::invalid_argument("spin system JSON: unknown field '" + key + "'");
    }
  }
  if (!j.contains("shift_hz") || !j.contains("coupling_hz")) {
    throw std::invalid_argument("spin system JSON: 'shift_hz' and 'coupling_hz' are required");
  }
  try {
    auto shifts = j.at("shift_hz").get<std::vector<double>>();
    auto couplings = j.at("coupling_hz").get<std::vector<std::vector<double>>>();
    const double lw = j.value("linewidth_hz", 1.0);
    return SpinSystem(std::move(shifts), std::move(couplings), lw);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spin system JSON: ") + e.what());
  }
}

SpinSystem load_spin_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spin system file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return spin_system_from_json(buf.str());
}

std::string spin_system_to_json(const SpinSystem& sys) {
  nlohmann::json j;
  j["shift_hz"] = sys.shifts();
  j["coupling_hz"] = sys.couplings();
  j["linewidth_hz"] = sys.linewidth_hz();
  return j.dump(2);
}

}  // namespace djnmr
