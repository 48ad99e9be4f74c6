#include "focklab/encoding.hpp"

#include <cmath>
#include <numeric>

namespace focklab {

void Ensemble::validate(unsigned mode_count) const {
  if (points.empty()) throw std::invalid_argument("empty ensemble");
  if (points.size() != weights.size())
    throw std::invalid_argument("ensemble points/weights length mismatch");
  double sum = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("negative ensemble weight");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble weights do not sum to 1");
  for (const auto& p : points) {
    if (p.phi.size() != mode_count || p.pi.size() != mode_count)
      throw std::invalid_argument("phase point dimension mismatch");
    if (!p.phi.allFinite() || !p.pi.allFinite())
      throw std::invalid_argument("non-finite phase point");
  }
}

Ensemble single_point_ensemble(const PhasePoint& p) {
  return Ensemble{{p}, {1.0}};
}

TailBoundViolation::TailBoundViolation(double bound_, unsigned suggested)
    : std::runtime_error("truncation tail bound " + std::to_string(bound_) +
                         " exceeds budget; suggested cutoff >= " +
                         std::to_string(suggested)),
      bound(bound_), suggested_cutoff(suggested) {}

double poisson_tail(double lambda, unsigned cutoff) {
  if (lambda == 0.0) return 0.0;
  // 1 - exp(-l) sum_{k<=N} l^k/k!, summed in fixed order
  double term = std::exp(-lambda);
  double head = term;
  for (unsigned k = 1; k <= cutoff; ++k) {
    term *= lambda / k;
    head += term;
  }
  double tail = 1.0 - head;
  return tail < 0 ? 0.0 : tail;
}

unsigned suggested_cutoff(double amplitude) {
  double z = std::fabs(amplitude);
  return static_cast<unsigned>(std::ceil(z * z + 6.0 * z + 10.0));
}

double truncation_bound(const FockSpace& space, const Ensemble& ens) {
  double worst = 0;
  for (const auto& p : ens.points) {
    double total = 0;
    for (unsigned j = 0; j < space.flat_modes(); ++j) {
      double phi = j < p.phi.size() ? p.phi(j) : 0.0;
      double pi = j < p.pi.size() ? p.pi(j) : 0.0;
      double z2 = phi * phi + pi * pi;
      total += poisson_tail(z2, space.cutoff());
    }
    worst = std::max(worst, total);
  }
  return worst;
}

namespace {

void check_tail(const FockSpace& space, double amp2_per_mode_max) {
  double tail = poisson_tail(amp2_per_mode_max, space.cutoff()) *
                space.flat_modes();
  if (tail > kTailRefuseThreshold)
    throw TailBoundViolation(tail, suggested_cutoff(std::sqrt(amp2_per_mode_max)));
}

// product-form exponential-of-creators vector with per-mode complex
// amplitudes; component on occupation k is prod_j amp_j^{k_j}/sqrt(k_j!)
Eigen::VectorXcd creator_exponential(const FockSpace& space,
                                     const Eigen::VectorXcd& amps) {
  const unsigned N = space.cutoff();
  std::vector<std::vector<Complex>> per_mode(space.flat_modes());
  for (unsigned j = 0; j < space.flat_modes(); ++j) {
    per_mode[j].resize(N + 1);
    Complex c(1.0, 0.0);
    per_mode[j][0] = c;
    for (unsigned k = 1; k <= N; ++k) {
      c *= amps(j) / std::sqrt(static_cast<double>(k));
      per_mode[j][k] = c;
    }
  }
  Eigen::VectorXcd v(space.dimension());
  for (size_t i = 0; i < space.dimension(); ++i) {
    Complex c(1.0, 0.0);
    for (unsigned j = 0; j < space.flat_modes(); ++j)
      c *= per_mode[j][space.occupation_of(i, j)];
    v(i) = c;
  }
  return v;
}

}  // namespace

Eigen::VectorXcd moment_vector(const FockSpace& space,
                               const Eigen::VectorXd& phi) {
  if (phi.size() != space.flat_modes())
    throw std::invalid_argument("moment_vector: amplitude count mismatch");
  check_tail(space, phi.cwiseAbs().maxCoeff() * phi.cwiseAbs().maxCoeff());
  return creator_exponential(space, phi.cast<Complex>());
}

Eigen::VectorXcd coherent_vector(const FockSpace& space,
                                 const PhasePoint& point) {
  if (point.phi.size() != space.flat_modes() ||
      point.pi.size() != space.flat_modes())
    throw std::invalid_argument("coherent_vector: dimension mismatch");
  Eigen::VectorXcd z =
      point.phi.cast<Complex>() + Complex(0.0, 1.0) * point.pi.cast<Complex>();
  check_tail(space, z.cwiseAbs().maxCoeff() * z.cwiseAbs().maxCoeff());
  Eigen::VectorXcd w = creator_exponential(space, z);
  double norm2 = 0;
  for (unsigned j = 0; j < space.flat_modes(); ++j) norm2 += std::norm(z(j));
  return w * std::exp(-0.5 * norm2);
}

Eigen::MatrixXcd density_matrix(const FockSpace& space, const Ensemble& ens) {
  ens.validate(space.flat_modes());
  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Zero(space.dimension(), space.dimension());
  for (size_t k = 0; k < ens.points.size(); ++k) {
    Eigen::VectorXcd w = coherent_vector(space, ens.points[k]);
    rho.noalias() += ens.weights[k] * (w * w.adjoint());
  }
  return rho;
}

Complex expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& M) {
  if (rho.rows() != M.rows() || rho.cols() != M.cols())
    throw std::invalid_argument("expectation: shape mismatch");
  return (rho * M).trace();
}

Complex ensemble_expectation(const FockSpace& space, const Ensemble& ens,
                             const Eigen::MatrixXcd& M) {
  ens.validate(space.flat_modes());
  Complex total(0.0, 0.0);
  for (size_t k = 0; k < ens.points.size(); ++k) {
    Eigen::VectorXcd w = coherent_vector(space, ens.points[k]);
    total += ens.weights[k] * (w.adjoint() * (M * w))(0);
  }
  return total;
}

double extract_moment(const FockSpace& space, const Eigen::VectorXcd& v,
                      const std::vector<unsigned>& occ) {
  double fac = 1.0;
  for (unsigned k : occ)
    for (unsigned i = 2; i <= k; ++i) fac *= i;
  return std::sqrt(fac) * v(space.index(occ)).real();
}

}  // namespace focklab
