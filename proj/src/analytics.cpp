// analytics.cpp — rotation-dynamics closed forms, bounds, and the recurrence.
#include "qbhop/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qbhop {

namespace {

void check_regime(const RegionCounts& n) {
  const long long na = n.n_alpha, nb = n.n_beta, ng = n.n_gamma;
  if (na <= 0) throw OutOfRegimeError("analytics: requires n_alpha > 0");
  if (ng <= 0) throw OutOfRegimeError("analytics: requires n_gamma > 0");
  if (nb < 0) throw OutOfRegimeError("analytics: requires n_beta >= 0");
  using wide = __int128;
  if (wide(nb) * nb > wide(4) * na * ng)
    throw OutOfRegimeError("analytics: requires n_beta^2 <= 4 n_alpha n_gamma");
  if (wide(na + ng) * (na + ng) <= wide(nb) * nb)
    throw OutOfRegimeError("analytics: requires (n_alpha + n_gamma)^2 > n_beta^2");
  // (n_alpha + n_beta/2)^2 <= N n_alpha, kept in integer arithmetic.
  if (wide(2 * na + nb) * (2 * na + nb) > wide(4) * (na + nb + ng) * na)
    throw OutOfRegimeError("analytics: requires (n_alpha + n_beta/2)^2 <= N n_alpha");
}

double sin_theta_or_throw(const GroverAngles& angles) {
  const double st = std::sin(angles.theta);
  if (st == 0.0)
    throw OutOfRegimeError(
        "analytics: sin(theta) = 0 (n_beta^2 = 4 n_alpha n_gamma); the closed "
        "form divides by sin(theta)");
  return st;
}

}  // namespace

double SubspaceState::norm() const {
  double s = std::norm(a) + std::norm(c);
  for (const auto& v : b) s += std::norm(v);
  return std::sqrt(s);
}

GroverAngles angles_from_counts(const RegionCounts& counts) {
  check_regime(counts);
  const double na = static_cast<double>(counts.n_alpha);
  const double nb = static_cast<double>(counts.n_beta);
  const double ng = static_cast<double>(counts.n_gamma);
  const double N = na + nb + ng;

  GroverAngles A;
  const double cos_theta = std::min(nb / (2.0 * std::sqrt(na * ng)), 1.0);
  A.theta = std::acos(cos_theta);
  const double sin_theta = std::sin(A.theta);
  A.eta = std::atan2(2.0 * std::sqrt(na * ng) * sin_theta, na - ng);
  A.zeta = std::atan2(std::sqrt(ng) * sin_theta,
                      std::sqrt(na) + std::sqrt(ng) * cos_theta);
  A.decay = std::sqrt((na - nb + ng) / N);

  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> w =
      (A.eta - i * std::log(A.decay)) /
      (1.0 - A.decay * std::exp(i * A.eta));
  A.rho = std::abs(w);
  A.phi = std::arg(w);
  return A;
}

SubspaceState recurrence_state(const RegionCounts& counts, int k) {
  if (k < 0) throw std::invalid_argument("recurrence_state: k must be >= 0");
  const double na = static_cast<double>(counts.n_alpha);
  const double nb = static_cast<double>(counts.n_beta);
  const double ng = static_cast<double>(counts.n_gamma);
  const double N = na + nb + ng;
  if (N < 1.0) throw std::invalid_argument("recurrence_state: empty grid");

  // One rotation maps the tracked coefficients by
  //   a' = a (na - nb - ng)/N - c * 2 sqrt(na ng)/N
  //   c' = a * 2 sqrt(na ng)/N + c (na + nb - ng)/N
  // and deposits a' fresh error-component coefficient
  //   b0' = a * 2 sqrt(na nb)/N - c * 2 sqrt(nb ng)/N
  // in front of the existing b entries (which keep their values and move one
  // rotation deeper into the family).
  const double maa = (na - nb - ng) / N;
  const double mac = -2.0 * std::sqrt(na * ng) / N;
  const double mca = 2.0 * std::sqrt(na * ng) / N;
  const double mcc = (na + nb - ng) / N;
  const double mba = 2.0 * std::sqrt(na * nb) / N;
  const double mbc = -2.0 * std::sqrt(nb * ng) / N;

  SubspaceState st;
  st.a = std::sqrt(na / N);
  st.c = std::sqrt(ng / N);
  st.b = {std::complex<double>(std::sqrt(nb / N), 0.0)};

  for (int step = 0; step < k; ++step) {
    const std::complex<double> a = st.a, c = st.c;
    st.a = maa * a + mac * c;
    st.c = mca * a + mcc * c;
    st.b.insert(st.b.begin(), mba * a + mbc * c);
  }
  return st;
}

SubspaceState closed_form_state(const RegionCounts& counts, int k) {
  if (k < 0) throw std::invalid_argument("closed_form_state: k must be >= 0");
  const GroverAngles A = angles_from_counts(counts);
  const double st = sin_theta_or_throw(A);
  const double nb_over_n =
      static_cast<double>(counts.n_beta) / static_cast<double>(counts.n_total());
  const double root_nb = std::sqrt(nb_over_n);

  SubspaceState out;
  const double rk = std::pow(A.decay, k);
  out.c = rk * std::sin(k * A.eta + A.zeta) / st;
  out.a = -rk * std::sin(k * A.eta + A.zeta - A.theta) / st;
  out.b.assign(k + 1, std::complex<double>(0.0, 0.0));
  out.b[k] = root_nb;
  for (int j = 0; j < k; ++j)
    out.b[k - 1 - j] = root_nb * (2.0 / st) * std::pow(A.decay, j) *
                       std::sin(A.theta - 2.0 * A.zeta - j * A.eta);
  return out;
}

double gamma_amplitude_lower_bound(const RegionCounts& counts, int k) {
  if (k < 0) throw std::invalid_argument("gamma_amplitude_lower_bound: k must be >= 0");
  const GroverAngles A = angles_from_counts(counts);
  const double st = sin_theta_or_throw(A);
  const double root_nb =
      std::sqrt(static_cast<double>(counts.n_beta) /
                static_cast<double>(counts.n_total()));
  double interference = 0.0;
  for (int j = 0; j < k; ++j)
    interference += std::pow(A.decay, j) *
                    std::abs(std::sin(A.theta - 2.0 * A.zeta - j * A.eta));
  return std::pow(A.decay, k) * std::sin(k * A.eta + A.zeta) / st -
         (2.0 / st) * root_nb * interference;
}

double simplified_lower_bound(const RegionCounts& counts, int k) {
  if (k < 0) throw std::invalid_argument("simplified_lower_bound: k must be >= 0");
  const GroverAngles A = angles_from_counts(counts);
  const double st = sin_theta_or_throw(A);
  const double root_nb =
      std::sqrt(static_cast<double>(counts.n_beta) /
                static_cast<double>(counts.n_total()));
  return (std::pow(A.decay, k) * std::sin(k * A.eta + A.zeta) -
          2.0 * k * root_nb) /
         st;
}

double optimal_rotation_count(const RegionCounts& counts) {
  const GroverAngles A = angles_from_counts(counts);
  if (counts.n_beta == 0) return std::numbers::pi / (2.0 * A.eta) - 0.5;
  sin_theta_or_throw(A);

  const double root_nb =
      std::sqrt(static_cast<double>(counts.n_beta) /
                static_cast<double>(counts.n_total()));
  const double ln_r = std::log(A.decay);
  const double sz = std::sin(A.zeta), cz = std::cos(A.zeta);
  const double num = 2.0 * root_nb * A.rho * std::cos(2.0 * A.zeta - A.theta + A.phi) -
                     ln_r * sz - A.eta * cz;
  const double den = 2.0 * root_nb * A.rho * std::sin(2.0 * A.zeta - A.theta + A.phi) +
                     ln_r * cz - A.eta * sz;

  const double magnitude = 2.0 * root_nb * A.rho + std::abs(ln_r) + A.eta;
  double k;
  if (std::abs(num) < 1e-9 * magnitude && std::abs(den) < 1e-9 * magnitude) {
    // The stationarity condition degenerates to 0/0 when the bound's
    // oscillatory parts cancel (n_beta == n_gamma does this exactly); use the
    // limiting stationary point of the leading term instead.
    k = (std::numbers::pi / 2.0 + std::atan(ln_r / A.eta) - A.zeta) / A.eta;
  } else {
    k = std::atan2(num, den) / A.eta;
  }

  const double window = std::numbers::pi / A.eta;
  while (k <= 0.0) k += window;
  while (k > window) k -= window;
  return k;
}

}  // namespace qbhop
