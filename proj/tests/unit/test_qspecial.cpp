#include "doctest.h"

#include <random>

#include "onecircuit/moments.hpp"
#include "onecircuit/qspecial.hpp"

using namespace onecircuit;

namespace {
double dd(const HighPrec& x) { return to_double(x); }
}

TEST_CASE("q-Pochhammer finite products") {
  CHECK(q_pochhammer(0.37, 0.9, 0).value == 1.0);
  CHECK(q_pochhammer(-4.0, 2.0, 0).value == 1.0);
  CHECK(q_pochhammer(0.5, 0.5, 1).value == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("infinite q-Pochhammer is stable across truncation thresholds") {
  const auto a = q_pochhammer(HighPrec(1) / 2, HighPrec(1) / 2, kInfiniteProduct, HighPrec(1e-14));
  const auto b = q_pochhammer(HighPrec(1) / 2, HighPrec(1) / 2, kInfiniteProduct, HighPrec(1e-16));
  CHECK(dd(abs_val(a.value - b.value)) <= 1e-12);
  CHECK(dd(a.error) <= 1e-12);
  CHECK_THROWS_AS(q_pochhammer(0.5, 1.0, kInfiniteProduct), DivergentProduct);
}

TEST_CASE("polynomial recurrence start") {
  const QPair<double> p{0.7, 0.4};
  CHECK(asc_polynomial_value(p, 0, 2.3) == 1.0);
  for (double x : {0.0, 1.0, 2.5})
    CHECK(asc_polynomial_value(p, 1, x) == doctest::Approx(x - 1.7).epsilon(1e-14));
}

TEST_CASE("polynomial table agrees with the value recurrence") {
  const QPair<double> p{1.3, 0.35};
  const auto table = ASCPolynomialTable<double>::build(p, 8);
  CHECK(table.coeffs[0] == std::vector<double>{1.0});
  for (long k = 0; k <= 8; ++k) {
    CHECK(table.coeffs[k].size() == std::size_t(k) + 1);  // degree k
    CHECK(table.coeffs[k].back() == doctest::Approx(1.0).epsilon(1e-12));  // monic
  }
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> xd(-2.0, 6.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double x = xd(rng);
    for (long k = 0; k <= 8; ++k)
      CHECK(table.eval(k, x) ==
            doctest::Approx(asc_polynomial_value(p, k, x)).epsilon(1e-9));
  }
}

TEST_CASE("scaling identity V_n^(a)(x;q) = a^n V_n^(1/a)(x/a;q)") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ad(0.3, 3.0), qd(0.1, 0.9), xd(-1.0, 4.0);
  for (int rep = 0; rep < 25; ++rep) {
    const double a = ad(rng), q = qd(rng), x = xd(rng);
    for (long n : {1L, 2L, 3L, 5L}) {
      const double lhs = asc_polynomial_value(QPair<double>{a, q}, n, x);
      const double rhs =
          pow_int(a, n) * asc_polynomial_value(QPair<double>{1.0 / a, q}, n, x / a);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(std::abs(lhs) + 1));
    }
  }
}

TEST_CASE("orthogonalizability region") {
  CHECK(asc_orthogonalizable(0.5, 0.25));
  CHECK_FALSE(asc_orthogonalizable(0.5, 2.0));
  CHECK(asc_orthogonalizable(-1.0, -0.5));
  CHECK(asc_orthogonalizable(-1.0, 2.0));
  CHECK_FALSE(asc_orthogonalizable(-1.0, 0.5));
  CHECK_FALSE(asc_orthogonalizable(0.0, 0.5));
}

TEST_CASE("beta measure atoms and mass") {
  const QPair<HighPrec> p{HighPrec(1) / 2, HighPrec(1) / 4};
  const auto beta = asc_beta_measure(p, 40);
  CHECK(dd(beta.atoms()[0].location) == 1.0);
  CHECK(dd(beta.atoms()[1].location) == 4.0);
  CHECK(dd(beta.atoms()[2].location) == 16.0);
  const auto mass = beta.total_mass_with_error();
  CHECK(dd(abs_val(mass.value - HighPrec(1))) <= dd(mass.error) + 1e-38);

  CHECK_THROWS_AS(asc_beta_measure(QPair<HighPrec>{HighPrec(3), HighPrec(1) / 2}, 10),
                  ParameterOutOfRange);
}

TEST_CASE("closed-form moments match atom summation") {
  for (double aa : {0.3, 0.5, 0.9, 2.0}) {
    for (double qq : {0.2, 0.3, 0.5}) {
      if (aa * qq >= 1.0) continue;
      const QPair<HighPrec> p{HighPrec(aa), HighPrec(qq)};
      const auto beta = asc_beta_measure(p, 40);
      for (long n = 0; n <= 12; ++n) {
        const auto lhs = beta.moment(n);
        const HighPrec rhs = asc_moment(p, n);
        CHECK(dd(abs_val(lhs.value - rhs)) <=
              1e-10 * dd(abs_val(rhs)) + dd(lhs.error));
      }
    }
  }
}

TEST_CASE("gamma measure shares moments with beta for 1 < a < 1/q") {
  const QPair<HighPrec> p{HighPrec(2), HighPrec(3) / 10};
  const auto beta = asc_beta_measure(p, 40);
  const auto gamma = asc_gamma_measure(p, 40);
  CHECK(dd(gamma.atoms()[0].location) == doctest::Approx(2.0));
  CHECK(dd(gamma.atoms()[1].location) == doctest::Approx(2.0 / 0.3));
  const auto mass = gamma.total_mass_with_error();
  CHECK(dd(abs_val(mass.value - HighPrec(1))) <= dd(mass.error) + 1e-38);
  for (long n = 0; n <= 10; ++n) {
    const auto a = beta.moment(n);
    const auto b = gamma.moment(n);
    CHECK(dd(abs_val(a.value - b.value)) <=
          1e-9 * dd(abs_val(a.value)) + dd(a.error) + dd(b.error));
  }
  CHECK_THROWS_AS(asc_gamma_measure(QPair<HighPrec>{HighPrec(1) / 2, HighPrec(1) / 4}, 10),
                  ParameterOutOfRange);
}

TEST_CASE("beta with 0 < q < a <= 1 starts at 1 and dominates its shift") {
  const QPair<HighPrec> p{HighPrec(1) / 2, HighPrec(1) / 4};
  const auto beta = asc_beta_measure(p, 40);
  CHECK(dd(beta.inf_support()) == 1.0);
  MomentSequence<HighPrec> g;
  for (long n = 0; n <= 12; ++n) g.values.push_back(beta.moment(n).value);
  CHECK(shift_dominance(g, HighPrec(1e-30)).pass);
}

TEST_CASE("tail bounds dominate what deeper truncations actually add") {
  // refine the truncation and check that the extra mass/moments stay
  // inside the bounds reported by the shorter one
  auto check_refinement = [](const AtomicMeasure<HighPrec>& coarse,
                             const AtomicMeasure<HighPrec>& fine) {
    const HighPrec extra_mass = fine.total_mass() - coarse.total_mass();
    CHECK(dd(extra_mass) >= 0.0);
    CHECK(dd(extra_mass) <= dd(coarse.tail_mass_bound()) * (1 + 1e-30));
    for (long n = 1; n <= coarse.tail_degree(); n += 5) {
      HighPrec extra(0);
      for (std::size_t k = coarse.size(); k < fine.size(); ++k)
        extra += fine.atoms()[k].mass * pow_int(fine.atoms()[k].location, n);
      CHECK(dd(extra) <= dd(coarse.tail_moment_bound()) * (1 + 1e-30));
    }
  };
  const QPair<HighPrec> p{HighPrec(1) / 2, HighPrec(1) / 4};
  check_refinement(asc_beta_measure(p, 12), asc_beta_measure(p, 40));
  const QPair<HighPrec> p2{HighPrec(2), HighPrec(3) / 10};
  check_refinement(asc_gamma_measure(p2, 12), asc_gamma_measure(p2, 40));
  auto coarse = quartic_pair<HighPrec>(6);
  auto fine = quartic_pair<HighPrec>(26);
  check_refinement(coarse.first, fine.first);
  check_refinement(coarse.second, fine.second);
}

TEST_CASE("moments are shared across the a <-> 1/a scaling") {
  // all orthogonalizing measures of the same polynomial family represent
  // one functional, so a^n m_n(1/a) = m_n(a); equivalently the pushforward
  // of the 1/a measure under t -> a t carries the same moments
  const HighPrec a(2), q = HighPrec(3) / 10;
  const auto small = asc_beta_measure(QPair<HighPrec>{1 / a, q}, 40);
  const auto moved = pushforward(small, Homothety<HighPrec>{a, HighPrec(0)});
  for (long n = 0; n <= 10; ++n) {
    const HighPrec lhs = pow_int(a, n) * asc_moment(QPair<HighPrec>{1 / a, q}, n);
    const HighPrec rhs = asc_moment(QPair<HighPrec>{a, q}, n);
    CHECK(dd(abs_val(lhs - rhs)) <= 1e-12 * dd(rhs));
    const auto mm = moved.moment(n);
    CHECK(dd(abs_val(mm.value - rhs)) <= 1e-12 * dd(rhs) + dd(mm.error));
  }
}

TEST_CASE("euler threshold for a = 2") {
  const auto res = euler_threshold(HighPrec(2));
  CHECK(dd(res.q0) > 0.0);
  CHECK(dd(res.q0) < 0.5);
  CHECK(res.pentagonal_ok);
  CHECK(res.prefix_monotone_true);
  // predicate holds strictly inside the threshold
  const HighPrec q = res.q0 / 2;
  const HighPrec lhs = q_pochhammer(q / 2, q, kInfiniteProduct).value +
                       q_pochhammer(2 * q, q, kInfiniteProduct).value;
  CHECK(dd(lhs) > 1.0);
}

TEST_CASE("euler threshold exists even for large a") {
  const auto res = euler_threshold(HighPrec(100));
  CHECK(dd(res.q0) > 0.0);
  CHECK(dd(res.q0) < 0.01);
  CHECK(res.pentagonal_ok);
}

TEST_CASE("pentagonal lower bound on the Euler function up to 1/2") {
  for (double q = 0.05; q <= 0.5001; q += 0.05) {
    const HighPrec e = q_pochhammer(HighPrec(q), HighPrec(q), kInfiniteProduct).value;
    CHECK(dd(e) > 1.0 - q / (1.0 - q));
  }
}

TEST_CASE("quartic pair constants") {
  // Gamma(1/4) first: reflection gives Gamma(1/4) Gamma(3/4) = pi sqrt(2)
  const HighPrec g14 = gamma_quarter<HighPrec>();
  const HighPrec refl = g14 * boost::math::tgamma(HighPrec(3) / 4);
  const HighPrec target = pi_v<HighPrec>() * sqrt(HighPrec(2));
  CHECK(dd(abs_val(refl - target) / target) <= 1e-12);
  // frozen: mpmath gives Gamma(1/4) = 3.6256099082219083119...
  CHECK(dd(g14) == doctest::Approx(3.6256099082219083).epsilon(1e-14));

  auto [zeta, rho] = quartic_pair<HighPrec>(12);
  const HighPrec K0 = g14 * g14 / (4 * sqrt(pi_v<HighPrec>()));
  CHECK(dd(K0) == doctest::Approx(1.8540746773013719).epsilon(1e-14));

  // zeta({0}) = pi/K0^2, frozen from mpmath: 0.91389316208892725...
  const HighPrec z0 = zeta.mass_at(HighPrec(0));
  CHECK(dd(abs_val(z0 - pi_v<HighPrec>() / (K0 * K0))) <= 1e-40);
  CHECK(dd(z0) == doctest::Approx(0.9138931620889273).epsilon(1e-12));
  CHECK(dd(z0) > 0.0);
  CHECK(dd(z0) < 1.0);

  const auto zm = zeta.total_mass_with_error();
  const auto rm = rho.total_mass_with_error();
  CHECK(dd(abs_val(zm.value - HighPrec(1))) <= dd(zm.error));
  CHECK(dd(abs_val(rm.value - HighPrec(1))) <= dd(rm.error));
}

TEST_CASE("quartic pair moments agree to depth 8") {
  auto [zeta, rho] = quartic_pair<HighPrec>(12);
  for (long n = 0; n <= 8; ++n) {
    const auto a = zeta.moment(n);
    const auto b = rho.moment(n);
    CHECK(dd(abs_val(a.value - b.value)) <=
          1e-8 * dd(abs_val(a.value)) + dd(a.error) + dd(b.error));
  }
}

TEST_CASE("scaled quartic Friedrichs mass exceeds 9/7 and 23/2") {
  auto [zeta, rho] = quartic_pair<HighPrec>(12);
  const HighPrec r = 1 / (HighPrec(1) - zeta.mass_at(HighPrec(0)));
  const auto beta = scale_mass(rho, r);
  const double b1 = dd(beta.atoms()[0].mass);
  CHECK(b1 > 9.0 / 7.0);
  CHECK(b1 > 23.0 / 2.0);
  // frozen from mpmath: 64 pi^3 / ((Gamma(1/4)^4 - 16 pi^2) sinh pi)
  CHECK(b1 == doctest::Approx(11.548699233128632).epsilon(1e-12));
}
