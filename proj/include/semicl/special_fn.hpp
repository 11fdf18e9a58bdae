#pragma once

namespace semicl {

enum class SpecialKind { Ai, AiPrime, BesselJ1 };

/// Airy Ai, Ai' or Bessel J1 at a real argument. Throws std::domain_error on
/// non-finite input.
double eval_special(SpecialKind kind, double z);

double airy_ai(double z);
double airy_ai_prime(double z);
double bessel_j1(double x);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

namespace testing {
// Perturbs the stored Airy initial-value constants so that suites depending on
// them must notice. Used by the selftest fault-injection path only.
void set_special_table_corruption(bool on);
bool special_table_corrupted();
}  // namespace testing

}  // namespace semicl
