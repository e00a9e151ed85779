#pragma once

// Post-hoc checks tying a trained memory to the three navigation cases:
// (i) one input state, (ii) one input basis, (iii) random input bases.

#include <cstdint>
#include <string>

#include "qmem/memory.hpp"

namespace qmem {

enum class NavigationCase { single_state, single_basis, random_bases };

const char* navigation_case_name(NavigationCase c);

struct NavigationReport {
  NavigationCase case_id = NavigationCase::single_state;
  double achieved = 0;            // success probability, or fidelity for random bases
  double gradient_norm = 0;       // max-norm of the analytic gradient at the end
  long cycles = 0;
  double freedom_residual = 0;    // distance to the phase-freedom class
  double distance_sq = 0;
  double avg_fidelity = 0;
};

/// Max-norm of dp(a|s)/dh at the snapshot's controls.
double stationary_point_check(const MemorySnapshot& snap, const HamiltonianStack& stack,
                              const DensityMatrix& rho, const CMatrix& pi);

/// Frobenius distance from U to the class U_T B_A D2 B_A^dagger B_S D1 B_S^dagger
/// with D1, D2 diagonal unitaries. basis_s and basis_a hold basis vectors as
/// columns; the measurement basis is U_T basis_a.
double basis_freedom_check(const CMatrix& u, const CMatrix& u_target, const CMatrix& basis_s,
                           const CMatrix& basis_a);

struct NavigationDemoConfig {
  NavigationCase case_id = NavigationCase::single_state;
  std::uint64_t seed = 1;
  long cycles = 0;    // 0 selects a per-case default
  int controls = 0;   // 0 selects a per-case default
  double alpha = 0;   // 0 selects a per-case default
};

/// Trains one glow agent on the case's task and reports the end state.
NavigationReport run_navigation_demo(const NavigationDemoConfig& cfg);

std::string navigation_csv_header();
std::string navigation_csv_row(const NavigationReport& r);

}  // namespace qmem
