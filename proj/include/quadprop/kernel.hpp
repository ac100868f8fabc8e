#ifndef QUADPROP_KERNEL_HPP
#define QUADPROP_KERNEL_HPP

#include "quadprop/fft.hpp"
#include "quadprop/mehler.hpp"

#include <span>
#include <vector>

namespace quadprop {

struct KernelPoint {
    cdouble value;
    double prefactor_magnitude = 0.0; // |value| for real phase coefficients
    double branch_phase = 0.0;        // accumulated prefactor phase (radians)
};

// Branch-continued per-axis prefactor (2 pi i mu)^{-1/2}: principal near t -> 0+,
// multiplied by e^{-i pi/2} at each caustic crossing.
cdouble kernel_prefactor(const MehlerPhase& p);

// G_H(x, y, t) = prod_j (2 pi i mu_j)^{-1/2}
//               * exp(i sum_j alpha_j x_j^2 + beta_j x_j y_j + gamma_j y_j^2
//                             + delta_j x_j + eps_j y_j + kappa_j)
KernelPoint eval_kernel_point(std::span<const MehlerPhase> phases, std::span<const double> x,
                              std::span<const double> y);
cdouble eval_kernel(std::span<const MehlerPhase> phases, std::span<const double> x,
                    std::span<const double> y);

// H(x, y, t) = prod_j (-2 pi i mu_j)^{-1/2} exp(-i sum_j S_j(y_j, x_j, t)):
// the argument swap puts beta on x y unchanged but trades the roles of the
// quadratic/linear x and y coefficients. Equals conj(G_H(y, x, t)).
cdouble eval_inverse_kernel(std::span<const MehlerPhase> phases, std::span<const double> x,
                            std::span<const double> y);

// Two-time kernel of U(t) U^{-1}(s), per-axis product form. The prefactor is
// assembled from the Gaussian z-integral of G(x,z,t) H(z,y,s), which fixes its
// branch consistently with the single-time kernels.
cdouble eval_two_time_kernel(std::span<const MehlerPhase> at_t, std::span<const MehlerPhase> at_s,
                             std::span<const double> x, std::span<const double> y);

enum class Table1 { G0, G1, G2, G3, G4, G6, G7, G8, GCK };

struct Table1Params {
    double E = 1.0;      // G1
    double omega = 2.0;  // G4
    double lambda = 0.6; // G7, GCK
    double omega0 = 1.0; // G7, GCK
    double k = 1.0;      // G8
};

// Literal closed forms (1-d), with the flagged print corrections:
//   G0/G1 prefactor (2 pi i t)^{-1/2}; G2/G3 phase denominators 2 sin / 2 sinh;
//   G4 prefactor sqrt(omega/(2 pi i sin omega t)) and phase denominator 2 sin.
cdouble table1_kernel(Table1 which, double x, double y, double t, const Table1Params& p = {});

Table1 table1_from_name(const std::string& name);

} // namespace quadprop

#endif
