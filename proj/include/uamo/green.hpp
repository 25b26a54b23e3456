#pragma once

#include "uamo/determinants.hpp"

namespace uamo {

enum class Edge { Left, Right };
enum class GreenVariant { G, GTilde };

struct GreenEntry {
  long a = 0, b = 0, y = 0;
  Complex z;
  Edge edge = Edge::Left;
  GreenVariant variant = GreenVariant::G;  // G for odd y, G~ for even y
  Complex direct;           // entry of the inverse tridiagonal matrix
  double cramer_abs = 0.0;  // determinant form; right edge uses the modified boundary 1/conj(alpha_{y-1})
  double literal_abs = 0.0; // determinant form with native sub-window determinants as displayed
};

GreenEntry green_entry(const ModelParams& p, long a, long b, Complex z, long y, Edge edge);

// ln |(T^{-1})(i, j)| for a tridiagonal T by Cramer's rule on principal minors.
double tridiagonal_inverse_log_abs(const Tridiagonal& t, Eigen::Index i, Eigen::Index j);

struct PsiBoundary {
  Complex outer_left;   // Psi_{a-1}
  Complex left;         // Psi_a
  Complex right;        // Psi_b
  Complex outer_right;  // Psi_{b+1}
};

// Psi_y from boundary data through G_{[a,b],z}(y, a) and G_{[a,b],z}(y, b).
Complex poisson_reconstruct(const ModelParams& p, long a, long b, Complex z, const PsiBoundary& psi, long y);

// |Psi_y| divided by the determinant bound with unit constant.
double poisson_bound_ratio(const ModelParams& p, long a, long b, Complex z, const PsiBoundary& psi, long y,
                           Complex psi_y);

}  // namespace uamo
