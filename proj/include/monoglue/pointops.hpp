#pragma once

#include <functional>

#include "monoglue/core.hpp"
#include "monoglue/geometry.hpp"

namespace monoglue {

// Pointwise differential operators acting on field evaluators. Derivatives
// use 4th-order central stencils with a caller-controlled step, so the same
// code serves residual evaluation, the linearized complex, and both
// Weitzenboeck identity checks on any supported metric.

using PairEval = std::function<void(const Vec3&, Su2Form&, Su2&)>;
using SectionEval = std::function<Section(const Vec3&)>;
using OneFormEval = std::function<Su2Form(const Vec3&)>;
using ScalarSu2Eval = std::function<Su2(const Vec3&)>;

class PointOps {
 public:
  PointOps(const ManifoldModel& model, PairEval base, double kappa, double step);

  double kappa() const { return kappa_; }
  double step() const { return h_; }
  void set_step(double h) { h_ = h; }

  void base(const Vec3& x, Su2Form& A, Su2& Phi) const { base_(x, A, Phi); }

  Su2Form curvature_star(const Vec3& x) const;   // *F_A of the base pair
  Su2Form grad_phi(const Vec3& x) const;         // nabla_A Phi of the base pair
  Su2Form residual(const Vec3& x) const;         // *F_A - nabla_A Phi
  double residual_norm(const Vec3& x) const;
  double energy_density(const Vec3& x) const;    // (|nabla Phi|^2 + |F|^2)/2

  Su2Form d2(const SectionEval& u, const Vec3& x) const;
  Section d2_adj(const OneFormEval& b, const Vec3& x) const;
  Section d1(const ScalarSu2Eval& xi, const Vec3& x) const;
  Su2 d1_adj(const SectionEval& u, const Vec3& x) const;

  Section D(const SectionEval& u, const Vec3& x) const;
  Section Dstar(const SectionEval& u, const Vec3& x) const;
  Section DDstar(const SectionEval& u, const Vec3& x) const;
  Section DstarD(const SectionEval& u, const Vec3& x) const;
  Section rough_laplacian(const SectionEval& u, const Vec3& x) const;

  // b^W(a, phi) = ( *[a ^ b] - [b, phi] , g^{ij} [b_i, a_j] )
  Section bW(const Su2Form& b, const Section& u, const Vec3& x) const;

  struct WeitzResult {
    double resid_first = 0;   // |DD*u - (rough - [[u,Phi],Phi] + Ric^W + e0^W)|
    double resid_second = 0;  // |D*Du - DD*u - 2 (dPhi)^W|
    double scale = 1;         // comparison magnitude
  };
  WeitzResult weitzenbock(const SectionEval& u, const Vec3& x) const;

  double section_norm(const Section& u, const Vec3& x) const;
  double form_norm(const Su2Form& b, const Vec3& x) const;

 private:
  const ManifoldModel* model_;
  PairEval base_;
  double kappa_;
  double h_;
};

// gauge transform about a fixed algebra axis by a position-dependent angle
PairEval gauge_transform(PairEval base, double kappa, const Vec3& axis,
                         std::function<double(const Vec3&)> angle,
                         std::function<Vec3(const Vec3&)> grad_angle);
SectionEval gauge_transform_section(SectionEval u, const Vec3& axis,
                                    std::function<double(const Vec3&)> angle);

}  // namespace monoglue
