#pragma once

#include <string>
#include <vector>

#include "fplab/coefficients.hpp"
#include "fplab/mollify.hpp"

namespace fplab {

enum class CommutatorKind { R, R1, R2, S, S1 };

const char* to_string(CommutatorKind k);
CommutatorKind commutator_kind_from_string(const std::string& name);

struct CommutatorField {
  CommutatorKind kind = CommutatorKind::R;
  double delta = 0.0;
  KernelFamily family = KernelFamily::Bump;
  std::string label;
  std::vector<ScalarField> slices;

  const ScalarField& field() const { return slices.front(); }
};

struct RSplit {
  CommutatorField r, r1, r2;
};

/// r = div(b w^d) - div(b w)*rho, r1 = b.grad w^d - (b.grad w)*rho,
/// r2 = w^d div b - (w div b)*rho, with w^d = w*rho.
RSplit commutator_r(const VectorField& b, const ScalarField& w, const Mollifier& m);

/// s = sum_ij [d_ij(a_ij w)]*rho - d_ij(a_ij w^d)
CommutatorField commutator_s(const MatrixField& a, const ScalarField& w, const Mollifier& m);

/// s1 = sum_i d_i( sum_j a_ij d_j w^d - (a_ij d_j w)*rho )
CommutatorField commutator_s1(const MatrixField& a, const ScalarField& w, const Mollifier& m);

/// -sum_ij d_j w d_i a_ij
ScalarField s1_limit(const MatrixField& a, const ScalarField& w);

/// r1 by direct quadrature of sum_z rho(z)(b(x) - b(x-z)).grad w(x-z) over the
/// kernel stencil; no FFT convolution involved.
CommutatorField kernel_form_r(const VectorField& b, const ScalarField& w, const Mollifier& m);

/// One commutator of the given kind evaluated on every time slice of c.
CommutatorField commutator_series(CommutatorKind kind, const CoefficientSet& c,
                                  const ScalarField& w, const Mollifier& m);

}  // namespace fplab
