#include "fplab/labels.hpp"

#include "fplab/error.hpp"

namespace fplab {

const std::vector<ResultLabel>& result_labels() {
  static const std::vector<ResultLabel> table{
      {"commutator_null", "commutator null cases",
       "constant drift kills r, constant diffusion kills s and s1"},
      {"transport_commutator_l1", "transport commutator in L1",
       "||r|| in L1 decreases along the delta ladder"},
      {"transport_commutator_split", "transport commutator splitting", "r = r1 + r2 node-wise"},
      {"transport_commutator_h-1", "transport commutator in L2 H-1",
       "||r|| in L2 H-1 decreases monotonically with final/initial < 0.5"},
      {"diffusion_commutator_cancellation", "diffusion commutator cancellation",
       "||s|| in L1 at the finest delta is below 10% of ||s1_limit|| in L1"},
      {"diffusion_commutator_limit", "pointwise limit of s1",
       "||s1 - s1_limit|| in L1 within 5% of ||s1_limit|| in L1"},
      {"diffusion_commutator_separation", "diffusion commutator norm separation",
       "||s1|| in L2 H-1 decays (final/initial < 0.5) while ||s1|| in L1 stays (> 0.8)"},
      {"energy_estimate", "L^q energy estimate",
       "||u(t)||_q <= ||u0||_q exp(C(q) int ||(div b~)^-||_inf), C(q) = (q-1)/q"},
      {"parabolic_budget", "parabolic energy budget",
       "||u||^2 + alpha int ||grad u||^2 <= ||u0||^2 + int ||(div b~)^-||_inf ||u||^2"},
      {"renormalization", "truncated renormalization trace",
       "int beta_M(u(t)) obeys the Gronwall bound"},
      {"regularity", "uniform gradient budget under refinement",
       "||grad u^h|| in L2 L2 has successive ratios <= 1.1"},
      {"stability", "mollified-coefficient stability (evidence for uniqueness)",
       "||u^delta_k - u^delta_k+1|| in Linf L2 decreases monotonically"},
      {"form_equivalence", "equivalence of the two equation forms",
       "||u_fp - u_fp_div|| converges at rate >= 1, exact for constant a"},
      {"forward_law", "SDE forward law",
       "histogram of Euler-Maruyama particles matches the PDE density in L1"},
      {"mass_conservation", "mass conservation", "total mass drift within solver tolerance"},
      {"regime_existence", "existence of distributional solutions", "1/p + 1/q <= 1"},
      {"regime_parabolic_uniqueness", "uniqueness of parabolic solutions", "1/p + 1/q = 1/2"},
      {"regime_regularity", "parabolic regularity of distributional solutions",
       "1/p + 1/q <= 1/2"},
      {"regime_distributional_uniqueness", "uniqueness of distributional solutions in L2",
       "p = inf and grad a bounded"},
      {"regime_locally_parabolic_uniqueness", "uniqueness among locally parabolic solutions",
       "q > 2 and 1/p + 1/q = 1/2"},
      {"regime_global_h1", "global H1 regularity", "1/p + 1/q = 1/2 and 2 < q <= 2d/(d-2)"},
  };
  return table;
}

const ResultLabel& result_label(std::string_view id) {
  for (const auto& l : result_labels()) {
    if (l.id == id) return l;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown result label '" + std::string(id) + "'");
}

}  // namespace fplab
