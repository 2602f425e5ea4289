#pragma once

#include <vector>

#include "rtnlab/moment_sequence.hpp"
#include "rtnlab/series.hpp"

namespace rtnlab {

/// M(z) = sum_k m_k z^k, no constant term.
FormalSeries moment_generating_series(const MomentSequence& m);

/// S(z) = (1+z)/z * M^{-1}(z), truncated to order K-1 (constant term
/// included). Requires m_1 != 0.
FormalSeries s_transform(const MomentSequence& m);

/// Unique moment sequence whose S-transform matches S to the requested
/// order. Requires a nonzero constant term.
MomentSequence moments_from_s_transform(const FormalSeries& s, int kmax);

/// Moments of the multiplicative free convolution, via S-transform
/// multiplication. Commutative and associative.
MomentSequence free_product(const MomentSequence& a, const MomentSequence& b, int kmax);

/// m_k = sum over non-crossing pi of a_pi b_{pi^{-1} tau_k}. Equals the
/// moments of MP(1) x a x b (free products).
MomentSequence nc_convolution(const MomentSequence& a, const MomentSequence& b, int kmax);

/// Marchenko-Pastur MP(t): closed-form sum for t = 1, otherwise recovered
/// from S(z) = 1/(t+z).
MomentSequence mp_moments(const Rational& t, int kmax);

/// Limit moments for a boundary region with exactly two non-intersecting
/// minimal cuts, dimension ratio t in (0,1]:
///   m_k = sum over non-crossing pi of t^{d(pi,id)} m1_{tau^{-1} pi} m2_{pi}.
MomentSequence two_cut_prediction(const MomentSequence& m1, const MomentSequence& m2,
                                  const Rational& t, int kmax);

/// Two intersecting minimal cuts: the common edges factor out as a
/// componentwise product against the two-cut result for the disjoint rests.
MomentSequence intersecting_cut_prediction(const MomentSequence& m_common, const MomentSequence& m1_rest,
                                           const MomentSequence& m2_rest, const Rational& t, int kmax);

/// Limit of the rescaled squared-negativity-spectrum measure for a tripartite
/// boundary. For r >= 1 components the n-th moment is
///   prod_i sum over non-crossing sigma of
///     mA_i,sigma mB_i,sigma mA_i,sigma^{-1}tau_n mB_i,sigma^{-1}tau_n;
/// for r = 0 the limit is the gamma_C spectrum measure itself and the caller
/// supplies those moments (flagged via use_gamma_c).
struct NegativityPrediction {
  bool use_gamma_c = false;
  MomentSequence nu;  // empty when use_gamma_c
};
NegativityPrediction negativity_prediction(const std::vector<MomentSequence>& m_a,
                                           const std::vector<MomentSequence>& m_b, int r, int nmax);

/// Unrescaled even moment m_{2n} = mC2^n * nu_n.
Rational negativity_raw_even_moment(const NegativityPrediction& p, const Rational& m_c2, int n);

}  // namespace rtnlab
