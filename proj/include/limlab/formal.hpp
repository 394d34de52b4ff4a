#pragma once
#include <map>
#include <string>
#include <vector>

#include "limlab/order.hpp"

namespace limlab {

// Integer combination of ordered tuples e(x0,...,xs) over index elements,
// the empty tuple e() included.  Like tuples stay merged and zero
// coefficients are dropped, so map equality is expression equality.
struct FormalExpression {
  std::map<Tuple, long long> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const FormalExpression&) const = default;
};

FormalExpression formal_basis(const Tuple& t);

// a + scale * b
FormalExpression formal_add(FormalExpression a, const FormalExpression& b,
                            long long scale = 1);
FormalExpression formal_scale(FormalExpression a, long long k);

// d e(x0,...,xs) = sum_i (-1)^i e(x0,...,^xi,...,xs), extended linearly.
// d e(x) = e() and d e() = 0: the unique convention under which the cone
// identity d(g*y) = d(g)*y + (-1)^s g also covers one-element generators.
FormalExpression formal_boundary(const FormalExpression& x);

// append y to every tuple; e()*y = e(y)
FormalExpression formal_cone(const FormalExpression& x, Elem y);

// e(...) notation with raw element ids, terms in key order, for audit logs
std::string formal_to_string(const FormalExpression& x);

// Stage data of the trivializing recursion at an (s+1)-tuple tau.  a_s[i]
// holds the stage-s expression at the i-th one-deletion of tau, the
// alternating inputs to c_s.
struct AcsSet {
  std::vector<FormalExpression> a_s;
  FormalExpression c_s;
  FormalExpression s_s;
  FormalExpression a_next;
};

// A_1(r) = seed_sign * e(r, F(r)).  A_s at an s-tuple rho, s >= 2, is
// (-1)^s C_{s-1}(rho) * F(rho) with C built from the one-deletion A's.
// F is read on subsequences of rho; a missing value is a DomainError.
// Memoization lives inside the call, so the function stays pure.
FormalExpression acs_a(const Tuple& rho, const CofinalFn& F, int s,
                       int seed_sign = 1);

// C_s(tau) = e(tau) - sum_i (-1)^i A_s(tau^i), S_s(tau) = d(C_s(tau)*F(tau)),
// A_{s+1}(tau) = (-1)^{s+1} C_s(tau)*F(tau), for tau of length s+1.
AcsSet acs_recursion(const Tuple& tau, const CofinalFn& F, int s,
                     int seed_sign = 1);

// Audit of the decomposition C_s - (-1)^{s+1} S_s against the tuples
// (F(sigma_1),...,F(sigma_{s+1})) arising from deletion chains
// sigma_1 < ... < sigma_{s+1} = tau, plus the double-sum cancellation that
// drives the induction.  Terms outside the chain-image span are reported
// verbatim; per-image coefficients are reported because nothing pins them
// to +-1 a priori.
struct Lemma13Report {
  bool clean = false;
  FormalExpression residual;  // C_s - (-1)^{s+1} S_s
  std::vector<Tuple> off_terms;
  std::map<Tuple, long long> multiplicities;
  bool double_sum_zero = true;  // vacuous at s = 1
};

Lemma13Report verify_lemma13(const Tuple& tau, const CofinalFn& F, int s,
                             int seed_sign = -1);

}  // namespace limlab
