#include "limlab/formal.hpp"

#include <set>
#include <sstream>
#include <utility>

#include "limlab/errors.hpp"

namespace limlab {
namespace {

void add_term(FormalExpression& e, const Tuple& t, long long c) {
  if (c == 0) return;
  auto it = e.terms.find(t);
  if (it == e.terms.end()) {
    e.terms.emplace(t, c);
    return;
  }
  it->second += c;
  if (it->second == 0) e.terms.erase(it);
}

std::string tuple_body(const Tuple& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ",";
    os << t[i];
  }
  return os.str();
}

Elem f_value(const CofinalFn& F, const Tuple& t) {
  if (!F.defined(t)) throw DomainError("witness value missing at (" + tuple_body(t) + ")");
  return F.at(t);
}

Tuple drop(const Tuple& t, int i) {
  Tuple out;
  out.reserve(t.size() - 1);
  for (int j = 0; j < static_cast<int>(t.size()); ++j)
    if (j != i) out.push_back(t[j]);
  return out;
}

using Memo = std::map<Tuple, FormalExpression>;

FormalExpression a_of(const Tuple& rho, const CofinalFn& F, int seed_sign,
                      Memo& memo);

// C at a tuple of length s+1, built from the stage-s values at its faces
FormalExpression c_of(const Tuple& tau, const CofinalFn& F, int seed_sign,
                      Memo& memo) {
  FormalExpression c = formal_basis(tau);
  for (int i = 0; i < static_cast<int>(tau.size()); ++i) {
    long long sign = (i % 2 == 0) ? 1 : -1;
    c = formal_add(c, a_of(drop(tau, i), F, seed_sign, memo), -sign);
  }
  return c;
}

FormalExpression a_of(const Tuple& rho, const CofinalFn& F, int seed_sign,
                      Memo& memo) {
  auto it = memo.find(rho);
  if (it != memo.end()) return it->second;
  FormalExpression out;
  if (rho.size() == 1) {
    Tuple pair = {rho[0], f_value(F, rho)};
    add_term(out, pair, seed_sign);
  } else {
    int s = static_cast<int>(rho.size());  // this is A_s at an s-tuple
    out = formal_cone(c_of(rho, F, seed_sign, memo), f_value(F, rho));
    if (s % 2 != 0) out = formal_scale(std::move(out), -1);  // (-1)^s
  }
  memo.emplace(rho, out);
  return out;
}

// every (F(sigma_1),...,F(sigma_{s+1})) over deletion chains ending at tau
void chain_images(const Tuple& t, const CofinalFn& F, Tuple& rev,
                  std::set<Tuple>& out) {
  rev.push_back(f_value(F, t));
  if (t.size() == 1) {
    Tuple image(rev.rbegin(), rev.rend());
    out.insert(image);
  } else {
    for (int i = 0; i < static_cast<int>(t.size()); ++i)
      chain_images(drop(t, i), F, rev, out);
  }
  rev.pop_back();
}

}  // namespace

FormalExpression formal_basis(const Tuple& t) {
  FormalExpression e;
  e.terms.emplace(t, 1);
  return e;
}

FormalExpression formal_add(FormalExpression a, const FormalExpression& b,
                            long long scale) {
  for (const auto& [t, c] : b.terms) add_term(a, t, c * scale);
  return a;
}

FormalExpression formal_scale(FormalExpression a, long long k) {
  if (k == 0) return FormalExpression{};
  for (auto& [t, c] : a.terms) c *= k;
  return a;
}

FormalExpression formal_boundary(const FormalExpression& x) {
  FormalExpression out;
  for (const auto& [t, c] : x.terms) {
    for (int i = 0; i < static_cast<int>(t.size()); ++i)
      add_term(out, drop(t, i), (i % 2 == 0) ? c : -c);
  }
  return out;
}

FormalExpression formal_cone(const FormalExpression& x, Elem y) {
  FormalExpression out;
  for (const auto& [t, c] : x.terms) {
    Tuple ext = t;
    ext.push_back(y);
    add_term(out, ext, c);
  }
  return out;
}

std::string formal_to_string(const FormalExpression& x) {
  if (x.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, c] : x.terms) {
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    long long mag = c < 0 ? -c : c;
    if (mag != 1) os << mag << "*";
    os << "e(" << tuple_body(t) << ")";
    first = false;
  }
  return os.str();
}

FormalExpression acs_a(const Tuple& rho, const CofinalFn& F, int s,
                       int seed_sign) {
  if (static_cast<int>(rho.size()) != s || s < 1)
    throw DomainError("stage must match the tuple length");
  Memo memo;
  return a_of(rho, F, seed_sign, memo);
}

AcsSet acs_recursion(const Tuple& tau, const CofinalFn& F, int s,
                     int seed_sign) {
  if (s < 1 || static_cast<int>(tau.size()) != s + 1)
    throw DomainError("the recursion at stage s expects an (s+1)-tuple");
  Memo memo;
  AcsSet set;
  set.c_s = formal_basis(tau);
  for (int i = 0; i <= s; ++i) {
    set.a_s.push_back(a_of(drop(tau, i), F, seed_sign, memo));
    long long sign = (i % 2 == 0) ? 1 : -1;
    set.c_s = formal_add(set.c_s, set.a_s.back(), -sign);
  }
  FormalExpression cone = formal_cone(set.c_s, f_value(F, tau));
  set.s_s = formal_boundary(cone);
  set.a_next = (s % 2 != 0) ? cone : formal_scale(cone, -1);  // (-1)^{s+1}
  return set;
}

Lemma13Report verify_lemma13(const Tuple& tau, const CofinalFn& F, int s,
                             int seed_sign) {
  AcsSet set = acs_recursion(tau, F, s, seed_sign);
  Lemma13Report rep;
  long long sgn = (s % 2 != 0) ? 1 : -1;  // (-1)^{s+1}
  rep.residual = formal_add(set.c_s, set.s_s, -sgn);

  std::set<Tuple> images;
  Tuple rev;
  chain_images(tau, F, rev, images);
  for (const auto& [t, c] : rep.residual.terms) {
    if (images.count(t))
      rep.multiplicities.emplace(t, c);
    else
      rep.off_terms.push_back(t);
  }
  rep.clean = rep.off_terms.empty();

  if (s >= 2) {
    Elem ftau = f_value(F, tau);
    Memo memo;
    FormalExpression acc;
    for (int i = 0; i <= s; ++i) {
      Tuple ti = drop(tau, i);
      for (int j = 0; j < s; ++j) {
        long long sign = ((i + j) % 2 == 0) ? 1 : -1;
        FormalExpression part =
            formal_cone(a_of(drop(ti, j), F, seed_sign, memo), ftau);
        acc = formal_add(acc, part, sign);
      }
    }
    rep.double_sum_zero = acc.is_zero();
  }
  return rep;
}

}  // namespace limlab
