#pragma once

// Exact feasibility of small systems of rational linear (in)equalities by
// Fourier-Motzkin elimination, with a witness point recovered by
// back-substitution. Intended for desk-scale systems (a handful of variables,
// a few dozen constraints).

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "toric/lattice.hpp"

namespace toric {

enum class Relation { GreaterEqual, Greater, Equal };

/// coeffs . x  (>= | > | =)  rhs
struct LinearConstraint {
  RatVector coeffs;
  Rational rhs;
  Relation rel = Relation::GreaterEqual;
};

namespace detail {

struct Ineq {
  RatVector a;
  Rational b;
  bool strict = false;
};

inline bool all_zero(const RatVector& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

// Scales so the first nonzero coefficient has absolute value one.
inline void normalize(Ineq& q) {
  for (const auto& x : q.a) {
    if (x == 0) continue;
    Rational s = abs(x);
    for (auto& y : q.a) y /= s;
    q.b /= s;
    return;
  }
}

// Drops trivially satisfied constant rows and duplicate left-hand sides
// (keeping the tightest). Returns false on a violated constant row.
inline bool prune(std::vector<Ineq>& qs) {
  std::map<std::vector<std::string>, std::size_t> seen;
  std::vector<Ineq> out;
  for (auto& q : qs) {
    if (all_zero(q.a)) {
      if (q.strict ? !(q.b < 0) : !(q.b <= 0)) return false;
      continue;
    }
    normalize(q);
    std::vector<std::string> key;
    key.reserve(q.a.size());
    for (const auto& x : q.a) key.push_back(x.get_str());
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), out.size());
      out.push_back(std::move(q));
      continue;
    }
    Ineq& kept = out[it->second];
    if (q.b > kept.b || (q.b == kept.b && q.strict)) {
      kept.b = q.b;
      kept.strict = q.strict;
    }
  }
  qs = std::move(out);
  return true;
}

struct Substitution {
  std::size_t var;
  RatVector coeffs;  // x_var = rhs - sum coeffs[j] x_j  (coeffs[var] == 0)
  Rational rhs;
};

}  // namespace detail

/// Returns a point satisfying every constraint, or nullopt if none exists.
/// Deterministic: identical inputs give identical witnesses.
inline std::optional<RatVector> find_feasible_point(std::size_t n,
                                                    const std::vector<LinearConstraint>& cons) {
  using detail::Ineq;
  std::vector<Ineq> ineqs;
  std::vector<std::pair<RatVector, Rational>> eqs;
  for (const auto& c : cons) {
    if (c.coeffs.size() != n) fail(ErrorCode::DimensionMismatch, "constraint dimension");
    if (c.rel == Relation::Equal)
      eqs.emplace_back(c.coeffs, c.rhs);
    else
      ineqs.push_back({c.coeffs, c.rhs, c.rel == Relation::Greater});
  }

  // Eliminate equalities by substitution.
  std::vector<detail::Substitution> subs;
  std::vector<bool> eliminated(n, false);
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    auto [a, b] = eqs[e];
    std::size_t p = n;
    for (std::size_t j = 0; j < n; ++j)
      if (a[j] != 0) {
        p = j;
        break;
      }
    if (p == n) {
      if (b != 0) return std::nullopt;
      continue;
    }
    Rational ap = a[p];
    RatVector coeffs(n);
    for (std::size_t j = 0; j < n; ++j) coeffs[j] = (j == p) ? Rational(0) : Rational(a[j] / ap);
    Rational rhs = b / ap;
    auto substitute = [&](RatVector& row, Rational& r) {
      if (row[p] == 0) return;
      Rational f = row[p];
      for (std::size_t j = 0; j < n; ++j) row[j] -= f * coeffs[j];
      row[p] = 0;
      r -= f * rhs;
    };
    for (std::size_t f = e + 1; f < eqs.size(); ++f) substitute(eqs[f].first, eqs[f].second);
    for (auto& q : ineqs) substitute(q.a, q.b);
    for (auto& s : subs) {
      if (s.coeffs[p] == 0) continue;
      Rational f = s.coeffs[p];
      for (std::size_t j = 0; j < n; ++j) s.coeffs[j] -= f * coeffs[j];
      s.coeffs[p] = 0;
      s.rhs -= f * rhs;
    }
    subs.push_back({p, std::move(coeffs), std::move(rhs)});
    eliminated[p] = true;
  }

  if (!detail::prune(ineqs)) return std::nullopt;

  // Fourier-Motzkin over the remaining variables, last index first.
  std::vector<std::size_t> order;
  for (std::size_t j = n; j-- > 0;)
    if (!eliminated[j]) order.push_back(j);
  std::vector<std::vector<Ineq>> stages;
  for (std::size_t var : order) {
    stages.push_back(ineqs);
    std::vector<Ineq> lower, upper, next;
    for (auto& q : ineqs) {
      if (q.a[var] > 0)
        lower.push_back(q);
      else if (q.a[var] < 0)
        upper.push_back(q);
      else
        next.push_back(q);
    }
    for (const auto& lo : lower)
      for (const auto& up : upper) {
        // lo: a x >= b with a_var > 0; up: a' x >= b' with a'_var < 0.
        Rational s = lo.a[var], t = -up.a[var];
        Ineq c;
        c.a.resize(n);
        for (std::size_t j = 0; j < n; ++j) c.a[j] = t * lo.a[j] + s * up.a[j];
        c.a[var] = 0;
        c.b = t * lo.b + s * up.b;
        c.strict = lo.strict || up.strict;
        next.push_back(std::move(c));
      }
    if (!detail::prune(next)) return std::nullopt;
    ineqs = std::move(next);
  }
  for (const auto& q : ineqs)
    if (q.strict ? !(q.b < 0) : !(q.b <= 0)) return std::nullopt;

  // Back-substitution.
  RatVector x(n, Rational(0));
  std::vector<bool> assigned(n, false);
  for (std::size_t s = order.size(); s-- > 0;) {
    const std::size_t var = order[s];
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& q : stages[s]) {
      if (q.a[var] == 0) continue;
      Rational rest = q.b;
      for (std::size_t j = 0; j < n; ++j)
        if (j != var && q.a[j] != 0) rest -= q.a[j] * x[j];
      Rational bound = rest / q.a[var];
      if (q.a[var] > 0) {
        if (!lo || bound > *lo || (bound == *lo && q.strict)) {
          lo = bound;
          lo_strict = q.strict;
        }
      } else {
        if (!hi || bound < *hi || (bound == *hi && q.strict)) {
          hi = bound;
          hi_strict = q.strict;
        }
      }
    }
    Rational v = 0;
    if (lo && hi)
      v = (*lo == *hi) ? *lo : Rational((*lo + *hi) / 2);
    else if (lo)
      v = lo_strict ? Rational(*lo + 1) : *lo;
    else if (hi)
      v = hi_strict ? Rational(*hi - 1) : *hi;
    x[var] = v;
    assigned[var] = true;
  }
  for (std::size_t i = subs.size(); i-- > 0;) {
    const auto& sub = subs[i];
    Rational v = sub.rhs;
    for (std::size_t j = 0; j < n; ++j)
      if (sub.coeffs[j] != 0) v -= sub.coeffs[j] * x[j];
    x[sub.var] = v;
  }
  return x;
}

inline bool is_feasible(std::size_t n, const std::vector<LinearConstraint>& cons) {
  return find_feasible_point(n, cons).has_value();
}

}  // namespace toric
