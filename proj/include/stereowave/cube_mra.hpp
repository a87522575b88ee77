#pragma once

#include <cstdint>
#include <vector>

#include "stereowave/daubechies.hpp"

namespace stereowave {

//! Dyadic cube I = 2^-j (k + [0,1]^d), side length 2^-j. d = 2 here.
struct DyadicCube {
  int j = 0;
  int k1 = 0;
  int k2 = 0;
};

//! Admissible cube enlargement: an integer k >= 1 or a dyadic fraction 2^-k.
class Enlargement {
 public:
  static Enlargement integer(int k);
  static Enlargement dyadic(int k);  // value 2^-k
  double value() const { return value_; }

 private:
  explicit Enlargement(double v) : value_(v) {}
  double value_;
};

//! How the base level j0 is determined: `strict` uses the full support
//! length 2N-1; `effective` replaces it with the length of the smallest
//! interval holding all values above threshold * max|phi|.
struct SupportRule {
  enum class Kind { Strict, Effective };
  Kind kind = Kind::Strict;
  double threshold = 1e-3;

  static SupportRule strict() { return {Kind::Strict, 0.0}; }
  static SupportRule effective(double thr = 1e-3) { return {Kind::Effective, thr}; }
};

//! Smallest integer j with (2N-1) 2^-j <= epsilon/2.
int compute_j0(int order, double epsilon);

//! Same with an arbitrary support length (used by the effective rule).
int compute_j0_for_length(double support_length, double epsilon);

//! Per-coordinate index range of the cubes at one level whose tensor wavelet
//! supports fit inside J_eps = [-1-eps, 1+eps]^d. The range is the same for
//! every vertex e since supp psi^e = [0, 2N-1]^d.
struct LevelRange {
  int j = 0;
  int kmin = 0;
  int kmax = 0;

  int count() const { return kmax >= kmin ? kmax - kmin + 1 : 0; }
  bool contains(int k1, int k2) const {
    return k1 >= kmin && k1 <= kmax && k2 >= kmin && k2 <= kmax;
  }
  //! Row-major position of (k1, k2) in the materialized level.
  std::int64_t index(int k1, int k2) const {
    return static_cast<std::int64_t>(k1 - kmin) * count() + (k2 - kmin);
  }
  std::int64_t cells() const {
    return static_cast<std::int64_t>(count()) * count();
  }
};

//! Index sets D_j(e) of the localized wavelet system S(J, eps) on the
//! enlarged cube, d = 2. Immutable after construction; reads are
//! thread-safe.
class LocalizedSystem {
 public:
  //! Materializes levels j0..max_level. The rule only moves the base level;
  //! membership in D_j always uses the strict support-inclusion predicate.
  LocalizedSystem(const WaveletTable& table, Enlargement eps, int max_level,
                  SupportRule rule = SupportRule::strict());

  int order() const { return order_; }
  double epsilon() const { return epsilon_; }
  int j0() const { return j0_; }
  int j0_strict() const { return j0_strict_; }
  int max_level() const { return max_level_; }
  SupportRule rule() const { return rule_; }

  //! Index range at level j; throws outside [j0, max_level].
  const LevelRange& level(int j) const;

  //! All cubes of D_j(e); the listing is independent of e.
  std::vector<DyadicCube> enumerate(int j) const;

 private:
  int order_;
  double epsilon_;
  SupportRule rule_;
  int j0_strict_;
  int j0_;
  int max_level_;
  std::vector<LevelRange> ranges_;
};

}  // namespace stereowave
