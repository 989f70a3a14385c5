#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "k3e/common.hpp"

namespace k3e {

using BigInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<long long>;

// An integral lattice presented by a symmetric Gram matrix.
class IntegralLattice {
 public:
  IntegralLattice(int rank, std::vector<long long> gram);

  int rank() const { return rank_; }
  long long operator()(int i, int j) const {
    return gram_[static_cast<std::size_t>(i) * static_cast<std::size_t>(rank_) +
                 static_cast<std::size_t>(j)];
  }
  const std::vector<long long>& gram() const { return gram_; }

  // <v,v> even for all integer v; equivalent to an even diagonal.
  bool is_even() const;

 private:
  int rank_;
  std::vector<long long> gram_;
};

// The hyperbolic plane U, Gram [[0,1],[1,0]].
IntegralLattice lattice_u();
// The E8 root lattice with reversed sign: the Cartan matrix negated.
IntegralLattice lattice_e8_minus();
// The K3 lattice L = E8(-1) + E8(-1) + U + U + U, rank 22.
IntegralLattice k3_lattice();

IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b);

// (positive, negative) inertia counts; throws NumericError on a degenerate
// Gram matrix.  Exact (rational congruence diagonalization).
std::pair<int, int> signature(const IntegralLattice& lat);

// Exact determinant of the Gram matrix.
BigInt determinant(const IntegralLattice& lat);

long long pairing(const IntegralLattice& lat, std::span<const long long> v,
                  std::span<const long long> w);

// Bilinear extension to the complexification (no conjugation).
Complex pairing_complex(const IntegralLattice& lat, std::span<const Complex> x,
                        std::span<const Complex> y);

// A point of P(L (x) C) for the K3 lattice: 22 complex coordinates up to a
// nonzero scalar.  Stored normalized with max|coordinate| = 1.
class PeriodPoint {
 public:
  explicit PeriodPoint(std::vector<Complex> omega);
  const std::vector<Complex>& coords() const { return omega_; }

 private:
  std::vector<Complex> omega_;
};

// |<w,w>| <= tol * (l1-weighted magnitude of the pairing).  With
// require_positivity also demands <w, conj w> > 0.
bool is_on_period_quadric(const PeriodPoint& omega, double tol,
                          bool require_positivity = false);

struct NeronSeveri {
  std::vector<IntVector> basis;  // integer vectors in the K3 lattice
  IntegralLattice lattice;       // induced Gram matrix (rank may be 0)
  int rank() const { return static_cast<int>(basis.size()); }
};

// Integer vectors pairing to (numerically) zero against both Re omega and
// Im omega, as a basis with its induced Gram matrix.  Coordinates that admit
// a rational reading (denominator <= 1e6, relative error <= 1e-12 against
// the normalized period point) are handled by an exact integer kernel;
// otherwise short near-relations are searched by lattice reduction, each
// returned vector certified against the floating constraints |<v, Re w>| and
// |<v, Im w>| <= tol.
NeronSeveri neron_severi(const PeriodPoint& omega, double tol = 1e-9);

// Is v in the Z-span of basis?  Exact.
bool in_span(const std::vector<IntVector>& basis, const IntVector& v);

struct HyperbolicPlaneSearch {
  enum class Status {
    found,
    rank_obstruction,         // rank < 2: U cannot embed
    definiteness_obstruction, // no nonzero isotropic vectors at all
    not_found_up_to_bound,    // best-effort search exhausted; not a proof
  };
  Status status;
  std::optional<std::pair<IntVector, IntVector>> pair;  // (e, f) when found
  int search_bound;
};

// Look for integer vectors e, f with <e,e> = <f,f> = 0 and <e,f> = 1.
// Candidate isotropic vectors are enumerated over a bounded coordinate box
// (supports of size <= 3, entries up to search_bound, plus a full box on
// small ranks); f is then solved exactly and corrected along e.
HyperbolicPlaneSearch contains_hyperbolic_plane(const IntegralLattice& lat,
                                                int search_bound);

}  // namespace k3e
