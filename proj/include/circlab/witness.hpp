#pragma once

// Explicit witnesses: the continuum family x^zeta over a weakly-dli witness
// set, the exceptional-index families B_k of the two non-membership constructions,
// the factorization u = a_k v, and the Arbault-style escaping point.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circlab/circle.hpp"
#include "circlab/density.hpp"
#include "circlab/numeric.hpp"
#include "circlab/sequences.hpp"

namespace circlab {

enum class RowStatus { certified, violation, undecided };

std::string to_string(RowStatus s);

struct CertRow {
  std::uint64_t index = 0;  // derived index i (or selection step for the Arbault witness)
  std::uint64_t k = 0;
  std::uint64_t r = 0;
  BoundInterval enclosure;  // {d_i x} (Case I), ||d_i x|| (Case II), {u x} (Arbault)
  RowStatus status = RowStatus::undecided;
  std::uint64_t depth = 0;
};

// Certified fraction at a block-end horizon N = n_k - 1.
struct BlockEndFraction {
  std::uint64_t k = 0;
  std::uint64_t horizon = 0;
  std::uint64_t certified = 0;
  Rational certified_fraction;
  Rational lifted_density;  // |L(A_case) ∩ [1, N]| / N
};

struct WitnessReport {
  std::string construction;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<CirclePoint> point;
  std::optional<NatSet> set;
  std::vector<CertRow> rows;
  std::uint64_t certified = 0;
  std::uint64_t violations = 0;
  std::uint64_t undecided = 0;
  std::vector<BlockEndFraction> block_ends;
  std::vector<std::string> notes;
};

// x^zeta with c_n = 1 on B^zeta = {u_{2k + s_k} + 1 : 1 <= k <= |zeta|}, where
// the listed set A = {u_1 + 1 < u_2 + 1 < ...} needs 2|zeta| + 2 elements.
CirclePoint continuum_family_point(const NatSet& a, const std::vector<bool>& zeta,
                                   std::shared_ptr<const DerivedSeq> seq);

// B = [1, n_{u_m - m + 1} - 1] ∪ U_{j >= m} [n_{u_j - m + 1}, n_{u_j + 1} - 1]
// over the listed u_j. Off B, {d_i x} <= 1/2^{m-2} for any x with supp(x) ⊆ A.
NatSet continuum_exceptional_set(const std::vector<std::uint64_t>& u, std::uint64_t m, const DerivedSeq& seq);

enum class Branch { cofinite, non_cofinite };

std::string to_string(Branch b);

struct Partition {
  Branch branch = Branch::cofinite;
  std::uint64_t horizon = 0;  // base-index horizon of the scan
  NatSet a;                   // supp \ supp_q, or supp \ (supp - 1)
  NatSet a1;                  // 0 < c_n/b_n < 1/m_0
  NatSet a2;                  // 1 - 1/n_0 < c_n/b_n < 1
  NatSet a3;                  // 1/m_0 <= c_n/b_n <= 1 - 1/n_0
};

// Requires m_0 > 9, n_0 > 12 and an infinite declared support; the branch is
// read from the declared support extent.
Partition nonmembership_partition(const CirclePoint& x, std::uint64_t m0, std::uint64_t n0, std::uint64_t horizon);

enum class BadCase { one, two };

std::string to_string(BadCase c);

// B' = U_{k in A_case} B_k ∩ [1, horizon] (horizon is a derived index).
// Case I:  B_k = U_{m=0}^{floor(c_k/m_0)} [n_{k-1} + floor((m + 1/m_0) b_k/c_k),
//                                          n_{k-1} + floor((m + 4/m_0) b_k/c_k) - 1]
// Case II: B_k = U_{m=0}^{floor(D/(2n_0))} [n_{k-1} + floor((m + 8/n_0) b_k/D),
//                                           n_{k-1} + floor((m + 12/n_0) b_k/D) - 1], D = b_k - c_k
NatSet bad_interval_family(const Partition& part, const CirclePoint& x, BadCase which, std::uint64_t m0,
                           std::uint64_t n0, std::uint64_t horizon);

// Smallest base-index horizon K with n_K > horizon (covers every block meeting [1, horizon]).
std::uint64_t covering_block(const DerivedSeq& seq, std::uint64_t horizon);

// Case I band: {d_i x} ∈ [1/m_0, 9/m_0].
// Case II band: ||d_i x|| >= min{3/(2n_0), 1 - 12/n_0} (co-finite branch) or
//               min{7/(4n_0), 1 - 12/n_0} (non co-finite branch).
// Rows whose enclosure straddles a band edge are refined by doubling the depth
// up to the cap; a violation is a decided enclosure disjoint from the band.
WitnessReport certify_nonmembership(const CirclePoint& x, const Partition& part, BadCase which, std::uint64_t m0,
                                    std::uint64_t n0, std::uint64_t depth, std::uint64_t horizon,
                                    std::uint64_t cap = default_depth_cap());

struct SplitDiagnostic {
  BigInt bound;
  NatSet bounded;    // {n in A_3 : b_n <= M}
  NatSet divergent;  // {n in A_3 : b_n > M}
  DensityEstimate bounded_density;
  DensityEstimate divergent_density;
};

// Case III split of A_3 by a ratio bound, with lifted densities at the horizon.
SplitDiagnostic case3_split(const Partition& part, const std::shared_ptr<const DerivedSeq>& seq, const BigInt& bound, std::uint64_t horizon);

struct Factorization {
  std::uint64_t k = 0;
  BigInt v;
};

// k = max{j : a_j | u}, v = u / a_k; b_{k+1} ∤ v by maximality.
Factorization factor_u(const BigInt& u, const ArithSeq& seq);

struct ArbaultRow {
  std::uint64_t step = 0;  // i
  std::uint64_t s = 0;     // selected index s_i (1-based into u)
  BigInt u;
  std::uint64_t k = 0;
  BigInt v;
  BigInt b;   // b_{k+1}
  BigInt l;   // {v / b} = l / b
  BigInt m;   // m_{k+1}
  BigInt c;   // c_{k+1} = floor(b / m)
  BigInt e;   // b - m c
  bool upper_case = false;   // l > b/2
  bool e_valid = false;      // 1 <= e <= m - 1
  bool m_valid = false;      // 1 < m <= b
  Rational head;             // {c v / b}
  std::optional<BoundInterval> enclosure;  // [head, head + u / a_{k_{s_{i+1}}}]
  std::optional<Rational> exact;           // {u x} for the finite constructed point
  RowStatus status = RowStatus::undecided;
};

struct ArbaultReport {
  std::vector<ArbaultRow> rows;
  std::optional<CirclePoint> point;
  std::uint64_t certified = 0;
  std::uint64_t violations = 0;
  std::uint64_t existence_failures = 0;
  std::vector<std::string> notes;
};

// Greedy selection s_1 < s_2 < ... of the smallest admissible index with
// a_{k_{s_{i+1}}} >= 8 u_{s_i}; with require_valid, indices whose digit
// c = floor(b/m) admits no e in {1, ..., m - 1} are skipped. Selects rows + 1
// indices so the last row's tail is bounded by the next selected block.
ArbaultReport arbault_witness(std::shared_ptr<const DerivedSeq> seq, const std::vector<BigInt>& u, std::uint64_t rows,
                              bool require_valid = true);

}  // namespace circlab
