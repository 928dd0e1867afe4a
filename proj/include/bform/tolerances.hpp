#pragma once

// Default numeric thresholds. Every entry point accepts an explicit
// override; these are the values used when none is given.

namespace bform::tol {

inline constexpr double rank = 1e-10;           // singular values below rank*sigma_max count as zero
inline constexpr double degeneracy = 1e-10;     // form rejection threshold at construction
inline constexpr double classify = 1e-12;       // symmetry / skew-symmetry detection
inline constexpr double pair_residual = 1e-10;  // gram * rep == identity
inline constexpr double identity = 1e-8;        // generic residual for algebraic identities
inline constexpr double projector = 1e-8;       // subspace equality via projector distance
inline constexpr double group_membership = 1e-8;
inline constexpr double finite_difference = 1e-6;
inline constexpr double fd_corpus = 1e-5;       // gradient vs finite differences over a field corpus
inline constexpr double roundtrip = 1e-10;      // correspondence round-trip
inline constexpr double exact = 1e-12;          // identities that cancel exactly up to rounding
inline constexpr double fd_step = 6e-6;         // central-difference step scale

}  // namespace bform::tol
