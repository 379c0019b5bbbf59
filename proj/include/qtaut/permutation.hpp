#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qtaut/int_matrix.hpp"

namespace qtaut {

/// A permutation of {0..n-1}, stored as images: i -> perm[i].
using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
bool is_identity(const Permutation& p);
void validate_permutation(const Permutation& p);

/// (p * q)(i) = p(q(i)).
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
std::size_t order(const Permutation& p);

/// Disjoint cycles of length >= 2, each starting at its smallest element.
std::vector<std::vector<std::size_t>> cycles(const Permutation& p);
std::vector<std::size_t> fixed_points(const Permutation& p);
bool is_transposition(const Permutation& p);

/// All permutations of {0..n-1} in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

/// Matrix with P e_i = e_{p(i)}.
IntMatrix permutation_matrix(const Permutation& p);

/// 1-based cycle notation, "()" for the identity, e.g. "(1 2 3)(4 5)".
std::string cycle_string(const Permutation& p);
/// Parses 1-based cycle notation for S_n; "()" or "id" is the identity.
Permutation parse_cycles(const std::string& text, std::size_t n);

}  // namespace qtaut
