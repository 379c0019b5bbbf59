#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qtaut/exterior.hpp"
#include "qtaut/int_matrix.hpp"

namespace qtaut {

using Rational = mpq_class;

/// Finite cyclic part of an element of the lambda-group: residue mod order.
struct TorsionPart {
  Integer order;
  Integer residue;

  friend bool operator==(const TorsionPart&, const TorsionPart&) = default;
};

/// An element of Lambda written additively: exponents of the free
/// generators p_1..p_l plus an optional cyclic torsion component.
struct ExponentVector {
  IntVector free;
  std::optional<TorsionPart> torsion;

  static ExponentVector identity(std::size_t l);
  bool is_identity() const;

  ExponentVector& operator+=(const ExponentVector& other);
  ExponentVector operator-() const;
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator*(const Integer& k, const ExponentVector& v);
  friend bool operator==(const ExponentVector& a, const ExponentVector& b);
};

/// The commutator data q_ij of a quantum torus, expressed in a basis of Lambda.
///
/// `rel` maps pairs i<j (0-based) to lambda(e_i, e_j); missing pairs are the
/// trivial commutator. When the spec was ingested from rationals,
/// `generators` holds the realized values of p_1..p_l in Q*.
struct MultiparamSpec {
  std::size_t n = 0;
  std::size_t l = 0;
  std::map<PairIndex, ExponentVector> rel;
  bool torsion_free = true;
  std::optional<std::vector<Rational>> generators;

  /// lambda(e_i, e_j) for i<j; identity for omitted pairs.
  ExponentVector relation(std::size_t i, std::size_t j) const;
  /// Throws InvalidInput if an invariant is broken.
  void validate() const;

  /// Torsion-free spec whose relations matrix is `m` (C(n,2) rows).
  static MultiparamSpec from_relations_matrix(std::size_t n, const IntMatrix& m);
};

/// Relations matrix: C(n,2) x l, row (ij) holds the exponents of lambda(e_i,e_j).
struct RelationsMatrix {
  std::size_t n = 0;
  IntMatrix matrix;

  /// 1-based label such as "(12)".
  std::string row_label(std::size_t row) const;
};

RelationsMatrix build_relations_matrix(const MultiparamSpec& spec);

ExponentVector lambda_eval(const MultiparamSpec& spec, const IntVector& m, const IntVector& mp);

/// Antisymmetric matrix of the s-th exponent form (s is 0-based).
IntMatrix form_matrix(const MultiparamSpec& spec, std::size_t s);

/// Factors the given rationals, chooses a lattice basis of their exponent
/// vectors, and records negative signs as order-2 torsion.
MultiparamSpec rationals_to_spec(std::size_t n, const std::map<PairIndex, Rational>& q);

/// Value of an element of Lambda in Q*; needs `spec.generators`.
Rational realize(const MultiparamSpec& spec, const ExponentVector& v);

std::size_t lambda_rank(const MultiparamSpec& spec);

/// Basis of the radical {m : lambda(m, .) trivial}; empty means center F.
std::vector<IntVector> center_lattice(const MultiparamSpec& spec);

/// Rewrites the spec in the basis given by unimodular P: M' = M P.
MultiparamSpec basis_change(const MultiparamSpec& spec, const IntMatrix& p);

struct TorsionReduction {
  MultiparamSpec spec;
  Integer scale;
};

/// Passes to the sublattice scale * Z^n, where scale is the exponent of the
/// torsion part; the resulting form has relations scale^2 * free part.
TorsionReduction torsion_reduce(const MultiparamSpec& spec);

}  // namespace qtaut
