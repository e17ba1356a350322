#pragma once

// Dense exact linear algebra over Q and lattice bases over Z.

#include "defmut/bigint.hpp"

#include <optional>
#include <vector>

namespace defmut {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;
using ZVector = std::vector<Integer>;
using ZMatrix = std::vector<ZVector>;

struct RowEchelon {
    QMatrix reduced;          // reduced row echelon form, zero rows dropped
    std::vector<int> pivots;  // pivot column of each nonzero row
};

RowEchelon rref(QMatrix m, int columns = -1);
int rank(const QMatrix& m);
/// Basis of {x : m x = 0}; each vector has a one in a free coordinate.
QMatrix nullspace(const QMatrix& m, int columns);
std::optional<QMatrix> inverse(const QMatrix& m);
/// Some solution of a x = b (free unknowns set to zero) or nullopt.
std::optional<QVector> solve(const QMatrix& a, const QVector& b, int columns);

QMatrix multiply(const QMatrix& a, const QMatrix& b);
QMatrix transpose(const QMatrix& a);
QMatrix to_rational(const ZMatrix& m);

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
ZVector primitive_integer(const QVector& v);

/// Primitive integer basis of the rational kernel of m (columns unknowns).
ZMatrix integer_kernel(const ZMatrix& m, int columns);
/// Hermite normal form of the lattice spanned by the given integer rows.
ZMatrix hermite_basis(ZMatrix rows);
/// True when v lies in the rational span of rows.
bool in_rational_span(const ZMatrix& rows, const ZVector& v);
/// True when two row sets span the same Z-lattice.
bool same_lattice(const ZMatrix& a, const ZMatrix& b);

}  // namespace defmut
