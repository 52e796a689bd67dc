"""The exponent-to-shift algebra isomorphism and the difference-side action.

The isomorphism sends t_j to tau_j and the Euler operator th_j to -s_j; on
normal monomials t^a th^b it acts by t^a th^b -> tau^a (-s)^b, extended
linearly, with the inverse mapping tau^c s^d -> t^c (-th)^d.  The action
convention for difference operators on functions of s is pinned by the
classical pairing F(s) = integral over the positive ray of f(t) t^(s-1) dt,
under which the image of an operator annihilating f annihilates F.
(Monodromy convention, recorded once: the deck transformation of the shift
cover corresponds to multiplication by the inverse torus coordinate
e^{2i*pi*s}.)
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EvaluationFailure, MixedAlgebra
from .ore import Algebra, OreOperator


def _parity_sign(vec):
    return -1 if sum(vec) % 2 else 1


def mellin_op(P):
    """Image in the difference algebra of a torus-side operator."""
    if P.algebra is not Algebra.D:
        raise MixedAlgebra("forward transform expects a D operator")
    z = (0,) * P.arity
    terms = {}
    for (a, b, _c, _d), coeff in P.terms.items():
        terms[(z, z, a, b)] = coeff * _parity_sign(b)
    return OreOperator(Algebra.S, P.arity, terms)


def inverse_mellin_op(Q):
    """Two-sided inverse of :func:`mellin_op`."""
    if Q.algebra is not Algebra.S:
        raise MixedAlgebra("inverse transform expects an S operator")
    z = (0,) * Q.arity
    terms = {}
    for (_a, _b, c, d), coeff in Q.terms.items():
        terms[(c, d, z, z)] = coeff * _parity_sign(d)
    return OreOperator(Algebra.D, Q.arity, terms)


@dataclass(frozen=True)
class PresentationMatrix:
    """A rectangular grid of operators sharing one algebra and arity."""

    algebra: Algebra
    arity: int
    entries: tuple

    def __post_init__(self):
        rows = self.entries
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("entries must form a non-empty rectangle")
        for row in rows:
            for op in row:
                if op.algebra is not self.algebra or op.arity != self.arity:
                    raise MixedAlgebra("matrix entries must share algebra and arity")

    @classmethod
    def from_rows(cls, rows):
        rows = tuple(tuple(r) for r in rows)
        first = rows[0][0]
        return cls(first.algebra, first.arity, rows)

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]))

    def map_entries(self, fn):
        return PresentationMatrix.from_rows(
            tuple(tuple(fn(op) for op in row) for row in self.entries)
        )


def mellin_presentation(mat):
    """Entry-wise forward transform of a torus-side presentation matrix."""
    if mat.algebra is not Algebra.D:
        raise MixedAlgebra("presentation transport expects a D matrix")
    return mat.map_entries(mellin_op)


def apply_difference(Q, F, s):
    """Evaluate (Q.F)(s) for a difference operator Q and a grid function F.

    tau acts by (tau F)(s) = F(s+1) and s by pointwise multiplication, so the
    normal monomial tau^a s^b (multiply by s^b first, then shift) contributes
    (s+a)^b F(s+a).  For several variables, shifts and multiplications apply
    per index and F takes the coordinate tuple.
    """
    if Q.algebra is not Algebra.S:
        raise MixedAlgebra("difference action expects an S operator")
    p = Q.arity
    scalar_mode = p == 1 and not isinstance(s, (tuple, list))
    point = (s,) if scalar_mode else tuple(s)
    if len(point) != p:
        raise ValueError(f"expected {p} coordinates, got {len(point)}")

    total = 0j
    for (_a, _b, c, d), coeff in Q.terms.items():
        shifted = tuple(z + cj for z, cj in zip(point, c))
        weight = complex(coeff)
        for z, cj, dj in zip(point, c, d):
            if dj:
                weight *= (z + cj) ** dj
        try:
            value = F(shifted[0]) if scalar_mode else F(shifted)
        except Exception as exc:  # noqa: BLE001 - surface as the contract error
            raise EvaluationFailure(f"grid function failed at {shifted}: {exc}") from exc
        if value is None:
            raise EvaluationFailure(f"grid function returned nothing at {shifted}")
        value = complex(value)
        if value != value:  # NaN
            raise EvaluationFailure(f"grid function returned NaN at {shifted}")
        total += weight * value
    return total


def apply_difference_terms(Q, F, s):
    """Like :func:`apply_difference` but returning each term's contribution.

    Used by residual reports to set a sensible relative scale.
    """
    if Q.algebra is not Algebra.S:
        raise MixedAlgebra("difference action expects an S operator")
    p = Q.arity
    scalar_mode = p == 1 and not isinstance(s, (tuple, list))
    point = (s,) if scalar_mode else tuple(s)
    out = []
    for (_a, _b, c, d), coeff in Q.terms.items():
        shifted = tuple(z + cj for z, cj in zip(point, c))
        weight = complex(coeff)
        for z, cj, dj in zip(point, c, d):
            if dj:
                weight *= (z + cj) ** dj
        try:
            value = complex(F(shifted[0]) if scalar_mode else F(shifted))
        except Exception as exc:  # noqa: BLE001
            raise EvaluationFailure(f"grid function failed at {shifted}: {exc}") from exc
        out.append(weight * value)
    return out
