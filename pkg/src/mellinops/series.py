"""Truncated tail series with shift-polynomial coefficients.

A :class:`TailSeries` models a finite window of the one-sided expansion
spaces that arise at the two boundary circles of the torus, one axis per
modeled variable:

* ``zero`` axes hold positive powers of t_j with stored indices 1..N
  (the class of an expansion at 0, with constants killed);
* ``inf`` axes hold powers of 1/t_j with stored indices 0..N (the class of
  an expansion at infinity, constants kept);
* ``full`` axes hold unconstrained signed powers of t_j, used for exact
  Laurent-monomial checks where no quotient or window applies.

Coefficients are :class:`~mellinops.shiftpoly.ShiftPolynomial` values in
s_1..s_p.  The torus operators act "twisted": t_j moves the actual exponent
up by one, the Euler operator th_j multiplies the coefficient at actual
exponent n by (n - s_j - 1), the auxiliary shift symbol tau_j translates
coefficients by s_j -> s_j + 1 without touching exponents, and s_j
multiplies coefficients.  On windowed axes, terms leaving the window (or
landed on by the quotient: non-positive powers on ``zero`` axes, positive
powers on ``inf`` axes) are dropped; exactness claims are therefore made on
the window interior only, with the top exponent a declared defect zone.

Operators in the torus algebra act monomial-wise (the twisted rules satisfy
the algebra's relations).  Words mixing tau with th must be applied
generator by generator, in word order: the twisted model realizes
th as (t d/dt - s - 1), and that operator does not commute with the bare
coefficient shift even though th and tau commute in the combined algebra.
Use :meth:`TailSeries.apply_word` (or :func:`shift_cycle`) for those.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .errors import MixedAlgebra, TruncationOverflow
from .ore import Algebra, GenKind, Generator
from .shiftpoly import ShiftPolynomial

ZERO_TYPE = "zero"
INF_TYPE = "inf"
FULL_TYPE = "full"


class Axis(NamedTuple):
    """One modeled expansion direction: variable index, kind, window top."""

    var: int
    kind: str
    n_max: int | None = None


def _axis_window(axis):
    if axis.kind == ZERO_TYPE:
        return 1, axis.n_max
    if axis.kind == INF_TYPE:
        return 0, axis.n_max
    return None, None


def _actual_exponent(axis, n):
    return -n if axis.kind == INF_TYPE else n


class TailSeries:
    """Finite window of a one-sided formal series, one axis per variable."""

    __slots__ = ("coeff_arity", "axes", "terms")

    def __init__(self, coeff_arity, axes, terms=None):
        axes = tuple(Axis(a.var, a.kind, a.n_max) for a in axes)
        seen = set()
        for axis in axes:
            if axis.kind not in (ZERO_TYPE, INF_TYPE, FULL_TYPE):
                raise ValueError(f"unknown axis kind {axis.kind!r}")
            if axis.kind != FULL_TYPE and (axis.n_max is None or axis.n_max < 1):
                raise ValueError("windowed axes need n_max >= 1")
            if not 1 <= axis.var <= coeff_arity:
                raise ValueError(f"axis variable {axis.var} not in 1..{coeff_arity}")
            if axis.var in seen:
                raise ValueError(f"duplicate axis for variable {axis.var}")
            seen.add(axis.var)
        object.__setattr__(self, "coeff_arity", coeff_arity)
        object.__setattr__(self, "axes", axes)
        clean = {}
        for idx, poly in (terms or {}).items():
            idx = tuple(int(n) for n in idx)
            if len(idx) != len(axes):
                raise ValueError("index length does not match axes")
            for axis, n in zip(axes, idx):
                lo, hi = _axis_window(axis)
                if lo is not None and not lo <= n <= hi:
                    raise TruncationOverflow(
                        f"index {n} outside window [{lo}, {hi}] on variable {axis.var}"
                    )
            poly = _as_poly(poly, coeff_arity)
            if not poly.is_zero():
                clean[idx] = poly
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TailSeries is immutable")

    # -- basics --------------------------------------------------------------

    def axis_for(self, var):
        for pos, axis in enumerate(self.axes):
            if axis.var == var:
                return pos, axis
        raise ValueError(f"variable {var} is not a modeled axis")

    def coefficient(self, idx):
        idx = tuple(idx) if isinstance(idx, (tuple, list)) else (idx,)
        return self.terms.get(idx, ShiftPolynomial.zero(self.coeff_arity))

    def is_zero(self):
        return not self.terms

    def _like(self, terms):
        return TailSeries(self.coeff_arity, self.axes, terms)

    def _compatible(self, other):
        if self.coeff_arity != other.coeff_arity or self.axes != other.axes:
            raise MixedAlgebra("tail series shapes differ")

    def __add__(self, other):
        self._compatible(other)
        terms = dict(self.terms)
        for idx, poly in other.terms.items():
            terms[idx] = terms.get(idx, ShiftPolynomial.zero(self.coeff_arity)) + poly
        return self._like(terms)

    def __neg__(self):
        return self._like({i: -p for i, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        return self._like({i: p * value for i, p in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TailSeries):
            return NotImplemented
        return (
            self.coeff_arity == other.coeff_arity
            and self.axes == other.axes
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.coeff_arity, self.axes, frozenset(self.terms.items())))

    def __repr__(self):
        names = {ZERO_TYPE: "t", INF_TYPE: "1/t", FULL_TYPE: "t"}
        bits = []
        for idx in sorted(self.terms):
            mono = "*".join(
                f"({names[axis.kind]}_{axis.var})^{n}" for axis, n in zip(self.axes, idx)
            )
            bits.append(f"[{self.terms[idx]!r}]{mono}")
        return " + ".join(bits) if bits else "0"

    # -- the twisted action ----------------------------------------------------

    def apply_generator(self, gen):
        """One twisted generator application; out-of-window terms drop."""
        gen = Generator(GenKind(gen.kind), gen.index)
        j = gen.index
        if gen.kind in (GenKind.TAU, GenKind.TAUINV, GenKind.S):
            if not 1 <= j <= self.coeff_arity:
                raise ValueError(f"variable {j} not in 1..{self.coeff_arity}")
            if gen.kind is GenKind.S:
                s_j = ShiftPolynomial.variable(j, self.coeff_arity)
                return self._like({i: p * s_j for i, p in self.terms.items()})
            step = 1 if gen.kind is GenKind.TAU else -1
            return self._like({i: p.shift(j, step) for i, p in self.terms.items()})

        pos, axis = self.axis_for(j)
        terms = {}
        if gen.kind is GenKind.THETA:
            for idx, poly in self.terms.items():
                n = _actual_exponent(axis, idx[pos])
                factor = ShiftPolynomial.constant(n - 1, self.coeff_arity) - \
                    ShiftPolynomial.variable(j, self.coeff_arity)
                _accumulate(terms, idx, poly * factor, self.coeff_arity)
            return self._like(terms)

        step = 1 if gen.kind is GenKind.T else -1
        lo, hi = _axis_window(axis)
        for idx, poly in self.terms.items():
            stored = idx[pos] + (-step if axis.kind == INF_TYPE else step)
            if lo is not None and not lo <= stored <= hi:
                continue  # quotient kill or truncation defect zone
            new = list(idx)
            new[pos] = stored
            _accumulate(terms, tuple(new), poly, self.coeff_arity)
        return self._like(terms)

    def apply_word(self, word):
        """Apply a generator word as an operator: the rightmost acts first."""
        out = self
        for gen in reversed(list(word)):
            out = out.apply_generator(gen)
        return out

    def apply_twisted(self, P):
        """Apply a torus-algebra operator monomial-wise (D operators only)."""
        if P.algebra is not Algebra.D:
            raise MixedAlgebra(
                "monomial-wise twisted action is defined for D operators; "
                "apply mixed words with apply_word"
            )
        if P.arity != self.coeff_arity:
            raise MixedAlgebra("operator arity does not match coefficient arity")
        total = self._like({})
        for (a, b, _c, _d), coeff in P.terms.items():
            part = self
            # normal order t^a th^b: th acts first, then the exponent shifts
            for j, bj in enumerate(b, start=1):
                for _ in range(bj):
                    part = part.apply_generator(Generator(GenKind.THETA, j))
            for j, aj in enumerate(a, start=1):
                kind = GenKind.T if aj > 0 else GenKind.TINV
                for _ in range(abs(aj)):
                    part = part.apply_generator(Generator(kind, j))
            total = total + part.scale(coeff)
        return total

    # -- window helpers ----------------------------------------------------------

    def interior_terms(self, var):
        """Terms with the given variable's index in the window interior."""
        pos, axis = self.axis_for(var)
        lo, hi = _axis_window(axis)
        if lo is None:
            return dict(self.terms)
        return {i: p for i, p in self.terms.items() if lo <= i[pos] <= hi - 1}

    def agrees_on_interior(self, other, var):
        self._compatible(other)
        return self.interior_terms(var) == other.interior_terms(var)

    def slice_at(self, var, n):
        """Drop an axis by restricting its stored index to n."""
        pos, axis = self.axis_for(var)
        rest = self.axes[:pos] + self.axes[pos + 1 :]
        terms = {}
        for idx, poly in self.terms.items():
            if idx[pos] == n:
                terms[idx[:pos] + idx[pos + 1 :]] = poly
        return TailSeries(self.coeff_arity, rest, terms)


def _as_poly(value, arity):
    if isinstance(value, ShiftPolynomial):
        if value.arity != arity:
            raise ValueError("coefficient arity mismatch")
        return value
    if isinstance(value, (int, Fraction)):
        return ShiftPolynomial.constant(value, arity)
    raise TypeError(f"coefficient must be exact, got {type(value).__name__}")


def _accumulate(terms, idx, poly, arity):
    prev = terms.get(idx)
    terms[idx] = poly if prev is None else prev + poly


def monomial(coeff_arity, axes, idx, poly):
    """A one-term series: poly * t^(idx) over the given axes."""
    return TailSeries(coeff_arity, axes, {tuple(idx): poly})


def shift_cycle(series, var):
    """The difference operator tau_j t_j^-1 - 1 in the twisted action.

    This is the Koszul differential in direction ``var``: a coefficient
    translation combined with one step down in the actual exponent, minus
    the identity.
    """
    word = (Generator(GenKind.TAU, var), Generator(GenKind.TINV, var))
    return series.apply_word(word) - series


def apply_twisted(P, x):
    """Function form of :meth:`TailSeries.apply_twisted`."""
    return x.apply_twisted(P)
