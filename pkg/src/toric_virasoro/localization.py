"""Geometric realisation of descendent symbols and exact fixed-point integration.

A :class:`Case` bundles a toric surface, topological invariants, a
polarization and the finite list of torus-fixed stable sheaves with those
invariants.  Every computation is exact:

* ``tangent_representation`` computes the torus character of the tangent
  space at a fixed point from the K-theoretic Euler characteristic
  ``chi(E, E)``, cleared of its ``(1 - chi)`` denominators by exact
  division, and certifies isolation (no trivial weight) and the expected
  dimension;
* ``realize_symbol`` evaluates a formal symbol ``ch_i(gamma)`` at each
  moduli fixed point as a genuine polynomial in the torus parameters
  ``s, t``, by summing normalized Chern character slices of the sheaf's
  chart restrictions over the surface fixed points and clearing the surface
  Euler classes exactly;
* ``integrate`` divides by the moduli tangent Euler classes, clears the sum
  exactly (certifying that it is polynomial — the localization consistency
  check), and evaluates at the origin.

``verify_conjecture`` runs the full sweep: for every ``k`` in
``[-1, vdim]`` and every restricted monomial of degree ``vdim - k`` it
integrates the three operator parts and reports whether they sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .descendents import (
    DescPoly,
    Monomial,
    apply_R,
    apply_S,
    apply_T,
    monomial_basis,
    monomial_degree,
    render_monomial,
)
from .enumeration import fixed_locus_cached
from .exactalg import (
    LaurentPoly,
    LocalizedFraction,
    NotDivisible,
    Rat,
    clear_and_evaluate,
    exact_div_linform,
    truncated_exp_rat,
)
from .surfaces import Surface, linform, surface_by_name

_ZERO = Fraction(0)


class TrivialWeight(ValueError):
    """A tangent representation contains the trivial character.

    The fixed point is then not isolated (or the sheaf not simple/unobstructed)
    and the isolated-point localization formula does not apply.
    """


# ---------------------------------------------------------------------------
# tangent representations
# ---------------------------------------------------------------------------


def sheaf_euler_pairing(restrictions: Sequence[LaurentPoly], surface: Surface) -> LaurentPoly:
    """chi(E, E) as a torus character, by K-theoretic fixed-point clearing.

    Each fixed point contributes ``E_p^dual * E_p / ((1 - u)(1 - v))`` where
    ``u, v`` are the inverse tangent characters (= the chart characters); the
    sum over points clears to a finite character sum.
    """
    fracs = []
    for poly, point in zip(restrictions, surface.points):
        fracs.append(
            LocalizedFraction(poly.dual() * poly, point.duals, kind="k")
        )
    return clear_and_evaluate(fracs)


def tangent_representation(
    restrictions: Sequence[LaurentPoly], surface: Surface, vdim: int
) -> LaurentPoly:
    """Torus character of the tangent space at a moduli fixed point.

    ``T = 1 - chi(E, E)``; the result is certified to be an honest
    representation: nonnegative integer multiplicities, total dimension
    ``vdim``, and no trivial weight (isolation + vanishing obstructions).
    """
    chi = sheaf_euler_pairing(restrictions, surface)
    tangent = LaurentPoly.one() - chi
    total = 0
    for (a, b), c in tangent:
        if c.denominator != 1 or c < 0:
            raise TrivialWeight(
                f"tangent multiplicity {c} at weight ({a},{b}) is not a"
                " nonnegative integer"
            )
        if (a, b) == (0, 0):
            raise TrivialWeight("tangent representation contains a trivial weight")
        total += int(c)
    if total != vdim:
        raise TrivialWeight(
            f"tangent dimension {total} differs from expected dimension {vdim}"
        )
    return tangent


def euler_class(tangent: LaurentPoly) -> LaurentPoly:
    """Product of the weight linear forms, with multiplicities."""
    out = LaurentPoly.one()
    for (a, b), c in tangent:
        out = out * linform((a, b)) ** int(c)
    return out


# ---------------------------------------------------------------------------
# cases
# ---------------------------------------------------------------------------


@dataclass
class Case:
    """A moduli problem with its fixed locus and all localization caches."""

    surface: Surface
    rank: int
    c1: tuple
    c2: int
    H: tuple
    restrictions: tuple[tuple[LaurentPoly, ...], ...]  # per moduli point, per surface point
    vdim: int = field(init=False)
    cap: int = field(init=False)

    def __post_init__(self):
        self.vdim = self.surface.vdim(self.rank, self.c1, self.c2)
        self.cap = self.vdim + 2
        self._tangents: list[LaurentPoly] | None = None
        self._scaffold = None
        self._series: dict[tuple[int, int], LaurentPoly] = {}
        self._symbols: dict[tuple[int, str], tuple[LaurentPoly, ...]] = {}
        self._integrals: dict[Monomial, Fraction] = {}
        self.certified_clearings = 0

    # -- enumeration-facing -------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.restrictions)

    def tangents(self) -> list[LaurentPoly]:
        if self._tangents is None:
            self._tangents = [
                tangent_representation(rows, self.surface, self.vdim)
                for rows in self.restrictions
            ]
        return self._tangents

    def euler_classes(self) -> list[LaurentPoly]:
        return [euler_class(t) for t in self.tangents()]

    # -- the common-denominator scaffold for moduli integrals ---------------

    def _denominators(self):
        """Per-point Euler factors as sign-canonical linear forms."""
        dens = []
        for tangent in self.tangents():
            factors: list[tuple[int, int]] = []
            sign = 1
            for (a, b), c in tangent:
                if a < 0 or (a == 0 and b < 0):
                    a, b = -a, -b
                    sign = -sign if int(c) % 2 else sign
                factors.extend([(a, b)] * int(c))
            dens.append((tuple(sorted(factors)), sign))
        return dens

    def scaffold(self):
        """Shared clearing data: LCM of the Euler denominators and cofactors.

        Returns ``(lcm_poly, lcm_factors, cofactors)`` where ``cofactors[q]``
        is the expanded polynomial ``sign_q * LCM / e_q``; then any
        fixed-point sum ``sum_q v_q / e_q`` equals
        ``(sum_q v_q * cofactors[q]) / lcm_poly`` exactly.
        """
        if self._scaffold is None:
            dens = self._denominators()
            lcm: dict[tuple[int, int], int] = {}
            for factors, _sign in dens:
                counts: dict[tuple[int, int], int] = {}
                for f in factors:
                    counts[f] = counts.get(f, 0) + 1
                for f, c in counts.items():
                    lcm[f] = max(lcm.get(f, 0), c)
            lcm_factors = tuple(
                sorted(f for f, c in lcm.items() for _ in range(c))
            )
            lcm_poly = LaurentPoly.one()
            for f in lcm_factors:
                lcm_poly = lcm_poly * linform(f)
            cofactors = []
            for factors, sign in dens:
                missing = dict(lcm)
                for f in factors:
                    missing[f] -= 1
                co = LaurentPoly.const(sign)
                for f, c in missing.items():
                    if c:
                        co = co * linform(f) ** c
                cofactors.append(co)
            self._scaffold = (lcm_poly, lcm_factors, cofactors)
        return self._scaffold

    # -- realized symbols ----------------------------------------------------

    def _chern_series(self, q: int, p: int) -> LaurentPoly:
        """Truncated ch of -E_p (x) det(E_p)^(-1/r) at moduli point q."""
        key = (q, p)
        if key not in self._series:
            poly = self.restrictions[q][p]
            A = B = _ZERO
            for (a, b), c in poly:
                A += c * a
                B += c * b
            r = self.rank
            series = LaurentPoly.zero()
            for (a, b), c in poly:
                series = series + truncated_exp_rat(
                    Fraction(a) - A / r, Fraction(b) - B / r, self.cap
                ) * (-c)
            self._series[key] = series
        return self._series[key]

    def realize_symbol(self, i: int, name: str) -> tuple[LaurentPoly, ...]:
        """Per-moduli-point polynomial value of the symbol ch_i(gamma).

        Sums ``gamma_p * [ch part]_i / e(T_X at p)`` over the surface fixed
        points and clears exactly; each value is homogeneous of the symbol's
        degree (or zero).
        """
        key = (i, name)
        if key not in self._symbols:
            if i < 0:
                self._symbols[key] = tuple(
                    LaurentPoly.zero() for _ in range(self.n_points)
                )
                return self._symbols[key]
            surface = self.surface
            sdeg = i + surface.class_degree(name) - 2
            lifts = [surface.class_lift(name, p) for p in surface.points]
            values = []
            for q in range(self.n_points):
                fracs = []
                for pidx, point in enumerate(surface.points):
                    if not lifts[pidx]:
                        continue
                    num = lifts[pidx] * self._chern_series(q, pidx).homogeneous_part(i)
                    fracs.append(
                        LocalizedFraction(num, point.tangent_weights, kind="coh")
                    )
                value = clear_and_evaluate(fracs)
                if value and not value.is_homogeneous(sdeg):
                    raise NotDivisible(
                        f"realized ch_{i}({name}) at point {q} is not homogeneous"
                        f" of degree {sdeg}: {value.render()}"
                    )
                values.append(value)
            self._symbols[key] = tuple(values)
        return self._symbols[key]

    def realize_monomial(self, mono: Monomial) -> tuple[LaurentPoly, ...]:
        values = [LaurentPoly.one()] * self.n_points
        for i, name in mono:
            sym = self.realize_symbol(i, name)
            values = [v * s for v, s in zip(values, sym)]
        return tuple(values)

    # -- exact integration ----------------------------------------------------

    def integrate_monomial(self, mono: Monomial) -> Fraction:
        mono = tuple(sorted(mono))
        if mono in self._integrals:
            return self._integrals[mono]
        if self.n_points == 0:
            result = _ZERO
        else:
            result = self._integrate_values(
                self.realize_monomial(mono), monomial_degree(mono, self.surface)
            )
        self._integrals[mono] = result
        return result

    def _integrate_values(self, values: Sequence[LaurentPoly], deg: int) -> Fraction:
        lcm_poly, lcm_factors, cofactors = self.scaffold()
        num = LaurentPoly.zero()
        for v, co in zip(values, cofactors):
            if v:
                num = num + v * co
        if not num:
            return _ZERO
        if deg < self.vdim:
            # degree reasons force the cleared sum to vanish identically
            raise NotDivisible(
                f"fixed-point sum of a degree-{deg} class on a {self.vdim}-"
                f"dimensional space failed to cancel: {num.render()}"
            )
        if deg == self.vdim:
            # the cleared quotient is a constant c: certify num == c * lcm
            lead = max(lcm_poly.coeffs)
            c = num.coeff(*lead) / lcm_poly.coeff(*lead)
            if num != lcm_poly * c:
                raise NotDivisible(
                    "fixed-point sum does not clear to a constant; the fixed"
                    " locus or tangent data is inconsistent"
                )
            self.certified_clearings += 1
            return c
        # degree above vdim: divide out every factor, then evaluate at 0
        for a, b in lcm_factors:
            num = exact_div_linform(num, a, b)
        self.certified_clearings += 1
        for (a, b) in num.coeffs:
            if a < 0 or b < 0:
                raise NotDivisible("cleared sum is not polynomial")
        return num.constant_term()

    def integrate(self, D: DescPoly) -> Fraction:
        total = _ZERO
        for mono, c in D.terms.items():
            total += c * self.integrate_monomial(mono)
        return total

    # -- operator parts ---------------------------------------------------

    def operator_parts(self, k: int, mono: Monomial) -> tuple[Fraction, Fraction, Fraction]:
        """(integral of R_k D, T_k D, S_k D) for the monomial D."""
        D = DescPoly.monomial(mono)
        return (
            self.integrate(apply_R(k, D, self.surface)),
            self.integrate(apply_T(k, D, self.surface)),
            self.integrate(apply_S(k, D, self.surface, self.rank)),
        )

    def twisted(self, weight: tuple[int, int]) -> "Case":
        """The same case with every chart value multiplied by one character."""
        rows = tuple(
            tuple(poly.shift(*weight) for poly in per_point)
            for per_point in self.restrictions
        )
        return Case(self.surface, self.rank, self.c1, self.c2, self.H, rows)

    def drop_point(self, q: int) -> "Case":
        """A deliberately broken case missing one fixed point (negative test)."""
        rows = tuple(r for i, r in enumerate(self.restrictions) if i != q)
        return Case(self.surface, self.rank, self.c1, self.c2, self.H, rows)


def make_case(
    surface_name: str,
    rank: int,
    c1: tuple,
    c2: int,
    H: tuple,
    sheaves=None,
) -> Case:
    """Build a case from the enumerated fixed locus (or injected sheaves)."""
    surface = surface_by_name(surface_name)
    if sheaves is None:
        sheaves = fixed_locus_cached(surface_name, rank, tuple(c1), c2, tuple(H))
    rows = tuple(tuple(sh.restriction(p) for p in surface.points) for sh in sheaves)
    return Case(surface, rank, tuple(c1), c2, tuple(H), rows)


# ---------------------------------------------------------------------------
# the conjecture sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckRow:
    k: int
    monomial: Monomial
    r_part: Rat
    t_part: Rat
    s_part: Rat

    @property
    def total(self) -> Rat:
        return self.r_part + self.t_part + self.s_part

    @property
    def label(self) -> str:
        return render_monomial(self.monomial)


def verify_conjecture(case: Case, ks: Iterable[int] | None = None) -> list[CheckRow]:
    """All (k, D) checks: the three parts of the degree-vdim integral.

    For each k in [-1, vdim] (by default) and each restricted monomial of
    degree vdim - k, the returned row holds the R/T/S integrals; the
    conjecture asserts every row sums to zero.
    """
    if ks is None:
        ks = range(-1, case.vdim + 1)
    rows = []
    for k in ks:
        for mono in monomial_basis(case.surface, case.vdim - k):
            r, t, s = case.operator_parts(k, mono)
            rows.append(CheckRow(k, mono, r, t, s))
    return rows
