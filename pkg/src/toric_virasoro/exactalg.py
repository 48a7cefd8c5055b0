"""Exact sparse Laurent-polynomial arithmetic in two variables.

The two variables are called ``s`` and ``t`` throughout.  A polynomial is a
sparse mapping ``(a, b) -> Fraction`` meaning ``sum c * s^a * t^b`` with
integer (possibly negative) exponents.  The same type serves two roles:

* **K-theory characters**: exponents are torus weights, e.g. ``s + s*t^-1``.
* **Cohomology classes**: ``s`` and ``t`` are the two degree-1 equivariant
  generators of a fixed-point chart, so a monomial ``s^a t^b`` has complex
  degree ``a + b`` (and only ``a, b >= 0`` occurs).

Division is exact or it fails loudly: :func:`exact_div_linform` divides by a
linear form ``A*s + B*t`` and :func:`exact_div_kfactor` by ``1 - s^a t^b``,
both raising :class:`NotDivisible` when the quotient does not exist in
Laurent polynomials.  Sums of fractions with factored denominators are
handled by :class:`LocalizedFraction`, which only ever clears denominator
factors by exact division — there is no floating point and no expansion of
denominator products.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class NotDivisible(ArithmeticError):
    """Raised when an exact division has a nonzero remainder.

    In the localization engine this is a *certificate of error*: integrands
    summed over all fixed points must clear every denominator factor, so a
    remainder means a fixed point is missing or a weight is wrong.
    """


def _as_rat(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected int or Fraction, got {type(c).__name__}")


class LaurentPoly:
    """Sparse Laurent polynomial in s, t with Fraction coefficients.

    Immutable by convention: all operations return new instances and never
    mutate ``self.coeffs``.  Zero coefficients are never stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], Fraction] | None = None):
        d: dict[tuple[int, int], Fraction] = {}
        if coeffs:
            for (a, b), c in coeffs.items():
                c = _as_rat(c)
                if c:
                    d[(int(a), int(b))] = c
        self.coeffs = d

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({(0, 0): ONE})

    @staticmethod
    def const(c) -> "LaurentPoly":
        return LaurentPoly({(0, 0): _as_rat(c)})

    @staticmethod
    def monomial(a: int, b: int, c=1) -> "LaurentPoly":
        return LaurentPoly({(a, b): _as_rat(c)})

    # -- basic protocol -----------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __iter__(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(self.coeffs.items())

    def __len__(self) -> int:
        return len(self.coeffs)

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        d = dict(self.coeffs)
        for k, c in other.coeffs.items():
            nc = d.get(k, ZERO) + c
            if nc:
                d[k] = nc
            else:
                d.pop(k, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = d
        return out

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {k: -c for k, c in self.coeffs.items()}
        return out

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_rat(other)
            out = LaurentPoly.__new__(LaurentPoly)
            out.coeffs = {} if not c else {k: v * c for k, v in self.coeffs.items()}
            return out
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        d: dict[tuple[int, int], Fraction] = {}
        for (x1, y1), c1 in a.items():
            for (x2, y2), c2 in b.items():
                k = (x1 + x2, y1 + y2)
                nc = d.get(k, ZERO) + c1 * c2
                if nc:
                    d[k] = nc
                else:
                    d.pop(k, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = d
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("negative powers only for single monomials")
            ((a, b), c), = self.coeffs.items()
            return LaurentPoly.monomial(a * n, b * n, ONE / c ** (-n))
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure ------------------------------------------------------

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0, 0), ZERO)

    def coeff(self, a: int, b: int) -> Fraction:
        return self.coeffs.get((a, b), ZERO)

    def degrees(self) -> set[int]:
        """Set of complex degrees a+b present."""
        return {a + b for (a, b) in self.coeffs}

    def homogeneous_part(self, deg: int) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {k: c for k, c in self.coeffs.items() if k[0] + k[1] == deg}
        return out

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = self.degrees()
        if deg is None:
            return len(degs) <= 1
        return degs <= {deg}

    def truncate(self, max_deg: int) -> "LaurentPoly":
        """Drop all monomials of complex degree > max_deg."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {k: c for k, c in self.coeffs.items() if k[0] + k[1] <= max_deg}
        return out

    def dual(self) -> "LaurentPoly":
        """K-theory dual: s^a t^b -> s^-a t^-b."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {(-a, -b): c for (a, b), c in self.coeffs.items()}
        return out

    def shift(self, da: int, db: int) -> "LaurentPoly":
        """Multiply by the monomial s^da t^db."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {(a + da, b + db): c for (a, b), c in self.coeffs.items()}
        return out

    def substitute_st(self, sval: Fraction, tval: Fraction) -> Fraction:
        """Evaluate at numeric s, t (used e.g. for rank at s=t=1)."""
        total = ZERO
        for (a, b), c in self.coeffs.items():
            term = c
            term *= sval ** a if a >= 0 else ONE / (sval ** (-a))
            term *= tval ** b if b >= 0 else ONE / (tval ** (-b))
            total += term
        return total

    # -- rendering ------------------------------------------------------

    def render(self) -> str:
        """Human/goldenfile form, e.g. ``-s^2*t + 2*s*t^-1 + 1``.

        Monomials are ordered by complex degree descending, then lexicographic
        descending on (a, b), which matches the bundled reference tables.
        """
        if not self.coeffs:
            return "0"
        keys = sorted(self.coeffs, key=lambda k: (k[0] + k[1], k), reverse=True)
        parts: list[str] = []
        for a, b in keys:
            c = self.coeffs[(a, b)]
            vars_ = []
            if a:
                vars_.append("s" if a == 1 else f"s^{a}")
            if b:
                vars_.append("t" if b == 1 else f"t^{b}")
            body = "*".join(vars_)
            if not body:
                mag = str(abs(c))
            elif abs(c) == 1:
                mag = body
            else:
                mag = f"{abs(c)}*{body}"
            if not parts:
                parts.append(mag if c > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if c > 0 else f"- {mag}")
        return " ".join(parts)

    def render_tex(self) -> str:
        """TeX form of :meth:`render`, e.g. ``-s^{2}t + 2st^{-1} + 1``."""
        if not self.coeffs:
            return "0"
        keys = sorted(self.coeffs, key=lambda k: (k[0] + k[1], k), reverse=True)
        parts: list[str] = []
        for a, b in keys:
            c = self.coeffs[(a, b)]
            body = ""
            if a:
                body += "s" if a == 1 else f"s^{{{a}}}"
            if b:
                body += "t" if b == 1 else f"t^{{{b}}}"
            if not body:
                mag = str(abs(c))
            elif abs(c) == 1:
                mag = body
            else:
                mag = f"{abs(c)}{body}"
            if not parts:
                parts.append(mag if c > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if c > 0 else f"- {mag}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()})"


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the ``render`` format (and minor variants) back into a polynomial.

    Accepts optional ``*`` between factors, ``s^-2`` style exponents, and
    rational coefficients like ``3/2``.
    """
    s = text.replace(" ", "")
    if not s or s == "0":
        return LaurentPoly.zero()
    # split into signed terms
    terms: list[str] = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and cur and cur[-1] not in "^+-*/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    out = LaurentPoly.zero()
    for term in terms:
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        coeff = Fraction(sign)
        a = b = 0
        i = 0
        n = len(term)
        num = ""
        while i < n and (term[i].isdigit() or term[i] == "/"):
            num += term[i]
            i += 1
        if num:
            coeff *= Fraction(num)
        while i < n:
            ch = term[i]
            if ch == "*":
                i += 1
                continue
            if ch not in "st":
                raise ValueError(f"cannot parse monomial {term!r} in {text!r}")
            i += 1
            exp = 1
            if i < n and term[i] == "^":
                i += 1
                j = i
                if i < n and term[i] == "-":
                    j += 1
                while j < n and term[j].isdigit():
                    j += 1
                exp = int(term[i:j])
                i = j
            if ch == "s":
                a += exp
            else:
                b += exp
        out = out + LaurentPoly.monomial(a, b, coeff)
    return out


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------


def truncated_exp(a: int, b: int, cap: int) -> LaurentPoly:
    """``exp(a*s + b*t)`` as a cohomology class, truncated above degree cap."""
    return truncated_exp_rat(Fraction(a), Fraction(b), cap)


def truncated_exp_rat(a: Fraction, b: Fraction, cap: int) -> LaurentPoly:
    coeffs: dict[tuple[int, int], Fraction] = {}
    # degree-n part is (a s + b t)^n / n! = sum_i C(n,i) a^i b^(n-i) s^i t^(n-i) / n!
    for n in range(cap + 1):
        fact_n = factorial(n)
        for i in range(n + 1):
            c = (
                Fraction(factorial(n) // (factorial(i) * factorial(n - i)), fact_n)
                * a**i
                * b ** (n - i)
            )
            if c:
                coeffs[(i, n - i)] = coeffs.get((i, n - i), ZERO) + c
    return LaurentPoly({k: c for k, c in coeffs.items() if c})


def char_to_chern(char: LaurentPoly, cap: int) -> LaurentPoly:
    """Chern character of a K-theory class: s^a t^b -> exp(a s + b t).

    Input exponents are torus weights; output is a cohomology class truncated
    above complex degree ``cap``.
    """
    out = LaurentPoly.zero()
    for (a, b), c in char:
        out = out + truncated_exp(a, b, cap) * c
    return out


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------


def _exact_div_shifted(num: LaurentPoly, div: LaurentPoly) -> LaurentPoly:
    """Divide num by div exactly, where div has 1 or 2 terms.

    Both inputs may be Laurent.  Factor each as (monomial) * (polynomial with
    componentwise-minimal exponent 0); for such a divisor d (not divisible by
    s or t), a Laurent quotient exists iff an ordinary polynomial quotient
    exists, and lexicographic division finds it with zero remainder.  Any
    monomial that would go to the remainder therefore proves indivisibility,
    so the division aborts there.
    """
    if not div:
        raise ZeroDivisionError("division by zero polynomial")
    if not num:
        return LaurentPoly.zero()
    na = min(a for (a, _b) in num.coeffs)
    nb = min(b for (_a, b) in num.coeffs)
    da = min(a for (a, _b) in div.coeffs)
    db = min(b for (_a, b) in div.coeffs)
    n = num.shift(-na, -nb)
    d = div.shift(-da, -db)
    if len(d) == 1:
        ((ka, kb), dc), = d.coeffs.items()
        return n.shift(-ka, -kb).shift(na - da, nb - db) * (ONE / dc)
    dk = max(d.coeffs)  # lex-leading key
    dc = d.coeffs[dk]
    rest = {k: c for k, c in d.coeffs.items() if k != dk}
    work = dict(n.coeffs)
    q: dict[tuple[int, int], Fraction] = {}
    while work:
        k = max(work)  # strictly decreases each pass: termination
        qa, qb = k[0] - dk[0], k[1] - dk[1]
        if qa < 0 or qb < 0:
            raise NotDivisible(
                f"remainder at s^{k[0] + na}*t^{k[1] + nb} dividing by {div.render()}"
            )
        qc = work.pop(k) / dc
        q[(qa, qb)] = q.get((qa, qb), ZERO) + qc
        for (ra, rb), rc in rest.items():
            nk = (qa + ra, qb + rb)
            nc = work.get(nk, ZERO) - qc * rc
            if nc:
                work[nk] = nc
            else:
                work.pop(nk, None)
    return LaurentPoly(q).shift(na - da, nb - db)


def exact_div_linform(num: LaurentPoly, A: int, B: int) -> LaurentPoly:
    """Exact division of a cohomology class by the linear form A*s + B*t."""
    if A == 0 and B == 0:
        raise ZeroDivisionError("division by zero linear form")
    div = LaurentPoly({(1, 0): Fraction(A), (0, 1): Fraction(B)})
    if len(div) == 1:
        ((a, b), c), = div.coeffs.items()
        # monomial division: always exact in Laurent polynomials
        return num.shift(-a, -b) * (ONE / c)
    try:
        return _exact_div_shifted(num, div)
    except NotDivisible as e:
        raise NotDivisible(f"{num.render()} not divisible by {div.render()}") from e


def exact_div_kfactor(num: LaurentPoly, a: int, b: int) -> LaurentPoly:
    """Exact division of a K-theory character by ``1 - s^a t^b``."""
    if a == 0 and b == 0:
        raise ZeroDivisionError("division by 1 - 1 = 0")
    div = LaurentPoly({(0, 0): ONE, (a, b): -ONE})
    try:
        return _exact_div_shifted(num, div)
    except NotDivisible as e:
        raise NotDivisible(
            f"{num.render()} not divisible by 1 - {LaurentPoly.monomial(a,b).render()}"
        ) from e


# ---------------------------------------------------------------------------
# factored fractions
# ---------------------------------------------------------------------------


def _canon_linfactor(f: tuple[int, int]) -> tuple[tuple[int, int], int]:
    """Canonical sign for a linear form a*s + b*t: make (a, b) lex-positive.

    Returns (canonical factor, sign flip in {+1, -1}).
    """
    a, b = f
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b), -1
    return (a, b), 1


class LocalizedFraction:
    """numerator / product of irreducible factors, kept factored.

    ``kind`` selects the factor alphabet:

    * ``"coh"``: factors are linear forms ``(a, b)`` meaning ``a*s + b*t``,
      sign-canonicalized so (a, b) is lexicographically positive (unit -1
      absorbed into the numerator);
    * ``"k"``: factors are ``(a, b)`` meaning ``1 - s^a t^b``, no sign
      normalization (the factors as produced by fixed-point tangent data).

    Denominators are multisets stored as sorted tuples.  Addition brings both
    summands onto the multiset max (LCM) of the denominators — never the
    product — by multiplying numerators out, which keeps everything exact and
    small.
    """

    __slots__ = ("num", "den", "kind")

    def __init__(
        self,
        num: LaurentPoly,
        den: Iterable[tuple[int, int]] = (),
        kind: str = "coh",
    ):
        if kind not in ("coh", "k"):
            raise ValueError(f"unknown kind {kind!r}")
        factors: list[tuple[int, int]] = []
        for f in den:
            a, b = int(f[0]), int(f[1])
            if kind == "coh":
                (a, b), flip = _canon_linfactor((a, b))
                if flip < 0:
                    num = num * -1
            if (a, b) == (0, 0):
                raise ZeroDivisionError("zero factor in denominator")
            factors.append((a, b))
        self.num = num
        self.den = tuple(sorted(factors))
        self.kind = kind

    @staticmethod
    def from_poly(p: LaurentPoly, kind: str = "coh") -> "LocalizedFraction":
        return LocalizedFraction(p, (), kind)

    def _factor_poly(self, f: tuple[int, int]) -> LaurentPoly:
        a, b = f
        if self.kind == "coh":
            return LaurentPoly({(1, 0): Fraction(a), (0, 1): Fraction(b)})
        return LaurentPoly({(0, 0): ONE, (a, b): -ONE})

    def _div_factor(self, p: LaurentPoly, f: tuple[int, int]) -> LaurentPoly:
        if self.kind == "coh":
            return exact_div_linform(p, f[0], f[1])
        return exact_div_kfactor(p, f[0], f[1])

    def simplify(self) -> "LocalizedFraction":
        """Cancel denominator factors that divide the numerator exactly."""
        num = self.num
        keep: list[tuple[int, int]] = []
        for f in self.den:
            if not num:
                continue
            try:
                num = self._div_factor(num, f)
            except NotDivisible:
                keep.append(f)
        if not num:
            keep = []
        out = LocalizedFraction.__new__(LocalizedFraction)
        out.num = num
        out.den = tuple(sorted(keep))
        out.kind = self.kind
        return out

    def __mul__(self, other) -> "LocalizedFraction":
        if isinstance(other, (int, Fraction)):
            out = LocalizedFraction.__new__(LocalizedFraction)
            out.num = self.num * other
            out.den = self.den if other else ()
            out.kind = self.kind
            return out
        if isinstance(other, LaurentPoly):
            out = LocalizedFraction.__new__(LocalizedFraction)
            out.num = self.num * other
            out.den = self.den
            out.kind = self.kind
            return out
        if isinstance(other, LocalizedFraction):
            if other.kind != self.kind:
                raise ValueError("mixed fraction kinds")
            out = LocalizedFraction.__new__(LocalizedFraction)
            out.num = self.num * other.num
            out.den = tuple(sorted(self.den + other.den))
            out.kind = self.kind
            return out
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other) -> "LocalizedFraction":
        if not isinstance(other, LocalizedFraction):
            return NotImplemented
        if other.kind != self.kind:
            raise ValueError("mixed fraction kinds")
        from collections import Counter

        c1, c2 = Counter(self.den), Counter(other.den)
        lcm = c1 | c2  # multiset max
        n1 = self.num
        for f, mult in (lcm - c1).items():
            fp = self._factor_poly(f)
            for _ in range(mult):
                n1 = n1 * fp
        n2 = other.num
        for f, mult in (lcm - c2).items():
            fp = self._factor_poly(f)
            for _ in range(mult):
                n2 = n2 * fp
        out = LocalizedFraction.__new__(LocalizedFraction)
        out.num = n1 + n2
        out.den = tuple(sorted(lcm.elements()))
        out.kind = self.kind
        return out

    def __neg__(self) -> "LocalizedFraction":
        out = LocalizedFraction.__new__(LocalizedFraction)
        out.num = -self.num
        out.den = self.den
        out.kind = self.kind
        return out

    def __sub__(self, other) -> "LocalizedFraction":
        if not isinstance(other, LocalizedFraction):
            return NotImplemented
        return self + (-other)

    def clear(self) -> LaurentPoly:
        """Divide out every denominator factor exactly; NotDivisible on failure."""
        num = self.num
        for f in self.den:
            num = self._div_factor(num, f)
        return num

    def __repr__(self) -> str:
        if not self.den:
            return f"LocalizedFraction({self.num.render()})"
        dens = ", ".join(
            self._factor_poly(f).render() for f in self.den
        )
        return f"LocalizedFraction(({self.num.render()}) / [{dens}])"


def sum_fractions(fracs: Iterable[LocalizedFraction]) -> LocalizedFraction:
    """Sum many factored fractions (balanced reduction keeps numerators small)."""
    items = list(fracs)
    if not items:
        raise ValueError("empty sum (kind unknown)")
    while len(items) > 1:
        nxt = []
        for i in range(0, len(items) - 1, 2):
            nxt.append(items[i] + items[i + 1])
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def clear_and_evaluate(fracs: Iterable[LocalizedFraction]) -> LaurentPoly:
    """Sum fractions and clear the denominator exactly.

    This is the localization step: the sum over fixed points is a polynomial,
    so every denominator factor must divide out.  A NotDivisible here means
    the fixed-point data is inconsistent.
    """
    total = sum_fractions(fracs)
    return total.clear()


def as_constant(p: LaurentPoly) -> Fraction:
    """The value of p, asserting p is literally a constant.

    Fixed-point sums of degree-0 homogeneous fractions must clear to honest
    constants; a surviving monomial like ``s*t^-1`` (degree 0 but not
    constant) certifies inconsistent fixed-point data, as does a Laurent
    clearing that sneaks in negative exponents.
    """
    for (a, b) in p.coeffs:
        if (a, b) != (0, 0):
            raise ValueError(f"non-constant term s^{a}*t^{b} survives clearing")
    return p.constant_term()


def assert_polynomial(p: LaurentPoly) -> LaurentPoly:
    """Assert p has no negative exponents (an honest polynomial) and return it."""
    for (a, b) in p.coeffs:
        if a < 0 or b < 0:
            raise ValueError(f"negative exponent s^{a}*t^{b} survives clearing")
    return p
