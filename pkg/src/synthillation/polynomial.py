"""Weighted polynomials ``F = L + 2Q + 4C`` over Z_8 and phase polynomials.

Both kinds of polynomial are keyed by variable bitmasks: in a
:class:`WeightedPolynomial` the mask ``S`` names the monomial ``prod_{i in S} x_i``
(mask 0 is the constant); in a :class:`PhasePolynomial` the mask ``u`` names the
parity ``x . u mod 2``. Coefficients are stored as their full contribution to the
exponent of ``omega = exp(i pi / 4)``, reduced mod 8, so a CCZ is the single
term ``{0b111: 4}`` and a controlled-S is ``{0b11: 2}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NotInD3Error, ParseError

MOD = 8


def _subsets(mask: int) -> Iterable[int]:
    """Non-empty submasks of ``mask``."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _mask_vars(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def _as_index(x, k: int) -> int:
    """Accept a packed int or a 0/1 sequence of length ``k``."""
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if x < 0 or x >> k:
            raise ValueError(f"input {x} out of range for {k} variables")
        return x
    bits = list(x)
    if len(bits) != k:
        raise ValueError(f"expected {k} bits, got {len(bits)}")
    return sum((int(b) & 1) << i for i, b in enumerate(bits))


def _check_weighted(mask: int, c: int) -> None:
    deg = mask.bit_count()
    if deg > 3:
        raise NotInD3Error(f"degree-{deg} term {c}*{_mask_name(mask)} is outside D3")
    if c % (1 << max(deg - 1, 0)):
        raise NotInD3Error(
            f"coefficient {c} on degree-{deg} term {_mask_name(mask)} must be a multiple of {1 << (deg - 1)}"
        )


def _mask_name(mask: int) -> str:
    return "*".join(f"x{i + 1}" for i in _mask_vars(mask)) or "1"


@dataclass(frozen=True)
class WeightedPolynomial:
    """``F: Z_2^k -> Z_8`` of degree at most 3 with D3 weights."""

    num_vars: int
    terms: tuple[tuple[int, int], ...] = ()
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for mask, c in self.terms:
            if mask < 0 or mask >> self.num_vars:
                raise ValueError(f"monomial {mask:#b} uses variables beyond x{self.num_vars}")
            merged[mask] = (merged.get(mask, 0) + c) % MOD
        for mask, c in merged.items():
            _check_weighted(mask, c)
        clean = tuple(sorted((m, c) for m, c in merged.items() if c))
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_lookup", dict(clean))

    @classmethod
    def from_dict(cls, num_vars: int, coeffs: Mapping[int, int]) -> WeightedPolynomial:
        return cls(num_vars, tuple(coeffs.items()))

    @classmethod
    def monomial(cls, num_vars: int, variables: Sequence[int], coeff: int) -> WeightedPolynomial:
        mask = 0
        for v in variables:
            mask |= 1 << v
        return cls(num_vars, ((mask, coeff),))

    @classmethod
    def zero(cls, num_vars: int) -> WeightedPolynomial:
        return cls(num_vars)

    def coeff(self, mask: int) -> int:
        return self._lookup.get(mask, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self._lookup)

    @property
    def constant(self) -> int:
        return self.coeff(0)

    def _degree_part(self, deg: int) -> dict[tuple[int, ...], int]:
        return {_mask_vars(m): c for m, c in self.terms if m.bit_count() == deg}

    @property
    def linear(self) -> dict[tuple[int, ...], int]:
        return self._degree_part(1)

    @property
    def quadratic(self) -> dict[tuple[int, ...], int]:
        return self._degree_part(2)

    @property
    def cubic(self) -> dict[tuple[int, ...], int]:
        return self._degree_part(3)

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m, _ in self.terms), default=0)

    def without_constant(self) -> WeightedPolynomial:
        return WeightedPolynomial(self.num_vars, tuple((m, c) for m, c in self.terms if m))

    def is_homogeneous_cubic(self) -> bool:
        """Only cubic terms, ignoring global phase."""
        return all(m.bit_count() == 3 for m, _ in self.terms if m)

    def __add__(self, other: WeightedPolynomial) -> WeightedPolynomial:
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")
        return WeightedPolynomial(self.num_vars, self.terms + other.terms)

    def __neg__(self) -> WeightedPolynomial:
        return WeightedPolynomial(self.num_vars, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: WeightedPolynomial) -> WeightedPolynomial:
        return self + (-other)

    def __mul__(self, scalar: int) -> WeightedPolynomial:
        return WeightedPolynomial(self.num_vars, tuple((m, c * scalar) for m, c in self.terms))

    __rmul__ = __mul__

    def extend(self, num_vars: int) -> WeightedPolynomial:
        if num_vars < self.num_vars:
            raise ValueError("cannot shrink the variable count")
        return WeightedPolynomial(num_vars, self.terms)

    def evaluate(self, x) -> int:
        idx = _as_index(x, self.num_vars)
        return sum(c for m, c in self.terms if m & idx == m) % MOD

    def truth_table(self) -> np.ndarray:
        idx = np.arange(1 << self.num_vars, dtype=np.int64)
        out = np.zeros(1 << self.num_vars, dtype=np.int64)
        for m, c in self.terms:
            out[(idx & m) == m] += c
        return out % MOD

    def __str__(self) -> str:
        return format_polynomial(self)


@dataclass(frozen=True)
class PhasePolynomial:
    """``P_a(x) = sum_u a_u (x . u mod 2) + constant``, coefficients mod 8.

    ``constant`` only tracks global phase so that conversions round-trip exactly.
    """

    num_vars: int
    terms: tuple[tuple[int, int], ...] = ()
    constant: int = 0
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for u, a in self.terms:
            if u <= 0 or u >> self.num_vars:
                raise ValueError(f"parity {u:#b} is zero or out of range")
            merged[u] = (merged.get(u, 0) + a) % MOD
        clean = tuple(sorted((u, a) for u, a in merged.items() if a))
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "constant", self.constant % MOD)
        object.__setattr__(self, "_lookup", dict(clean))

    @classmethod
    def from_dict(cls, num_vars: int, coeffs: Mapping[int, int], constant: int = 0) -> PhasePolynomial:
        # the zero parity is identically zero; drop it rather than reject it
        return cls(num_vars, tuple((u, a) for u, a in coeffs.items() if u), constant)

    def coeff(self, u: int) -> int:
        return self._lookup.get(u, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self._lookup)

    def odd_parities(self) -> list[int]:
        return [u for u, a in self.terms if a & 1]

    def reduce_mod2(self) -> PhasePolynomial:
        return PhasePolynomial(self.num_vars, tuple((u, a & 1) for u, a in self.terms))

    def t_count(self) -> int:
        return len(self.odd_parities())

    def __add__(self, other: PhasePolynomial) -> PhasePolynomial:
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")
        return PhasePolynomial(self.num_vars, self.terms + other.terms, self.constant + other.constant)

    def scale(self, s: int) -> PhasePolynomial:
        return PhasePolynomial(self.num_vars, tuple((u, a * s) for u, a in self.terms), self.constant * s)

    def evaluate(self, x) -> int:
        idx = _as_index(x, self.num_vars)
        return (self.constant + sum(a for u, a in self.terms if (u & idx).bit_count() & 1)) % MOD

    def truth_table(self) -> np.ndarray:
        idx = np.arange(1 << self.num_vars, dtype=np.uint64)
        out = np.full(1 << self.num_vars, self.constant, dtype=np.int64)
        for u, a in self.terms:
            out += a * (np.bitwise_count(idx & np.uint64(u)) & 1).astype(np.int64)
        return out % MOD


def evaluate(f: WeightedPolynomial, x) -> int:
    return f.evaluate(x)


def evaluate_phase(p: PhasePolynomial, x) -> int:
    return p.evaluate(x)


def mobius_expand(table) -> dict[int, int]:
    """Multilinear coefficients mod 8 of a function given by its truth table.

    ``table`` is indexed by the packed input (bit ``i`` is ``x_{i+1}``) and may be
    a sequence of length ``2^m`` or a mapping covering every input. Returns
    ``{mask: c}`` with ``f(x) = sum_{S subset x} c_S``; zero coefficients omitted.
    """
    if isinstance(table, Mapping):
        size = len(table)
        m = size.bit_length() - 1
        if size != 1 << m or any(i not in table for i in range(size)):
            raise ValueError("truth table must cover all 2^m inputs")
        vals = np.array([table[i] for i in range(size)], dtype=np.int64)
    else:
        vals = np.array(table, dtype=np.int64).ravel()
        size = vals.size
        m = size.bit_length() - 1
        if size == 0 or size != 1 << m:
            raise ValueError(f"truth table length {size} is not a power of two")
    vals = vals % MOD
    for i in range(m):
        view = vals.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
        vals %= MOD
    nz = np.nonzero(vals)[0]
    return {int(s): int(vals[s]) for s in nz}


def weighted_from_table(table, num_vars: int | None = None) -> WeightedPolynomial:
    coeffs = mobius_expand(table)
    if num_vars is None:
        num_vars = (len(table) - 1).bit_length()
    return WeightedPolynomial.from_dict(num_vars, coeffs)


def phase_to_weighted(p: PhasePolynomial) -> WeightedPolynomial:
    """Weighted polynomial equal to ``p`` at every input.

    Uses ``parity(u . x) = sum_{S subset u, S nonempty} (-2)^{|S|-1} x_S``; terms
    with ``|S| >= 4`` vanish mod 8, so only subsets up to size three are emitted.
    """
    coeffs: dict[int, int] = {0: p.constant}
    for u, a in p.terms:
        vs = _mask_vars(u)
        for size, weight in ((1, 1), (2, -2), (3, 4)):
            for combo in combinations(vs, size):
                mask = sum(1 << v for v in combo)
                coeffs[mask] = (coeffs.get(mask, 0) + weight * a) % MOD
    return WeightedPolynomial.from_dict(p.num_vars, coeffs)


def weighted_to_phase(f: WeightedPolynomial) -> PhasePolynomial:
    """Phase polynomial equal to ``f`` at every input.

    A monomial ``c x_S`` expands as ``(c / 2^{|S|-1}) sum_{T subset S} (-1)^{|T|-1} x_T``
    (iterating ``ab = (a + b - a xor b) / 2``); the D3 weights guarantee the division
    is exact, and the result is only determined mod 8 up to pointwise-zero terms.
    """
    coeffs: dict[int, int] = {}
    for mask, c in f.terms:
        if mask == 0:
            continue
        deg = mask.bit_count()
        base = c >> (deg - 1)
        for t in _subsets(mask):
            sign = 1 if t.bit_count() & 1 else -1
            coeffs[t] = (coeffs.get(t, 0) + sign * base) % MOD
    return PhasePolynomial.from_dict(f.num_vars, coeffs, f.constant)


def is_clifford(f: WeightedPolynomial) -> bool:
    """True iff ``f = 2 F'`` for a D3 polynomial ``F'`` (global phase ignored)."""
    for mask, c in f.terms:
        deg = mask.bit_count()
        if deg == 0:
            continue
        if c % (2 << (deg - 1)):
            return False
    return True


def clifford_equivalent(f: WeightedPolynomial, g: WeightedPolynomial) -> bool:
    if f.num_vars != g.num_vars:
        raise ValueError("variable count mismatch")
    return is_clifford(f - g)


# canonical text form, e.g. "4*x1*x2*x3 + 2*x1*x2 + x2"

_TERM = re.compile(r"^(?:(\d+)(?:\*|(?=x))?)?((?:x\d+)(?:\*x\d+)*)?$")


def format_polynomial(f: WeightedPolynomial) -> str:
    parts = []
    ordered = sorted(
        f.terms, key=lambda mc: (-mc[0].bit_count(), _mask_vars(mc[0])) if mc[0] else (1, ())
    )
    for mask, c in ordered:
        if mask == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(_mask_name(mask))
        else:
            parts.append(f"{c}*{_mask_name(mask)}")
    return " + ".join(parts) if parts else "0"


def parse_polynomial(text: str, num_vars: int | None = None) -> WeightedPolynomial:
    """Parse e.g. ``"4*x1*x2*x3 + 2*x1*x2 - x2 + 3"``; variables are 1-based.

    ``num_vars`` defaults to the largest variable index that appears.
    """
    src = text.replace(" ", "")
    if not src:
        raise ParseError("empty polynomial")
    if src[0] not in "+-":
        src = "+" + src
    chunks = re.findall(r"([+-])([^+-]*)", src)
    if "".join(s + b for s, b in chunks) != src:
        raise ParseError(f"malformed polynomial {text!r}")
    coeffs: dict[int, int] = {}
    top = 0
    for sign, body in chunks:
        m = _TERM.match(body)
        if not body or not m or (m.group(1) is None and m.group(2) is None):
            raise ParseError(f"malformed term {body!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        mask = 0
        if m.group(2):
            for tok in m.group(2).split("*"):
                idx = int(tok[1:])
                if idx < 1:
                    raise ParseError(f"variables are 1-based, got {tok}")
                if mask >> (idx - 1) & 1:
                    raise ParseError(f"repeated variable {tok} in {body!r}")
                mask |= 1 << (idx - 1)
                top = max(top, idx)
        coeffs[mask] = coeffs.get(mask, 0) + (c if sign == "+" else -c)
    if num_vars is None:
        num_vars = top
    elif num_vars < top:
        raise ParseError(f"polynomial uses x{top} but only {num_vars} variables declared")
    try:
        return WeightedPolynomial.from_dict(num_vars, coeffs)
    except NotInD3Error as exc:
        raise ParseError(str(exc)) from None


def format_phase(p: PhasePolynomial) -> str:
    parts = []
    for u, a in p.terms:
        name = "^".join(f"x{i + 1}" for i in _mask_vars(u))
        name = f"({name})" if u.bit_count() > 1 else name
        parts.append(name if a == 1 else f"{a}*{name}")
    if p.constant:
        parts.append(str(p.constant))
    return " + ".join(parts) if parts else "0"
