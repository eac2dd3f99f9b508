"""Quasi-polynomial symbols ``sum c * z**m * zbar**n * r**alpha * log(r)**p``.

The term grammar is closed under products, which is what powers of a symbol
and products such as ``u * phi**n`` need.  Text form::

    symbol := term (('+'|'-') term)*
    term   := [coeff '*'] factor ('*' factor)*   |   coeff
    factor := 'z'['^'int] | 'zbar'['^'int] | 'r^'float | 'log(r)'['^'int]
    coeff  := decimal | decimal'i' | '(' re ('+'|'-') im 'i' ')'
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "Term",
    "Symbol",
    "ClassificationFlags",
    "FourierProfiles",
    "SymbolParseError",
    "SingularEvaluationError",
    "parse_symbol",
    "eval_symbol",
    "multiply",
    "power",
    "classify",
    "fourier_profiles",
]


class SymbolParseError(ValueError):
    def __init__(self, message, text, offset):
        self.text = text
        self.offset = len(text[:offset].encode("utf-8"))
        super().__init__(f"{message} at byte offset {self.offset}")


class SingularEvaluationError(ValueError):
    """Evaluation at ``z = 0`` of a term with ``alpha < 0`` or a log factor."""


@dataclass(frozen=True)
class Term:
    c: complex
    m: int = 0
    n: int = 0
    alpha: float = 0.0
    p: int = 0

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "alpha", float(self.alpha))
        for name in ("m", "n", "p"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"term exponent {name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def signature(self) -> tuple:
        return (self.m, self.n, self.alpha, self.p)

    @property
    def frequency(self) -> int:
        """Angular frequency ``m - n``: the index shift the term induces."""
        return self.m - self.n

    @property
    def radial_power(self) -> float:
        return self.m + self.n + self.alpha

    def is_analytic(self) -> bool:
        return self.n == 0 and self.alpha == 0.0 and self.p == 0

    def is_conjugate_analytic(self) -> bool:
        return self.m == 0 and self.alpha == 0.0 and self.p == 0

    def is_log_r(self) -> bool:
        return self.m == 0 and self.n == 0 and self.alpha == 0.0 and self.p == 1

    def conjugate(self) -> "Term":
        return Term(self.c.conjugate(), self.n, self.m, self.alpha, self.p)

    def __mul__(self, other: "Term") -> "Term":
        return Term(self.c * other.c, self.m + other.m, self.n + other.n,
                    self.alpha + other.alpha, self.p + other.p)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        if (self.alpha < 0 or self.p > 0) and np.any(r == 0):
            raise SingularEvaluationError(
                f"term {_format_term(self)} is singular at z = 0")
        out = self.c * z ** self.m * np.conj(z) ** self.n
        if self.alpha != 0.0:
            out = out * r ** self.alpha
        if self.p:
            out = out * np.log(r) ** self.p
        return out


def _canonical(terms: Iterable[Term]) -> tuple:
    merged: dict = {}
    for t in terms:
        key = t.signature
        merged[key] = merged.get(key, 0j) + t.c
    return tuple(Term(c, *key) for key, c in sorted(merged.items()) if c != 0)


class Symbol:
    """Immutable canonical sum of :class:`Term` objects.

    Supports ``+``, ``-``, ``*`` (with symbols or scalars), ``**`` with a
    nonnegative integer, :meth:`conjugate`, and calling on complex points.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        object.__setattr__(self, "terms", _canonical(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Symbol is immutable")

    # constructors
    @classmethod
    def constant(cls, c) -> "Symbol":
        return cls([Term(c)])

    @classmethod
    def monomial(cls, m=0, n=0, alpha=0.0, p=0, c=1.0) -> "Symbol":
        return cls([Term(c, m, n, alpha, p)])

    @classmethod
    def parse(cls, text: str) -> "Symbol":
        return parse_symbol(text)

    # algebra
    def _coerce(self, other):
        if isinstance(other, Symbol):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Symbol.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Symbol(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return Symbol(Term(-t.c, *t.signature) for t in self.terms)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Symbol(a * b for a in self.terms for b in other.terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        return power(self, k)

    def conjugate(self) -> "Symbol":
        return Symbol(t.conjugate() for t in self.terms)

    def __call__(self, z):
        return eval_symbol(self, z)

    # comparisons / hashing
    def __eq__(self, other):
        return isinstance(other, Symbol) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self):
        return f"Symbol({str(self)!r})"

    def __str__(self):
        return format_symbol(self)

    @property
    def bandwidth(self) -> int:
        """Largest ``|m - n|`` over the terms (0 for the zero symbol)."""
        return max((abs(t.frequency) for t in self.terms), default=0)

    @property
    def degree(self) -> int:
        """Largest power of ``z`` appearing (the degree for analytic symbols)."""
        return max((t.m for t in self.terms), default=0)

    def disk_integrable(self) -> bool:
        return all(t.radial_power > -2 for t in self.terms)


# ---------------------------------------------------------------- printing

def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x)) if x != 0 or math.copysign(1, x) > 0 else "0"
    return repr(float(x))


def _split_coeff(c: complex):
    """Return (sign, text) with text empty for a unit coefficient."""
    if c.imag == 0:
        sign = "-" if c.real < 0 else "+"
        mag = abs(c.real)
        return sign, ("" if mag == 1 else _fmt_real(mag))
    if c.real == 0:
        sign = "-" if c.imag < 0 else "+"
        return sign, f"{_fmt_real(abs(c.imag))}i"
    op = "-" if c.imag < 0 else "+"
    return "+", f"({_fmt_real(c.real)}{op}{_fmt_real(abs(c.imag))}i)"


def _factors(t: Term) -> list:
    out = []
    if t.m:
        out.append("z" if t.m == 1 else f"z^{t.m}")
    if t.n:
        out.append("zbar" if t.n == 1 else f"zbar^{t.n}")
    if t.alpha != 0.0:
        out.append(f"r^{repr(t.alpha)}")
    if t.p:
        out.append("log(r)" if t.p == 1 else f"log(r)^{t.p}")
    return out


def _format_term(t: Term, with_sign=False) -> str:
    sign, coeff = _split_coeff(t.c)
    factors = _factors(t)
    if not factors:
        body = coeff or "1"
    elif coeff:
        body = "*".join([coeff] + factors)
    else:
        body = "*".join(factors)
    if with_sign:
        return sign, body
    return ("-" if sign == "-" else "") + body


def format_symbol(s: Symbol) -> str:
    """Canonical text: terms sorted by ``(m, n, alpha, p)``."""
    if not s.terms:
        return "0"
    parts = []
    for i, t in enumerate(s.terms):
        sign, body = _format_term(t, with_sign=True)
        if i == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


# ----------------------------------------------------------------- parsing

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<log>log\(r\))
  | (?P<zbar>zbar)
  | (?P<z>z)
  | (?P<r>r)
  | (?P<num>{_NUM})
  | (?P<op>[-+*^()i])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    pos, toks = 0, []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise SymbolParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = mt.lastgroup
        if kind != "ws":
            val = mt.group()
            toks.append((val if kind == "op" else kind, val, pos))
        pos = mt.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[self.i + k]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise SymbolParseError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def fail(self, msg):
        raise SymbolParseError(msg, self.text, self.peek()[2])

    def number(self, signed=False):
        sign = 1.0
        if signed and self.peek()[0] in "+-":
            sign = -1.0 if self.take()[0] == "-" else 1.0
        return sign * float(self.take("num")[1])

    def integer(self):
        tok = self.take("num")
        if not tok[1].isdigit():
            raise SymbolParseError("expected a nonnegative integer exponent", self.text, tok[2])
        return int(tok[1])

    def symbol(self):
        terms = []
        sign = 1.0
        if self.peek()[0] in "+-":
            sign = -1.0 if self.take()[0] == "-" else 1.0
        terms.append(self.term(sign))
        while self.peek()[0] in ("+", "-"):
            sign = -1.0 if self.take()[0] == "-" else 1.0
            terms.append(self.term(sign))
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return Symbol(terms)

    def coeff(self):
        kind = self.peek()[0]
        if kind == "num":
            x = self.number()
            if self.peek()[0] == "i":
                self.take()
                return complex(0.0, x)
            return complex(x)
        # '(' re +/- im 'i' ')'
        self.take("(")
        re_part = self.number(signed=True)
        if self.peek()[0] not in "+-":
            self.fail("expected '+' or '-' in complex coefficient")
        sgn = -1.0 if self.take()[0] == "-" else 1.0
        im_part = self.number()
        self.take("i")
        self.take(")")
        return complex(re_part, sgn * im_part)

    def factor(self, acc):
        kind = self.peek()[0]
        if kind == "z":
            self.take()
            acc[0] += self.integer() if self._caret() else 1
        elif kind == "zbar":
            self.take()
            acc[1] += self.integer() if self._caret() else 1
        elif kind == "r":
            self.take()
            if not self._caret():
                self.fail("expected '^' after r")
            acc[2] += self.number(signed=True)
        elif kind == "log":
            self.take()
            acc[3] += self.integer() if self._caret() else 1
        else:
            what = "end of input" if kind == "end" else repr(self.peek()[1])
            self.fail(f"expected a factor, found {what}")

    def _caret(self):
        if self.peek()[0] == "^":
            self.take()
            return True
        return False

    def term(self, sign):
        c = 1.0 + 0j
        acc = [0, 0, 0.0, 0]
        if self.peek()[0] in ("num", "("):
            c = self.coeff()
            if self.peek()[0] != "*":
                return Term(sign * c)
            self.take("*")
        self.factor(acc)
        while self.peek()[0] == "*":
            self.take()
            self.factor(acc)
        return Term(sign * c, *acc)


def parse_symbol(text: str) -> Symbol:
    """Parse the text grammar into a canonical :class:`Symbol`.

    Terms that are not area-integrable on the disk (``m + n + alpha <= -2``)
    trigger a ``UserWarning``; the domain is chosen later so this is not an
    error.
    """
    s = _Parser(text).symbol()
    if not s.disk_integrable():
        warnings.warn(f"symbol {text!r} is not integrable on the disk", UserWarning, stacklevel=2)
    return s


# ------------------------------------------------------------- operations

def eval_symbol(s: Symbol, z):
    """Evaluate ``s`` at a point or array of points."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for t in s.terms:
        out = out + t(z)
    return out if out.ndim else complex(out)


def multiply(a: Symbol, b: Symbol) -> Symbol:
    return a * b


def power(a: Symbol, k: int) -> Symbol:
    if int(k) != k or k < 0:
        raise ValueError("power expects a nonnegative integer exponent")
    out = Symbol.constant(1.0)
    for _ in range(int(k)):
        out = out * a
    return out


@dataclass(frozen=True)
class ClassificationFlags:
    analytic: bool
    conjugate_analytic: bool
    radial: bool
    harmonic: bool
    constant: bool
    bounded: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def classify(s: Symbol, domain=None) -> ClassificationFlags:
    """Structural flags of ``s``; ``bounded`` refers to ``domain`` (disk if None)."""
    terms = s.terms
    on_disk = domain is None or domain.is_disk
    return ClassificationFlags(
        analytic=all(t.is_analytic() for t in terms),
        conjugate_analytic=all(t.is_conjugate_analytic() for t in terms),
        radial=all(t.m == t.n for t in terms),
        harmonic=all(t.is_analytic() or t.is_conjugate_analytic() or t.is_log_r()
                     for t in terms),
        constant=all(t.m == 0 and t.n == 0 and t.alpha == 0.0 and t.p == 0 for t in terms),
        bounded=(not on_disk) or all(t.alpha >= 0 and t.p == 0 for t in terms),
    )


@dataclass(frozen=True)
class FourierProfiles:
    """Angular Fourier coefficients ``values[j - j_min, i] = psi_j(r_grid[i])``."""

    j_range: tuple
    r_grid: np.ndarray
    values: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.j_range[0], self.j_range[1] + 1)

    def support(self, tol=0.0) -> list:
        mags = np.max(np.abs(self.values), axis=1) if self.values.size else np.zeros(0)
        return [int(j) for j, v in zip(self.frequencies, mags) if v > tol]

    def reconstruct(self, theta) -> np.ndarray:
        """``sum_j psi_j(r) e^{i j theta}`` on the radial grid, one angle per radius."""
        theta = np.broadcast_to(np.asarray(theta, dtype=float), self.r_grid.shape)
        phases = np.exp(1j * np.outer(self.frequencies, np.ones_like(theta)) * theta)
        return np.sum(self.values * phases, axis=0)


def fourier_profiles(s: Symbol, j_range, r_grid) -> FourierProfiles:
    """Closed-form angular profiles of ``s`` on a radial grid.

    A term ``c z^m zbar^n r^alpha log(r)^p`` contributes
    ``c r^(m+n+alpha) log(r)^p`` at frequency ``m - n`` only.
    """
    j_min, j_max = (int(j_range[0]), int(j_range[1]))
    if j_max < j_min:
        raise ValueError("empty frequency range")
    r = np.asarray(r_grid, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise ValueError("radii must lie in [0, 1]")
    values = np.zeros((j_max - j_min + 1, r.size), dtype=complex)
    for t in s.terms:
        j = t.frequency
        if not j_min <= j <= j_max:
            continue
        if (t.radial_power < 0 or t.p > 0) and np.any(r == 0):
            raise SingularEvaluationError("profile is singular at r = 0")
        prof = t.c * r ** t.radial_power
        if t.p:
            prof = prof * np.log(r) ** t.p
        values[j - j_min] += prof
    return FourierProfiles((j_min, j_max), r, values)
