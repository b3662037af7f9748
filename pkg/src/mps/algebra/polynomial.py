"""Sparse multivariate polynomials over the rationals.

A polynomial is a dict mapping exponent tuples to nonzero ``mpq``
coefficients, tied to a :class:`PolyRing` that names the variables.
"""
from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq


class RingMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Raised by :meth:`Polynomial.exact_quotient` when the division leaves a remainder."""


class PolyRing:
    """An ordered list of variable names with optional positive grading weights."""

    __slots__ = ("names", "index", "weights")

    def __init__(self, names, weights=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for v in names:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")
        self.names = names
        self.index = {v: i for i, v in enumerate(names)}
        if weights is None:
            weights = (1,) * len(names)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(names) or any(w <= 0 for w in weights):
            raise ValueError("weights must be positive, one per variable")
        self.weights = weights

    @property
    def nvars(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def with_weights(self, weights):
        return PolyRing(self.names, weights)

    def gens(self):
        return [self.var(v) for v in self.names]

    def var(self, name):
        i = self.index[name]
        e = [0] * len(self.names)
        e[i] = 1
        return Polynomial(self, {tuple(e): mpq(1)})

    def const(self, c):
        return Polynomial(self, {(0,) * len(self.names): to_mpq(c)})

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def subring(self, names):
        """Ring on a subset of the variables, keeping their weights."""
        w = [self.weights[self.index[v]] for v in names]
        return PolyRing(names, w)

    def __call__(self, text):
        return parse_polynomial(text, self)


def to_mpq(c):
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    return mpq(c)


class Polynomial:
    """Immutable sparse polynomial; value semantics, zero terms never stored."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms=None):
        self.ring = ring
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # ---- coercion ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self.ring.const(other)
        return NotImplemented

    # ---- arithmetic --------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return Polynomial._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = t.get(e)
                t[e] = ca * cb if v is None else v + ca * cb
        return Polynomial(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        c = to_mpq(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def mul_monomial(self, e, c=1):
        c = to_mpq(c)
        return Polynomial._raw(
            self.ring,
            {tuple(x + y for x, y in zip(k, e)): v * c for k, v in self.terms.items()},
        )

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.is_constant():
                return self.scale(1 / other.constant_term())
            return self.exact_quotient(other)
        return self.scale(1 / to_mpq(other))

    def exact_quotient(self, den):
        """Return ``q`` with ``q * den == self``; raise :class:`NotDivisible` otherwise."""
        den = self._coerce(den)
        if not den.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        key = _grlex_key
        lead = max(den.terms, key=key)
        lc = den.terms[lead]
        rest = [(e, c) for e, c in den.terms.items() if e != lead]
        r = dict(self.terms)
        q = {}
        while r:
            m = max(r, key=key)
            shift = tuple(x - y for x, y in zip(m, lead))
            if min(shift) < 0:
                raise NotDivisible(f"{self} is not divisible by {den}")
            f = r.pop(m) / lc
            q[shift] = f
            for e, c in rest:
                k = tuple(x + y for x, y in zip(e, shift))
                v = r.get(k, 0) - f * c
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        return Polynomial._raw(self.ring, q)

    # ---- comparison --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, mpq(0))

    # ---- inspection --------------------------------------------------
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def wdegree(self, weights=None):
        w = weights or self.ring.weights
        return max((sum(a * b for a, b in zip(e, w)) for e in self.terms), default=-1)

    def low_wdegree(self, weights=None):
        w = weights or self.ring.weights
        return min((sum(a * b for a, b in zip(e, w)) for e in self.terms), default=-1)

    def is_homogeneous(self, weights=None):
        w = weights or self.ring.weights
        return len({sum(a * b for a, b in zip(e, w)) for e in self.terms}) <= 1

    def degree_in(self, var):
        i = self.ring.index[var]
        return max((e[i] for e in self.terms), default=-1)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return [self.ring.names[i] for i in sorted(used)]

    def derivative(self, var):
        i = self.ring.index[var]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Polynomial._raw(self.ring, out)

    def coefficients_in(self, var):
        """Split as ``sum_d c_d * var^d``; returns ``{d: c_d}`` with ``c_d`` free of ``var``."""
        i = self.ring.index[var]
        out = {}
        for e, c in self.terms.items():
            d = e[i]
            k = e[:i] + (0,) + e[i + 1:]
            out.setdefault(d, {})[k] = c
        return {d: Polynomial._raw(self.ring, t) for d, t in out.items()}

    def lead_exponent(self, order):
        return min(self.terms, key=order.rank)

    def lead_term(self, order):
        e = self.lead_exponent(order)
        return e, self.terms[e]

    def monic(self, order):
        if not self.terms:
            return self
        _, c = self.lead_term(order)
        return self.scale(1 / c)

    def primitive(self):
        """Scale to integral, content-free coefficients with positive grlex-leading coefficient."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        lead = max(self.terms, key=_grlex_key)
        s = mpq(den, g)
        if self.terms[lead] < 0:
            s = -s
        return self.scale(s)

    # ---- ring changes ------------------------------------------------
    def subs(self, mapping, target=None):
        """Ring homomorphism: variables in ``mapping`` go to the given polynomials.

        ``mapping`` keys are variable names; unmapped variables are carried by
        name into ``target`` (default: own ring) and must exist there.
        """
        target = target or self.ring
        images = []
        for v in self.ring.names:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, Polynomial):
                    img = target.const(img)
                elif img.ring != target:
                    raise RingMismatch(f"image of {v} lives in {img.ring}, expected {target}")
                images.append(img)
            else:
                images.append(target.var(v) if v in target.index else None)
        powers = [dict() for _ in images]
        result = {}
        for e, c in self.terms.items():
            term = target.const(c)
            for i, a in enumerate(e):
                if not a:
                    continue
                img = images[i]
                if img is None:
                    raise RingMismatch(f"no image for variable {self.ring.names[i]}")
                pw = powers[i].get(a)
                if pw is None:
                    pw = img ** a
                    powers[i][a] = pw
                term = term * pw
                if not term.terms:
                    break
            for k, v in term.terms.items():
                w = result.get(k)
                result[k] = v if w is None else w + v
        return Polynomial(target, result)

    def to_ring(self, target):
        """Move into ``target`` by variable name (all used variables must exist there)."""
        idx = []
        for i, v in enumerate(self.ring.names):
            idx.append(target.index.get(v))
        n = target.nvars
        terms = {}
        for e, c in self.terms.items():
            k = [0] * n
            for i, a in enumerate(e):
                if a:
                    j = idx[i]
                    if j is None:
                        raise RingMismatch(f"variable {self.ring.names[i]} missing from {target}")
                    k[j] = a
            terms[tuple(k)] = c
        return Polynomial._raw(target, terms)

    def evaluate_zero(self, names):
        """Set the named variables to zero."""
        idx = [self.ring.index[v] for v in names]
        return Polynomial._raw(
            self.ring, {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}
        )

    # ---- printing ----------------------------------------------------
    def to_str(self, order=None):
        if not self.terms:
            return "0"
        if order is None:
            keys = sorted(self.terms, key=_grevlex_desc)
        else:
            keys = sorted(self.terms, key=order.rank)
        parts = []
        for e in keys:
            c = self.terms[e]
            mono = "*".join(
                (v if a == 1 else f"{v}^{a}") for v, a in zip(self.ring.names, e) if a
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = _fmt(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt(a)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def _fmt(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _grlex_key(e):
    return (sum(e), e)


def _grevlex_desc(e):
    return (-sum(e),) + tuple(reversed(e))


# ---- parsing -------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class PolynomialSyntaxError(ValueError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character at {pos} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            raise PolynomialSyntaxError("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            raise PolynomialSyntaxError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.unary()
            elif kind == "op" and val == "/":
                self.take()
                q = self.unary()
                if not q.is_constant() or q.is_zero():
                    raise PolynomialSyntaxError("division only by nonzero constants")
                p = p.scale(1 / q.constant_term())
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                p = p * self.power()
            else:
                return p

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            p = self.unary()
            return -p if val == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer")
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            if val not in self.ring.index:
                raise PolynomialSyntaxError(f"unknown variable {val!r} (ring {self.ring.names})")
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise PolynomialSyntaxError("unbalanced parentheses")
            return p
        raise PolynomialSyntaxError(f"unexpected token {val!r} in {self.text!r}")


def parse_polynomial(text, ring):
    """Parse ``text`` such as ``"3/2*x^2 - x y + 1"`` into a polynomial of ``ring``."""
    return _Parser(text, ring).parse()
