"""Second-order forward-mode jets in the two surface coordinates.

A :class:`Jet2` carries a value together with its exact gradient and
Hessian with respect to ``(xi1, xi2)``.  Every field may be a Python float
or a numpy array; arrays broadcast, so one jet can describe a whole grid of
points at once.

The Hessian is stored as its three independent entries ``h11, h12, h22``,
which keeps it symmetric by construction.
"""

import numpy as np

from .errors import DivisionByZero, DomainError

#: Denominators with magnitude below this raise :class:`DivisionByZero`.
DIVISION_FLOOR = 1e-300

FUNCTIONS = (
    "sin", "cos", "tan", "exp", "log", "sqrt",
    "sinh", "cosh", "tanh", "asin", "acos", "atan",
)


class Jet2:
    __slots__ = ("val", "g1", "g2", "h11", "h12", "h22")

    def __init__(self, val, g1=0.0, g2=0.0, h11=0.0, h12=0.0, h22=0.0):
        self.val = val
        self.g1 = g1
        self.g2 = g2
        self.h11 = h11
        self.h12 = h12
        self.h22 = h22

    @classmethod
    def const(cls, value):
        return cls(value)

    @property
    def grad(self):
        g1, g2 = np.broadcast_arrays(self.g1, self.g2, self.val)[:2]
        return np.stack([g1, g2], axis=-1)

    @property
    def hess(self):
        h11, h12, h22, _ = np.broadcast_arrays(self.h11, self.h12, self.h22, self.val)
        row1 = np.stack([h11, h12], axis=-1)
        row2 = np.stack([h12, h22], axis=-1)
        return np.stack([row1, row2], axis=-2)

    def __repr__(self):
        return (f"Jet2(val={self.val!r}, grad=({self.g1!r}, {self.g2!r}), "
                f"hess=(({self.h11!r}, {self.h12!r}), ({self.h12!r}, {self.h22!r})))")

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self


def jet_var(index, value):
    """Seed jet for coordinate ``xi<index>`` (index is 1 or 2)."""
    if index == 1:
        return Jet2(value, 1.0, 0.0)
    if index == 2:
        return Jet2(value, 0.0, 1.0)
    raise ValueError(f"jet index must be 1 or 2, got {index!r}")


def value_of(x):
    return x.val if isinstance(x, Jet2) else x


def _chain(a, f0, f1, f2):
    # result.hess = f''(a) grad a (x) grad a + f'(a) hess a
    return Jet2(
        f0,
        f1 * a.g1,
        f1 * a.g2,
        f2 * a.g1 * a.g1 + f1 * a.h11,
        f2 * a.g1 * a.g2 + f1 * a.h12,
        f2 * a.g2 * a.g2 + f1 * a.h22,
    )


def add(a, b):
    if isinstance(a, Jet2):
        if isinstance(b, Jet2):
            return Jet2(a.val + b.val, a.g1 + b.g1, a.g2 + b.g2,
                        a.h11 + b.h11, a.h12 + b.h12, a.h22 + b.h22)
        return Jet2(a.val + b, a.g1, a.g2, a.h11, a.h12, a.h22)
    if isinstance(b, Jet2):
        return Jet2(a + b.val, b.g1, b.g2, b.h11, b.h12, b.h22)
    return a + b


def neg(a):
    if isinstance(a, Jet2):
        return Jet2(-a.val, -a.g1, -a.g2, -a.h11, -a.h12, -a.h22)
    return -a


def sub(a, b):
    return add(a, neg(b))


def mul(a, b):
    if isinstance(a, Jet2):
        if isinstance(b, Jet2):
            return Jet2(
                a.val * b.val,
                a.g1 * b.val + a.val * b.g1,
                a.g2 * b.val + a.val * b.g2,
                a.h11 * b.val + 2.0 * a.g1 * b.g1 + a.val * b.h11,
                a.h12 * b.val + a.g1 * b.g2 + a.g2 * b.g1 + a.val * b.h12,
                a.h22 * b.val + 2.0 * a.g2 * b.g2 + a.val * b.h22,
            )
        return Jet2(a.val * b, a.g1 * b, a.g2 * b, a.h11 * b, a.h12 * b, a.h22 * b)
    if isinstance(b, Jet2):
        return mul(b, a)
    return a * b


def _check_denominator(d):
    if np.any(np.abs(d) < DIVISION_FLOOR):
        raise DivisionByZero("division by zero")


def reciprocal(a):
    v = value_of(a)
    _check_denominator(v)
    if not isinstance(a, Jet2):
        return 1.0 / v
    inv = 1.0 / v
    return _chain(a, inv, -inv * inv, 2.0 * inv * inv * inv)


def div(a, b):
    if isinstance(b, Jet2):
        return mul(a, reciprocal(b))
    _check_denominator(b)
    if isinstance(a, Jet2):
        return Jet2(a.val / b, a.g1 / b, a.g2 / b, a.h11 / b, a.h12 / b, a.h22 / b)
    return a / b


def _is_integer(p):
    return isinstance(p, (int, float, np.floating, np.integer)) and float(p).is_integer()


def int_power(a, n):
    """``a**n`` for integer ``n`` by repeated squaring/multiplication."""
    n = int(n)
    if n < 0:
        return reciprocal(int_power(a, -n))
    result = 1.0
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result if isinstance(result, Jet2) or not isinstance(a, Jet2) else Jet2.const(result)


def power(a, b):
    if not isinstance(b, Jet2):
        if _is_integer(b) and abs(b) <= 64:
            return int_power(a, b)
        av = value_of(a)
        if not _is_integer(b) and np.any(av <= 0):
            raise DomainError("non-positive base raised to a fractional power")
        if not isinstance(a, Jet2):
            return np.power(av, b)
        if _is_integer(b):
            f0 = np.power(av, b)
            f1 = b * np.power(av, b - 1)
            f2 = b * (b - 1) * np.power(av, b - 2)
        else:
            f0 = np.power(av, b)
            f1 = b * f0 / av
            f2 = (b - 1) * f1 / av
        return _chain(a, f0, f1, f2)
    # variable exponent: a^b = exp(b log a)
    return exp(mul(b, log(a)))


def _domain(ok, name):
    if not np.all(ok):
        raise DomainError(f"argument outside the domain of {name}")


def sin(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        return np.sin(v)
    s = np.sin(v)
    return _chain(a, s, np.cos(v), -s)


def cos(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        return np.cos(v)
    c = np.cos(v)
    return _chain(a, c, -np.sin(v), -c)


def tan(a):
    v = value_of(a)
    _domain(np.isfinite(np.tan(v)), "tan")
    t = np.tan(v)
    if not isinstance(a, Jet2):
        return t
    sec2 = 1.0 + t * t
    return _chain(a, t, sec2, 2.0 * t * sec2)


def exp(a):
    v = value_of(a)
    e = np.exp(v)
    if not isinstance(a, Jet2):
        return e
    return _chain(a, e, e, e)


def log(a):
    v = value_of(a)
    _domain(v > 0, "log")
    if not isinstance(a, Jet2):
        return np.log(v)
    inv = 1.0 / v
    return _chain(a, np.log(v), inv, -inv * inv)


def sqrt(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        _domain(v >= 0, "sqrt")
        return np.sqrt(v)
    _domain(v > 0, "sqrt")
    s = np.sqrt(v)
    d1 = 0.5 / s
    return _chain(a, s, d1, -0.5 * d1 / v)


def sinh(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        return np.sinh(v)
    s = np.sinh(v)
    return _chain(a, s, np.cosh(v), s)


def cosh(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        return np.cosh(v)
    c = np.cosh(v)
    return _chain(a, c, np.sinh(v), c)


def tanh(a):
    v = value_of(a)
    t = np.tanh(v)
    if not isinstance(a, Jet2):
        return t
    d1 = 1.0 - t * t
    return _chain(a, t, d1, -2.0 * t * d1)


def asin(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        _domain(np.abs(v) <= 1, "asin")
        return np.arcsin(v)
    _domain(np.abs(v) < 1, "asin")
    w = 1.0 - v * v
    d1 = 1.0 / np.sqrt(w)
    return _chain(a, np.arcsin(v), d1, v * d1 / w)


def acos(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        _domain(np.abs(v) <= 1, "acos")
        return np.arccos(v)
    _domain(np.abs(v) < 1, "acos")
    w = 1.0 - v * v
    d1 = 1.0 / np.sqrt(w)
    return _chain(a, np.arccos(v), -d1, -v * d1 / w)


def atan(a):
    v = value_of(a)
    if not isinstance(a, Jet2):
        return np.arctan(v)
    w = 1.0 / (1.0 + v * v)
    return _chain(a, np.arctan(v), w, -2.0 * v * w * w)


FUNCTION_TABLE = {
    "sin": sin, "cos": cos, "tan": tan, "exp": exp, "log": log, "sqrt": sqrt,
    "sinh": sinh, "cosh": cosh, "tanh": tanh, "asin": asin, "acos": acos, "atan": atan,
}


def apply(name, a):
    """Apply the named elementary function to a jet or plain number."""
    try:
        fn = FUNCTION_TABLE[name]
    except KeyError:
        raise ValueError(f"unknown function {name!r}") from None
    return fn(a)
