"""Exact arithmetic in Q and in real quadratic fields Q(sqrt D).

Scalars are :class:`QNum` objects; arrays of field elements are stored as
:class:`QArray`, a pair of integer numpy arrays over one common positive
denominator.  Nothing in this module ever rounds.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "FieldMismatchError",
    "QNum",
    "QArray",
    "qnum_arith",
    "qnum_sign",
    "solve",
    "inverse",
    "inner",
    "PHI",
    "rank",
]

_INT64_SAFE = 2**62


class FieldMismatchError(ValueError):
    """Raised when values from two different quadratic fields are combined."""


def _is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


def _check_D(D: int) -> int:
    D = int(D)
    if D != 0 and not _is_squarefree(D):
        raise ValueError(f"D must be 0 or a squarefree integer > 1, got {D}")
    return D


class QNum:
    """An exact number ``a + b*sqrt(D)`` with rational ``a`` and ``b``.

    Stored in lowest terms as ``(p + q*sqrt(D)) / r`` with ``r > 0`` and
    ``gcd(p, q, r) == 1``, so structural equality is value equality.

    Parameters
    ----------
    a, b : int, Fraction or str
        Rational and irrational parts.
    D : int
        Squarefree radicand, or 0 for plain rationals (then ``b`` must be 0).
    """

    __slots__ = ("_p", "_q", "_r", "_D")

    def __init__(self, a=0, b=0, D: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        D = _check_D(D)
        if D == 0 and b != 0:
            raise ValueError("b must be 0 when D == 0")
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (r // a.denominator), b.numerator * (r // b.denominator), r, D)

    def _set(self, p: int, q: int, r: int, D: int) -> None:
        g = math.gcd(math.gcd(p, q), r)
        if g != 1:
            p //= g
            q //= g
            r //= g
        self._p, self._q, self._r, self._D = p, q, r, D

    @classmethod
    def _raw(cls, p: int, q: int, r: int, D: int) -> "QNum":
        obj = cls.__new__(cls)
        if r < 0:
            p, q, r = -p, -q, -r
        obj._set(p, q, r, D)
        return obj

    @classmethod
    def parse(cls, text: str, D: int | None = None) -> "QNum":
        """Inverse of ``str``: accepts ``"a"``, ``"a+b√D"`` and ``"b√D"``."""
        s = text.replace(" ", "").replace("sqrt", "√")
        m = re.fullmatch(r"([+-]?\d+(?:/\d+)?(?=[+-]|$))?(?:([+-]?\d*(?:/\d+)?)√(\d+))?", s)
        if not s or m is None:
            raise ValueError(f"cannot parse {text!r} as QNum")
        a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        if m.group(3) is None:
            return cls(a, 0, D or 0)
        bs = m.group(2)
        if bs in ("", "+"):
            bs = "1"
        elif bs == "-":
            bs = "-1"
        elif bs.startswith(("/", "+/", "-/")):
            bs = bs.replace("/", "1/", 1)
        rad = int(m.group(3))
        if D is not None and D != rad:
            raise FieldMismatchError(f"{text!r} is not in Q(√{D})")
        return cls(a, Fraction(bs), rad)

    # -- accessors -----------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._r)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._r)

    @property
    def D(self) -> int:
        return self._D

    def is_rational(self) -> bool:
        return self._q == 0

    def conjugate(self) -> "QNum":
        return QNum._raw(self._p, -self._q, self._r, self._D)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - D b^2``."""
        return Fraction(self._p * self._p - self._D * self._q * self._q, self._r * self._r)

    # -- coercion ------------------------------------------------------
    def _coerce(self, other) -> "QNum":
        if isinstance(other, QNum):
            if other._D != self._D:
                if other._q != 0:
                    raise FieldMismatchError(f"cannot combine Q(√{self._D}) with Q(√{other._D})")
                return QNum._raw(other._p, 0, other._r, self._D)
            return other
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            return QNum._raw(f.numerator, 0, f.denominator, self._D)
        return NotImplemented

    def _pair(self, other):
        """Both operands in one field; a rational operand takes the other's field."""
        if isinstance(other, QNum) and other._D != self._D and self._q == 0 and other._q != 0:
            return QNum._raw(self._p, 0, self._r, other._D), other
        return self, self._coerce(other)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        x, o = self._pair(other)
        if o is NotImplemented:
            return o
        r1, r2 = x._r, o._r
        return QNum._raw(x._p * r2 + o._p * r1, x._q * r2 + o._q * r1, r1 * r2, x._D)

    __radd__ = __add__

    def __neg__(self):
        return QNum._raw(-self._p, -self._q, self._r, self._D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        x, o = self._pair(other)
        if o is NotImplemented:
            return o
        return x + (-o)

    def __rsub__(self, other):
        x, o = self._pair(other)
        if o is NotImplemented:
            return o
        return o + (-x)

    def __mul__(self, other):
        x, o = self._pair(other)
        if o is NotImplemented:
            return o
        p1, q1, p2, q2 = x._p, x._q, o._p, o._q
        return QNum._raw(p1 * p2 + x._D * q1 * q2, p1 * q2 + q1 * p2, x._r * o._r, x._D)

    __rmul__ = __mul__

    def inverse(self) -> "QNum":
        if self._p == 0 and self._q == 0:
            raise ZeroDivisionError("QNum division by zero")
        # 1/((p+q√D)/r) = r(p-q√D)/(p^2-Dq^2)
        n = self._p * self._p - self._D * self._q * self._q
        return QNum._raw(self._r * self._p, -self._r * self._q, n, self._D)

    def __truediv__(self, other):
        x, o = self._pair(other)
        if o is NotImplemented:
            return o
        return x * o.inverse()

    def __rtruediv__(self, other):
        x, o = self._pair(other)
        if o is NotImplemented:
            return o
        return o * x.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QNum._raw(1, 0, 1, self._D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ---------------------------------------------------------
    def sign(self) -> int:
        p, q = self._p, self._q
        if q == 0:
            return (p > 0) - (p < 0)
        sq = 1 if q > 0 else -1
        if p == 0:
            return sq
        sp = 1 if p > 0 else -1
        if sp == sq:
            return sp
        # opposite signs: the larger magnitude wins; p^2 == q^2 D is impossible
        return sp if p * p > q * q * self._D else sq

    def __eq__(self, other):
        if isinstance(other, QNum):
            return (self._p, self._q, self._r, self._D) == (other._p, other._q, other._r, other._D) or (
                self._q == 0 and other._q == 0 and self._p == other._p and self._r == other._r
            )
        if isinstance(other, (int, Rational)):
            return self._q == 0 and Fraction(self._p, self._r) == other
        return NotImplemented

    def __hash__(self):
        if self._q == 0:
            return hash(Fraction(self._p, self._r))
        return hash((self._p, self._q, self._r, self._D))

    def _cmp(self, other) -> int:
        x, o = self._pair(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QNum with {type(other).__name__}")
        return (x - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self._p != 0 or self._q != 0

    def __float__(self):
        return (self._p + self._q * math.sqrt(self._D)) / self._r

    def sqrt(self) -> "QNum":
        """Exact square root inside the same field.

        Raises ``ValueError`` when the root is negative or not in the field.
        """
        s = self.sign()
        if s < 0:
            raise ValueError(f"negative argument {self}")
        if s == 0:
            return self
        a, b, D = self.a, self.b, self._D
        if b == 0:
            u = _rational_sqrt(a)
            if u is not None:
                return QNum(u, 0, D)
            if D:
                v = _rational_sqrt(a / D)
                if v is not None:
                    return QNum(0, v, D)
            raise ValueError(f"{self} has no square root in Q(√{D})")
        disc = _rational_sqrt(a * a - D * b * b)
        if disc is not None:
            for u2 in ((a + disc) / 2, (a - disc) / 2):
                u = _rational_sqrt(u2) if u2 > 0 else None
                if u:
                    root = QNum(u, b / (2 * u), D)
                    return root if root.sign() > 0 else -root
        raise ValueError(f"{self} has no square root in Q(√{D})")

    def __repr__(self):
        return f"QNum({self})"

    def __str__(self):
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        bs = f"{b}√{self._D}"
        if a == 0:
            return bs
        return f"{a}{'+' if b > 0 else ''}{bs}"


def _rational_sqrt(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


PHI = QNum(Fraction(1, 2), Fraction(1, 2), 5)


def qnum_arith(x: QNum, y, op: str) -> QNum:
    """Functional form of the field operations (``add, sub, mul, div, neg``)."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    raise ValueError(f"unknown op {op!r}")


def qnum_sign(x: QNum) -> int:
    return x.sign()


def _as_qnum(x, D: int) -> QNum:
    if isinstance(x, QNum):
        if x.D != D and not (x.D == 0 and x.is_rational()):
            raise FieldMismatchError(f"entry {x} is not in Q(√{D})")
        return QNum._raw(x._p, x._q, x._r, D)
    if isinstance(x, str):
        return _as_qnum(QNum.parse(x), D)
    f = Fraction(x)
    return QNum._raw(f.numerator, 0, f.denominator, D)


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def _pick(*arrays, factor: int = 1):
    """Return the dtype that keeps the pending products exact."""
    if any(a.dtype == object for a in arrays):
        return object
    bound = factor
    for a in arrays:
        bound *= _maxabs(a) + 1
    return np.int64 if bound < _INT64_SAFE else object


def _shrink(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and (a.size == 0 or _maxabs(a) < 2**40):
        return a.astype(np.int64)
    return a


class QArray:
    """Dense exact array over Q(sqrt D): ``(P + Q*sqrt(D)) / r``.

    ``P`` and ``Q`` are integer numpy arrays of identical shape and ``r`` is
    a positive Python int.  The triple is kept in lowest terms so that
    :meth:`key` is a canonical hash key (used to deduplicate group
    elements).
    """

    __slots__ = ("P", "Q", "r", "D")

    def __init__(self, P, Q=None, r: int = 1, D: int = 0, normalize: bool = True):
        P = np.asarray(P)
        if P.dtype != object:
            P = P.astype(np.int64)
        Q = np.zeros_like(P) if Q is None else np.asarray(Q)
        if Q.dtype != object:
            Q = Q.astype(np.int64)
        self.P, self.Q, self.r, self.D = P, Q, int(r), D
        if self.D == 0 and np.any(Q):
            raise ValueError("irrational part given with D == 0")
        if normalize:
            self._normalize()

    def _normalize(self) -> None:
        if self.r < 0:
            self.P, self.Q, self.r = -self.P, -self.Q, -self.r
        if self.P.size:
            g = math.gcd(int(np.gcd.reduce(self.P, axis=None)), int(np.gcd.reduce(self.Q, axis=None)), self.r)
        else:
            g = self.r
        if g > 1:
            self.P = self.P // g
            self.Q = self.Q // g
            self.r //= g
        self.P, self.Q = _shrink(self.P), _shrink(self.Q)

    # -- construction --------------------------------------------------
    @classmethod
    def from_entries(cls, rows, D: int = 0) -> "QArray":
        """Build from a (nested) list of QNum / int / Fraction / str."""
        D = _check_D(D)
        arr = np.empty(np.shape(np.asarray(rows, dtype=object)), dtype=object)
        flat = [_as_qnum(x, D) for x in np.asarray(rows, dtype=object).ravel()]
        den = 1
        for x in flat:
            den = den * x._r // math.gcd(den, x._r)
        P = np.array([x._p * (den // x._r) for x in flat], dtype=object).reshape(arr.shape)
        Q = np.array([x._q * (den // x._r) for x in flat], dtype=object).reshape(arr.shape)
        return cls(P, Q, den, D)

    @classmethod
    def identity(cls, n: int, D: int = 0) -> "QArray":
        return cls(np.eye(n, dtype=np.int64), None, 1, D)

    @classmethod
    def zeros(cls, shape, D: int = 0) -> "QArray":
        return cls(np.zeros(shape, dtype=np.int64), None, 1, D)

    # -- basic protocol ------------------------------------------------
    @property
    def shape(self):
        return self.P.shape

    @property
    def ndim(self):
        return self.P.ndim

    def __len__(self):
        return len(self.P)

    def __getitem__(self, idx):
        P, Q = self.P[idx], self.Q[idx]
        if np.ndim(P) == 0:
            return QNum._raw(int(P), int(Q), self.r, self.D)
        return QArray(np.array(P), np.array(Q), self.r, self.D)

    def entries(self) -> list:
        """Nested list of QNum."""
        return np.vectorize(lambda p, q: QNum._raw(int(p), int(q), self.r, self.D), otypes=[object])(
            self.P, self.Q
        ).tolist() if self.P.size else []

    @property
    def T(self) -> "QArray":
        return QArray(self.P.T, self.Q.T, self.r, self.D, normalize=False)

    def key(self) -> tuple:
        """Canonical hashable representation."""
        if self.P.dtype == object:
            return (self.shape, self.r, tuple(self.P.ravel()), tuple(self.Q.ravel()))
        return (self.shape, self.r, self.P.tobytes(), self.Q.tobytes())

    def __eq__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        return self.D == other.D and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QArray(shape={self.shape}, D={self.D}, r={self.r})"

    def to_float(self) -> np.ndarray:
        return (self.P.astype(float) + self.Q.astype(float) * math.sqrt(self.D)) / self.r

    # -- arithmetic ----------------------------------------------------
    def _same(self, other: "QArray") -> None:
        if self.D != other.D and np.any(self.Q) | np.any(other.Q):
            raise FieldMismatchError(f"cannot combine Q(√{self.D}) with Q(√{other.D})")

    def _field(self, other: "QArray") -> int:
        self._same(other)
        return self.D or other.D

    def __add__(self, other: "QArray") -> "QArray":
        D = self._field(other)
        r1, r2 = self.r, other.r
        g = math.gcd(r1, r2)
        m1, m2 = r2 // g, r1 // g
        dt = _pick(self.P, self.Q, other.P, other.Q, factor=2 * max(m1, m2) + 2)
        P = self.P.astype(dt) * m1 + other.P.astype(dt) * m2
        Q = self.Q.astype(dt) * m1 + other.Q.astype(dt) * m2
        return QArray(P, Q, r1 * m1, D)

    def __neg__(self) -> "QArray":
        return QArray(-self.P, -self.Q, self.r, self.D, normalize=False)

    def __sub__(self, other: "QArray") -> "QArray":
        return self + (-other)

    def scale(self, c) -> "QArray":
        """Multiply every entry by the scalar ``c``."""
        c = _as_qnum(c, self.D) if not isinstance(c, QNum) else c
        D = self.D or c.D
        if self.D and c.D and self.D != c.D:
            raise FieldMismatchError(f"cannot combine Q(√{self.D}) with Q(√{c.D})")
        p, q = c._p, c._q
        dt = _pick(self.P, self.Q, factor=(abs(p) + abs(q)) * (D + 1) + 1)
        P = self.P.astype(dt) * p + self.Q.astype(dt) * (D * q)
        Q = self.P.astype(dt) * q + self.Q.astype(dt) * p
        return QArray(P, Q, self.r * c._r, D)

    def __matmul__(self, other: "QArray") -> "QArray":
        D = self._field(other)
        n = self.shape[-1] if self.ndim else 1
        dt = _pick(self.P, self.Q, other.P, other.Q, factor=2 * n * (D + 1))
        P1, Q1, P2, Q2 = (a.astype(dt) for a in (self.P, self.Q, other.P, other.Q))
        if D:
            P = P1 @ P2 + D * (Q1 @ Q2)
            Q = P1 @ Q2 + Q1 @ P2
        else:
            P = P1 @ P2
            Q = np.zeros_like(P)
        return QArray(P, Q, self.r * other.r, D)

    def sum(self, axis=None) -> "QArray | QNum":
        P, Q = self.P.sum(axis=axis), self.Q.sum(axis=axis)
        if np.ndim(P) == 0:
            return QNum._raw(int(P), int(Q), self.r, self.D)
        return QArray(P, Q, self.r, self.D)

    def signs(self) -> np.ndarray:
        """Exact sign of every entry, as an int array of -1/0/+1."""
        a, b = self.P, self.Q
        sa, sb = np.sign(a).astype(np.int64), np.sign(b).astype(np.int64)
        out = np.where(sb == 0, sa, np.where(sa == 0, sb, sa))
        mixed = (sa * sb) < 0
        if np.any(mixed):
            aa = a[mixed].astype(object)
            bb = b[mixed].astype(object)
            bigger_a = np.array(aa * aa > bb * bb * self.D, dtype=bool)
            out[mixed] = np.where(bigger_a, sa[mixed], sb[mixed])
        return out

    def entry_codes(self) -> np.ndarray:
        """Dense integer labels, equal exactly when the entries are equal."""
        stacked = np.stack([self.P.ravel(), self.Q.ravel()], axis=1)
        if stacked.dtype == object:
            _, inv = np.unique(np.array([f"{a},{b}" for a, b in stacked]), return_inverse=True)
        else:
            _, inv = np.unique(stacked, axis=0, return_inverse=True)
        return inv.reshape(self.shape)


def inner(u: QArray, v: QArray, gram: QArray | None = None) -> QNum:
    """Scalar product ``u^T G v`` (``G`` defaults to the identity)."""
    if gram is None:
        return _dot(u, v)
    return _dot(u, gram @ v)


def _dot(u: QArray, v: QArray) -> QNum:
    out = QArray(u.P.reshape(1, -1), u.Q.reshape(1, -1), u.r, u.D, normalize=False) @ QArray(
        v.P.reshape(-1, 1), v.Q.reshape(-1, 1), v.r, v.D, normalize=False
    )
    return out[0, 0]


# -- small exact linear algebra (Gaussian elimination over QNum) --------

def _rows(A: QArray) -> list[list[QNum]]:
    return [list(row) for row in A.entries()]


def solve(A: QArray, B: QArray) -> QArray:
    """Solve ``A X = B`` exactly for square nonsingular ``A``."""
    D = A.D or B.D
    n = A.shape[0]
    vec = B.ndim == 1
    Bm = QArray(B.P.reshape(n, -1), B.Q.reshape(n, -1), B.r, B.D, normalize=False)
    M = [[_as_qnum(x, D) for x in row] for row in _rows(A)]
    R = [[_as_qnum(x, D) for x in row] for row in _rows(Bm)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        R[col], R[piv] = R[piv], R[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        R[col] = [x * inv for x in R[col]]
        for i in range(n):
            if i != col and M[i][col]:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
                R[i] = [x - f * y for x, y in zip(R[i], R[col])]
    X = QArray.from_entries(R, D)
    if vec:
        return QArray(X.P.reshape(-1), X.Q.reshape(-1), X.r, X.D)
    return X


def inverse(A: QArray) -> QArray:
    return solve(A, QArray.identity(A.shape[0], A.D))


def rank(A: QArray) -> int:
    """Exact rank by elimination."""
    M = [row[:] for row in _rows(A)]
    if not M:
        return 0
    nr, nc = len(M), len(M[0])
    rk = 0
    for col in range(nc):
        piv = next((i for i in range(rk, nr) if M[i][col]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = M[rk][col].inverse()
        for i in range(rk + 1, nr):
            if M[i][col]:
                f = M[i][col] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[rk])]
        rk += 1
        if rk == nr:
            break
    return rk
