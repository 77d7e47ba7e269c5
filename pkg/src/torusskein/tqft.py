"""Torus TQFT at an even-order root xi: folded basis e_j, twist action, curve operators, traces."""
import math
from collections import namedtuple

import numpy as np

from .gauss import gauss_value
from .numth import RootOfUnity, negate_root
from .skein import SkeinVector, label


class BasisSpec:
    """Index range of the basis {e_j} for xi of order 2r."""
    __slots__ = ("xi", "r", "indices")

    def __init__(self, xi):
        if isinstance(xi, tuple):
            xi = RootOfUnity(*xi)
        self.xi = xi
        self.r = xi.half_order
        top = (self.r - 1) // 2 if self.r % 2 else self.r - 1
        self.indices = tuple(range(1, top + 1))

    @property
    def dim(self):
        return len(self.indices)

    def __repr__(self):
        return f"BasisSpec(order={self.xi.order}, s={self.xi.exponent}, dim={self.dim})"


FoldResult = namedtuple("FoldResult", "index sign")
_KILLED = FoldResult(None, 0)


# individual folding moves on (j, sign); each returns the new state, _KILLED, or None if not applicable
def _mv_negate(j, s, r):
    return (-j, -s) if j < 0 else None


def _mv_kill(j, s, r):
    return _KILLED if j in (0, r) else None


def _mv_upper(j, s, r):
    # e_{r+i} = -e_{r-i}
    return (2 * r - j, -s) if j > r else None


def _mv_odd(j, s, r):
    # odd r: e_j = e_{r-j}
    return (r - j, s) if r % 2 and (r - 1) // 2 < j < r else None


FOLD_MOVES = (_mv_negate, _mv_kill, _mv_upper, _mv_odd)


def fold_index(j, spec, order=None):
    """Fold index j into the basis range of spec; `order` permutes the move priority."""
    r = spec.r if isinstance(spec, BasisSpec) else int(spec)
    moves = FOLD_MOVES if order is None else [FOLD_MOVES[i] for i in order]
    s = 1
    while True:
        for mv in moves:
            out = mv(j, s, r)
            if out is not None:
                break
        else:
            return FoldResult(j, s)
        if out is _KILLED:
            return _KILLED
        j, s = out


def _fold_fast(j, r):
    j %= 2 * r
    s = 1
    if j > r:
        j, s = 2 * r - j, -1
    if j == 0 or j == r:
        return None, 0
    if r % 2 and j > (r - 1) // 2:
        j = r - j
    return j, s


class TQFTOperator:
    """Dense operator on span{e_j}; diagonal ones also carry exact exponents of u = -xi."""
    __slots__ = ("matrix", "spec", "exponents")

    def __init__(self, matrix, spec, exponents=None):
        self.matrix = np.asarray(matrix, dtype=complex)
        if self.matrix.shape != (spec.dim, spec.dim):
            raise ValueError(f"shape {self.matrix.shape} does not match {spec}")
        self.spec = spec
        self.exponents = exponents

    def __matmul__(self, o):
        return TQFTOperator(self.matrix @ o.matrix, self.spec)

    def __add__(self, o):
        return TQFTOperator(self.matrix + o.matrix, self.spec)

    def __rmul__(self, c):
        return TQFTOperator(c * self.matrix, self.spec)

    def trace(self):
        return complex(np.trace(self.matrix))

    def __repr__(self):
        return f"TQFTOperator({self.spec}, exact={self.exponents is not None})"


def _spec(x):
    return x if isinstance(x, BasisSpec) else BasisSpec(x)


def rho_Bk(k, spec):
    """Diagonal twist action: e_j -> (-xi)^(k(j^2-1)) e_j."""
    spec = _spec(spec)
    u = negate_root(spec.xi)
    ex = np.array([(k * (j * j - 1)) % u.order for j in spec.indices], dtype=np.int64)
    vals = np.exp(2j * np.pi * ((ex * u.exponent) % u.order) / u.order)
    return TQFTOperator(np.diag(vals), spec, exponents=ex)


def _z_label(p, q, spec):
    xi, r = spec.xi, spec.r
    n = spec.dim
    M = np.zeros((n, n), dtype=complex)
    sgn = -1 if p % 2 else 1
    for col, j in enumerate(spec.indices):
        for tgt, e in ((j + q, 2 * p * j + p * q), (j - q, -2 * p * j + p * q)):
            i, s = _fold_fast(tgt, r)
            if s:
                M[i - 1, col] += sgn * s * xi.pow_value(e)
    return M


def z_curve(p, q=None, spec=None):
    """Operator of the curve (p,q)_T, or of a SkeinVector with coefficients evaluated at A = xi."""
    if isinstance(p, SkeinVector):
        spec = _spec(q if spec is None else spec)
        M = np.zeros((spec.dim, spec.dim), dtype=complex)
        for (a, b), c in p.terms.items():
            M += c.at_root(spec.xi) * _z_label(a, b, spec)
        return TQFTOperator(M, spec)
    spec = _spec(spec)
    return TQFTOperator(_z_label(p, q, spec), spec)


def _as_vector(v):
    if isinstance(v, SkeinVector):
        return v
    return SkeinVector.of(*v)


def _root_pow(xi, e):
    e = np.asarray(e, dtype=np.int64)
    return np.exp(2j * np.pi * ((e * xi.exponent) % xi.order) / xi.order)


def _fold_arr(J, r):
    J = np.mod(J, 2 * r)
    s = np.where(J > r, -1, 1)
    J = np.where(J > r, 2 * r - J, J)
    s = np.where((J == 0) | (J == r), 0, s)
    if r % 2:
        J = np.where(J > (r - 1) // 2, r - J, J)
    return J, s


def z_diagonal(p, q, spec):
    """Diagonal of Z((p,q)_T) without assembling the matrix."""
    spec = _spec(spec)
    J = np.array(spec.indices, dtype=np.int64)
    out = np.zeros(len(J), dtype=complex)
    sgn = -1 if p % 2 else 1
    for tgt, e in ((J + q, 2 * p * J + p * q), (J - q, -2 * p * J + p * q)):
        idx, s = _fold_arr(tgt, spec.r)
        hit = (idx == J) & (s != 0)
        out[hit] += sgn * s[hit] * _root_pow(spec.xi, e[hit])
    return out


def rt_invariant_trace(k, v, xi):
    """Tr(rho(B_k) Z(v)) on the torus space at xi; only diagonals are needed."""
    spec = _spec(xi)
    u = negate_root(spec.xi)
    J = np.array(spec.indices, dtype=np.int64)
    twist = _root_pow(u, k * (J * J - 1))
    total = 0j
    for (a, b), c in _as_vector(v).terms.items():
        total += c.at_root(spec.xi) * complex(np.dot(twist, z_diagonal(a, b, spec)))
    return total


def rt_invariant_trace_dense(k, v, xi):
    """Same trace through full matrices; kept as an independent route."""
    spec = _spec(xi)
    return (rho_Bk(k, spec) @ z_curve(_as_vector(v), spec)).trace()


def nu_of(xi):
    """1 for order 2r with r odd, 2 for r even."""
    return 1 if xi.half_order % 2 else 2


def rt_closed_Tl(k, l, xi):
    if not 0 <= l <= k // 2:
        raise ValueError(f"l={l} outside 0..{k // 2}")
    u = negate_root(xi)
    return (-1) ** l * u.pow_value(-k) * (gauss_value(k, 2 * l, u) - nu_of(xi))


def ev_closed_pq(k, p, q, xi):
    """Closed value of the trace on (p,q)_T, q != 0, for r > 2|q|."""
    if q == 0:
        raise ValueError("q must be nonzero")
    r = xi.half_order
    if r <= 2 * abs(q):
        raise ValueError(f"need r > 2|q|, got r={r}, q={q}")
    p, q = label(p, q)
    u = negate_root(xi)
    if q % 2 == 0:
        val = (-1) ** (p + 1) * u.pow_value(k * ((q // 2) ** 2 - 1))
        return val if r % 2 else 2 * val
    if r % 2 == 0:
        return 0j
    # odd q, odd r: the p-dependence cancels
    return u.pow_value(k * (((r + q) // 2) ** 2 - 1))


# ------------------------------------------------------------- general monodromy

def _ffold(i, r):
    """Fold in the r-periodic basis f_j = (-1)^j e_j, where f_{-j} = -f_j."""
    i %= r
    if i == 0:
        return None, 0
    if i > (r - 1) // 2:
        return r - i, -1
    return i, 1


def rho_general(a, b, c, d, spec, basis="e"):
    """Projective action of [[a,b],[c,d]] for r odd, defined up to a unit scalar.

    The sum over t is periodic only in the basis f_j = (-1)^j e_j, so the matrix
    is built there and conjugated by diag((-1)^j) when basis == "e".
    """
    spec = _spec(spec)
    r = spec.r
    if r % 2 == 0:
        raise ValueError("general monodromy needs r odd")
    if a * d - b * c != 1:
        raise ValueError(f"det [[{a},{b}],[{c},{d}]] != 1")
    g = math.gcd(r, c)
    rp = r // g
    inv = pow(c // g, -1, rp) if rp > 1 else 0
    u = negate_root(spec.xi)
    n = spec.dim
    M = np.zeros((n, n), dtype=complex)
    norm = 1 / math.sqrt(rp)
    for col, j in enumerate(spec.indices):
        for t in range(rp):
            i, s = _ffold(d * j + g * t, r)
            if s:
                e = a * inv * g * t * t + b * d * j * j + 2 * b * g * j * t
                M[i - 1, col] += s * norm * u.pow_value(e)
    if basis == "e":
        sg = np.array([(-1) ** j for j in spec.indices])
        M = sg[:, None] * M * sg[None, :]
    elif basis != "f":
        raise ValueError(f"unknown basis {basis!r}")
    return TQFTOperator(M, spec)


def rt_invariant_S(v, xi):
    """Tr(rho(S) Z(v)) for the monodromy S = [[0,-1],[1,0]]; a phase class."""
    spec = _spec(xi)
    S = rho_general(0, -1, 1, 0, spec)
    return (S @ z_curve(_as_vector(v), spec)).trace()


def phase_ratio(M1, M2, floor=1e-10):
    """(max relative spread, mean ratio) of the entrywise ratio M1/M2 where both are non-negligible."""
    A = M1.matrix if isinstance(M1, TQFTOperator) else np.asarray(M1)
    B = M2.matrix if isinstance(M2, TQFTOperator) else np.asarray(M2)
    mask = (np.abs(A) > floor) & (np.abs(B) > floor)
    if (np.abs(A) > floor).sum() != mask.sum() or (np.abs(B) > floor).sum() != mask.sum():
        return math.inf, complex("nan")
    ratios = A[mask] / B[mask]
    c = ratios.mean()
    return float(np.max(np.abs(ratios - c)) / abs(c)), complex(c)


def ev_horizontal(k, v, xi):
    """Evaluation compatible with the skein relations used by reduce_horizontal_k.

    Those relations slide (0,1) to (k,1), which this normalisation of rho realises
    with the twist of opposite sign. On the reduced basis labels the two agree up
    to A -> A^-1, which leaves every Q(A)-rank unchanged.
    """
    return rt_invariant_trace(-k, v, xi)
