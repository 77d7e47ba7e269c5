"""Slow float reference implementations, written without the package internals."""
import cmath
import math


def e(x):
    return cmath.exp(2j * math.pi * x)


def gauss_float(a, b, n, s=1):
    return sum(e(s * (a * j * j + b * j) / n) for j in range(n))


def cheb_T_at(n, t):
    """T_n(2 cos t)."""
    return 2 * math.cos(n * t)


def cheb_S_at(n, t):
    """S_n(2 cos t)."""
    return math.sin(n * t) / math.sin(t)


def fold(j, r):
    """Fold by repeatedly applying e_{-j} = -e_j, e_{r+i} = -e_{r-i} and, for r odd, e_j = e_{r-j}."""
    sign = 1
    for _ in range(8 * r + 8):
        if j < 0:
            j, sign = -j, -sign
        elif j == 0 or j == r:
            return None, 0
        elif j > r:
            j, sign = 2 * r - j, -sign
        elif r % 2 and 2 * j > r:
            j = r - j
        else:
            return j, sign
    raise RuntimeError("fold did not terminate")


def basis(r):
    return list(range(1, (r - 1) // 2 + 1)) if r % 2 else list(range(1, r))


def z_matrix(p, q, r, s):
    """Curve operator at xi = exp(i pi s / r) as a list of lists."""
    xi = lambda m: e(s * m / (2 * r))
    idx = basis(r)
    pos = {j: i for i, j in enumerate(idx)}
    M = [[0j] * len(idx) for _ in idx]
    for c, j in enumerate(idx):
        for tgt, m in ((j + q, 2 * p * j + p * q), (j - q, -2 * p * j + p * q)):
            i, sg = fold(tgt, r)
            if sg:
                M[pos[i]][c] += (-1) ** p * sg * xi(m)
    return M


def trace_twisted(k, terms, r, s):
    """Tr(rho(B_k) Z(sum c (p,q))) with u = -xi; terms is [(coef_at_xi, p, q)]."""
    u = lambda m: e(s * m / (2 * r) + m / 2)
    idx = basis(r)
    total = 0j
    for c, p, q in terms:
        M = z_matrix(p, q, r, s)
        total += c * sum(u(k * (j * j - 1)) * M[i][i] for i, j in enumerate(idx))
    return total


def closed_Tl(k, l, r, s):
    """(-1)^l u^-k (G(k, 2l, u) - nu) computed from scratch."""
    # u = -xi = exp(i pi (s + r) / r)
    num, den = s + r, 2 * r
    g = math.gcd(num, den)
    num, den = num // g, den // g
    G = gauss_float(k, 2 * l, den, num)
    nu = 1 if r % 2 else 2
    return (-1) ** l * e(-k * num / den) * (G - nu)
