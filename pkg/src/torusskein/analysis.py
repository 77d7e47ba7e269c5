"""Sampled evaluation maps and Q(A)-rank estimates by degree-bounded relation search."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gauss
from .numth import (RootOfUnity, divisors, factorize, in_U, invertible_squares,
                    is_squarefree, sum_squares_closed)
from .skein import grading, label
from .tqft import nu_of, rt_invariant_S, rt_invariant_trace

THRESHOLD = 1e-6
THREADS = 1


def set_threads(n):
    global THREADS
    THREADS = max(1, int(n))


def _pmap(fn, items):
    if THREADS == 1 or len(items) < 64:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(THREADS) as ex:
        return list(ex.map(fn, items))


# ------------------------------------------------------------------ grids

class SampleGrid:
    """Sample points; `side` is "U" (Gauss-sum side) or "U0" (even-order roots)."""

    def __init__(self, points, side="U", tag=""):
        self.points = list(points)
        self.side = side
        self.tag = tag
        if side == "U":
            bad = [p for p in self.points if not in_U(p.order)]
        else:
            bad = [p for p in self.points if p.order % 2 or not in_U(_minus(p).order)]
        if bad:
            raise ValueError(f"points outside the {side} domain: {bad[:3]}")

    def __len__(self):
        return len(self.points)

    @property
    def values(self):
        return np.array([p.value for p in self.points])

    @classmethod
    def U(cls, count, orders=None, max_order=400, seed=0, cond=None, tag=""):
        """`count` distinct random points of U; `cond(n)` filters the orders."""
        if orders is None:
            orders = range(3, max_order + 1)
        cand = [(n, s) for n in orders if in_U(n) and (cond is None or cond(n))
                for s in range(1, n) if math.gcd(s, n) == 1]
        if len(cand) < count:
            raise ValueError(f"only {len(cand)} candidate points for {count} requested")
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(cand), size=count, replace=False)
        return cls([RootOfUnity(*cand[i]) for i in sorted(pick)], "U", tag)

    def to_U0(self):
        if self.side == "U0":
            return self
        return SampleGrid([_minus(p) for p in self.points], "U0", self.tag)

    def to_U(self):
        if self.side == "U":
            return self
        return SampleGrid([_minus(p) for p in self.points], "U", self.tag)

    def __add__(self, o):
        if o.side != self.side:
            raise ValueError("cannot merge grids on different sides")
        return SampleGrid(self.points + o.points, self.side, self.tag)


def _minus(p):
    """-p as a root of unity."""
    return RootOfUnity.from_fraction(2 * p.exponent + p.order, 2 * p.order)


@dataclass
class FunctionSample:
    ids: list
    values: np.ndarray            # generators x points
    grid: SampleGrid
    excluded: list = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(len(self.ids), len(self.grid))
        if len(self.ids) and np.isnan(self.values).all(axis=1).any():
            raise ValueError("a generator row is undefined everywhere")

    def stack(self, rows, ids):
        return FunctionSample(self.ids + list(ids), np.vstack([self.values, rows]), self.grid, self.excluded)

    def subset(self, idx):
        return FunctionSample([self.ids[i] for i in idx], self.values[list(idx)], self.grid, self.excluded)


def gauss_sample(k, two_bs, grid, ids=None):
    rows = np.array([_pmap(lambda p, tb=tb: gauss.gauss_value(k, tb, p), grid.points) for tb in two_bs],
                    dtype=complex).reshape(len(two_bs), len(grid))
    return FunctionSample(list(ids if ids is not None else [f"G({k},{tb})" for tb in two_bs]), rows, grid)


def nu_row(grid):
    g = grid.to_U0()
    return np.array([nu_of(p) for p in g.points], dtype=complex)


def sample_ev(k, basis, grid):
    """Rows RT(M_k, label) at the U0 points of grid."""
    g = grid.to_U0()
    rows = [_pmap(lambda p, lab=lab: rt_invariant_trace(k, lab, p), g.points) for lab in basis]
    return FunctionSample([tuple(label(*b)) for b in basis],
                          np.array(rows, dtype=complex).reshape(len(basis), len(g)), g)


# ------------------------------------------------------------------ ranks

@dataclass
class RankReport:
    generators: list
    D: int
    samples: int
    relations: int
    estimated: int
    nullities: dict
    stable: bool
    verified_points: int = 0
    k: int = None
    expected: int = None
    provenance: str = ""
    verdict: str = ""
    exact_relations: list = field(default_factory=list)
    condition: float = None
    notes: list = field(default_factory=list)
    parts: dict = field(default_factory=dict)

    def as_dict(self):
        return {k: (v if not isinstance(v, np.generic) else v.item()) for k, v in self.__dict__.items()}


def _design(F, x, D):
    E = x[None, :] ** np.arange(-D, D + 1)[:, None]
    M = (F[:, None, :] * E[None, :, :]).reshape(F.shape[0] * (2 * D + 1), F.shape[1]).T
    M = M[~np.isnan(M).any(axis=1)]
    n = np.linalg.norm(M, axis=1)
    # rows where every generator vanishes carry only rounding noise
    keep = n > 1e-9 * np.median(n) if len(n) else n > 0
    return M[keep] / n[keep, None]


def _nullity(F, x, D, thr):
    if D < 0:
        return 0, None
    M = _design(F, x, D)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return cols, None
    sv = np.linalg.svd(M, compute_uv=False)
    return int((sv < thr * sv[0]).sum()) + max(0, cols - len(sv)), sv


def required_points(g, D):
    return (2 * D + 1) * g + 16


def qa_rank(sample, D=4, fresh=None, threshold=THRESHOLD):
    """Number of Q(A)-independent rows, from nullities of the degree-D design matrix.

    A relation module of rank c contributes about c(2D+1) null vectors, so c is read off
    as half the growth of the nullity from D-1 to D. With `fresh`, the count is taken on
    the stacked sample so that spurious relations of the primary points drop out.
    """
    F = sample.values
    g = F.shape[0]
    if g == 0:
        return RankReport([], D, len(sample.grid), 0, 0, {}, True)
    N = len(sample.grid)
    if N < required_points(g, D):
        raise ValueError(f"need at least {required_points(g, D)} sample points, got {N}")
    x = sample.grid.values
    notes = []
    if fresh is not None:
        F = np.hstack([F, fresh.values])
        x = np.concatenate([x, fresh.grid.values])
    null = {}
    for d in (D - 2, D - 1, D):
        null[d], sv = _nullity(F, x, d, threshold)
    cond = None
    if sv is not None:
        nz = sv[sv >= threshold * sv[0]]
        cond = float(sv[0] / nz[-1]) if len(nz) else math.inf
    if null[D] == 0:
        c, stable = 0, True
    else:
        diff = null[D] - null.get(D - 1, 0)
        c = (diff + 1) // 2
        prev = null[D - 1] - null.get(D - 2, 0) if D >= 1 else diff
        stable = diff == prev and diff % 2 == 0
        if not stable:
            notes.append(f"nullity growth {prev} -> {diff} not yet stable at D={D}")
    c = min(c, g)
    return RankReport(list(sample.ids), D, N, c, g - c, {int(k): v for k, v in null.items() if k >= 0}, stable,
                      verified_points=0 if fresh is None else len(fresh.grid), condition=cond, notes=notes)


# ------------------------------------------------------------- G_k structure

def generator_classes(k):
    """{d: {rep lam: [lam, ...]}} for l = d*lam in 0..k-1, grouped by square class of lam mod k/d."""
    out = {}
    for l in range(k):
        d = math.gcd(l, k)
        lam = l // d
        kd = k // d
        key = (lam * lam) % kd if kd > 1 else 0
        reps = out.setdefault(d, {})
        reps.setdefault(key, []).append(lam)
    return {d: {v[0]: v for v in cls.values()} for d, cls in sorted(out.items())}


def gk_grid(k, D, reps_per_d, factor=1, seed=0, max_order=2000):
    """Union over d | k of d-adapted U points (gcd(order, k) = d), sized per part."""
    pts = []
    for i, (d, nrep) in enumerate(sorted(reps_per_d.items())):
        need = factor * required_points(nrep, D)
        cond = (lambda n, d=d: math.gcd(n, k) == d)
        g = SampleGrid.U(need, max_order=max_order, seed=seed + 7919 * i, cond=cond)
        pts.extend(g.points)
    return SampleGrid(pts, "U", f"k={k}")


def closed_dim_Gk(k):
    return sum_squares_closed(k)


def _verify_square_classes(k, classes, grid, limit=None):
    """Exact check of every generator-to-representative relation at the grid points."""
    checked, failed = [], []
    pts = grid.points if limit is None else grid.points[:limit]
    for d, cls in classes.items():
        for rep, members in cls.items():
            for lam in members[1:]:
                ok = all(gauss.square_class_relation(k, d, lam, rep, p) for p in pts)
                (checked if ok else failed).append((d, lam, rep, gauss.square_class_m(k, d, lam, rep)))
    return checked, failed


def dim_Gk(k, D=4, seed=0, escalate=True, exact_points=None):
    """Dimension of the span of G(k, 2l, .), l = 0..k-1, with upper bound from exact
    square-class relations and lower bound from qa_rank on the class representatives."""
    if k < 2:
        raise ValueError("k must be >= 2")
    classes = generator_classes(k)
    reps = [(d, rep) for d, cls in classes.items() for rep in cls]
    counts = {d: len(cls) for d, cls in classes.items()}
    grid = gk_grid(k, D, counts, seed=seed)
    fresh = gk_grid(k, D, counts, factor=3, seed=seed + 1)
    two_bs = [2 * d * rep for d, rep in reps]
    ids = [f"G({k},{tb})" for tb in two_bs]
    sample = gauss_sample(k, two_bs, grid, ids)
    fs = gauss_sample(k, two_bs, fresh, ids)
    rep_ = qa_rank(sample, D, fresh=fs)
    checked, failed = _verify_square_classes(k, classes, grid, exact_points)
    # per-part ranks on the part's own points
    parts = {}
    for d, cls in classes.items():
        idx = [i for i, (dd, _) in enumerate(reps) if dd == d]
        mask = [i for i, p in enumerate(grid.points) if math.gcd(p.order, k) == d]
        fmask = [i for i, p in enumerate(fresh.points) if math.gcd(p.order, k) == d]
        sub = FunctionSample([ids[i] for i in idx], sample.values[np.ix_(idx, mask)],
                             SampleGrid([grid.points[i] for i in mask]))
        fsub = FunctionSample([ids[i] for i in idx], fs.values[np.ix_(idx, fmask)],
                              SampleGrid([fresh.points[i] for i in fmask]))
        parts[d] = qa_rank(sub, D, fresh=fsub).estimated
    expected = closed_dim_Gk(k)
    rep_.k = k
    rep_.generators = [f"G({k},{2 * l})" for l in range(k)]
    rep_.relations = (k - len(reps)) + rep_.relations
    rep_.expected = expected
    rep_.provenance = "sum over d | k of invertible squares mod d"
    rep_.exact_relations = [{"d": d, "l": lam, "rep": rp, "m": m} for d, lam, rp, m in checked]
    rep_.parts = parts
    if failed:
        rep_.notes.append(f"square-class relations failed exactly: {failed}")
    if sum(parts.values()) != rep_.estimated:
        rep_.notes.append(f"per-part ranks {parts} do not sum to {rep_.estimated}")
    if not is_squarefree(k):
        rep_.notes.append("k not square-free: expected value is an upper bound")
    rep_.verdict = "match" if rep_.estimated == expected and not failed else "mismatch"
    if escalate and abs(rep_.estimated - expected) == 1 and D < 8:
        hi = dim_Gk(k, 8, seed, escalate=False, exact_points=exact_points)
        hi.notes.append(f"escalated from D={D} (estimate {rep_.estimated})")
        return hi
    return rep_


def nu_independence(k, D=4, seed=0):
    """True iff adjoining nu to the reduced G_k generators raises the rank by exactly one."""
    classes = generator_classes(k)
    reps = [(d, rep) for d, cls in classes.items() for rep in cls]
    counts = {d: len(cls) for d, cls in classes.items()}
    # one extra row needs (2D+1) more points; the d = k part absorbs them
    counts_nu = dict(counts)
    counts_nu[k] = counts_nu.get(k, 0) + 1
    grid = gk_grid(k, D, counts_nu, seed=seed)
    fresh = gk_grid(k, D, counts_nu, factor=3, seed=seed + 1)
    two_bs = [2 * d * rep for d, rep in reps]
    s, fs = gauss_sample(k, two_bs, grid), gauss_sample(k, two_bs, fresh)
    base = qa_rank(s, D, fresh=fs).estimated
    with_nu = qa_rank(s.stack(nu_row(grid)[None, :], ["nu"]), D,
                      fresh=fs.stack(nu_row(fresh)[None, :], ["nu"])).estimated
    return with_nu == base + 1


# ------------------------------------------------------------- images

def horizontal_basis(k):
    out = [(l, 0) for l in range(k // 2 + 1)] + [(0, 1), (0, 2), (1, 2)]
    if k % 2 == 0:
        out.append((1, 1))
    return out


def kinnear_dim(k):
    """Dimension of the horizontal part, taken as a trusted constant."""
    return (k - 1) // 2 + 4 if k % 2 else k // 2 + 5


def image_bound(k):
    return sum_squares_closed(k) + (2 if k % 2 else 4)


def image_dimension(k, D=None, seed=0, max_order=160):
    """Sum over mod-2 classes of the rank of ev on the horizontal basis."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if D is None:
        D = max(4, -(-k // 4) + 2)
    classes = {}
    for lab in horizontal_basis(k):
        classes.setdefault(tuple(grading(lab, k)), []).append(lab)
    gmax = max(len(v) for v in classes.values())
    grid = SampleGrid.U(required_points(gmax, D), max_order=max_order, seed=seed).to_U0()
    fresh = SampleGrid.U(3 * required_points(gmax, D), max_order=max_order, seed=seed + 1).to_U0()
    parts, total, notes = {}, 0, []
    for cls, labs in sorted(classes.items()):
        rows = []
        for g in (grid, fresh):
            s = sample_ev(k, labs, g)
            # (l,0) rows carry a common unit u^-k (-1)^l; divide it out so low D suffices
            u = g.to_U().values
            scale = np.array([(-1) ** lab[0] * u ** k if lab[1] == 0 else np.ones(len(g)) for lab in labs])
            rows.append(FunctionSample(s.ids, s.values * scale, g))
        rr = qa_rank(rows[0], D, fresh=rows[1])
        parts[str(cls)] = {"labels": [list(l) for l in labs], "dim": rr.estimated, "stable": rr.stable}
        notes.extend(rr.notes)
        total += rr.estimated
    rep = RankReport([list(l) for l in horizontal_basis(k)], D, len(grid), len(horizontal_basis(k)) - total,
                     total, {}, all(p["stable"] for p in parts.values()), verified_points=len(fresh), k=k,
                     expected=image_bound(k), provenance="dimension of G_k plus 2 (k odd) or 4 (k even)",
                     notes=notes + ["(l,0) rows rescaled by the unit (-1)^l u^k"], parts=parts)
    rep.verdict = "match" if total == rep.expected else "mismatch"
    return rep


def _twice_odd_prime_power(k):
    """(p, alpha) if k = 2 p^alpha with p an odd prime, else None."""
    if k % 2 or k % 4 == 0:
        return None
    f = factorize(k // 2)
    if len(f) != 1:
        return None
    (p, a), = f.items()
    return p, a


def expected_verdict(k):
    if k == 2:
        return "injective"
    pa = _twice_odd_prime_power(k)
    if pa:
        return "injective" if pa[1] == 1 else "unknown"
    return "non-injective"


@dataclass
class InjectivityReport:
    k: int
    image_dim: int
    kinnear: int
    bound: int
    verdict: str
    expected_verdict: str
    image: RankReport = None
    notes: list = field(default_factory=list)

    def as_dict(self):
        d = dict(self.__dict__)
        d["image"] = self.image.as_dict() if self.image else None
        return d


def injectivity_verdict(k, seed=0, image=None):
    rep = image if image is not None else image_dimension(k, seed=seed)
    kin = kinnear_dim(k)
    pa = _twice_odd_prime_power(k)
    notes = []
    if rep.estimated < kin:
        v = "non-injective"
    elif rep.estimated == kin:
        v = "injective"
    else:
        v = "inconsistent"
        notes.append("image larger than the horizontal part")
    if pa and pa[1] > 1:
        notes.append(f"computed {v}; k = 2*{pa[0]}^{pa[1]} is outside the proven range")
        v = "unknown"
    return InjectivityReport(k, rep.estimated, kin, image_bound(k), v, expected_verdict(k), rep, notes)


# ------------------------------------------------------------- identities

def default_U_grid(max_order=40):
    return SampleGrid([RootOfUnity(n, s) for n in range(3, max_order + 1) if in_U(n)
                       for s in range(1, n) if math.gcd(s, n) == 1])


def colinearity_mod4_failures(k, grid=None, exponent=None):
    """Points where xi^e G(k, k, xi) != G(k, 0, xi) exactly; e defaults to k/4."""
    if k % 4:
        raise ValueError(f"k={k} is not a multiple of 4")
    e = k // 4 if exponent is None else exponent
    grid = default_U_grid() if grid is None else grid
    bad = []
    for p in grid.points:
        lhs = gauss.gauss_brute(k, k, p).scale_by_power(e * p.exponent)
        if not lhs.equals(gauss.gauss_brute(k, 0, p)):
            bad.append(p)
    return bad


def colinearity_mod4(k, grid=None, exponent=None):
    return not colinearity_mod4_failures(k, grid, exponent)


def s_grid(count, max_r=80, seed=0):
    """Points of U0 with r odd."""
    return SampleGrid.U(count, max_order=max_r, seed=seed, cond=lambda n: n % 2 == 1).to_U0()


def s_colinearity_report(grid=None, D=4, seed=0):
    need = required_points(2, D)
    if grid is None:
        grid = s_grid(need, seed=seed)
    if any(p.half_order % 2 == 0 for p in grid.points):
        raise ValueError("s_colinearity needs r odd at every point")
    if len(grid) == 1:
        return {"colinear": True, "dim": 1, "excluded": [], "report": None}
    vals = np.array([[rt_invariant_S((1, 0), p), rt_invariant_S((1, 2), p)] for p in grid.points]).T
    keep = np.abs(vals[0]) > 1e-9
    excluded = [str(p) for p, k_ in zip(grid.points, keep) if not k_]
    g = SampleGrid([p for p, k_ in zip(grid.points, keep) if k_], "U0")
    fs = None
    fresh_grid = s_grid(3 * len(g), max_r=max(80, 6 * len(g)), seed=seed + 1)
    fv = np.array([[rt_invariant_S((1, 0), p), rt_invariant_S((1, 2), p)] for p in fresh_grid.points]).T
    fs = FunctionSample(["(1,0)", "(1,2)"], fv, fresh_grid)
    rep = qa_rank(FunctionSample(["(1,0)", "(1,2)"], vals[:, keep], g), D, fresh=fs)
    return {"colinear": rep.estimated == 1, "dim": rep.estimated, "excluded": excluded, "report": rep}


def s_colinearity(grid=None, D=4, seed=0):
    return s_colinearity_report(grid, D, seed)["colinear"]


def inequality_sides(k):
    if k % 2:
        raise ValueError(f"k={k} must be even")
    if k % 4 == 0:
        raise ValueError(f"k={k} must be twice an odd number")
    f = factorize(k // 2)
    lhs = 2
    for p, a in f.items():
        lhs *= (p ** a + 1) // 2
    return lhs, k // 2 + 1, len(f)


def inequality_check(k):
    """Both sides exact; True iff lhs <= rhs with equality exactly when at most one odd prime divides k."""
    lhs, rhs, n = inequality_sides(k)
    return lhs <= rhs and (lhs == rhs) == (n <= 1)


def square_count_table(k):
    return {d: invertible_squares(d).count for d in divisors(k)}
