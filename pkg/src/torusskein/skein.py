"""Skein algebra of the torus over Q[A, A^-1] and the two reduction systems.

Labels (p, q) stand for the Chebyshev-weighted curves (p,q)_T, with
(p, q) and (-p, -q) identified.
"""
import heapq
import re
from collections import namedtuple
from fractions import Fraction

# ------------------------------------------------------------------ Laurent


class Laurent:
    """Sparse Laurent polynomial {exponent: Fraction}; zero coefficients never stored."""
    __slots__ = ("terms", "var")

    def __init__(self, terms=None, var="A"):
        t = {}
        if terms:
            for e, c in dict(terms).items():
                c = Fraction(c)
                if c:
                    t[int(e)] = t.get(int(e), 0) + c
                    if not t[int(e)]:
                        del t[int(e)]
        self.terms = t
        self.var = var

    @classmethod
    def mono(cls, e, c=1, var="A"):
        return cls({e: c}, var)

    @classmethod
    def const(cls, c, var="A"):
        return cls({0: c}, var)

    def _coerce(self, o):
        if isinstance(o, Laurent):
            return o
        return Laurent.const(o, self.var)

    def __add__(self, o):
        o = self._coerce(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return Laurent(t, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.terms.items()}, self.var)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                t[e1 + e2] = t.get(e1 + e2, 0) + c1 * c2
        return Laurent(t, self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Laurent.const(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, e):
        return Laurent({k + e: c for k, c in self.terms.items()}, self.var)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = Laurent.const(o, self.var)
        if not isinstance(o, Laurent):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    @property
    def degree(self):
        return max(self.terms) if self.terms else None

    @property
    def low(self):
        return min(self.terms) if self.terms else None

    def divexact(self, o):
        """Exact quotient self / o; raises ValueError when o does not divide self."""
        o = self._coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Laurent(var=self.var)
        # long division from the top; quotient exponents cannot drop below floor
        num = dict(self.terms)
        dhi = o.degree
        lead = o.terms[dhi]
        floor = self.low - o.low
        q = {}
        while num and max(num) - dhi >= floor:
            e = max(num) - dhi
            c = num[max(num)] / lead
            q[e] = c
            for oe, oc in o.terms.items():
                v = num.get(oe + e, 0) - c * oc
                if v:
                    num[oe + e] = v
                else:
                    num.pop(oe + e, None)
        if num:
            raise ValueError(f"{o} does not divide {self}")
        return Laurent(q, self.var)

    def __call__(self, x):
        return sum(complex(c) * x ** e for e, c in self.terms.items()) if self.terms else 0j

    def at_root(self, xi):
        """Evaluate at A = xi for a RootOfUnity, using exact exponent reduction."""
        return sum(float(c) * xi.pow_value(e) for e, c in self.terms.items()) if self.terms else 0j

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            parts.append(f"{self.terms[e]}*{self.var}^{e}")
        return " + ".join(parts)

    __repr__ = __str__

    _TERM = re.compile(r"^\s*([+-]?\s*\d+(?:/\d+)?)\s*(?:\*\s*([A-Za-z])\s*(?:\^\s*\(?\s*([+-]?\d+)\s*\)?)?)?\s*$")

    @classmethod
    def parse(cls, text, var="A"):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        out = Laurent(var=var)
        for tok in _split_top(text):
            tok = tok.strip()
            if not tok:
                continue
            m = cls._TERM.match(tok)
            if not m:
                m2 = re.match(r"^\s*([+-]?)\s*([A-Za-z])\s*(?:\^\s*\(?\s*([+-]?\d+)\s*\)?)?\s*$", tok)
                if not m2:
                    raise ValueError(f"cannot parse Laurent term {tok!r}")
                sign = -1 if m2.group(1) == "-" else 1
                e = int(m2.group(3)) if m2.group(3) is not None else 1
                out = out + Laurent.mono(e, sign, var)
                continue
            c = Fraction(m.group(1).replace(" ", ""))
            if m.group(2) is None:
                e = 0
            else:
                e = int(m.group(3)) if m.group(3) is not None else 1
            out = out + Laurent.mono(e, c, var)
        return out


def _split_top(text):
    """Split on '+' at parenthesis depth 0, keeping a '+' or '-' that follows '^' or '*' attached."""
    parts, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0 and cur.strip() and cur.rstrip()[-1] not in "^*":
            parts.append(cur)
            cur = ""
        else:
            cur += ch
        i += 1
    parts.append(cur)
    return parts


def A(e=1):
    return Laurent.mono(e)


ONE = Laurent.const(1)

# ---------------------------------------------------------------- Chebyshev


def chebyshev_T(n):
    """T_0 = 2, T_1 = X, T_n = X T_{n-1} - T_{n-2}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    X = Laurent.mono(1, var="X")
    a, b = Laurent.const(2, "X"), X
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, X * b - a
    return b


def chebyshev_S(n):
    """S_0 = 0, S_1 = 1, S_{n+2} = X S_{n+1} - S_n, run backwards for n < 0."""
    X = Laurent.mono(1, var="X")
    a, b = Laurent.const(0, "X"), Laurent.const(1, "X")
    if n >= 0:
        for _ in range(n):
            a, b = b, X * b - a
        return a
    # S_{n} = X S_{n+1} - S_{n+2}
    hi, lo = b, a  # S_1, S_0
    for _ in range(-n):
        hi, lo = lo, X * lo - hi
    return lo


# ------------------------------------------------------------- curve labels

CurveLabel = namedtuple("CurveLabel", "p q")


def label(p, q):
    """Normalised label: q > 0, or q == 0 and p >= 0."""
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return CurveLabel(int(p), int(q))


class SkeinVector:
    """Finitely supported map label -> Laurent."""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for lab, c in (terms or {}).items():
            lab = label(*lab)
            c = c if isinstance(c, Laurent) else Laurent.const(c)
            t[lab] = t.get(lab, Laurent()) + c
            if t[lab].is_zero():
                del t[lab]
        self.terms = t

    @classmethod
    def of(cls, p, q, c=1):
        return cls({(p, q): c})

    def __add__(self, o):
        t = dict(self.terms)
        for lab, c in o.terms.items():
            t[lab] = t.get(lab, Laurent()) + c
        return SkeinVector({k: v for k, v in t.items() if not v.is_zero()})

    def __neg__(self):
        return SkeinVector({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        c = c if isinstance(c, Laurent) else Laurent.const(c)
        return SkeinVector({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, o):
        if isinstance(o, SkeinVector):
            return star(self, o)
        return self.scale(o)

    def __eq__(self, o):
        if not isinstance(o, SkeinVector):
            return NotImplemented
        return self.terms == o.terms

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def coeff(self, p, q):
        return self.terms.get(label(p, q), Laurent())

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for lab in sorted(self.terms, key=lambda l: (l.q, l.p)):
            out.append(f"({self.terms[lab]}) * ({lab.p},{lab.q})")
        return " + ".join(out)

    __repr__ = __str__

    @classmethod
    def parse(cls, text):
        """Inverse of str(): terms `coeff * (p,q)` joined by '+'; coeff is optional."""
        text = text.strip()
        if text == "0":
            return cls()
        out = cls()
        for tok in _split_top(text):
            tok = tok.strip()
            if not tok:
                continue
            m = re.match(r"^(.*?)\s*\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)\s*$", tok, re.S)
            if not m:
                raise ValueError(f"cannot parse skein term {tok!r}")
            coeff = m.group(1).strip()
            if coeff.endswith("*"):
                coeff = coeff[:-1].strip()
            if coeff in ("", "+"):
                c = ONE
            elif coeff == "-":
                c = -ONE
            else:
                c = Laurent.parse(coeff)
            out = out + cls({(int(m.group(2)), int(m.group(3))): c})
        return out


def product_to_sum(a, b):
    """(p,q) * (r,s) = A^(ps-qr) (p+r, q+s) + A^(qr-ps) (p-r, q-s)."""
    p, q = a
    r, s = b
    e = p * s - q * r
    return SkeinVector({}) + SkeinVector.of(p + r, q + s, A(e)) + SkeinVector.of(p - r, q - s, A(-e))


def star(u, v):
    out = SkeinVector()
    for la, ca in u.terms.items():
        for lb, cb in v.terms.items():
            out = out + product_to_sum(la, lb).scale(ca * cb)
    return out


# ------------------------------------------------------------------ gradings

Hom2Class = namedtuple("Hom2Class", "ex ey")


def grading(lab, k):
    p, q = label(*lab)
    ex = 0 if k % 2 else p % 2
    return Hom2Class(ex, q % 2)


def grading_S(lab):
    p, q = lab
    return (p + q) % 2


# ------------------------------------------------------------- relation vectors

def relation_a(p, q):
    """(p+1, q) - (p-1, q), valid for q != 0."""
    return SkeinVector.of(p + 1, q) - SkeinVector.of(p - 1, q)


def relation_b(p, q, k):
    return (SkeinVector.of(p, q + 1, A(p)) + SkeinVector.of(p, q - 1, A(-p))
            - SkeinVector.of(p + k, q + 1, A(k * q - p)) - SkeinVector.of(p - k, q - 1, A(p - k * q)))


def relation_slide(p, q, k):
    """(p, q) - (p + qk, q): invariance under the monodromy."""
    return SkeinVector.of(p, q) - SkeinVector.of(p + q * k, q)


def relation_c(p, q):
    return (SkeinVector.of(p, q + 1, A(p)) + SkeinVector.of(p, q - 1, A(-p))
            - SkeinVector.of(p - 1, q, A(-q)) - SkeinVector.of(p + 1, q, A(q)))


def relation_d(p, q):
    return (SkeinVector.of(p + 1, q + 1, A(p - q)) + SkeinVector.of(p - 1, q - 1, A(q - p))
            - SkeinVector.of(p - 1, q + 1, A(-p - q)) - SkeinVector.of(p + 1, q - 1, A(p + q)))


def collapse_a(v):
    """Quotient by relation (a): labels with q != 0 go to (p mod 2, q)."""
    out = SkeinVector()
    for (p, q), c in v.terms.items():
        out = out + SkeinVector.of(p % 2 if q else p, q, c)
    return out


def canonical_S(p, q):
    """Representative of the orbit under (p,q) -> (-q,p) and negation: p >= 1, q >= 0, or (0,0)."""
    p, q = label(p, q)
    if (p, q) == (0, 0) or (p >= 1 and q >= 0):
        return CurveLabel(p, q)
    return CurveLabel(q, -p)


def collapse_S(v):
    out = SkeinVector()
    for (p, q), c in v.terms.items():
        out = out + SkeinVector.of(*canonical_S(p, q), c)
    return out


# ------------------------------------------------------------------ rewriting

class Rule:
    """One rewrite `lhs -> rhs` with certificate: divisor*(lhs - rhs) = sum coef*relation
    modulo the stated collapse."""
    __slots__ = ("name", "lhs", "rhs", "divisor", "combo", "collapse", "poles")

    def __init__(self, name, lhs, rhs, divisor, combo, collapse, poles=()):
        self.name, self.lhs, self.rhs = name, lhs, rhs
        self.divisor, self.combo, self.collapse = divisor, combo, collapse
        # Laurent polynomials whose zeros the rule cannot be evaluated at
        self.poles = tuple(poles)

    def check(self):
        lhs = self.collapse(SkeinVector.of(*self.lhs) - self.rhs).scale(self.divisor)
        acc = SkeinVector()
        for c, rel in self.combo:
            acc = acc + rel.scale(c)
        return (lhs - self.collapse(acc)).is_zero()

    def labels(self):
        return [self.lhs] + list(self.rhs.terms)

    def __repr__(self):
        return f"Rule[{self.name}] {self.lhs} -> {self.rhs}"


def _ident(v):
    return v


def a_pole(q):
    """Relation (a) at height q comes from cancelling A^q - A^-q."""
    return A(q) - A(-q)


def _a_chain(p, q):
    """Relation-(a) instances summing to (p,q) - (p mod 2, q)."""
    combo = []
    x = p
    while x > 1:
        combo.append((ONE, relation_a(x - 1, q)))
        x -= 2
    while x < 0:
        combo.append((-ONE, relation_a(x + 1, q)))
        x += 2
    return combo


def _divide(num, den, what):
    if den.is_zero():
        raise ArithmeticError(f"degenerate divisor in {what}")
    return num.divexact(den)


def basis_k(k):
    h = k // 2
    out = [label(p, 0) for p in range(h + 1)] + [label(0, 1), label(0, 2), label(1, 2)]
    if k % 2 == 0:
        out.append(label(1, 1))
    return out


def rule_k(lab, k):
    """The rewrite applied to a non-basis label for M_k, or None if lab is a basis label."""
    p, q = lab
    h = k // 2
    if q == 0:
        if p <= h:
            return None
        P = -p
        rhs = (SkeinVector.of(P + k, 2, A(k)) + SkeinVector.of(P + k, 0, A(-2 * P - k))
               - SkeinVector.of(P + 2 * k, 2, A(-2 * P)))
        return Rule("b:raise", lab, rhs, ONE, [(-A(-P), relation_b(P + k, 1, k))], _ident)
    if p not in (0, 1):
        return Rule("a", lab, SkeinVector.of(p % 2, q), ONE, _a_chain(p, q), _ident, [a_pole(q)])
    if q >= 3:
        Q = q - 1
        if k % 2 == 0:
            if k * Q - p == p:
                raise ArithmeticError(f"degenerate divisor at p={p}, q={Q}")
            den = A(p) - A(k * Q - p)
            num = A(p - k * Q) - A(-p)
            c = _divide(num, den, "even descent")
            return Rule("b:even", lab, SkeinVector.of(p, Q - 1, c), den,
                        [(ONE, relation_b(p, Q, k))], collapse_a, [den, a_pole(Q + 1), a_pole(Q - 1)])
        eps = 1 if p == 0 else -1
        pp = p + eps
        s = p + pp
        if 2 * k * Q - s == s:
            raise ArithmeticError(f"degenerate divisor at p={p}, q={Q}")
        den = A(s) - A(2 * k * Q - s)
        num = A(s - k * Q) - A(k * Q - s)
        c = _divide(num, den, "odd descent")
        combo = [(A(pp), relation_b(p, Q, k)), (A(k * Q - p), relation_b(pp, Q, k))]
        return Rule("b:odd", lab, SkeinVector.of(pp, Q - 1, c), den, combo, collapse_a,
                    [den, a_pole(Q + 1), a_pole(Q - 1)])
    if k % 2 and (p, q) == (1, 1):
        combo = [(ONE, relation_slide(1, 1, k))] + _a_chain(1 + k, 1)
        return Rule("slide", lab, SkeinVector.of(0, 1), ONE, combo, _ident, [a_pole(1)])
    return None


def basis_S():
    return [label(0, 0), label(1, 0), label(1, 1), label(1, 2)]


def _measure_S(lab):
    p, q = canonical_S(*lab)
    rank = 3 if q == 0 else 2 if q == 1 else 1 if p == 1 else 0
    return (abs(p) + abs(q), rank)


def rule_S(lab):
    P, Q = canonical_S(*lab)
    if (P, Q) in ((0, 0), (1, 0), (1, 1), (1, 2)):
        if (P, Q) != tuple(lab):
            return Rule("rot", lab, SkeinVector.of(P, Q), ONE, [], collapse_S)
        return None
    if (P, Q) != tuple(lab):
        return Rule("rot", lab, SkeinVector.of(P, Q), ONE, [], collapse_S)
    if P >= 2 and Q >= 2:
        rhs = (SkeinVector.of(P - 2, Q, A(2 - 2 * P)) + SkeinVector.of(P, Q - 2, A(2 * Q - 2))
               - SkeinVector.of(P - 2, Q - 2, A(2 * Q - 2 * P)))
        return Rule("d", lab, rhs, ONE, [(A(Q - P), relation_d(P - 1, Q - 1))], collapse_S)
    if P == 1 and Q >= 3:
        rhs = (-SkeinVector.of(1, Q - 2, A(-2)) + SkeinVector.of(0, Q - 1, A(-Q))
               + SkeinVector.of(2, Q - 1, A(Q - 2)))
        return Rule("c", lab, rhs, ONE, [(A(-1), relation_c(1, Q - 1))], collapse_S)
    if P >= 2 and Q == 1:
        rhs = (SkeinVector.of(P - 2, 1, A(2 - 2 * P)) + SkeinVector.of(P, -1)
               - SkeinVector.of(P - 2, -1, A(2 - 2 * P)))
        return Rule("d", lab, rhs, ONE, [(A(1 - P), relation_d(P - 1, 0))], collapse_S)
    if P >= 2 and Q == 0:
        rhs = (SkeinVector.of(P - 1, 1, A(P - 1)) + SkeinVector.of(P - 1, -1, A(1 - P))
               - SkeinVector.of(P - 2, 0))
        return Rule("c", lab, rhs, ONE, [(-ONE, relation_c(P - 1, 0))], collapse_S)
    raise AssertionError(f"no rule for {lab}")


class Reduction:
    """Result of a reduction: the reduced vector and the rules that were applied."""

    def __init__(self, source, result, rules):
        self.source, self.result, self.rules = source, result, rules

    def poles(self):
        return [p for r, _ in self.rules for p in r.poles]

    def singular_at(self, xi, tol=1e-9):
        """True when some rule used in the reduction divides by a polynomial vanishing at xi."""
        return any(abs(p.at_root(xi)) < tol for p in self.poles())

    def replay(self):
        """Check every rule certificate and rebuild the source from the result.

        Rules are undone in reverse order: each step added rule.rhs * c and removed
        lhs * c, so the round trip re-expands to the exact input.
        """
        if not all(r.check() for r, _ in self.rules):
            return False
        v = self.result
        for r, c in reversed(self.rules):
            v = v - r.rhs.scale(c) + SkeinVector.of(*r.lhs, c)
        return v == self.source


def _reduce(v, rule_fn, key, grade, record):
    v = v if isinstance(v, SkeinVector) else SkeinVector({tuple(v): 1})
    src = v
    terms = dict(v.terms)
    heap = [(tuple(-x for x in key(l)), l) for l in terms]
    heapq.heapify(heap)
    done = {}
    rules = []
    while heap:
        _, lab = heapq.heappop(heap)
        if lab not in terms:
            continue
        c = terms.pop(lab)
        rule = rule_fn(lab)
        if rule is None:
            done[lab] = done.get(lab, Laurent()) + c
            continue
        g = {grade(l) for l in rule.labels()}
        if len(g) != 1:
            raise AssertionError(f"rule {rule} mixes homology classes {g}")
        if record:
            rules.append((rule, c))
        for l2, c2 in rule.rhs.terms.items():
            nc = terms.get(l2, Laurent()) + c2 * c
            if nc.is_zero():
                terms.pop(l2, None)
            else:
                if l2 not in terms:
                    heapq.heappush(heap, (tuple(-x for x in key(l2)), l2))
                terms[l2] = nc
    out = SkeinVector({l: c for l, c in done.items() if not c.is_zero()})
    return Reduction(src, out, rules) if record else out


def reduce_horizontal_k(v, k, record=False):
    """Rewrite v into the basis (p,0) 0<=p<=k/2, (0,1), (0,2), (1,2) [+ (1,1) for even k]."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return _reduce(v, lambda l: rule_k(l, k), key=lambda l: (abs(l.q), abs(l.p)),
                   grade=lambda l: grading(l, k), record=record)


def reduce_horizontal_S(v, record=False):
    """Rewrite v into the basis (0,0), (1,0), (1,1), (1,2) of the S-monodromy torus."""
    return _reduce(v, rule_S, key=_measure_S, grade=grading_S, record=record)
