"""Multi-filtered finite-dimensional Q-vector spaces.

An object is Q^d carrying n separated exhaustive descending filtrations
with rational jumps; its degree is the sum over filtrations of
jump * dim(graded piece).  Subobjects inherit intersection filtrations,
quotients image filtrations, so degrees add along every subspace.

The destabilizer search runs over the subspace lattice generated by the
filtration steps under intersection and sum.  For n <= 2 that lattice
provably attains the optimum (two chains generate a finite distributive
lattice and the degree of a subspace only depends on its intersection
profile with each chain), so the certificate is complete; the same holds
in dimension 2 for any n because a line's degree only depends on which
step lines it equals.  Everything else is budget-bounded and heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .core import Budget, Certificate, COMPLETE, SlopeBackend
from .degrees import DegreeValue, SlopeError, SlopeKey


class FilteredError(ValueError):
    pass


@dataclass(frozen=True)
class Filtration:
    """Descending chain: steps (jump, subspace) with strictly decreasing
    jumps and strictly increasing subspaces; the last step is the whole
    space."""

    steps: tuple[tuple[Fraction, linalg.Mat], ...]

    def __post_init__(self):
        jumps = [j for j, _ in self.steps]
        if any(b >= a for a, b in zip(jumps, jumps[1:])):
            raise FilteredError("filtration jumps must strictly decrease")
        dims = [len(s) for _, s in self.steps]
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise FilteredError("filtration steps must strictly grow")
        for (_, small), (_, big) in zip(self.steps, self.steps[1:]):
            if not linalg.subspace_contains(big, small):
                raise FilteredError("filtration steps must be nested")


@dataclass(frozen=True)
class FilteredSpace:
    dim: int
    filtrations: tuple[Filtration, ...]

    def __post_init__(self):
        if self.dim < 0:
            raise FilteredError("negative dimension")
        for f in self.filtrations:
            if not f.steps:
                raise FilteredError("empty filtration chain")
            top = f.steps[-1][1]
            if len(top) != self.dim:
                raise FilteredError("filtration is not exhaustive")

    @property
    def n(self) -> int:
        return len(self.filtrations)

    def full_space(self) -> linalg.Mat:
        return linalg.identity(self.dim)

    def jump_multiset(self, nu: int) -> list[tuple[Fraction, int]]:
        """(jump, dim gr) pairs for filtration nu."""
        out = []
        prev = 0
        for jump, step in self.filtrations[nu].steps:
            out.append((jump, len(step) - prev))
            prev = len(step)
        return out

    def to_json(self):
        return {
            "dim": self.dim,
            "filtrations": [
                {
                    "steps": [
                        {
                            "jump": str(j),
                            "basis": [[str(c) for c in row] for row in s],
                        }
                        for j, s in f.steps
                    ]
                }
                for f in self.filtrations
            ],
        }

    @staticmethod
    def from_json(obj) -> "FilteredSpace":
        dim = int(obj["dim"])
        fils = []
        for f in obj["filtrations"]:
            steps = []
            for s in f["steps"]:
                basis = linalg.subspace(
                    [tuple(Fraction(c) for c in row) for row in s["basis"]]
                )
                steps.append((Fraction(str(s["jump"])), basis))
            if not steps or len(steps[-1][1]) != dim:
                raise FilteredError(
                    "each filtration must end with the whole space"
                )
            fils.append(Filtration(tuple(steps)))
        return FilteredSpace(dim, tuple(fils))


def make_filtered(dim: int, chains) -> FilteredSpace:
    """chains: per filtration, list of (jump, rows) with the final step
    spanning the whole space."""
    fils = []
    for chain in chains:
        steps = tuple(
            (Fraction(j), linalg.subspace(linalg.frac_matrix(rows)))
            for j, rows in chain
        )
        fils.append(Filtration(steps))
    return FilteredSpace(dim, tuple(fils))


def degree_filtered(v: FilteredSpace) -> DegreeValue:
    total = Fraction(0)
    for nu in range(v.n):
        for jump, mult in v.jump_multiset(nu):
            total += jump * mult
    return DegreeValue.rational(total)


def induced_filtration(
    v: FilteredSpace, s: linalg.Mat, mode: str
) -> FilteredSpace:
    """Subobject (intersection) or quotient (image) filtered space.

    mode="sub": the space s with F^{>=j} = s ∩ F^{>=j}V.
    mode="quotient": V/s with the image filtration, in coordinates given by
    projection onto the non-pivot coordinates of s.
    """
    s = linalg.rref(s)
    k = len(s)
    if mode == "sub":
        basis = s
        newdim = k
        if newdim == 0:
            return FilteredSpace(0, tuple(Filtration(((Fraction(0), ()),)) for _ in range(v.n)))

        def transform(step: linalg.Mat) -> linalg.Mat:
            inter = linalg.subspace_intersect(basis, step)
            return coords_in_basis(inter, basis)

    elif mode == "quotient":
        newdim = v.dim - k
        proj = quotient_projection(s, v.dim)
        if newdim == 0:
            return FilteredSpace(0, tuple(Filtration(((Fraction(0), ()),)) for _ in range(v.n)))

        def transform(step: linalg.Mat) -> linalg.Mat:
            image = linalg.rref([linalg.mat_vec(proj, row) for row in step])
            return image

    else:
        raise FilteredError(f"unknown mode {mode!r}")

    fils = []
    for f in v.filtrations:
        steps: list[tuple[Fraction, linalg.Mat]] = []
        for jump, step in f.steps:
            img = transform(step)
            if steps and len(img) == len(steps[-1][1]):
                continue
            if not steps and len(img) == 0:
                continue
            steps.append((jump, img))
        if not steps or len(steps[-1][1]) != newdim:
            raise FilteredError("induced filtration is not exhaustive")
        fils.append(Filtration(tuple(steps)))
    return FilteredSpace(newdim, tuple(fils))


def coords_in_basis(vectors: linalg.Mat, basis: linalg.Mat) -> linalg.Mat:
    """Rows of ``vectors`` written in coordinates w.r.t. the rows of
    ``basis`` (must lie in the row space)."""
    bt = linalg.transpose(basis)
    out = []
    for row in vectors:
        x = linalg.solve(bt, row)
        if x is None:
            raise FilteredError("vector outside the subspace")
        out.append(x)
    return linalg.rref(out)


def quotient_pivots(s: linalg.Mat, dim: int):
    pivots = [next(j for j in range(dim) if row[j] != 0) for row in s]
    free = [j for j in range(dim) if j not in pivots]
    return pivots, free


def quotient_projection(s: linalg.Mat, dim: int) -> linalg.Mat:
    """Coordinate projection V -> V/s: reduce modulo the RREF rows of s,
    then read off the non-pivot coordinates (deterministic in s)."""
    pivots, free = quotient_pivots(s, dim)
    proj = []
    for f in free:
        row_f = [Fraction(0)] * dim
        row_f[f] = Fraction(1)
        for row, piv in zip(s, pivots):
            row_f[piv] = -row[f]
        proj.append(tuple(row_f))
    return tuple(proj)


def quotient_section(s: linalg.Mat, dim: int) -> linalg.Mat:
    """Right inverse of quotient_projection: embed quotient coordinates at
    the free positions with zeros at s's pivots."""
    _, free = quotient_pivots(s, dim)
    rows = []
    for f in free:
        e = [Fraction(0)] * dim
        e[f] = Fraction(1)
        rows.append(tuple(e))
    return tuple(rows)


def candidate_subspaces(v: FilteredSpace, depth: int = 8):
    """Closure of the filtration steps under pairwise ∩ and + (plus 0, V);
    returns (list of subspaces, Certificate, stabilized)."""
    zero: linalg.Mat = ()
    full = v.full_space()
    current: dict[linalg.Mat, None] = {zero: None, full: None}
    for f in v.filtrations:
        for _, step in f.steps:
            current[linalg.rref(step)] = None
    stabilized = False
    for _ in range(max(1, depth)):
        items = list(current.keys())
        added = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                for c in (
                    linalg.subspace_intersect(a, b),
                    linalg.subspace_sum(a, b),
                ):
                    if c not in current:
                        current[c] = None
                        added = True
        if not added:
            stabilized = True
            break
    cands = sorted(current.keys(), key=lambda m: (len(m), m))
    if v.n <= 2 and stabilized:
        cert = COMPLETE
    elif v.dim <= 2 and stabilized:
        # in dim 2 a line's degree depends only on which step lines it
        # equals; one generic line represents all the others.
        cert = COMPLETE
        generic = _generic_line(v, cands)
        if generic is not None and generic not in current:
            cands = sorted(cands + [generic], key=lambda m: (len(m), m))
    else:
        cert = Certificate(False, "heuristic: candidate lattice for n >= 3")
    return cands, cert, stabilized


def _generic_line(v: FilteredSpace, existing) -> Optional[linalg.Mat]:
    if v.dim != 2:
        return None
    lines = {m for m in existing if len(m) == 1}
    t = 0
    while t < 4 * (len(lines) + 2):
        cand = linalg.subspace(((Fraction(1), Fraction(t)),))
        if cand not in lines:
            return cand
        t += 1
    cand = linalg.subspace(((Fraction(0), Fraction(1)),))
    return None if cand in lines else cand


def destabilizer_filtered(v: FilteredSpace, budget: Budget = Budget()):
    """(subspace, SlopeKey, Certificate): maximal slope then maximal
    dimension over the candidate lattice."""
    if v.dim == 0:
        raise SlopeError("zero filtered space")
    mu = SlopeKey(degree_filtered(v), v.dim)
    cands, cert, _ = candidate_subspaces(v, budget.depth)
    best: Optional[linalg.Mat] = None
    best_key = mu
    for s in cands:
        k = len(s)
        if k == 0 or k >= v.dim:
            continue
        sub = induced_filtration(v, s, "sub")
        key = SlopeKey(degree_filtered(sub), k)
        c = key.cmp(best_key)
        if c > 0:
            best, best_key = s, key
        elif c == 0 and best is not None and (
            k > len(best) or (k == len(best) and s < best)
        ):
            best, best_key = s, key
    if best is None or best_key.cmp(mu) <= 0:
        return v.full_space(), mu, cert
    return best, best_key, cert


def tensor_filtered(v: FilteredSpace, w: FilteredSpace) -> FilteredSpace:
    """Product filtrations on V (x) W, per filtration index."""
    if v.n != w.n:
        raise FilteredError("tensor needs the same number of filtrations")
    dim = v.dim * w.dim
    fils = []
    for nu in range(v.n):
        fv = v.filtrations[nu].steps
        fw = w.filtrations[nu].steps
        sums = sorted(
            {jv + jw for jv, _ in fv for jw, _ in fw}, reverse=True
        )
        steps = []
        for lam in sums:
            rows: list[tuple[Fraction, ...]] = []
            for jv, sv in fv:
                for jw, sw in fw:
                    if jv + jw >= lam:
                        for rv in sv:
                            for rw in sw:
                                rows.append(_kron_vec(rv, rw))
            space = linalg.rref(rows)
            if steps and len(space) == len(steps[-1][1]):
                continue
            if len(space) == 0:
                continue
            steps.append((lam, space))
        if not steps or len(steps[-1][1]) != dim:
            raise FilteredError("tensor filtration is not exhaustive")
        fils.append(Filtration(tuple(steps)))
    return FilteredSpace(dim, tuple(fils))


def _kron_vec(a, b):
    return tuple(x * y for x in a for y in b)


def dual_filtered(v: FilteredSpace) -> FilteredSpace:
    """Dual space with F^{>=lam}(V∨) = annihilator of F^{>-lam}V."""
    dim = v.dim
    fils = []
    for f in v.filtrations:
        jumps = [j for j, _ in f.steps]
        steps = []
        # F^{>-lam}V for lam in the negated jump set: the strictly-above
        # part of the chain at -lam.
        for lam in sorted((-j for j in jumps), reverse=True):
            above: linalg.Mat = ()
            for j, s in f.steps:
                if j > -lam:
                    above = s
            ann = linalg.annihilator(above, dim) if above else linalg.identity(dim)
            if len(ann) == 0:
                continue
            if steps and len(ann) == len(steps[-1][1]):
                continue
            steps.append((lam, ann))
        if not steps or len(steps[-1][1]) != dim:
            raise FilteredError("dual filtration is not exhaustive")
        fils.append(Filtration(tuple(steps)))
    return FilteredSpace(dim, tuple(fils))


class FilteredBackend(SlopeBackend):
    """SlopeBackend over filtered spaces; subobject handles are pairs
    (ambient, subspace rows)."""

    name = "filtered"

    def rank(self, obj) -> int:
        if isinstance(obj, tuple):
            return len(obj[1])
        return obj.dim

    def degree(self, obj) -> DegreeValue:
        if isinstance(obj, tuple):
            amb, rows = obj
            if len(rows) == 0:
                return DegreeValue.rational(0)
            return degree_filtered(induced_filtration(amb, rows, "sub"))
        return degree_filtered(obj)

    def same(self, a, b) -> bool:
        ra = a[1] if isinstance(a, tuple) else linalg.identity(a.dim)
        rb = b[1] if isinstance(b, tuple) else linalg.identity(b.dim)
        return linalg.rref(ra) == linalg.rref(rb)

    def candidate_key(self, sub):
        return sub[1] if isinstance(sub, tuple) else ()

    def destabilizer(self, obj, budget: Budget = Budget()):
        amb = obj[0] if isinstance(obj, tuple) else obj
        space = (
            induced_filtration(amb, obj[1], "sub")
            if isinstance(obj, tuple)
            else obj
        )
        rows, key, cert = destabilizer_filtered(space, budget)
        if len(rows) == space.dim:
            return obj, key, cert
        if isinstance(obj, tuple):
            # lift rows (coordinates in obj[1]) back to ambient coordinates
            lifted = linalg.rref(
                [
                    tuple(
                        sum(c * obj[1][i][j] for i, c in enumerate(row))
                        for j in range(amb.dim)
                    )
                    for row in rows
                ]
            )
            return (amb, lifted), key, cert
        return (obj, rows), key, cert

    def strict_subobjects(self, obj, budget: Budget = Budget()):
        if not isinstance(obj, FilteredSpace):
            raise FilteredError("subobject enumeration expects a plain space")
        cands, cert, _ = candidate_subspaces(obj, budget.depth)
        subs = [(obj, s) for s in cands if 0 < len(s) < obj.dim]
        return subs, cert

    def quotient(self, obj, sub) -> FilteredSpace:
        space = obj if isinstance(obj, FilteredSpace) else induced_filtration(
            obj[0], obj[1], "sub"
        )
        return induced_filtration(space, sub[1], "quotient")

    def pullback(self, obj, sub, quot: FilteredSpace, subquot):
        space = obj if isinstance(obj, FilteredSpace) else None
        if space is None:
            raise FilteredError("pullback expects a plain filtered space")
        srows = linalg.rref(sub[1])
        section = quotient_section(srows, space.dim)
        st = linalg.transpose(section)
        lifted = [linalg.mat_vec(st, row) for row in subquot[1]]
        rows = linalg.rref(list(srows) + lifted)
        return (space, rows)

    def tensor(self, a, b) -> FilteredSpace:
        return tensor_filtered(a, b)

    def dual(self, a) -> FilteredSpace:
        return dual_filtered(a)
