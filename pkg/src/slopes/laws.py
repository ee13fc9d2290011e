"""Property harnesses: degree axioms, exactness probes, dominance and
uniqueness by brute force, tensor and duality laws, coprimality, and the
lattice tensor experiment.

Everything is seeded and deterministic; reports are plain dicts ready for
JSON emission.  Heuristic certificates are propagated, never upgraded.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .core import Budget, hn_filtration, is_semistable
from .degrees import SlopeKey
from .filtered import (
    FilteredBackend,
    FilteredSpace,
    Filtration,
    degree_filtered,
    dual_filtered,
    induced_filtration,
    tensor_filtered,
)
from .lattices import (
    EuclideanLattice,
    LatticeBackend,
    Sublattice,
    destabilizer_lattice,
    quotient_with_metric,
    saturate,
    tensor_lattice,
)
from .polygon import (
    DUAL,
    TENSOR_MULT,
    NewtonPolygon,
    polygon_combine,
    polygon_dominates,
    polygon_of_flag,
)
from .tables import TableBackend, ZERO_ID


# -- samplers ---------------------------------------------------------------------


def sample_filtered_space(
    rng: random.Random,
    dim_max: int = 3,
    n: int = 2,
    integer_jumps: bool = False,
) -> FilteredSpace:
    dim = rng.randint(1, dim_max)
    fils = []
    for _ in range(n):
        fils.append(_sample_chain(rng, dim, integer_jumps))
    return FilteredSpace(dim, tuple(fils))


def _sample_chain(rng: random.Random, dim: int, integer_jumps: bool) -> Filtration:
    basis = _random_basis(rng, dim)
    nsteps = rng.randint(1, min(dim, 3))
    dims = sorted(rng.sample(range(1, dim + 1), nsteps))
    if dims[-1] != dim:
        dims.append(dim)
    jumps = sorted(_sample_jumps(rng, len(dims), integer_jumps), reverse=True)
    steps = []
    for jump, d in zip(jumps, dims):
        steps.append((jump, linalg.rref(basis[:d])))
    return Filtration(tuple(steps))


def _sample_jumps(rng: random.Random, k: int, integer_jumps: bool):
    out = set()
    while len(out) < k:
        if integer_jumps:
            out.add(Fraction(rng.randint(-3, 4)))
        else:
            out.add(Fraction(rng.randint(-6, 8), rng.choice((1, 1, 2))))
    return list(out)


def _random_basis(rng: random.Random, dim: int) -> list:
    while True:
        rows = [
            tuple(Fraction(rng.randint(-3, 3)) for _ in range(dim))
            for _ in range(dim)
        ]
        if linalg.det(tuple(rows)) != 0:
            return rows


def sample_lattice(rng: random.Random, rank_max: int = 3) -> EuclideanLattice:
    r = rng.randint(1, rank_max)
    while True:
        a = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)]
        mat = linalg.frac_matrix(a)
        if linalg.det(mat) != 0:
            gram = linalg.mat_mul(linalg.transpose(mat), mat)
            return EuclideanLattice(gram)


def sample_saturated_sub(rng: random.Random, lat: EuclideanLattice) -> Sublattice:
    r = lat.rank
    k = rng.randint(1, max(1, r - 1))
    while True:
        cols = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(k)]
        mat = linalg.frac_matrix([[cols[j][i] for j in range(k)] for i in range(r)])
        if linalg.rank(mat) == k:
            return saturate(lat, cols)


def _random_subspace(rng: random.Random, dim: int) -> linalg.Mat:
    k = rng.randint(1, dim)
    rows = [
        tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim)) for _ in range(k)
    ]
    return linalg.rref(rows)


# -- degree axioms ---------------------------------------------------------------


def check_degree_axioms(
    backend: str, samples: int, seed: int, table: TableBackend | None = None
) -> dict:
    """Additivity on short exact sequences plus the epi-monic slope
    inequality; returns a violations report (expected empty)."""
    rng = random.Random(seed)
    violations = []
    checked = 0
    if backend == "filtered":
        for i in range(samples):
            v = sample_filtered_space(rng)
            s = _random_subspace(rng, v.dim)
            if not 0 < len(s) < v.dim:
                continue
            checked += 1
            sub = induced_filtration(v, s, "sub")
            quo = induced_filtration(v, s, "quotient")
            lhs = degree_filtered(v).value
            rhs = degree_filtered(sub).value + degree_filtered(quo).value
            if lhs != rhs:
                violations.append(
                    {"kind": "additivity", "index": i, "lhs": str(lhs), "rhs": str(rhs)}
                )
            if sub.dim + quo.dim != v.dim:
                violations.append({"kind": "rank", "index": i})
            # epi-monic: raise every jump by a non-negative shift
            shift = Fraction(rng.randint(0, 2))
            w = FilteredSpace(
                v.dim,
                tuple(
                    Filtration(tuple((j + shift, s2) for j, s2 in f.steps))
                    for f in v.filtrations
                ),
            )
            mu_v = SlopeKey(degree_filtered(v), v.dim)
            mu_w = SlopeKey(degree_filtered(w), w.dim)
            if mu_v.cmp(mu_w) > 0:
                violations.append({"kind": "epi-monic", "index": i})
    elif backend == "lattice":
        for i in range(samples):
            lat = sample_lattice(rng)
            if lat.rank < 2:
                continue
            sub = sample_saturated_sub(rng, lat)
            if sub.rank == lat.rank:
                continue
            checked += 1
            quo = quotient_with_metric(lat, sub)
            lhs = lat.det()
            rhs = linalg.det(sub.induced_gram()) * quo.det()
            if lhs != rhs:
                violations.append(
                    {"kind": "additivity", "index": i, "lhs": str(lhs), "rhs": str(rhs)}
                )
            # epi-monic: shrink the metric in one rational direction
            g2 = _shrunk_gram(rng, lat)
            if g2 is not None:
                m = EuclideanLattice(g2)
                if SlopeKey(lat.degree(), lat.rank).cmp(
                    SlopeKey(m.degree(), m.rank)
                ) > 0:
                    violations.append({"kind": "epi-monic", "index": i})
    elif backend == "table":
        if table is None:
            raise ValueError("table axioms need a loaded table")
        for sub, amb, quot in table.cat.triples:
            checked += 1
            lhs = table.degree(amb)
            rhs = table.degree(sub) + table.degree(quot)
            if lhs.cmp(rhs) != 0:
                violations.append(
                    {"kind": "additivity", "triple": [sub, amb, quot]}
                )
            if table.rank(sub) + table.rank(quot) != table.rank(amb):
                violations.append({"kind": "rank", "triple": [sub, amb, quot]})
    else:
        raise ValueError(f"no axiom sampler for backend {backend!r}")
    return {
        "backend": backend,
        "samples": samples,
        "checked": checked,
        "violations": violations,
        "seed": seed,
    }


def _shrunk_gram(rng: random.Random, lat: EuclideanLattice):
    r = lat.rank
    v = tuple(Fraction(rng.randint(-1, 1)) for _ in range(r))
    if all(x == 0 for x in v):
        return None
    eps = Fraction(1, rng.randint(2, 5))
    g2 = tuple(
        tuple(lat.gram[i][j] - eps * v[i] * v[j] for j in range(r))
        for i in range(r)
    )
    for k in range(1, r + 1):
        if linalg.det(tuple(row[:k] for row in g2[:k])) <= 0:
            return None
    return g2


# -- exactness ---------------------------------------------------------------------


def check_exactness(backend, objects, budget: Budget = Budget()) -> dict:
    """Search for a strict subobject of a semistable object with strictly
    smaller slope; that witnesses non-exactness of the filtration."""
    for obj in objects:
        ok, cert = is_semistable(backend, obj, budget)
        if not ok:
            continue
        mu = backend.slope(obj)
        subs, _ = backend.strict_subobjects(obj, budget)
        for s in subs:
            if backend.rank(s) in (0, backend.rank(obj)):
                continue
            key = SlopeKey(backend.degree(s), backend.rank(s))
            if key.cmp(mu) < 0:
                return {
                    "exact": False,
                    "witness": {
                        "object": _describe(backend, obj),
                        "subobject": _describe(backend, s),
                        "object_slope": mu.slope_json(),
                        "sub_slope": key.slope_json(),
                    },
                }
    return {"exact": None, "witness": None, "note": "no counterexample found"}


def _describe(backend, obj):
    if isinstance(obj, str):
        return obj
    if isinstance(obj, EuclideanLattice):
        return obj.to_json()
    if isinstance(obj, Sublattice):
        return {"basis_columns": [list(map(int, c)) for c in obj.basis]}
    if isinstance(obj, FilteredSpace):
        return obj.to_json()
    if isinstance(obj, tuple) and len(obj) == 2:
        return {"subspace": [[str(c) for c in row] for row in obj[1]]}
    return repr(obj)


# -- graded kernel accounting ---------------------------------------------------------


def gr_kernel_demo(backend: TableBackend, morphism) -> dict:
    """Rank accounting for the canonical map gr Ker f -> Ker gr f.

    Per graded slope, an isomorphism needs
    mult(source) - mult(target) <= mult(kernel) <= mult(source).
    """
    if morphism.kernel is None:
        raise ValueError("morphism fixture lacks declared kernel data")
    budget = Budget()
    source_np = hn_filtration(backend, morphism.source, budget).polygon
    target_np = hn_filtration(backend, morphism.target, budget).polygon
    if morphism.kernel == ZERO_ID:
        kernel_np = NewtonPolygon(())
    else:
        kernel_np = hn_filtration(backend, morphism.kernel, budget).polygon
    if morphism.zero:
        target_mults = {}
    else:
        target_mults = _mult_map(target_np)
    source_mults = _mult_map(source_np)
    kernel_mults = _mult_map(kernel_np)
    possible = True
    detail = []
    slopes = set(source_mults) | set(kernel_mults)
    for lam in slopes:
        upper = source_mults.get(lam, 0)
        lower = max(0, upper - target_mults.get(lam, 0))
        have = kernel_mults.get(lam, 0)
        ok = lower <= have <= upper
        possible = possible and ok
        detail.append(
            {"slope": str(lam), "lower": lower, "upper": upper, "kernel": have, "ok": ok}
        )
    return {
        "source": morphism.source,
        "target": morphism.target,
        "kernel": morphism.kernel,
        "iso_possible": possible,
        "per_slope": detail,
    }


def _mult_map(poly: NewtonPolygon) -> dict:
    out = {}
    for seg in poly.segments:
        r = seg.reduced()
        lam = r.deg.value / r.rk
        out[lam] = out.get(lam, 0) + seg.rk
    return out


def morphism_slope_law(backend: TableBackend) -> dict:
    """Nonzero morphisms between semistable objects go slope-up."""
    results = []
    for m in backend.morphisms():
        if m.zero:
            continue
        src_ok, _ = is_semistable(backend, m.source, Budget())
        tgt_ok, _ = is_semistable(backend, m.target, Budget())
        if not (src_ok and tgt_ok):
            continue
        ok = backend.slope(m.source).cmp(backend.slope(m.target)) <= 0
        results.append({"source": m.source, "target": m.target, "ok": ok})
    return {"checked": len(results), "violations": [r for r in results if not r["ok"]]}


def _filtration_compatible(v: FilteredSpace, w: FilteredSpace, mat) -> bool:
    """mat rows map v-coordinates to w; compatible iff every step lands in
    the matching step of w."""
    for fv, fw in zip(v.filtrations, w.filtrations):
        for jump, step in fv.steps:
            image = linalg.rref([linalg.mat_vec(linalg.transpose(mat), row) for row in step])
            target = None
            for jw, sw in fw.steps:
                if jw >= jump:
                    target = sw
            if len(image) == 0:
                continue
            if target is None or not linalg.subspace_contains(target, image):
                return False
    return True


def morphism_slope_law_filtered(samples: int, seed: int) -> dict:
    """Sampled nonzero filtration-compatible maps between certified
    semistable spaces satisfy mu(source) <= mu(target)."""
    rng = random.Random(seed)
    backend = FilteredBackend()
    budget = Budget()
    checked = 0
    violations = []
    attempts = 0
    while checked < samples and attempts < samples * 60:
        attempts += 1
        v = sample_filtered_space(rng, dim_max=2, n=2)
        w = sample_filtered_space(rng, dim_max=2, n=2)
        ok_v, cv = is_semistable(backend, v, budget)
        ok_w, cw = is_semistable(backend, w, budget)
        if not (ok_v and cv.complete and ok_w and cw.complete):
            continue
        mat = tuple(
            tuple(Fraction(rng.randint(-1, 1)) for _ in range(w.dim))
            for _ in range(v.dim)
        )
        if all(c == 0 for row in mat for c in row):
            continue
        if not _filtration_compatible(v, w, mat):
            continue
        checked += 1
        if backend.slope(v).cmp(backend.slope(w)) > 0:
            violations.append({"v": v.to_json(), "w": w.to_json()})
    return {"checked": checked, "violations": violations, "seed": seed}


# -- brute force flags: uniqueness and dominance ----------------------------------------


def enumerate_flags(backend, obj, budget: Budget = Budget()):
    """All flags through the backend's enumerable strict subobjects."""
    subs, cert = backend.strict_subobjects(obj, budget)
    proper = [s for s in subs if 0 < backend.rank(s) < backend.rank(obj)]
    flags = [[obj]]
    chains = [[s] for s in proper]
    while chains:
        chain = chains.pop()
        flags.append(chain + [obj])
        top = chain[-1]
        for s in proper:
            if backend.rank(s) <= backend.rank(top):
                continue
            if _contains(backend, top, s):
                chains.append(chain + [s])
    return flags, cert


def _contains(backend, small, big) -> bool:
    if isinstance(backend, FilteredBackend):
        return linalg.subspace_contains(big[1], small[1])
    if isinstance(backend, TableBackend):
        if small == big:
            return True
        return any(
            s == small and a == big for s, a, _ in backend.cat.triples
        )
    raise ValueError("no containment test for this backend")


def _sub_quotient(backend, obj, small, big):
    """big/small as an object; small is a strict subobject of big."""
    if isinstance(backend, FilteredBackend):
        from .filtered import coords_in_basis

        if isinstance(big, FilteredSpace):
            return induced_filtration(big, small[1], "quotient")
        big_space = induced_filtration(obj, big[1], "sub")
        small_rows = coords_in_basis(small[1], big[1])
        return induced_filtration(big_space, small_rows, "quotient")
    if isinstance(backend, TableBackend):
        return backend.cat.quotient_of(big, small)
    raise ValueError("no sub-quotient for this backend")


def flag_polygon(backend, obj, chain) -> NewtonPolygon:
    pts = [(backend.rank(s), backend.degree(s)) for s in chain]
    return polygon_of_flag(pts)


def check_hn_uniqueness(backend, obj, budget: Budget = Budget()) -> dict:
    """Brute force: exactly one enumerable flag has semistable graded
    pieces with strictly decreasing slopes, and it is the HN flag."""
    hn = hn_filtration(backend, obj, budget)
    flags, cert = enumerate_flags(backend, obj, budget)
    qualifying = []
    for chain in flags:
        if _qualifies(backend, obj, chain, budget):
            qualifying.append(chain)
    ok = len(qualifying) == 1 and _same_chain(backend, qualifying[0], hn)
    return {
        "object_rank": backend.rank(obj),
        "flags": len(flags),
        "qualifying": len(qualifying),
        "matches_hn": ok,
        "complete": cert.complete and hn.certificate.complete,
    }


def _qualifies(backend, obj, chain, budget) -> bool:
    prev = None
    prev_key = None
    for step in chain:
        if prev is None:
            piece = (
                step
                if backend.rank(step) == backend.rank(obj) and _is_whole(backend, obj, step)
                else _as_object(backend, obj, step)
            )
        else:
            piece = _sub_quotient(backend, obj, prev, step)
        r = backend.rank(piece)
        if r == 0:
            return False
        key = SlopeKey(backend.degree(piece), r)
        if prev_key is not None and not prev_key.cmp(key) > 0:
            return False
        ok, _ = is_semistable(backend, piece, budget)
        if not ok:
            return False
        prev, prev_key = step, key
    return True


def _is_whole(backend, obj, step) -> bool:
    return backend.rank(step) == backend.rank(obj)


def _as_object(backend, obj, step):
    if isinstance(backend, FilteredBackend):
        if isinstance(step, FilteredSpace):
            return step
        return induced_filtration(obj, step[1], "sub")
    return step


def _same_chain(backend, chain, hn) -> bool:
    if len(chain) != len(hn.flag.steps):
        return False
    for got, want in zip(chain, hn.flag.steps):
        if backend.rank(got) != want.rank:
            return False
        if backend.degree(got).cmp(want.degree) != 0:
            return False
        if backend.rank(got) < hn.flag.steps[-1].rank and not (
            _contains(backend, got, want.handle) and _contains(backend, want.handle, got)
        ):
            return False
    return True


def check_dominance(backend, obj, budget: Budget = Budget()) -> dict:
    """Every enumerable flag's polygon lies below NP with equal endpoints."""
    hn = hn_filtration(backend, obj, budget)
    flags, _ = enumerate_flags(backend, obj, budget)
    failures = 0
    for chain in flags:
        poly = flag_polygon(backend, obj, chain)
        if not polygon_dominates(hn.polygon, poly):
            failures += 1
    return {"flags": len(flags), "dominance_failures": failures}


# -- tensor laws -------------------------------------------------------------------------


def check_tensor_mult_filtered(samples: int, seed: int, dim_max: int = 3) -> dict:
    """n = 1 filtered spaces: tensor polygon equals the pairwise-sum
    polygon (the tautological filtration is tensor-multiplicative)."""
    rng = random.Random(seed)
    backend = FilteredBackend()
    budget = Budget()
    failures = []
    for i in range(samples):
        v = sample_filtered_space(rng, dim_max=dim_max, n=1)
        w = sample_filtered_space(rng, dim_max=dim_max, n=1)
        t = tensor_filtered(v, w)
        got = hn_filtration(backend, t, budget).polygon
        want = polygon_combine(
            hn_filtration(backend, v, budget).polygon,
            hn_filtration(backend, w, budget).polygon,
            TENSOR_MULT,
        )
        if got.to_json() != want.to_json():
            failures.append(i)
    return {"samples": samples, "failures": failures, "seed": seed}


def check_duality_filtered(samples: int, seed: int, dim_max: int = 3) -> dict:
    """Dual polygon = negated-reversed polygon; double dual = identity."""
    rng = random.Random(seed)
    backend = FilteredBackend()
    budget = Budget()
    failures = []
    for i in range(samples):
        v = sample_filtered_space(rng, dim_max=dim_max, n=rng.choice((1, 2)))
        dual = dual_filtered(v)
        got = hn_filtration(backend, dual, budget).polygon
        want = polygon_combine(
            hn_filtration(backend, v, budget).polygon, None, DUAL
        )
        if got.to_json() != want.to_json():
            failures.append({"index": i, "kind": "polygon"})
        double = dual_filtered(dual)
        if double.to_json() != v.to_json():
            failures.append({"index": i, "kind": "double-dual"})
        if degree_filtered(dual).value != -degree_filtered(v).value:
            failures.append({"index": i, "kind": "degree"})
    return {"samples": samples, "failures": failures, "seed": seed}


def sample_multiline_space(rng: random.Random) -> FilteredSpace:
    """Dim-2 space with 3 or 5 filtrations, each jumping at its own line.

    With two filtrations, integer-jump semistability forces an even degree,
    so coprime fixtures need more chains; in dimension 2 the destabilizer
    search stays certified-complete for any number of them.
    """
    n = rng.choice((3, 3, 5))
    lines = []
    while len(lines) < n:
        cand = linalg.subspace(
            ((Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-2, 2))),)
        )
        if len(cand) == 1 and cand not in lines:
            lines.append(cand)
    full = linalg.identity(2)
    fils = []
    for line in lines:
        top = Fraction(rng.randint(1, 2))
        base = Fraction(rng.randint(-1, 0))
        fils.append(Filtration(((top, line), (base, full))))
    return FilteredSpace(2, tuple(fils))


def check_coprime_stability(samples: int, seed: int) -> dict:
    """Certified-semistable integer-jump spaces with gcd(deg, dim) = 1 have
    no proper strict subobject of equal slope (they are stable)."""
    from math import gcd

    rng = random.Random(seed)
    budget = Budget()
    backend = FilteredBackend()
    found = 0
    failures = []
    tried = 0
    while found < samples and tried < samples * 400:
        tried += 1
        v = sample_multiline_space(rng)
        deg = degree_filtered(v).value
        if deg.denominator != 1 or gcd(int(deg), v.dim) != 1:
            continue
        ok, cert = is_semistable(backend, v, budget)
        if not ok or not cert.complete:
            continue
        found += 1
        mu = SlopeKey(degree_filtered(v), v.dim)
        subs, _ = backend.strict_subobjects(v, budget)
        for _, rows in subs:
            if not 0 < len(rows) < v.dim:
                continue
            sub = induced_filtration(v, rows, "sub")
            key = SlopeKey(degree_filtered(sub), sub.dim)
            if key.cmp(mu) == 0:
                failures.append({"space": v.to_json()})
    return {
        "requested": samples,
        "found": found,
        "failures": failures,
        "seed": seed,
    }


def check_bifil_tensor_semistable(samples: int, seed: int) -> dict:
    """Evidence run: tensors of certified-semistable integer-jump
    two-filtration spaces stay semistable (asserted only on complete
    certificates; gathers evidence, decides nothing)."""
    rng = random.Random(seed)
    backend = FilteredBackend()
    budget = Budget()
    found = 0
    tried = 0
    failures = []
    while found < samples and tried < samples * 300:
        tried += 1
        v = sample_filtered_space(rng, dim_max=2, n=2, integer_jumps=True)
        w = sample_filtered_space(rng, dim_max=2, n=2, integer_jumps=True)
        ok_v, cv = is_semistable(backend, v, budget)
        ok_w, cw = is_semistable(backend, w, budget)
        if not (ok_v and cv.complete and ok_w and cw.complete):
            continue
        t = tensor_filtered(v, w)
        ok_t, ct = is_semistable(backend, t, budget)
        if not ct.complete:
            continue
        found += 1
        if not ok_t:
            failures.append({"v": v.to_json(), "w": w.to_json()})
    return {"requested": samples, "found": found, "failures": failures, "seed": seed}


def check_minmax(samples: int, seed: int) -> dict:
    """Lemma-style min-max slope bounds on sampled short exact sequences."""
    rng = random.Random(seed)
    failures = []
    checked = 0
    for i in range(samples):
        v = sample_filtered_space(rng)
        rows = _random_subspace(rng, v.dim)
        if not 0 < len(rows) < v.dim:
            continue
        checked += 1
        sub = induced_filtration(v, rows, "sub")
        quo = induced_filtration(v, rows, "quotient")
        mu_m = SlopeKey(degree_filtered(sub), sub.dim)
        mu_n = SlopeKey(degree_filtered(v), v.dim)
        mu_p = SlopeKey(degree_filtered(quo), quo.dim)
        lo = mu_m if mu_m.cmp(mu_p) <= 0 else mu_p
        hi = mu_m if mu_m.cmp(mu_p) >= 0 else mu_p
        if lo.cmp(mu_n) > 0 or mu_n.cmp(hi) > 0:
            failures.append(i)
        else:
            strict_needed = not (mu_m.cmp(mu_n) == 0 and mu_n.cmp(mu_p) == 0)
            if strict_needed and (lo.cmp(mu_n) == 0 or mu_n.cmp(hi) == 0):
                failures.append(i)
    return {"checked": checked, "failures": failures, "seed": seed}


def bost_experiment(samples: int, seed: int, bound=None, vector_cap: int = 48) -> dict:
    """Tensor semistability evidence for rank-2 semistable lattices.

    Report only.  Pairs whose certifying norm bound stays enumerable get a
    full complete-certificate destabilizer search of the Kronecker product;
    the rest are scanned heuristically over rank <= 2 sublattices of short
    vectors and counted as inconclusive.
    """
    from .lattices import semistability_bound, short_vectors

    rng = random.Random(seed)
    found = 0
    tried = 0
    counterexamples = []
    inconclusive = 0
    complete_pairs = 0
    while found < samples and tried < samples * 200:
        tried += 1
        a = sample_lattice(rng, rank_max=2)
        b = sample_lattice(rng, rank_max=2)
        if a.rank != 2 or b.rank != 2:
            continue
        sa, _, _ = destabilizer_lattice(a)
        sb, _, _ = destabilizer_lattice(b)
        if not (isinstance(sa, EuclideanLattice) and isinstance(sb, EuclideanLattice)):
            continue  # not semistable
        found += 1
        t = tensor_lattice(a, b)
        needed = Fraction(bound) if bound is not None else semistability_bound(t)
        vecs = short_vectors(t, needed)
        if len(vecs) <= vector_cap:
            sub, key, cert = destabilizer_lattice(t, Budget(bound=needed))
            if cert.complete:
                complete_pairs += 1
            else:
                inconclusive += 1
            if isinstance(sub, Sublattice) and key.cmp(t.slope()) > 0:
                counterexamples.append(
                    {
                        "a": a.to_json(),
                        "b": b.to_json(),
                        "sub": _describe(LatticeBackend(), sub),
                        "complete": cert.complete,
                    }
                )
        else:
            inconclusive += 1
            witness = _scan_rank_le2(t, vecs[: vector_cap])
            if witness is not None:
                counterexamples.append(
                    {
                        "a": a.to_json(),
                        "b": b.to_json(),
                        "sub": _describe(LatticeBackend(), witness),
                        "complete": False,
                    }
                )
    return {
        "pairs": found,
        "complete_pairs": complete_pairs,
        "counterexamples": counterexamples,
        "inconclusive": inconclusive,
        "seed": seed,
    }


def _scan_rank_le2(t, vecs):
    """Heuristic destabilizer scan over rank <= 2 spans of short vectors."""
    from .lattices import saturate

    mu = t.slope()
    for _, v in vecs:
        s = saturate(t, [v])
        if SlopeKey(s.degree(), 1).cmp(mu) > 0:
            return s
    for i, (_, v) in enumerate(vecs):
        for _, w in vecs[i + 1 :]:
            s1 = saturate(t, [v])
            if linalg.subspace_contains(s1.span_key(), (tuple(Fraction(x) for x in w),)):
                continue
            s = saturate(t, [list(v), list(w)])
            if SlopeKey(s.degree(), 2).cmp(mu) > 0:
                return s
    return None
