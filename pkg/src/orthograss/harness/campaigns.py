"""Lemma registry, per-trial checks and the campaign runner."""

from __future__ import annotations

import json
import random
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .. import conjclass as cc
from .. import dim4
from ..generators import (
    adjacent_noncompatible_pair,
    as_rng,
    compatible_codim2_pair,
    derive_seed,
    random_orthogonal_basis,
    random_pair,
    rotate_pair,
)
from ..grassmann import GeodesicPath, GraphKind, validate_path
from ..orthograph import (
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_WITNESS_BUDGET,
    NeighborKind,
    classify_common_neighbor,
    clique_intersection_size,
    count_common_neighbors,
    decide_compatibility_by_geodesics,
    distinct_lines,
    exhaust_extensions,
    ortho_star_elements,
    ortho_top_elements,
    two_extensions,
    type1_neighbor,
    unique_partner,
)
from ..subspace import (
    ConsistencyError,
    intersect,
    is_compatible,
    is_orthogonal,
    orthocomplement,
    span,
    sum_,
)


class CampaignError(ValueError):
    """Invalid lemma id or parameters."""


@dataclass(frozen=True)
class Lemma:
    lemma_id: str
    claim: str
    param_kind: str  # "nk" or "ops"
    defaults: dict
    trial: Callable


@dataclass
class Campaign:
    lemma_id: str
    params: dict
    trials: int = 20
    seed: int = 0
    witness_budget: int = DEFAULT_WITNESS_BUDGET

    def validate(self) -> Lemma:
        lemma = LEMMAS.get(self.lemma_id)
        if lemma is None:
            raise CampaignError(f"unknown lemma id {self.lemma_id!r}")
        if self.trials < 1:
            raise CampaignError("trials must be positive")
        if self.witness_budget < 2:
            raise CampaignError("witness budget must be at least 2")
        _VALIDATORS[self.lemma_id](self.params)
        return lemma


def _command(lemma_id: str, kind: str) -> str:
    if kind == "ops":
        return f"orthograss verify {lemma_id} --sigma A,B,C --d N1,N2,N3 --trials T --seed S"
    return f"orthograss verify {lemma_id} --n N --k K --trials T --seed S"


# -- trial bodies ------------------------------------------------------------------
# Each returns (passed, counts, witness).  Raised exceptions become failed trials.


def _t_common_neighbors(p, rng, budget):
    n, k = p["n"], p["k"]
    X, Y = adjacent_noncompatible_pair(n, k, rng)
    res = count_common_neighbors(X, Y, budget)
    kinds = [classify_common_neighbor(X, Y, Z).value for Z in res.neighbors]
    finite = (n - k - 2 <= 0) and (k - 2 <= 0)
    ok = res.exact == finite and len(set(res.neighbors)) == res.count
    if not finite:
        ok = ok and res.count == budget
    return ok, {"count": res.count, "label": res.label, "type1": kinds.count("Type1"), "type2": kinds.count("Type2")}, {
        "X": X.to_json(), "Y": Y.to_json(), "label": res.label,
    }


def _t_geodesic_count_dim4(p, rng, budget):
    X, Y = adjacent_noncompatible_pair(4, 2, rng)
    res = count_common_neighbors(X, Y, budget)
    z1, z2 = res.neighbors if res.count == 2 else (None, None)
    ok = res.exact and res.count == 2 and is_orthogonal(z1, z2)
    return ok, {"label": res.label, "orthogonal": bool(ok)}, {
        "X": X.to_json(), "Y": Y.to_json(), "neighbors": [z.to_json() for z in res.neighbors],
    }


def _codim2_neighbor(X, Y, rng):
    XY = intersect(X, Y)
    XYp = orthocomplement(XY)
    Xp, Yp = intersect(X, XYp), intersect(Y, XYp)
    p = rng.choice(distinct_lines(Xp, 4))
    q = rng.choice(distinct_lines(Yp, 4))
    return sum_(sum_(XY, p), q)


def _t_two_extensions(p, rng, budget):
    X, Y = compatible_codim2_pair(p["n"], p["k"], rng)
    Z = _codim2_neighbor(X, Y, rng)
    Z1, Z2 = two_extensions(X, Y, Z)
    found = exhaust_extensions(X, Y, Z)
    ok = Z1 != Z2 and set(found) == {Z1, Z2}
    return ok, {"extensions": 2 if Z1 != Z2 else 1, "universe_hits": len(found)}, {
        "X": X.to_json(), "Y": Y.to_json(), "Z": Z.to_json(), "extensions": [Z1.to_json(), Z2.to_json()],
    }


def _t_unique_partner(p, rng, budget):
    n, k = p["n"], p["k"]
    X, Y = adjacent_noncompatible_pair(n, k, rng)
    perp = orthocomplement(sum_(X, Y))
    P = rng.choice(distinct_lines(perp, 4))
    Z = type1_neighbor(X, Y, P)
    partner = unique_partner(X, Y, Z)
    ok = partner != Z
    return ok, {"partners": 1}, {"X": X.to_json(), "Y": Y.to_json(), "Z": Z.to_json(), "partner": partner.to_json()}


def _t_compat_geodesics(p, rng, budget):
    X, Y, m, compat = random_pair(p["n"], p["k"], rng)
    dec = decide_compatibility_by_geodesics(X, Y, DEFAULT_SEARCH_BUDGET, rng.getrandbits(32))
    ok = dec.compatible == is_compatible(X, Y) == compat
    witness = {"X": X.to_json(), "Y": Y.to_json(), "decision": dec.label}
    if dec.witness is not None:
        validate_path(dec.witness.vertices, GraphKind.GRASSMANN)
        ok = ok and bool(dec.witness.non_ortho_steps())
        witness["path_length"] = dec.witness.length
        witness["failing_steps"] = dec.witness.non_ortho_steps()
    return ok, {"intersection_dim": m, "compatible": compat, "attempts": dec.attempts}, witness


def _t_clique_sizes(p, rng, budget):
    n, k = p["n"], p["k"]
    B = random_orthogonal_basis(n, rng)
    idx = list(range(n))
    rng.shuffle(idx)
    S = span([B[i] for i in idx[: k - 1]], n, allow_zero=True)
    U = span([B[i] for i in idx[: k + 1]], n) if k + 1 <= n else None
    star = ortho_star_elements(S, B)
    ok = len(star) == n - k + 1
    counts = {"star": len(star)}
    if U is not None and k + 1 <= n:
        top = ortho_top_elements(U, B)
        counts["top"] = len(top)
        ok = ok and len(top) == k + 1
    return ok, counts, {"basis": [[str(c) for c in b] for b in B]}


CLIQUE_CONFIGS = (
    ("star-star-same", 2), ("star-star-same", 1), ("star-star-same", 0),
    ("star-star-distinct", None),
    ("star-top", 2), ("star-top", 1), ("star-top", 0),
)


def clique_configuration(n: int, k: int, config: str, target, rng) -> tuple[int, str]:
    """Build two ortho-cliques of the requested kind and return their intersection size."""
    B = random_orthogonal_basis(n, rng)
    idx = list(range(n))
    rng.shuffle(idx)
    S = span([B[i] for i in idx[: k - 1]], n, allow_zero=True)
    outside = idx[k - 1:]
    if config == "star-star-same":
        # rotate within a block of outside vectors: every rotated line leaves the star
        block = (n - k + 1) - target
        if block < 2 or block > len(outside):
            raise CampaignError(f"cannot realise m={target} for n={n}, k={k}")
        B2 = list(B)
        chain = outside[:block]
        if block == 2:
            B2 = rotate_pair(B2, chain[0], chain[1], rng)
        else:
            for a, b in zip(chain, chain[1:]):
                B2 = rotate_pair(B2, a, b, rng)
        return clique_intersection_size(ortho_star_elements(S, B), ortho_star_elements(S, B2)), config
    if config == "star-star-distinct":
        other = list(idx)
        while set(other[: k - 1]) == set(idx[: k - 1]):
            rng.shuffle(other)
        S2 = span([B[i] for i in other[: k - 1]], n, allow_zero=True)
        B2 = B
        free = other[k - 1:]
        if rng.random() < 0.5:
            B2 = rotate_pair(B, free[0], free[1], rng)
        return clique_intersection_size(ortho_star_elements(S, B), ortho_star_elements(S2, B2)), config
    if config == "star-top":
        u1, u2, w = outside[0], outside[1], outside[2]
        if target == 2:
            U = span([B[i] for i in idx[: k - 1]] + [B[u1], B[u2]], n)
            return clique_intersection_size(ortho_star_elements(S, B), ortho_top_elements(U, B)), config
        if target == 1:
            B2 = rotate_pair(B, u2, w, rng)
            U = span([B[i] for i in idx[: k - 1]] + [B2[u1], B2[u2]], n)
            return clique_intersection_size(ortho_star_elements(S, B), ortho_top_elements(U, B2)), config
        # U misses a vector of S, so no element of the star lies in U
        U = span([B[i] for i in idx[1: k + 2]], n)
        return clique_intersection_size(ortho_star_elements(S, B), ortho_top_elements(U, B)), config
    raise CampaignError(f"unknown clique configuration {config!r}")


def _t_clique_intersections(p, rng, budget, index=0):
    n, k = p["n"], p["k"]
    config, target = CLIQUE_CONFIGS[index % len(CLIQUE_CONFIGS)]
    m, _ = clique_configuration(n, k, config, target, rng)
    # two distinct ortho-stars on one centre share at most n-k-1 elements (k-1 when n = 2k)
    allowed = {"star-star-same": set(range(n - k)), "star-star-distinct": {0, 1}, "star-top": {0, 1, 2}}[config]
    ok = m in allowed and (target is None or m == target)
    return ok, {"config": config, "size": m}, {"config": config, "target": target, "size": m}


def _t_dim4_exceptional(p, rng, budget):
    fam = dim4.random_perp_closed_family(rng)
    f = dim4.exceptional_map(fam)
    pairs = dim4.mixed_pairs(fam.sorted_members(), p.get("pairs", 20), rng)
    rep = dim4.check_ortho_automorphism(f, pairs)
    X, Y = dim4.find_adjacency_breaking_pair(f)
    ok = rep.ok and X in fam and Y not in fam
    return ok, {"family_size": len(fam), "pairs": rep.checked, "violations": len(rep.violations)}, {
        "family": fam.to_json(), "breaking_pair": [X.to_json(), Y.to_json()],
    }


def _spectral(p) -> cc.SpectralData:
    return cc.SpectralData(tuple(p["sigma"]), tuple(p["d"]))


def _ops_kinds(spectral: cc.SpectralData) -> list[str]:
    kinds = ["adj-comm", "adj-noncomm"]
    mult = spectral.multiplicities
    if sum(1 for m in mult if m >= 2) >= 2:
        kinds.append("codim2")
    if spectral.k >= 3:
        kinds.append("three-index")
    if spectral.k >= 4:
        kinds.append("four-index")
    kinds.append("unrelated")
    return kinds


def _t_ops_adjacency_equiv(p, rng, budget, index=0):
    spectral = _spectral(p)
    kinds = _ops_kinds(spectral)
    kind = kinds[index % len(kinds)]
    A, B = cc.random_operator_pair(spectral, kind, rng)
    t = cc.adjacency_type(A, B)
    comm = cc.is_commutatively_adjacent(A, B)
    expected_adj = kind in ("adj-comm", "adj-noncomm")
    ok = (t is not None) == expected_adj and comm == (kind == "adj-comm")
    rank = (cc.to_matrix(A) - cc.to_matrix(B)).rank()
    return ok, {"kind": kind, "adjacent": t is not None, "commutative": comm, "rank": rank}, {
        "kind": kind, "type": list(t) if t else None,
    }


def _t_ops_six_bound(p, rng, budget, index=0):
    spectral = _spectral(p)
    kinds = [k for k in ("three-index", "four-index") if k in _ops_kinds(spectral)]
    if not kinds:
        raise CampaignError("six-bound needs at least three eigenvalues")
    kind = kinds[index % len(kinds)]
    A, B = cc.random_operator_pair(spectral, kind, rng)
    found = cc.enumerate_common_comm_neighbors(A, B)
    ok = len(found) <= 6 and all(
        cc.is_commutatively_adjacent(C, A) and cc.is_commutatively_adjacent(C, B) for C in found
    )
    return ok, {"kind": kind, "differing": len(cc.differing_indices(A, B)), "neighbors": len(found)}, {
        "kind": kind, "neighbors": len(found),
    }


def _t_ops_connectivity(p, rng, budget):
    spectral = _spectral(p)
    ops = cc.connectivity_universe(spectral, p.get("extra_pairs", 2), rng)
    comps = cc.commutativity_components(ops)
    return comps == 1, {"operators": len(ops), "components": comps}, {"operators": len(ops)}


def _t_spectrum_swap(p, rng, budget, index=0):
    spectral = _spectral(p)
    new = tuple(p.get("sigma_prime") or _default_sigma_prime(spectral.k))
    kinds = _ops_kinds(spectral)
    kind = kinds[index % len(kinds)]
    A, B = cc.random_operator_pair(spectral, kind, rng)
    A2, B2 = cc.spectrum_swap(A, new), cc.spectrum_swap(B, new)
    t1, t2 = cc.adjacency_type(A, B), cc.adjacency_type(A2, B2)
    c1, c2 = cc.is_commutatively_adjacent(A, B), cc.is_commutatively_adjacent(A2, B2)
    ok = t1 == t2 and c1 == c2
    counts = {"kind": kind, "adjacent": t1 is not None, "commutative": c1, "midpoint": None}
    if t1 is not None and not cc.operators_commute(A, B):
        C = cc.midpoint(A, B)
        untouched = [t for t in range(1, spectral.k + 1) if t not in t1]
        counts["midpoint"] = all(C.eigenspace(t) == A.eigenspace(t) for t in untouched)
        ok = ok and counts["midpoint"]
    return ok, counts, {"kind": kind, "type": list(t1) if t1 else None}


def _default_sigma_prime(k: int) -> tuple:
    return tuple((i + 1) ** 2 for i in range(k))


def _accepts_index(fn) -> bool:
    return "index" in fn.__code__.co_varnames[: fn.__code__.co_argcount]


# -- parameter validation ----------------------------------------------------------


def _need_nk(params, fixed=None, check=None):
    def v(p):
        if "n" not in p or "k" not in p:
            raise CampaignError("this lemma needs --n and --k")
        n, k = p["n"], p["k"]
        if fixed and (n, k) != fixed:
            raise CampaignError(f"this lemma is defined for (n, k) = {fixed}")
        if not (1 <= k < n):
            raise CampaignError(f"need 1 <= k < n, got n={n}, k={k}")
        if check:
            check(n, k)
    return v


def _need_ops(check=None):
    def v(p):
        if "sigma" not in p or "d" not in p:
            raise CampaignError("this lemma needs --sigma and --d")
        try:
            spectral = cc.SpectralData(tuple(p["sigma"]), tuple(p["d"]))
        except cc.OperatorError as exc:
            raise CampaignError(str(exc)) from exc
        if spectral.k < 2:
            raise CampaignError("at least two eigenvalues are required")
        if p.get("sigma_prime") is not None and len(p["sigma_prime"]) != spectral.k:
            raise CampaignError("--sigma-prime must have one value per eigenvalue")
        if check:
            check(spectral)
    return v


def _require(cond, msg):
    if not cond:
        raise CampaignError(msg)


_VALIDATORS = {
    "common-neighbors": _need_nk(None, check=lambda n, k: _require(k + 1 <= n, "k + 1 <= n required")),
    "two-extensions": _need_nk(None, check=lambda n, k: _require(2 <= k and k + 2 <= n, "need 2 <= k <= n - 2")),
    "unique-partner": _need_nk(None, check=lambda n, k: _require(n == k + 3, "need n = k + 3")),
    "geodesic-count-dim4": _need_nk(None, fixed=(4, 2)),
    "compat-geodesics": _need_nk(None, check=lambda n, k: _require(n <= 10, "n <= 10 keeps exact arithmetic fast")),
    "clique-sizes": _need_nk(None),
    "clique-intersections": _need_nk(None, check=lambda n, k: _require(
        k >= 2 and n - k >= 3, "need k >= 2 and n - k >= 3 to realise every configuration")),
    "dim4-exceptional": _need_nk(None, fixed=(4, 2)),
    "ops-adjacency-equiv": _need_ops(),
    "ops-six-bound": _need_ops(lambda s: _require(s.k >= 3, "need at least three eigenvalues")),
    "ops-connectivity": _need_ops(lambda s: _require(s.n <= 6, "n <= 6 keeps the basis universe small")),
    "spectrum-swap": _need_ops(),
}


LEMMAS: dict[str, Lemma] = {}


def _register(lemma_id, claim, kind, defaults, trial):
    LEMMAS[lemma_id] = Lemma(lemma_id, claim, kind, defaults, trial)


_register("common-neighbors",
          "an adjacent non-compatible pair has finitely many common ortho-neighbours only in the smallest cases; "
          "otherwise the Type1/Type2 families are infinite",
          "nk", {"n": 6, "k": 3}, _t_common_neighbors)
_register("two-extensions",
          "a compatible pair meeting in codimension 2 and a common ortho-neighbour Z have exactly two "
          "subspaces ortho-adjacent to all three",
          "nk", {"n": 6, "k": 3}, _t_two_extensions)
_register("unique-partner",
          "for k = n - 3 a Type1 common neighbour of an adjacent non-compatible pair has a unique extension",
          "nk", {"n": 5, "k": 2}, _t_unique_partner)
_register("geodesic-count-dim4",
          "in C^4 with k = 2 an adjacent non-compatible pair has exactly two common ortho-neighbours, "
          "and they are orthogonal",
          "nk", {"n": 4, "k": 2}, _t_geodesic_count_dim4)
_register("compat-geodesics",
          "two subspaces are compatible iff every Grassmann geodesic between them is an ortho-geodesic",
          "nk", {"n": 6, "k": 3}, _t_compat_geodesics)
_register("clique-sizes",
          "an ortho-top has k + 1 elements and an ortho-star n - k + 1, each a clique",
          "nk", {"n": 6, "k": 3}, _t_clique_sizes)
_register("clique-intersections",
          "distinct ortho-stars on one centre meet in 0..n-k-1 elements, on distinct centres in at most one, "
          "and an ortho-star meets an ortho-top in 0, 1 or 2",
          "nk", {"n": 6, "k": 3}, _t_clique_intersections)
_register("dim4-exceptional",
          "swapping a perp-closed family of planes of C^4 with their complements preserves ortho-adjacency "
          "but not adjacency",
          "nk", {"n": 4, "k": 2}, _t_dim4_exceptional)
_register("ops-adjacency-equiv",
          "rank(A - B) = 2 with invariant kernel and image iff the eigenspaces differ at exactly two adjacent indices",
          "ops", {"sigma": ("0", "1", "2"), "d": (3, 3, 2)}, _t_ops_adjacency_equiv)
_register("ops-six-bound",
          "operators whose eigenspaces differ in three or four indices have at most six common "
          "commutative neighbours",
          "ops", {"sigma": ("0", "1", "2", "3"), "d": (2, 2, 2, 2)}, _t_ops_six_bound)
_register("ops-connectivity",
          "the commutativity graph of a conjugacy class is connected",
          "ops", {"sigma": ("0", "1", "2"), "d": (2, 2, 1)}, _t_ops_connectivity)
_register("spectrum-swap",
          "relabelling the spectrum preserves both adjacency relations; non-commuting adjacent operators "
          "have a common commutative neighbour",
          "ops", {"sigma": ("0", "1", "2"), "d": (3, 3, 2)}, _t_spectrum_swap)


def list_lemmas() -> list[dict]:
    return [
        {"lemma": l.lemma_id, "claim": l.claim, "command": _command(l.lemma_id, l.param_kind),
         "defaults": {k: list(v) if isinstance(v, tuple) else v for k, v in l.defaults.items()}}
        for l in LEMMAS.values()
    ]


# -- running -----------------------------------------------------------------------


def _run_trial(args) -> dict:
    lemma_id, params, index, seed, budget = args
    lemma = LEMMAS[lemma_id]
    rng = random.Random(seed)
    record = {"index": index, "seed": seed}
    try:
        if _accepts_index(lemma.trial):
            ok, counts, witness = lemma.trial(params, rng, budget, index=index)
        else:
            ok, counts, witness = lemma.trial(params, rng, budget)
        record.update(verdict="pass" if ok else "fail", counts=counts, witness=witness)
    except Exception as exc:  # diagnostics surface as failed trials
        record.update(
            verdict="fail",
            counts={},
            witness=None,
            error={"type": type(exc).__name__, "message": str(exc),
                   "where": traceback.extract_tb(exc.__traceback__)[-1].name},
        )
    return record


def _json_params(params: dict) -> dict:
    out = {}
    for k, v in sorted(params.items()):
        if isinstance(v, (tuple, list)):
            out[k] = [str(x) if k.startswith("sigma") else x for x in v]
        else:
            out[k] = v
    return out


def run_campaign(c: Campaign, jobs: int = 1) -> dict:
    """Run every trial and assemble the report; ordering is by trial index."""
    lemma = c.validate()
    started = time.perf_counter()
    tasks = [(c.lemma_id, c.params, i, derive_seed(c.seed, i), c.witness_budget) for i in range(c.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial, tasks, chunksize=max(1, c.trials // (4 * jobs))))
    else:
        results = [_run_trial(t) for t in tasks]
    records: list = [None] * c.trials
    for r in results:
        records[r["index"]] = r
    passed = sum(1 for r in records if r["verdict"] == "pass")
    failed = c.trials - passed
    witnesses = [
        {"trial": r["index"], **(r["witness"] or {}), **({"error": r["error"]} if "error" in r else {})}
        for r in records if r["verdict"] == "fail" or r["index"] < c.witness_budget
    ]
    return {
        "lemma": c.lemma_id,
        "claim": lemma.claim,
        "params": _json_params(c.params),
        "trials": c.trials,
        "passed": passed,
        "failed": failed,
        "aggregate": "pass" if failed == 0 else "fail",
        "seed": c.seed,
        "witness_budget": c.witness_budget,
        "witnesses": witnesses,
        "records": [{k: v for k, v in r.items() if k != "witness"} for r in records],
        "scope": "exact arithmetic over Q(i); exhaustive checks are limited to basis-spanned finite universes",
        "wall_time_s": round(time.perf_counter() - started, 3),
    }


def report_json(report: dict, include_time: bool = True) -> str:
    data = dict(report)
    if not include_time:
        data.pop("wall_time_s", None)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def report_text(report: dict) -> str:
    """Tab-delimited rendering: one summary line, a header, then one row per trial."""
    lines = [
        "\t".join(["#lemma", report["lemma"], "seed", str(report["seed"]), "passed",
                   f"{report['passed']}/{report['trials']}", report["aggregate"]]),
        "\t".join(["index", "seed", "verdict", "counts", "error"]),
    ]
    for r in report["records"]:
        counts = ";".join(f"{k}={v}" for k, v in sorted(r["counts"].items()))
        err = r.get("error", {}).get("message", "") if "error" in r else ""
        lines.append("\t".join([str(r["index"]), str(r["seed"]), r["verdict"], counts, err]))
    return "\n".join(lines) + "\n"
