"""Exhaustive certification of PMDS / SD / MSR properties and a small cluster simulator.

All recoverability questions reduce to ranks of column-restricted parity-check
matrices, evaluated in large batches.  Erasure patterns are enumerated in
lexicographic order and the reported counterexample is the smallest failing
(check, row) pair, independent of how the work was split across threads.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .arrays import ArrayCode, ArrayCodeword, ErasurePattern, RepairTranscript, cut_set_bound
from .errors import InvalidParametersError, RepairError, UnrecoverableError
from .matrix import batched_rank

DEFAULT_BUDGET = 10**6
_BATCH = 1 << 17


def worker_count() -> int:
    """Threads to use: ``PMDS_REGEN_THREADS`` or, when unset or 0, the CPU count."""
    raw = os.environ.get("PMDS_REGEN_THREADS", "0")
    try:
        val = int(raw)
    except ValueError:
        val = 0
    return val if val > 0 else (os.cpu_count() or 1)


def code_hash(code) -> str:
    desc = json.dumps(code.descriptor(), sort_keys=True)
    return hashlib.sha256(desc.encode()).hexdigest()[:16]


@dataclass
class Certificate:
    property: str
    code_hash: str
    pattern_count: int
    checks: int
    mode: str = "exhaustive"
    seed: int = 0
    details: dict = dc_field(default_factory=dict)

    passed = True

    def __bool__(self):
        return True

    def to_json(self) -> str:
        return json.dumps({"property": self.property, "code_hash": self.code_hash,
                           "pattern_count": self.pattern_count, "checks": self.checks,
                           "mode": self.mode, "seed": self.seed, "result": "certificate",
                           "details": self.details})


@dataclass
class Counterexample:
    property: str
    code_hash: str
    pattern_count: int
    checks: int
    reason: str
    pattern: Optional[dict] = None
    row: Optional[int] = None
    mode: str = "exhaustive"
    seed: int = 0

    passed = False

    def __bool__(self):
        return False

    def to_json(self) -> str:
        return json.dumps({"property": self.property, "code_hash": self.code_hash,
                           "pattern_count": self.pattern_count, "checks": self.checks,
                           "mode": self.mode, "seed": self.seed, "result": "counterexample",
                           "counterexample": {"reason": self.reason, "pattern": self.pattern,
                                              "row": self.row}})


@dataclass(frozen=True)
class _Check:
    """Columns whose parity-check restriction must have rank ``target``."""

    kind: str
    columns: tuple
    target: int
    pattern: dict


def _local_checks(code: ArrayCode, m: int) -> Iterator[_Check]:
    """Every group's projection is an ``[n, n-r]`` MDS code."""
    everything = list(range(code.length))
    for g in range(code.mu):
        w = code.group(g)
        outside = tuple(c for c in everything if c not in w)
        yield _Check("local-dimension", outside, m - code.r, {"group": g})
        for e in itertools.combinations(w, code.r):
            cols = tuple(sorted(outside + e))
            yield _Check("local-mds", cols, m, {"group": g, "E": list(e)})


def _pattern_checks(code: ArrayCode, sd: bool) -> Iterator[_Check]:
    per_group = [list(itertools.combinations(code.group(g), code.r)) for g in range(code.mu)]
    if sd:
        patterns = (tuple(tuple(g * code.n + p for p in pos) for g in range(code.mu))
                    for pos in itertools.combinations(range(code.n), code.r))
    else:
        patterns = itertools.product(*per_group)
    k = code.mu * code.r + code.s
    for pat in patterns:
        erased = set(c for e in pat for c in e)
        survivors = [c for c in range(code.length) if c not in erased]
        for x in itertools.combinations(survivors, code.s):
            cols = tuple(sorted(erased | set(x)))
            yield _Check("global", cols, k, {"E": [list(e) for e in pat], "X": list(x)})


def pattern_count(code: ArrayCode, sd: bool = False) -> int:
    per = math.comb(code.n, code.r)
    outer = per if sd else per**code.mu
    return outer * math.comb(code.mu * (code.n - code.r), code.s)


def _evaluate(code, checks: List[_Check], rows: np.ndarray):
    """Return the index (in check-major, row-minor order) of the first failure, or None."""
    if not checks:
        return None
    # checks may differ in width; group consecutive runs of equal width
    h = code.parity_stack(rows)  # (R, m, N)
    start = 0
    while start < len(checks):
        width = len(checks[start].columns)
        stop = start
        while stop < len(checks) and len(checks[stop].columns) == width:
            stop += 1
        block = checks[start:stop]
        cols = np.array([c.columns for c in block], dtype=np.int64)  # (C, w)
        targets = np.array([c.target for c in block])
        sub = h[:, :, cols]  # (R, m, C, w)
        sub = np.moveaxis(sub, 2, 0).reshape(len(block) * len(rows), h.shape[1], width)
        ranks = batched_rank(code.field, sub).reshape(len(block), len(rows))
        bad = ranks != targets[:, None]
        if bad.any():
            ci, ri = np.argwhere(bad)[0]
            return start + int(ci), int(rows[ri])
        start = stop
    return None


def _run(code, property_name, checks: List[_Check], n_patterns, budget, seed):
    """Drive the evaluation over (check, row) pairs, sampling rows if over budget."""
    mode = "exhaustive"
    rows = np.arange(code.ell)
    if budget is not None and len(checks) * code.ell > budget:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        per_check = max(1, budget // max(len(checks), 1))
        rows = np.sort(rng.choice(code.ell, size=min(per_check, code.ell), replace=False))

    # Blocks of checks are processed in order; inside a block the row chunks
    # may run in parallel.  The first block with a failure yields the
    # smallest (check, row) pair.
    chunk_rows = min(len(rows), _BATCH)
    per_block = max(1, _BATCH // chunk_rows)
    row_chunks = [rows[i:i + chunk_rows] for i in range(0, len(rows), chunk_rows)]
    nthreads = min(worker_count(), len(row_chunks))
    pool = ThreadPoolExecutor(nthreads) if nthreads > 1 else None
    failure = None
    try:
        for b0 in range(0, len(checks), per_block):
            block = checks[b0:b0 + per_block]
            work = lambda rc: _evaluate(code, block, rc)
            results = list(pool.map(work, row_chunks)) if pool else [work(rc) for rc in row_chunks]
            found = [(b0 + ci, row) for res in results if res is not None for ci, row in [res]]
            if found:
                failure = min(found)
                break
    finally:
        if pool:
            pool.shutdown()
    n_checks = len(checks) * len(rows)
    if failure is not None:
        ci, row = failure
        chk = checks[ci]
        return Counterexample(property_name, code_hash(code), n_patterns, n_checks,
                              reason=f"{chk.kind}: rank differs from {chk.target}",
                              pattern=chk.pattern, row=row, mode=mode, seed=seed)
    return Certificate(property_name, code_hash(code), n_patterns, n_checks, mode, seed,
                       details={"rows_checked": int(len(rows))})


def _validate(code):
    if code.mu < 2 or not 1 <= code.r < code.n or not 1 <= code.s <= (code.n - code.r) * (code.mu - 1):
        raise InvalidParametersError(
            f"not a valid PMDS parameter set: mu={code.mu}, n={code.n}, r={code.r}, s={code.s}")


def _certify(code, sd: bool, budget, seed):
    _validate(code)
    m = code.mu * code.r + code.s
    checks = [_Check("dimension", tuple(range(code.length)), m, {})]
    checks += list(_local_checks(code, m))
    checks += list(_pattern_checks(code, sd))
    return _run(code, "SD" if sd else "PMDS", checks, pattern_count(code, sd), budget, seed)


def certify_pmds(code: ArrayCode, budget: Optional[int] = DEFAULT_BUDGET, seed: int = 0):
    """Certificate iff every local code is ``[n, n-r]`` MDS and every ``r``-per-group
    puncturing leaves an MDS code of distance ``s + 1``, in every row.

    ``budget`` caps the number of (check, row) pairs; above it, each check is
    evaluated on the same seeded random subset of rows and the result is
    stamped ``mode="sampled"``.  ``budget=None`` always runs exhaustively.
    """
    return _certify(code, False, budget, seed)


def certify_sd(code: ArrayCode, budget: Optional[int] = DEFAULT_BUDGET, seed: int = 0):
    """As :func:`certify_pmds` but only for patterns erasing the same in-group positions."""
    return _certify(code, True, budget, seed)


def certify_msr_bandwidth(code, mode: str = "local", d: Optional[int] = None, trials: int = 2,
                          seed: int = 0, max_helper_sets: int = 64, patterns=None):
    """Repair every single node and compare with the original and the cut-set bound.

    ``mode="local"`` repairs inside each group from every ``d``-subset of the
    group's other nodes (capped at ``max_helper_sets`` per node).
    ``mode="global"`` punctures each pattern in ``patterns`` (default: all
    ``r``-per-group patterns) and repairs every surviving node from all others.
    """
    rng = np.random.default_rng(seed)
    words = [code.encode(code.random_message(rng)) for _ in range(trials)]
    checked = 0
    if mode == "local":
        local_n = code.n
        local_d = d if d is not None else getattr(code, "d", local_n - 1)
        for g in range(code.mu):
            for i in code.group(g):
                others = [c for c in code.group(g) if c != i]
                sets = list(itertools.islice(itertools.combinations(others, local_d), max_helper_sets))
                for helpers in sets:
                    for word in words:
                        col, tr = repair_local(code, word, i, list(helpers), d=local_d)
                        checked += 1
                        bad = _repair_problem(word, i, col, tr)
                        if bad:
                            return Counterexample("MSR-local", code_hash(code), checked, checked, bad,
                                                  pattern={"failed": i, "helpers": list(helpers)},
                                                  seed=seed)
        return Certificate("MSR-local", code_hash(code), checked, checked, seed=seed,
                           details={"bandwidth": int(tr.total), "bound": str(tr.bound),
                                    "symbol_field": tr.symbol_field})
    if mode == "global":
        pats = patterns if patterns is not None else list(code.puncture_patterns())
        tr = None
        for pat in pats:
            erased = [c for e in pat for c in e]
            for i in (c for c in range(code.length) if c not in erased):
                for word in words:
                    col, tr = code.global_repair(word, pat, i)
                    checked += 1
                    bad = _repair_problem(word, i, col, tr)
                    if bad:
                        return Counterexample("MSR-global", code_hash(code), len(pats), checked, bad,
                                              pattern={"E": [list(e) for e in pat], "failed": i},
                                              seed=seed)
        return Certificate("MSR-global", code_hash(code), len(pats), checked, seed=seed,
                           details={"bandwidth": int(tr.total), "bound": str(tr.bound),
                                    "symbol_field": tr.symbol_field})
    raise InvalidParametersError(f"unknown mode {mode!r}")


def repair_local(code, word, failed: int, helpers: Sequence[int], d: Optional[int] = None):
    """Single-node repair inside a group.

    Uses the code's own regenerating repair when ``d`` matches its design;
    otherwise downloads ``n - r`` helper columns in full and decodes.
    """
    if d is None:
        d = len(helpers)
    if getattr(code, "d", None) == d and hasattr(code, "repair_local"):
        return code.repair_local(word, failed, helpers)
    g = code.group_of(failed)
    used = sorted(helpers)[:code.n - code.r]
    if len(used) < code.n - code.r:
        raise RepairError(f"need at least {code.n - code.r} helpers")
    full = _local_decode(code, word, g, used)
    scale = _symbol_scale(code)
    tr = RepairTranscript(failed=[failed], helpers=used,
                          per_helper={h: code.ell * scale for h in used},
                          symbol_field=_symbol_name(code),
                          bound=cut_set_bound(code.n, code.r, d, code.ell) * scale,
                          regenerating=False)
    return full[:, failed].copy(), tr


def _repair_problem(word, i, col, tr: RepairTranscript) -> Optional[str]:
    if not np.array_equal(col, word.data[:, i]):
        return "repaired column differs from the original"
    if tr.total < tr.bound:
        return f"bandwidth {tr.total} below the cut-set bound {tr.bound}"
    if tr.total != tr.bound:
        return f"bandwidth {tr.total} exceeds the cut-set bound {tr.bound}"
    return None


# ---------------------------------------------------------------------------
# cluster simulation
# ---------------------------------------------------------------------------

def simulate_cluster(code, scenario: Sequence[dict], seed: int = 0) -> dict:
    """Replay fail/repair events on one stored stripe and account for traffic.

    Each ``{"event": "fail", "node": k}`` marks a node failed.  Each
    ``{"event": "repair"}`` repairs every failed node, cheapest route first:

    1. a globally regenerating code with exactly ``r`` failures per group plus
       one more: global MSR repair of the extra node;
    2. a lone failure in a group with at least ``d`` survivors: local MSR repair;
    3. a group with at most ``r`` failures: local erasure decoding from ``n - r`` nodes;
    4. what remains, if admissible: global decoding from all surviving nodes.

    Inadmissible patterns are recorded as data loss, not raised.
    """
    rng = np.random.default_rng(seed)
    truth = code.encode(code.random_message(rng))
    stored = truth.copy()
    failed: set = set()
    log = []
    traffic = 0
    data_loss = []
    unit = code.ell
    for idx, ev in enumerate(scenario):
        kind = ev.get("event")
        if kind == "fail":
            node = int(ev["node"])
            if not 0 <= node < code.length:
                raise InvalidParametersError(f"event {idx}: node {node} does not exist")
            failed.add(node)
            stored.data[:, node] = 0
            log.append({"event": idx, "type": "fail", "node": node})
            continue
        if kind != "repair":
            raise InvalidParametersError(f"event {idx}: unknown event {kind!r}")
        actions = []
        d = getattr(code, "d", None)
        global_msr = hasattr(code, "global_repair") and _single_after_puncture(code, sorted(failed))
        if global_msr:
            pat, node = global_msr
            col, tr = code.global_repair(stored, pat, node)
            stored.data[:, node] = col
            failed.discard(node)
            actions.append({"nodes": [node], "method": "global-msr", "bandwidth": tr.total,
                            "symbol_field": tr.symbol_field})
        for g in range(code.mu):
            lost = sorted(c for c in code.group(g) if c in failed)
            alive = [c for c in code.group(g) if c not in failed]
            if len(lost) == 1 and d is not None and hasattr(code, "local_code") and len(alive) >= d:
                col, tr = repair_local(code, stored, lost[0], alive[:d], d=d)
                stored.data[:, lost[0]] = col
                failed.discard(lost[0])
                actions.append({"group": g, "nodes": lost, "method": "local-msr",
                                "bandwidth": tr.total, "symbol_field": tr.symbol_field})
            elif 0 < len(lost) <= code.r:
                helpers = alive[:code.n - code.r]
                full = _local_decode(code, stored, g, helpers)
                stored.data[:, lost] = full[:, lost]
                failed.difference_update(lost)
                actions.append({"group": g, "nodes": lost, "method": "local-decode",
                                "bandwidth": len(helpers) * unit * _symbol_scale(code),
                                "symbol_field": _symbol_name(code)})
        if failed:
            lost = sorted(failed)
            pattern = ErasurePattern.from_columns(code, lost)
            if pattern.is_pmds_admissible(code):
                lost = sorted(failed)
                survivors = [c for c in range(code.length) if c not in failed]
                try:
                    full = code.decode_erasures(stored, lost)
                    stored.data[:, lost] = full.data[:, lost]
                    failed.clear()
                    actions.append({"nodes": lost, "method": "global-decode",
                                    "bandwidth": len(survivors) * unit * _symbol_scale(code),
                                    "symbol_field": _symbol_name(code)})
                except UnrecoverableError:
                    pass
            if failed:
                data_loss.append(idx)
                actions.append({"nodes": sorted(failed), "method": "data-loss", "bandwidth": 0})
        step = sum(a["bandwidth"] for a in actions)
        traffic += step
        log.append({"event": idx, "type": "repair", "actions": actions, "bandwidth": step,
                    "cumulative": traffic})
    intact = not failed and stored == truth
    return {"events": log, "total_traffic": traffic, "data_loss": data_loss,
            "failed_nodes": sorted(failed), "recovered": intact}


def _symbol_scale(code) -> int:
    """Base-field symbols per stored symbol when repair traffic is counted over a subfield."""
    return getattr(code, "expansion_degree", 1)


def _symbol_name(code) -> str:
    sub = getattr(code, "repair_symbol_field", None)
    return sub if sub is not None else repr(code.field)


def _local_decode(code, stored: ArrayCodeword, g: int, helpers: List[int]) -> np.ndarray:
    cols = code.group(g)
    local = code.local_array_code()
    offset = cols[0]
    sub = ArrayCodeword(local.field, stored.data[:, cols])
    erased = [c - offset for c in cols if c not in helpers]
    out = np.array(stored.data, copy=True)
    out[:, cols] = local.decode_erasures(sub, erased).data
    return out


def _single_after_puncture(code, lost):
    """For a globally regenerating code: ``r`` failures in each group plus one more."""
    counts = [sum(1 for c in lost if code.group_of(c) == g) for g in range(code.mu)]
    if sum(counts) != code.mu * code.r + 1:
        return None
    for g in range(code.mu):
        if counts[g] == code.r + 1 and all(counts[h] == code.r for h in range(code.mu) if h != g):
            in_g = [c for c in lost if code.group_of(c) == g]
            node = in_g[-1]
            pat = tuple(tuple(c for c in lost if code.group_of(c) == h and c != node)
                        for h in range(code.mu))
            return pat, node
    return None
