"""Independent brute-force checks: exhaustive commutator searches over
finite truncated rings, and the explicit rank-2 decomposition over the
quadric coordinate ring.

A finite context F_p[x_1..x_m]/(x_1..x_m)^N has q = p^B elements. Each is
encoded as the mixed-radix integer of its coefficient vector on the
graded-lex basis (constant digit least significant), turning ring
arithmetic into q x q table lookups that numpy applies to whole blocks of
candidate matrices at once.

The pair search enumerates matrices B, C with the last diagonal entries
pinned to zero. That normalization loses nothing: shifting B and C by
scalar matrices changes neither the commutator nor existence, so a
completed scan that finds nothing is a proof for the given ring. Matrices
are ordered entry-row-major with the (1,1) digit most significant, pairs
B-major; a reported witness is the first pair in that order.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .certificates import Certificate, _certificate_matrix, validate_certificate
from .errors import (
    BudgetExceeded,
    InfiniteRing,
    MalformedInput,
    NoSquareRootOfMinusOne,
    ValidationFailed,
)
from .fields import Field
from .matrices import Matrix, commutator
from .polynomials import (
    Poly,
    RingCtx,
    basis_monomials,
    element_decode,
    reduce_by_divisor,
    ring_size,
)

DEFAULT_PAIR_BUDGET = 2**34
CHECKPOINT_PAIRS = 2**20
_TABLE_CAP = 4096


class RingTable:
    """Lookup-table arithmetic for one finite ring context."""

    def __init__(self, ctx: RingCtx):
        if ctx.field.kind != "Fp" or (ctx.truncation is None and ctx.nvars > 0):
            raise InfiniteRing(f"{ctx} is not a finite ring")
        q = ring_size(ctx)
        if q > _TABLE_CAP:
            raise BudgetExceeded(
                f"ring has {q} elements; table search caps at {_TABLE_CAP}",
                required=q)
        self.ctx = ctx
        self.basis = basis_monomials(ctx)
        self.q = q
        p = ctx.field.p
        nb = len(self.basis)

        digits = np.zeros((q, nb), dtype=np.int64)
        tmp = np.arange(q, dtype=np.int64)
        for t in range(nb):
            digits[:, t] = tmp % p
            tmp //= p
        radix = p ** np.arange(nb, dtype=np.int64)

        pos = {mono: t for t, mono in enumerate(self.basis)}
        prod_pos = np.full((nb, nb), -1, dtype=np.int64)
        for a in range(nb):
            for b in range(nb):
                s = tuple(x + y for x, y in zip(self.basis[a], self.basis[b]))
                if ctx.truncation is None or sum(s) < ctx.truncation:
                    prod_pos[a, b] = pos[s]

        add_t = np.empty((q, q), dtype=np.int32)
        mul_t = np.empty((q, q), dtype=np.int32)
        for u in range(q):
            du = digits[u]
            add_t[u] = ((du + digits) % p) @ radix
            acc = np.zeros((q, nb), dtype=np.int64)
            for a in range(nb):
                if du[a] == 0:
                    continue
                for b in range(nb):
                    t = prod_pos[a, b]
                    if t >= 0:
                        acc[:, t] += du[a] * digits[:, b]
            mul_t[u] = (acc % p) @ radix
        neg_t = (((p - digits) % p) @ radix).astype(np.int32)

        self.digits = digits
        self.add_t = add_t
        self.mul_t = mul_t
        self.neg_t = neg_t
        self.sub_t = add_t[:, neg_t]

    def projection(self, max_degree: int) -> np.ndarray:
        """Table dropping all terms of degree >= max_degree from each
        element; linear, so images of equal elements stay equal."""
        keep = np.array([1 if sum(m) < max_degree else 0 for m in self.basis],
                        dtype=np.int64)
        p = self.ctx.field.p
        radix = p ** np.arange(len(self.basis), dtype=np.int64)
        return ((self.digits * keep) @ radix).astype(np.int32)

    def decode(self, idx: int) -> Poly:
        return element_decode(self.ctx, self.basis, int(idx))

    def encode(self, poly: Poly) -> int:
        if poly.ctx != self.ctx:
            raise MalformedInput(f"element context {poly.ctx} differs from {self.ctx}")
        p = self.ctx.field.p
        pos = {mono: t for t, mono in enumerate(self.basis)}
        idx = 0
        for mono, c in poly.terms.items():
            idx += c * p ** pos[mono]
        return idx


def pair_count(ctx: RingCtx, n: int) -> int:
    """Size of the normalized search space: (ring size)^(2(n^2 - 1))."""
    return ring_size(ctx) ** (2 * (n * n - 1))


@dataclass(frozen=True)
class NoWitness:
    """Proof record: the full normalized pair space was scanned."""
    pairs_checked: int
    ring_elements: int
    matrix_size: int
    prime: int


@dataclass(frozen=True)
class FoundWitness:
    """A decomposition [b, c] = target, re-verified exactly."""
    b: Matrix
    c: Matrix
    pair_index: int
    pairs_checked: int


class _Scan:
    """Shared geometry for one scan of the normalized pair space."""

    def __init__(self, table: RingTable, n: int, target: Matrix,
                 filter_maxdeg: int | None):
        self.table = table
        self.n = n
        self.q = table.q
        self.k = n * n - 1
        self.positions = [(i, j) for i in range(n) for j in range(n)
                          if (i, j) != (n - 1, n - 1)]
        self.pos_of = {ij: t for t, ij in enumerate(self.positions)}
        self.ntotal = self.q ** self.k
        self.weights = [self.q ** (self.k - 1 - t) for t in range(self.k)]
        self.target_idx = [[table.encode(target.rows[i][j]) for j in range(n)]
                           for i in range(n)]
        self.proj = None
        if filter_maxdeg is not None and table.ctx.truncation is not None \
                and filter_maxdeg < table.ctx.truncation:
            self.proj = table.projection(filter_maxdeg)
        self.c_chunk = min(self.ntotal, 4096)
        self.b_chunk = min(self.ntotal, max(1, CHECKPOINT_PAIRS // self.ntotal))
        self._c_cache: dict = {}

    def decode_block(self, lo: int, hi: int) -> list[np.ndarray]:
        idx = np.arange(lo, hi, dtype=np.int64)
        return [(idx // w) % self.q for w in self.weights]

    def c_block(self, lo: int, hi: int) -> list[np.ndarray]:
        key = (lo, hi)
        if key not in self._c_cache:
            if len(self._c_cache) > 64:
                self._c_cache.clear()
            self._c_cache[key] = self.decode_block(lo, hi)
        return self._c_cache[key]

    def entry(self, decoded, i: int, j: int, sel=None):
        """Encoded values of matrix entry (i, j) for a decoded block; the
        pinned corner entry is the zero element."""
        if (i, j) == (self.n - 1, self.n - 1):
            return 0
        arr = decoded[self.pos_of[(i, j)]]
        return arr if sel is None else arr[sel]

    def commutator_entry(self, bvals, cvals, i: int, j: int, shape):
        """[B, C]_(i,j) over a block: sum_t B[i,t] C[t,j] - C[i,t] B[t,j].
        Index arrays broadcast, so bvals/cvals may be column/row shaped."""
        mul_t, add_t, sub_t = self.table.mul_t, self.table.add_t, self.table.sub_t
        acc = None
        for t in range(self.n):
            if i == j == t:
                continue  # the diagonal term cancels identically
            term = sub_t[mul_t[bvals(i, t), cvals(t, j)],
                         mul_t[cvals(i, t), bvals(t, j)]]
            acc = term if acc is None else add_t[acc, term]
        if acc is None:
            acc = np.zeros(shape, dtype=np.int32)
        return acc


def _scan_b_range(scan: _Scan, b_lo: int, b_hi: int, stop_on_found: bool,
                  progress: _Progress | None = None, pairs_base: int = 0):
    """Scan pairs with B index in [b_lo, b_hi) against all C.

    Returns (first found (b, c) pair or None, cumulative pairs scanned
    including ``pairs_base``). The scan finishes the b-chunk containing a
    hit, so the reported pair is the first in global enumeration order
    within this range.
    """
    ntotal = scan.ntotal
    t_filter = scan.target_idx[0][0]
    if scan.proj is not None:
        t_filter = int(scan.proj[t_filter])
    found = None
    pairs = pairs_base

    b = b_lo
    while b < b_hi:
        b_end = min(b + scan.b_chunk, b_hi)
        bd = scan.decode_block(b, b_end)
        chunk_hits = []
        for c_lo in range(0, ntotal, scan.c_chunk):
            c_hi = min(c_lo + scan.c_chunk, ntotal)
            cd = scan.c_block(c_lo, c_hi)

            def bgrid(i, j):
                v = scan.entry(bd, i, j)
                return v if isinstance(v, int) else v[:, None]

            def cgrid(i, j):
                v = scan.entry(cd, i, j)
                return v if isinstance(v, int) else v[None, :]

            grid = scan.commutator_entry(bgrid, cgrid, 0, 0,
                                         (b_end - b, c_hi - c_lo))
            if scan.proj is not None:
                grid = scan.proj[grid]
            sb, sc = np.nonzero(grid == t_filter)
            if sb.size:
                hit = _full_check(scan, bd, cd, sb, sc)
                if hit is not None:
                    chunk_hits.append((b + hit[0], c_lo + hit[1]))
        pairs += (b_end - b) * ntotal
        b = b_end
        if chunk_hits:
            found = min(chunk_hits)
            if progress is not None:
                progress.save(b, pairs, found=found)
            if stop_on_found:
                break
        elif progress is not None:
            progress.save(b, pairs)
    return found, pairs


def _full_check(scan: _Scan, bd, cd, sb, sc):
    """Exact check of every commutator entry on filter survivors; returns
    the first surviving local (b, c) or None."""
    n = scan.n
    skip_first = scan.proj is None  # the filter already was the exact (0,0) check
    for i in range(n):
        for j in range(n):
            if skip_first and i == 0 and j == 0:
                continue
            bvals = lambda a, t: scan.entry(bd, a, t, sb)
            cvals = lambda a, t: scan.entry(cd, a, t, sc)
            vals = scan.commutator_entry(bvals, cvals, i, j, sb.shape)
            keep = vals == scan.target_idx[i][j]
            if not keep.any():
                return None
            if not keep.all():
                sb, sc = sb[keep], sc[keep]
    return int(sb[0]), int(sc[0])


class _Progress:
    """Resumable checkpoint file, written after every scanned b-chunk
    (one chunk covers about 2^20 pairs)."""

    def __init__(self, path: str, key: str):
        self.path = path
        self.key = key
        self.next_b = 0
        self.pairs = 0
        self.found = None
        self.done = False
        if os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    state = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise MalformedInput(f"bad progress file {path}: {exc}") from None
            if state.get("key") != key:
                raise MalformedInput(
                    f"progress file {path} belongs to a different search")
            self.next_b = state["next_b"]
            self.pairs = state["pairs"]
            self.found = tuple(state["found"]) if state.get("found") else None
            self.done = state.get("done", False)

    def save(self, next_b: int, pairs: int, found=None, done: bool = False):
        self.next_b = next_b
        self.pairs = pairs
        if found is not None:
            self.found = tuple(found)
        self.done = done
        state = {
            "key": self.key,
            "next_b": self.next_b,
            "pairs": self.pairs,
            "found": list(self.found) if self.found else None,
            "done": done,
        }
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(state, fh)
        os.replace(tmp, self.path)


def _search_key(ctx: RingCtx, n: int, target_idx) -> str:
    blob = json.dumps(
        {"p": ctx.field.p, "nvars": ctx.nvars, "N": ctx.truncation,
         "n": n, "target": target_idx},
        sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _worker_scan(payload):
    field = Field.prime(payload["p"])
    ctx = RingCtx(field, payload["nvars"], payload["N"])
    table = RingTable(ctx)
    target = Matrix.from_json(payload["target"], ctx)
    scan = _Scan(table, payload["n"], target, payload["filter_maxdeg"])
    found, pairs = _scan_b_range(scan, payload["b_lo"], payload["b_hi"],
                                 stop_on_found=False)
    return found, pairs


def _run_search(ctx: RingCtx, n: int, target: Matrix, *, budget: int,
                workers: int, progress_path: str | None,
                filter_maxdeg: int | None):
    """Scan the whole normalized pair space; returns (found, pairs)."""
    total = pair_count(ctx, n)
    if total > budget:
        raise BudgetExceeded(
            f"search needs {total} pairs, budget is {budget}", required=total)
    table = RingTable(ctx)
    scan = _Scan(table, n, target, filter_maxdeg)

    if workers > 1:
        if progress_path is not None:
            raise ValueError("checkpointing is only supported with workers=1")
        ranges = []
        step = max(scan.b_chunk, -(-scan.ntotal // workers))
        step = -(-step // scan.b_chunk) * scan.b_chunk  # align to chunks
        lo = 0
        while lo < scan.ntotal:
            ranges.append((lo, min(lo + step, scan.ntotal)))
            lo += step
        payload_base = {
            "p": ctx.field.p, "nvars": ctx.nvars, "N": ctx.truncation,
            "n": n, "target": target.to_json(), "filter_maxdeg": filter_maxdeg,
        }
        results = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_worker_scan, {**payload_base, "b_lo": lo, "b_hi": hi})
                for lo, hi in ranges
            ]
            for fut in futures:
                results.append(fut.result())
        pairs = sum(r[1] for r in results)
        hits = [r[0] for r in results if r[0] is not None]
        return (min(hits) if hits else None), pairs

    progress = None
    start_b = 0
    base_pairs = 0
    if progress_path is not None:
        key = _search_key(ctx, n, scan.target_idx)
        progress = _Progress(progress_path, key)
        if progress.done:
            return progress.found, progress.pairs
        start_b = progress.next_b
        base_pairs = progress.pairs
        if progress.found is not None:
            return progress.found, progress.pairs

    found, pairs = _scan_b_range(scan, start_b, scan.ntotal,
                                 stop_on_found=True, progress=progress,
                                 pairs_base=base_pairs)
    if progress is not None:
        progress.save(scan.ntotal if found is None else progress.next_b,
                      pairs, found=found, done=True)
    return found, pairs


def _decode_pair(table: RingTable, scan: _Scan, pair):
    b_idx, c_idx = pair
    n = scan.n

    def decode_matrix(idx):
        rows = [[table.ctx.zero() for _ in range(n)] for _ in range(n)]
        for t, (i, j) in enumerate(scan.positions):
            digit = (idx // scan.weights[t]) % scan.q
            rows[i][j] = table.decode(digit)
        return Matrix(table.ctx, rows)

    return decode_matrix(b_idx), decode_matrix(c_idx)


def exhaustive_commutator_search(a: Matrix, budget: int = DEFAULT_PAIR_BUDGET,
                                 workers: int = 1,
                                 progress_path: str | None = None):
    """First (B, C) in enumeration order with [B, C] = a, or None after a
    complete scan. Searches the normalized space (last diagonal entries
    zero), which preserves existence exactly.
    """
    ctx = a.ctx
    ring_size(ctx)  # raises InfiniteRing early
    found, _pairs = _run_search(ctx, a.n, a, budget=budget, workers=workers,
                                progress_path=progress_path, filter_maxdeg=None)
    if found is None:
        return None
    table = RingTable(ctx)
    scan = _Scan(table, a.n, a, None)
    b, c = _decode_pair(table, scan, found)
    assert commutator(b, c) == a
    return b, c


def exhaustive_noncommutator_check(cert: Certificate, p: int,
                                   budget: int = DEFAULT_PAIR_BUDGET,
                                   workers: int = 1,
                                   progress_path: str | None = None):
    """Check a certificate the hard way over F_p: scan every normalized
    pair in F_p[x_1..x_m]/(x_1..x_m)^(3d+2) for a decomposition of the
    certificate matrix.

    NoWitness is a proof that no decomposition exists in that quotient,
    which is what the certificate claims there; FoundWitness means the
    certificate is falsified for this p, and carries the re-verified pair.
    """
    report = validate_certificate(cert)
    if not report.ok:
        raise ValidationFailed(
            "; ".join(f"{c.name}: {c.detail}" for c in report.failures()))
    field = Field.prime(p)
    trunc = 3 * cert.d + 2
    ctx = RingCtx(field, cert.m, trunc)
    target = _certificate_matrix(ctx, cert.n, cert.points)
    found, pairs = _run_search(
        ctx, cert.n, target, budget=budget, workers=workers,
        progress_path=progress_path, filter_maxdeg=2 * cert.d + 2)
    if found is None:
        return NoWitness(pairs_checked=pairs, ring_elements=ring_size(ctx),
                         matrix_size=cert.n, prime=p)
    table = RingTable(ctx)
    scan = _Scan(table, cert.n, target, None)
    b, c = _decode_pair(table, scan, found)
    assert commutator(b, c) == target
    ntotal = scan.ntotal
    return FoundWitness(b=b, c=c, pair_index=found[0] * ntotal + found[1],
                        pairs_checked=pairs)


def quadric_decomposition_check(p: int, i: int | None = None) -> bool:
    """Verify the explicit 2x2 decomposition over F_p[x,y,z] modulo the
    quadric x^2 + y^2 + z^2 - 1, for a prime p where -1 is a square.

    ``i`` may pick the square root of -1 explicitly; by default the
    smallest one is used. Reduction is by the single quadric divisor in
    graded-lex order.
    """
    field = Field.prime(p)
    if i is None:
        i = next((v for v in range(1, p) if v * v % p == p - 1), None)
        if i is None:
            raise NoSquareRootOfMinusOne(f"-1 is not a square modulo {p}")
    else:
        i = i % p
        if i * i % p != p - 1:
            raise NoSquareRootOfMinusOne(f"{i}^2 != -1 modulo {p}")

    ctx = RingCtx(field, 3, None)
    x, y, z = ctx.gens()
    ii = ctx.constant(i)
    a = Matrix.from_rows(ctx, [[x, y], [z, -x]])
    b = Matrix.from_rows(ctx, [
        [ctx.one() + ii * x * (ii * x - y), -(x * z)],
        [x * (ii * x - y), ctx.zero()],
    ])
    c = Matrix.from_rows(ctx, [
        [-(ii * z), ii * x + y],
        [-z, ctx.zero()],
    ])
    quadric = x * x + y * y + z * z - ctx.one()
    diff = commutator(b, c) - a
    return all(
        reduce_by_divisor(diff.rows[r][s], quadric).is_zero()
        for r in range(2) for s in range(2)
    )
