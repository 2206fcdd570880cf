"""Sparse semiring matrix multiplication on the clique simulator.

Pipeline: split-pair selection from nonzero counts, sparsity-balancing
row/column permutations, then the balanced multiplication protocol whose
communication phases are

* coldist: lhs rows redistributed so node v holds lhs column v;
* stats: per-column/per-row nonzero counts broadcast;
* subseq: columns/rows cut into bounded fragments ("subsequences"), at
  most two per matrix landing on any node;
* counts: fragment owners tell every node how many entries fall in its
  row/column band, giving page weights;
* request/respond: each node pulls exactly the band-restricted column
  and row fragments for its assigned pages;
* reduce: locally computed page products are summed into result rows.

All coordination data flows through broadcasts, so every node derives
identical partitions, subsequence tables, and page assignments from the
same words; the driver computes each such structure once and shares it,
which is memoization of replicated local computation, not extra
communication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import CliqueEngine, PhaseRecord, SimulationError
from .partition import balanced_assignment
from .semiring import Semiring
from .sparse import DimensionError, SparseMatrix, Permutation

# message tags
(_T_DIST, _NZ, _S_BAL, _T_BAL, _T_ROWS, _S_COL, _NZ2, _SUB_S, _SUB_T,
 _CNT_S, _CNT_T, _REQ_S, _REQ_T, _ENT_S, _ENT_T, _RED, _OUT) = range(17)


class BalanceError(ValueError):
    """Operands are not sparsity-balanced for the requested split."""


# -- split-pair selection ---------------------------------------------------

@dataclass(frozen=True)
class SplitPair:
    a: int
    b: int


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def n_split_pairs(n: int) -> list[tuple[int, int]]:
    """All (a, b) with a | n, b | n, ab | n, ascending lexicographic.

    ab must divide n, not merely stay below it: the nodes form an a-by-b
    grid of groups with exactly n/(ab) members each.
    """
    divs = divisors(n)
    return [(a, b) for a in divs for b in divs if n % (a * b) == 0]


def split_cost(nzS: int, nzT: int, n: int, a: int, b: int) -> Fraction:
    """Exact value of the round-cost surrogate nzS*b/n^2 + nzT*a/n^2 + n/(ab)."""
    return Fraction(nzS * b + nzT * a, n * n) + Fraction(n, a * b)


def continuous_split(nzS: int, nzT: int, n: int) -> tuple[float, float] | None:
    """Unconstrained real-valued minimizer, recorded for comparison only."""
    if nzS == 0 or nzT == 0:
        return None
    return (
        n * nzS ** (1 / 3) / nzT ** (2 / 3),
        n * nzT ** (1 / 3) / nzS ** (2 / 3),
    )


def choose_split(nzS: int, nzT: int, n: int) -> SplitPair:
    """Argmin of split_cost over all valid divisor pairs, ties to smallest (a, b)."""
    if n < 1:
        raise ValueError("n must be positive")
    best = None
    best_cost = None
    for a, b in n_split_pairs(n):
        cost = split_cost(nzS, nzT, n, a, b)
        if best_cost is None or cost < best_cost:
            best, best_cost = (a, b), cost
    return SplitPair(*best)


# -- node aliasing ----------------------------------------------------------

def group_of(v: int, a: int, b: int, n: int) -> tuple[int, int, int]:
    """Triple alias v -> (i, j, k): row-major over the a*b grid, n/(ab) per cell."""
    g = n // (a * b)
    blk, k = divmod(v, g)
    i, j = divmod(blk, b)
    return i, j, k


def node_of(i: int, j: int, k: int, a: int, b: int, n: int) -> int:
    g = n // (a * b)
    return (i * b + j) * g + k


# -- balancing permutations -------------------------------------------------

@dataclass
class BalancedPair:
    S_prime: SparseMatrix
    T_prime: SparseMatrix
    sigma: Permutation
    tau: Permutation
    split: SplitPair


def _balance_permutations(row_nz: list[int], col_nz: list[int], a: int, b: int):
    """Row/col permutations grouping lines into weight-balanced bands.

    Band i of the permuted lhs collects the i-th group of the balanced
    assignment of row-nonzero counts (k=a, bound x=n); likewise for rhs
    columns with k=b.  Within a band, original line order is preserved.
    """
    n = len(row_nz)
    groups_s = balanced_assignment(row_nz, a, n)
    groups_t = balanced_assignment(col_nz, b, n)
    sigma = [0] * n
    h = n // a
    for i, grp in enumerate(groups_s):
        for off, r in enumerate(grp):
            sigma[r] = i * h + off
    tau = [0] * n
    w = n // b
    for j, grp in enumerate(groups_t):
        for off, c in enumerate(grp):
            tau[c] = j * w + off
    return sigma, tau


def balance_inputs(S: SparseMatrix, T: SparseMatrix, split: SplitPair) -> BalancedPair:
    """Permute S rows and T columns so both band conditions hold."""
    sigma_l, tau_l = _balance_permutations(S.nz_by_row(), T.nz_by_col(), split.a, split.b)
    sigma = Permutation(sigma_l)
    tau = Permutation(tau_l)
    return BalancedPair(S.permute_rows(sigma), T.permute_cols(tau), sigma, tau, split)


def check_balanced(Sp: SparseMatrix, Tp: SparseMatrix, a: int, b: int) -> list[str]:
    """Violations of the band conditions; empty when (Sp, Tp) is balanced."""
    n = Sp.n
    problems = []
    nzS, nzT = Sp.nz(), Tp.nz()
    for i, cnt in enumerate(Sp.band_row_counts(a)):
        if cnt * a > nzS + n * a:  # cnt <= nzS/a + n in exact arithmetic
            problems.append(f"row band {i}: {cnt} > nz/a + n")
    for j, cnt in enumerate(Tp.band_col_counts(b)):
        if cnt * b > nzT + n * b:
            problems.append(f"col band {j}: {cnt} > nz/b + n")
    return problems


# -- subsequences -----------------------------------------------------------

@dataclass
class SubseqSide:
    """Global table of one matrix side's column (or row) fragments.

    Every node derives this identical table from the broadcast nonzero
    counts; ids are dense in enumeration order (line ascending, fragment
    position ascending).  Trailing fragments of a line may be empty: the
    agreed count is ceil(line_nz / avg), not the occupied count.
    """

    avg: Fraction
    block: int                    # capacity floor(avg) + 1; 0 when empty
    counts: list[int]             # fragments per line
    origin: list[int]             # fragment id -> line
    owner: list[int]              # fragment id -> owning node
    owned: list[list[int]]        # node -> fragment ids it owns
    by_line: list[list[int]]      # line -> fragment ids
    line_start: list[int]         # fragment id of a line's first fragment

    def slice_bounds(self, q: int) -> tuple[int, int]:
        p = q - self.line_start[self.origin[q]]
        return p * self.block, (p + 1) * self.block


def build_subsequences(nz_per_line: list[int], n: int) -> SubseqSide:
    """Cut each line into ceil(nz/avg) fragments; owners dealt two per node."""
    total = sum(nz_per_line)
    avg = Fraction(total, n)
    if total == 0:
        return SubseqSide(avg, 0, [0] * n, [], [], [[] for _ in range(n)],
                          [[] for _ in range(n)], [0] * n)
    block = math.floor(avg) + 1
    counts = [math.ceil(Fraction(t) / avg) if t else 0 for t in nz_per_line]
    origin: list[int] = []
    by_line: list[list[int]] = []
    line_start = []
    for line, cnt in enumerate(counts):
        line_start.append(len(origin))
        by_line.append(list(range(len(origin), len(origin) + cnt)))
        origin.extend([line] * cnt)
    total_frags = len(origin)
    assert total_frags <= 2 * n
    owner = [q // 2 for q in range(total_frags)]
    owned: list[list[int]] = [[] for _ in range(n)]
    for q, u in enumerate(owner):
        owned[u].append(q)
    return SubseqSide(avg, block, counts, origin, owner, owned, by_line, line_start)


@dataclass
class SubseqOwnership:
    s: SubseqSide
    t: SubseqSide


# -- page assignment --------------------------------------------------------

@dataclass
class PageAssignment:
    """Pages (rank-1 slices) of one sub-matrix group, striped over its nodes."""

    weights: list[int]            # page ell -> fragment-entry cost
    parts: list[list[int]]        # k -> sorted page list, |part| = ab

    def part_sum(self, k: int) -> int:
        return sum(self.weights[ell] for ell in self.parts[k])


def build_page_assignment(weights: list[int], n: int, a: int, b: int) -> PageAssignment:
    """Weight-balanced striding of the n pages over the n/(ab) group nodes."""
    k = n // (a * b)
    groups = balanced_assignment(weights, k, 2 * n)
    return PageAssignment(list(weights), groups)


# -- protocol helpers -------------------------------------------------------

def _phase(engine: CliqueEngine, label: str, ingest, emit) -> int:
    def handler(v, state, inbox):
        if ingest is not None:
            ingest(v, state, inbox)
        return emit(v, state) if emit is not None else []

    return engine.run_phase(label, handler)


def _broadcast_collect(engine: CliqueEngine, label: str, ingest, word_fn) -> list[tuple]:
    """Broadcast one word per node; returns the common vector of all words."""
    n = engine.n
    gathered: list[tuple] = [None] * n  # type: ignore[list-item]

    def handler(v, state, inbox):
        if ingest is not None:
            ingest(v, state, inbox)
        word = word_fn(v, state)
        gathered[v] = word
        return [(u,) + word for u in range(n) if u != v]

    engine.run_phase(label, handler)
    return gathered


def _ingest_tagged(state, inbox, spec: dict[int, str]) -> None:
    """File inbox words into per-tag state lists of (i1, i2, value)."""
    for key in spec.values():
        state.setdefault(key, [])
    for src, tag, i1, i2, val in inbox:
        key = spec.get(tag)
        if key is not None:
            state[key].append((i1, i2, val))


# -- ExchangeInfo: the three routing sub-phases -----------------------------

def compute_sending(engine: CliqueEngine, prefix: str = "sbmm.",
                    first_ingest=None) -> SubseqOwnership:
    """Column redistribution, count broadcast, and fragment ownership.

    Expects node v to hold 'Sp_row' and 'Tp_row' (sorted (index, value)
    lists).  Afterwards node v holds its owned fragments in 'sub_s' and
    'sub_t', and the returned tables are common knowledge.
    """
    n = engine.n

    def emit_cols(v, state):
        return [(c, _S_COL, v, 0, val) for c, val in state["Sp_row"]]

    _phase(engine, prefix + "coldist", first_ingest, emit_cols)

    def ingest_cols(v, state, inbox):
        state["Sp_col"] = [(i1, val) for _, tag, i1, _, val in inbox if tag == _S_COL]

    words = _broadcast_collect(
        engine, prefix + "stats", ingest_cols,
        lambda v, state: (_NZ2, len(state["Sp_col"]), len(state["Tp_row"]), 0),
    )
    side_s = build_subsequences([w[1] for w in words], n)
    side_t = build_subsequences([w[2] for w in words], n)
    ownership = SubseqOwnership(side_s, side_t)

    def emit_fragments(v, state):
        out = []
        for side, key, tag in ((side_s, "Sp_col", _SUB_S), (side_t, "Tp_row", _SUB_T)):
            entries = state[key]
            for q in side.by_line[v]:
                lo, hi = side.slice_bounds(q)
                for pos, val in entries[lo:hi]:
                    out.append((side.owner[q], tag, q, pos, val))
        return out

    _phase(engine, prefix + "subseq", None, emit_fragments)
    return ownership


def compute_receiving(engine: CliqueEngine, ownership: SubseqOwnership,
                      a: int, b: int, prefix: str = "sbmm.") -> dict[tuple[int, int], PageAssignment]:
    """Band-count exchange and per-group page assignment.

    Each fragment owner tells every node how many of its entries fall in
    that node's row band (lhs) or column band (rhs).  Every node of a
    group then derives the same weight-balanced page striping; the
    returned dict holds one assignment per (i, j) group.
    """
    n = engine.n
    h_s = n // a
    h_t = n // b
    side_s, side_t = ownership.s, ownership.t

    def ingest_frags(v, state, inbox):
        sub_s = {q: [] for q in side_s.owned[v]}
        sub_t = {q: [] for q in side_t.owned[v]}
        for _, tag, q, pos, val in inbox:
            if tag == _SUB_S:
                sub_s[q].append((pos, val))
            elif tag == _SUB_T:
                sub_t[q].append((pos, val))
        state["sub_s"] = sub_s
        state["sub_t"] = sub_t

    def emit_counts(v, state):
        # Bucket each owned fragment's entries once per band, then answer
        # every node according to its group.
        s_bands = {q: [0] * a for q in state["sub_s"]}
        for q, entries in state["sub_s"].items():
            buckets = s_bands[q]
            for pos, _ in entries:
                buckets[pos // h_s] += 1
        t_bands = {q: [0] * b for q in state["sub_t"]}
        for q, entries in state["sub_t"].items():
            buckets = t_bands[q]
            for pos, _ in entries:
                buckets[pos // h_t] += 1
        out = []
        for u in range(n):
            i_u, j_u, _ = group_of(u, a, b, n)
            for q in side_s.owned[v]:
                out.append((u, _CNT_S, q, s_bands[q][i_u], 0))
            for q in side_t.owned[v]:
                out.append((u, _CNT_T, q, t_bands[q][j_u], 0))
        return out

    _phase(engine, prefix + "counts", ingest_frags, emit_counts)

    # Page weights are derived inside each node's next handler; the dict
    # below memoizes the identical per-group computation for the driver
    # and for tests.
    pages: dict[tuple[int, int], PageAssignment] = {}
    for v in range(n):
        i, j, _ = group_of(v, a, b, n)
        if (i, j) in pages:
            continue
        weights = [0] * n
        for _, tag, q, cnt, _val in engine.inboxes[v]:
            if tag == _CNT_S:
                weights[side_s.origin[q]] += cnt
            elif tag == _CNT_T:
                weights[side_t.origin[q]] += cnt
        # Own counts travel as free self-messages and are already in the
        # inbox, so the weight vector is complete.
        pages[(i, j)] = build_page_assignment(weights, n, a, b)
    return pages


def resolve_routing(engine: CliqueEngine, ownership: SubseqOwnership,
                    pages: dict[tuple[int, int], PageAssignment],
                    a: int, b: int, prefix: str = "sbmm.") -> None:
    """Fragment requests and band-restricted responses.

    After this, node v holds 's_frags' (column entries per page, rows in
    its band) and 't_frags' (row entries per page, columns in its band).
    """
    n = engine.n
    h_s = n // a
    h_t = n // b
    side_s, side_t = ownership.s, ownership.t

    def emit_requests(v, state):
        i, j, k = group_of(v, a, b, n)
        my_pages = pages[(i, j)].parts[k]
        state["my_pages"] = my_pages
        out = []
        for side, tag in ((side_s, _REQ_S), (side_t, _REQ_T)):
            asked = set()
            for ell in my_pages:
                for q in side.by_line[ell]:
                    u = side.owner[q]
                    if (u, ell) not in asked:
                        asked.add((u, ell))
                        out.append((u, tag, ell, 0, 0))
        return out

    def ingest_counts(v, state, inbox):
        pass  # counts were consumed by the driver-side page derivation

    _phase(engine, prefix + "request", ingest_counts, emit_requests)

    def emit_responses(v, state):
        sub_s, sub_t = state["sub_s"], state["sub_t"]
        owned_s_lines = {side_s.origin[q] for q in sub_s}
        owned_t_lines = {side_t.origin[q] for q in sub_t}
        out = []
        for src, tag, ell, _, _val in state.pop("_reqs"):
            i_d, j_d, _ = group_of(src, a, b, n)
            if tag == _REQ_S:
                if ell not in owned_s_lines:
                    raise SimulationError(
                        f"node {v} asked for lhs column {ell} it does not own")
                for q in side_s.by_line[ell]:
                    if side_s.owner[q] != v:
                        continue
                    for pos, val in sub_s[q]:
                        if pos // h_s == i_d:
                            out.append((src, _ENT_S, pos, ell, val))
            else:
                if ell not in owned_t_lines:
                    raise SimulationError(
                        f"node {v} asked for rhs row {ell} it does not own")
                for q in side_t.by_line[ell]:
                    if side_t.owner[q] != v:
                        continue
                    for pos, val in sub_t[q]:
                        if pos // h_t == j_d:
                            out.append((src, _ENT_T, ell, pos, val))
        return out

    def ingest_requests(v, state, inbox):
        state["_reqs"] = [(src, tag, i1, i2, val) for src, tag, i1, i2, val in inbox]

    _phase(engine, prefix + "respond", ingest_requests, emit_responses)


def _reduce_phase(engine: CliqueEngine, semiring: Semiring,
                  a: int, b: int, prefix: str = "sbmm.") -> None:
    """Local page products, then partial results routed to row owners."""
    n = engine.n
    add, mul, omitted = semiring.add, semiring.mul, semiring.omitted

    def ingest_frags(v, state, inbox):
        s_frags: dict[int, list] = {}
        t_frags: dict[int, list] = {}
        for _, tag, i1, i2, val in inbox:
            if tag == _ENT_S:
                s_frags.setdefault(i2, []).append((i1, val))
            elif tag == _ENT_T:
                t_frags.setdefault(i1, []).append((i2, val))
        state["s_frags"] = s_frags
        state["t_frags"] = t_frags

    def emit_partials(v, state):
        acc: dict[tuple[int, int], object] = {}
        s_frags, t_frags = state["s_frags"], state["t_frags"]
        for ell in state["my_pages"]:
            for r, sval in s_frags.get(ell, ()):
                for c, tval in t_frags.get(ell, ()):
                    p = mul(sval, tval)
                    key = (r, c)
                    prev = acc.get(key)
                    acc[key] = p if prev is None else add(prev, p)
        return [(r, _RED, c, 0, val)
                for (r, c), val in sorted(acc.items()) if val != omitted]

    _phase(engine, prefix + "reduce", ingest_frags, emit_partials)


def _run_sbmm(engine: CliqueEngine, semiring: Semiring, a: int, b: int,
              prefix: str = "sbmm.", first_ingest=None):
    """Full balanced-multiplication protocol; leaves partial-row words in inboxes."""
    ownership = compute_sending(engine, prefix, first_ingest)
    pages = compute_receiving(engine, ownership, a, b, prefix)
    resolve_routing(engine, ownership, pages, a, b, prefix)
    _reduce_phase(engine, semiring, a, b, prefix)
    return ownership, pages


def _fold_partials(semiring: Semiring, inbox) -> dict[int, object]:
    add, omitted = semiring.add, semiring.omitted
    row: dict[int, object] = {}
    for _, tag, c, _i2, val in inbox:
        if tag != _RED:
            continue
        prev = row.get(c)
        row[c] = val if prev is None else add(prev, val)
    return {c: val for c, val in row.items() if val != omitted}


# -- public entry points ----------------------------------------------------

@dataclass
class SmmResult:
    product: SparseMatrix
    split: SplitPair
    sigma: Permutation | None
    tau: Permutation | None
    ownership: SubseqOwnership
    pages: dict[tuple[int, int], PageAssignment]
    records: list[PhaseRecord] = field(default_factory=list)

    def rounds(self) -> int:
        return sum(r.rounds for r in self.records)


def _validate_operands(S: SparseMatrix, T: SparseMatrix) -> None:
    if S.n != T.n:
        raise DimensionError(f"operand sizes differ: {S.n} vs {T.n}")
    if S.semiring.name != T.semiring.name:
        raise DimensionError(
            f"operand semirings differ: {S.semiring.name} vs {T.semiring.name}")


def smm(S: SparseMatrix, T: SparseMatrix, engine: CliqueEngine | None = None,
        lenzen_constant: int = 1) -> SmmResult:
    """Product S*T via the full pipeline; result rows gathered from nodes.

    With an engine supplied, phases append to its ledger (used by the
    shortest-path driver, which runs many multiplications in sequence).
    """
    _validate_operands(S, T)
    n = S.n
    sr = S.semiring
    if engine is None:
        engine = CliqueEngine(n, lenzen_constant)
    elif engine.n != n:
        raise DimensionError("engine size does not match operands")
    mark = engine.ledger.mark()

    for v in range(n):
        st = engine.states[v]
        st["S_row"] = S.rows[v]
        st["T_row"] = T.rows[v]

    # lhs rows stay put; rhs rows are scattered so node v holds rhs column v.
    def emit_t_cols(v, state):
        return [(c, _T_DIST, v, 0, val) for c, val in state["T_row"]]

    _phase(engine, "distribute", None, emit_t_cols)

    def ingest_t_col(v, state, inbox):
        state["T_col"] = [(i1, val) for _, tag, i1, _, val in inbox if tag == _T_DIST]

    words = _broadcast_collect(
        engine, "stats", ingest_t_col,
        lambda v, state: (_NZ, len(state["S_row"]), len(state["T_col"]), 0),
    )
    row_nz = [w[1] for w in words]
    col_nz = [w[2] for w in words]
    nzS, nzT = sum(row_nz), sum(col_nz)
    split = choose_split(nzS, nzT, n)
    a, b = split.a, split.b
    sigma_l, tau_l = _balance_permutations(row_nz, col_nz, a, b)
    sigma = Permutation(sigma_l)
    tau = Permutation(tau_l)

    def emit_balance(v, state):
        out = [(sigma_l[v], _S_BAL, c, 0, val) for c, val in state["S_row"]]
        out.extend((tau_l[v], _T_BAL, r, 0, val) for r, val in state["T_col"])
        return out

    _phase(engine, "balance", None, emit_balance)

    # Consistency pass: the permuted rhs columns are re-scattered so node v
    # also holds row v of the permuted rhs.
    def emit_trows(v, state):
        return [(r, _T_ROWS, v, 0, val) for r, val in state["Tp_col"]]

    def ingest_balance(v, state, inbox):
        state["Sp_row"] = [(i1, val) for _, tag, i1, _, val in inbox if tag == _S_BAL]
        state["Tp_col"] = [(i1, val) for _, tag, i1, _, val in inbox if tag == _T_BAL]

    _phase(engine, "balance.trows", ingest_balance, emit_trows)

    def ingest_trows(v, state, inbox):
        state["Tp_row"] = sorted(
            (i1, val) for _, tag, i1, _, val in inbox if tag == _T_ROWS)

    ownership, pages = _run_sbmm(engine, sr, a, b, "sbmm.", ingest_trows)

    # Node v folds the partials of permuted row v, then ships each entry to
    # its final owner with unpermuted coordinates.
    sigma_inv = sigma.inverse
    tau_inv = tau.inverse

    def ingest_partials(v, state, inbox):
        state["Pp_row"] = _fold_partials(sr, inbox)

    def emit_unpermuted(v, state):
        dst = sigma_inv[v]
        return [(dst, _OUT, tau_inv[c], 0, val)
                for c, val in sorted(state["Pp_row"].items())]

    _phase(engine, "unpermute", ingest_partials, emit_unpermuted)

    rows = []
    for box in engine.drain_inboxes():
        rows.append(sorted((i1, val) for _, tag, i1, _, val in box if tag == _OUT))
    product = SparseMatrix(n, sr, rows)
    return SmmResult(product, split, sigma, tau, ownership, pages,
                     engine.ledger.since(mark))


def sbmm(Sp: SparseMatrix, Tp: SparseMatrix, a: int, b: int,
         engine: CliqueEngine | None = None, lenzen_constant: int = 1) -> SmmResult:
    """Balanced multiplication alone; operands must already satisfy both band conditions."""
    _validate_operands(Sp, Tp)
    n = Sp.n
    if a < 1 or b < 1 or n % a or n % b or n % (a * b):
        raise ValueError(f"({a}, {b}) is not a valid split of {n}")
    problems = check_balanced(Sp, Tp, a, b)
    if problems:
        raise BalanceError("; ".join(problems))
    sr = Sp.semiring
    if engine is None:
        engine = CliqueEngine(n, lenzen_constant)
    mark = engine.ledger.mark()
    for v in range(n):
        engine.states[v]["Sp_row"] = Sp.rows[v]
        engine.states[v]["Tp_row"] = Tp.rows[v]
    ownership, pages = _run_sbmm(engine, sr, a, b, "sbmm.")
    rows = [sorted(_fold_partials(sr, box).items())
            for box in engine.drain_inboxes()]
    product = SparseMatrix(n, sr, rows)
    return SmmResult(product, SplitPair(a, b), None, None, ownership, pages,
                     engine.ledger.since(mark))
