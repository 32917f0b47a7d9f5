"""Deterministic finite automata over indexed alphabets.

A :class:`Dfa` is total: every state has a transition on every letter, and
one designated sink state (non-accepting, absorbing) soaks up rejected
inputs. Every operation that builds a new language returns the canonical
minimal automaton, whose states are numbered in breadth-first order from
the start state by letter index; an unreachable sink, when the language
needs none, is appended last. Two languages are equal exactly when their
canonical automata have identical tables.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import CapacityError, PreconditionError

MAX_STATES = 1_000_000


class Dfa:
    __slots__ = ("n_letters", "table", "start", "accept", "sink", "symbols")

    def __init__(self, n_letters: int, table: Sequence[Sequence[int]], start: int,
                 accept: Iterable[int], sink: Optional[int] = None,
                 symbols: Optional[Sequence[str]] = None):
        table = [tuple(row) for row in table]
        accept = frozenset(accept)
        if sink is None:
            sink = _find_sink(table, accept)
        if sink is None:
            sink = len(table)
            table.append((sink,) * n_letters)
        self.n_letters = n_letters
        self.table = tuple(table)
        self.start = start
        self.accept = accept
        self.sink = sink
        self.symbols = tuple(symbols) if symbols is not None else None
        self._validate()

    def _validate(self):
        n = len(self.table)
        if not 0 <= self.start < n:
            raise PreconditionError(f"start state {self.start} out of range")
        for q, row in enumerate(self.table):
            if len(row) != self.n_letters:
                raise PreconditionError(f"state {q} has {len(row)} transitions, expected {self.n_letters}")
            for r in row:
                if not 0 <= r < n:
                    raise PreconditionError(f"transition {q}->{r} out of range")
        if self.sink in self.accept or any(r != self.sink for r in self.table[self.sink]):
            raise PreconditionError("sink must be non-accepting and absorbing")
        if self.symbols is not None and len(self.symbols) != self.n_letters:
            raise PreconditionError("symbol list does not match alphabet size")

    # -- basic queries ---------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.table)

    def run(self, word: Iterable[int], state: Optional[int] = None) -> int:
        q = self.start if state is None else state
        table = self.table
        for x in word:
            q = table[q][x]
        return q

    def accepts(self, word: Iterable[int]) -> bool:
        return self.run(word) in self.accept

    __contains__ = accepts

    def reachable(self) -> List[int]:
        seen = {self.start}
        order = [self.start]
        i = 0
        while i < len(order):
            for r in self.table[order[i]]:
                if r not in seen:
                    seen.add(r)
                    order.append(r)
            i += 1
        return order

    def live_states(self) -> FrozenSet[int]:
        """States that are reachable and can still reach an accept state."""
        reach = set(self.reachable())
        rev: Dict[int, set] = {q: set() for q in range(self.n_states)}
        for q, row in enumerate(self.table):
            for r in row:
                rev[r].add(q)
        good = set(self.accept & reach)
        stack = list(good)
        while stack:
            q = stack.pop()
            for p in rev[q]:
                if p not in good and p in reach:
                    good.add(p)
                    stack.append(p)
        return frozenset(good)

    def is_empty(self) -> bool:
        return not (self.accept & set(self.reachable()))

    def is_prefix_closed(self) -> bool:
        """Every live state accepts (so every prefix of an accepted word is accepted)."""
        return all(q in self.accept for q in self.live_states())

    def words(self, n: int) -> Iterator[tuple]:
        """Accepted words of length exactly ``n`` in lexicographic order."""
        live = self.live_states()
        dist = _distance_to_accept(self, live)
        word: List[int] = []

        def rec(q, rem):
            if rem == 0:
                if q in self.accept:
                    yield tuple(word)
                return
            for x, r in enumerate(self.table[q]):
                d = dist.get(r)
                if d is not None and d <= rem - 1:
                    word.append(x)
                    yield from rec(r, rem - 1)
                    word.pop()

        if self.start in live:
            yield from rec(self.start, n)

    def __eq__(self, other):
        return (isinstance(other, Dfa) and self.n_letters == other.n_letters and self.table == other.table
                and self.start == other.start and self.accept == other.accept)

    def __hash__(self):
        return hash((self.n_letters, self.table, self.start, self.accept))

    def __repr__(self):
        return f"Dfa(states={self.n_states}, letters={self.n_letters}, accept={len(self.accept)})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def universal(cls, k: int) -> "Dfa":
        return cls(k, [(0,) * k, (1,) * k], 0, {0}, sink=1)

    @classmethod
    def empty(cls, k: int) -> "Dfa":
        return cls(k, [(0,) * k], 0, (), sink=0)

    @classmethod
    def epsilon(cls, k: int) -> "Dfa":
        return cls(k, [(1,) * k, (1,) * k], 0, {0}, sink=1)

    @classmethod
    def word(cls, k: int, w: Sequence[int]) -> "Dfa":
        n = len(w)
        sink = n + 1
        rows = []
        for i in range(n + 1):
            row = [sink] * k
            if i < n:
                row[w[i]] = i + 1
            rows.append(row)
        rows.append([sink] * k)
        return cls(k, rows, 0, {n}, sink=sink)

    @classmethod
    def letters(cls, k: int, allowed: Iterable[int]) -> "Dfa":
        """Single-letter words drawn from ``allowed``."""
        allowed = set(allowed)
        return cls(k, [[1 if x in allowed else 2 for x in range(k)], (2,) * k, (2,) * k], 0, {1}, sink=2)

    @classmethod
    def star_of(cls, k: int, allowed: Iterable[int]) -> "Dfa":
        """``S*`` for a letter set ``S``."""
        allowed = set(allowed)
        return cls(k, [[0 if x in allowed else 1 for x in range(k)], (1,) * k], 0, {0}, sink=1)

    @classmethod
    def from_predicate_states(cls, k: int, start, step: Callable, accepting: Callable,
                              dead: Callable = lambda s: False, max_states: int = MAX_STATES) -> "Dfa":
        """Explore hashable states reachable from ``start`` under ``step(state, letter)``.

        Any state for which ``dead`` holds is collapsed into the sink.
        """
        index = {start: 0}
        order = [start]
        rows: List[List[int]] = []
        SINK = -1
        i = 0
        while i < len(order):
            s = order[i]
            row = []
            for x in range(k):
                t = step(s, x)
                if t is None or dead(t):
                    row.append(SINK)
                    continue
                j = index.get(t)
                if j is None:
                    j = len(order)
                    if j >= max_states:
                        raise CapacityError(f"automaton exceeds {max_states} states")
                    index[t] = j
                    order.append(t)
                row.append(j)
            rows.append(row)
            i += 1
        sink = len(order)
        rows = [[sink if r == SINK else r for r in row] for row in rows]
        rows.append([sink] * k)
        acc = {j for j, s in enumerate(order) if accepting(s)}
        return cls(k, rows, 0, acc, sink=sink)


def _find_sink(table, accept) -> Optional[int]:
    for q, row in enumerate(table):
        if q not in accept and all(r == q for r in row):
            return q
    return None


def _distance_to_accept(A: Dfa, live) -> Dict[int, int]:
    rev: Dict[int, list] = {q: [] for q in range(A.n_states)}
    for q, row in enumerate(A.table):
        for r in row:
            rev[r].append(q)
    dist = {q: 0 for q in A.accept if q in live}
    dq = deque(dist)
    while dq:
        q = dq.popleft()
        for p in rev[q]:
            if p in live and p not in dist:
                dist[p] = dist[q] + 1
                dq.append(p)
    return dist


def _check_same(A: Dfa, B: Dfa):
    if A.n_letters != B.n_letters or (A.symbols and B.symbols and A.symbols != B.symbols):
        raise PreconditionError("automata are over different alphabets")


# -- minimization -------------------------------------------------------------

def minimize(A: Dfa) -> Dfa:
    """Canonical minimal DFA (Hopcroft refinement, then BFS renumbering)."""
    states = A.reachable()
    if A.sink not in states:
        states.append(A.sink)
    pos = {q: i for i, q in enumerate(states)}
    n, k = len(states), A.n_letters
    delta = [[pos[A.table[q][x]] for x in range(k)] for q in states]
    inv = [[[] for _ in range(n)] for _ in range(k)]
    for i in range(n):
        for x in range(k):
            inv[x][delta[i][x]].append(i)

    acc = {pos[q] for q in states if q in A.accept}
    blocks = [b for b in (acc, set(range(n)) - acc) if b]
    block_of = [0] * n
    for bi, b in enumerate(blocks):
        for i in b:
            block_of[i] = bi
    work = deque((bi, x) for bi in range(len(blocks)) for x in range(k))
    while work:
        bi, x = work.popleft()
        pre = set()
        for i in blocks[bi]:
            pre.update(inv[x][i])
        touched: Dict[int, set] = {}
        for i in pre:
            touched.setdefault(block_of[i], set()).add(i)
        for bj, hit in touched.items():
            if len(hit) == len(blocks[bj]):
                continue
            rest = blocks[bj] - hit
            small, large = (hit, rest) if len(hit) <= len(rest) else (rest, hit)
            blocks[bj] = large
            nb = len(blocks)
            blocks.append(small)
            for i in small:
                block_of[i] = nb
            for y in range(k):
                work.append((nb, y))

    qdelta = {}
    for i in range(n):
        b = block_of[i]
        if b not in qdelta:
            qdelta[b] = [block_of[delta[i][x]] for x in range(k)]
    start = block_of[pos[A.start]]
    accept_blocks = {block_of[i] for i in acc}
    sink_block = block_of[pos[A.sink]]

    order = [start]
    num = {start: 0}
    i = 0
    while i < len(order):
        for b in qdelta[order[i]]:
            if b not in num:
                num[b] = len(order)
                order.append(b)
        i += 1
    if sink_block not in num:
        num[sink_block] = len(order)
        order.append(sink_block)
    table = [[num[b] for b in qdelta[blk]] for blk in order]
    return Dfa(k, table, 0, {num[b] for b in accept_blocks}, sink=num[sink_block], symbols=A.symbols)


def equivalent(A: Dfa, B: Dfa) -> bool:
    _check_same(A, B)
    a, b = minimize(A), minimize(B)
    return a.table == b.table and a.accept == b.accept and a.start == b.start


# -- boolean operations -------------------------------------------------------

def _product(A: Dfa, B: Dfa, keep: Callable[[bool, bool], bool]) -> Dfa:
    _check_same(A, B)
    k = A.n_letters
    ta, tb = A.table, B.table
    fa, fb = A.accept, B.accept
    return minimize(Dfa.from_predicate_states(
        k, (A.start, B.start),
        lambda s, x: (ta[s[0]][x], tb[s[1]][x]),
        lambda s: keep(s[0] in fa, s[1] in fb),
    ))


def intersect(A: Dfa, B: Dfa) -> Dfa:
    return _product(A, B, lambda a, b: a and b)


def union(A: Dfa, B: Dfa) -> Dfa:
    return _product(A, B, lambda a, b: a or b)


def difference(A: Dfa, B: Dfa) -> Dfa:
    return _product(A, B, lambda a, b: a and not b)


def complement(A: Dfa) -> Dfa:
    flipped = set(range(A.n_states)) - set(A.accept)
    rows = list(A.table) + [(A.n_states,) * A.n_letters]
    return minimize(Dfa(A.n_letters, rows, A.start, flipped, sink=A.n_states, symbols=A.symbols))


def union_all(automata: Sequence[Dfa], k: int) -> Dfa:
    out = Dfa.empty(k)
    for A in automata:
        out = union(out, A)
    return out


# -- nondeterministic constructions -----------------------------------------

def _determinize(k: int, n: int, delta: List[Dict[int, set]], eps: List[set], starts: set,
                 finals: set, max_states: int) -> Dfa:
    def closure(S):
        stack = list(S)
        out = set(S)
        while stack:
            q = stack.pop()
            for r in eps[q]:
                if r not in out:
                    out.add(r)
                    stack.append(r)
        return frozenset(out)

    def step(S, x):
        nxt = set()
        for q in S:
            nxt |= delta[q].get(x, set())
        return closure(nxt)

    A = Dfa.from_predicate_states(k, closure(starts), step, lambda S: bool(S & finals),
                                  dead=lambda S: not S, max_states=max_states)
    return minimize(A)


def _as_nfa(A: Dfa, offset: int):
    delta = [{x: {r + offset} for x, r in enumerate(row)} for row in A.table]
    return delta, {q + offset for q in A.accept}


def concat(A: Dfa, B: Dfa, max_states: int = MAX_STATES) -> Dfa:
    _check_same(A, B)
    k = A.n_letters
    da, fa = _as_nfa(A, 0)
    db, fb = _as_nfa(B, A.n_states)
    n = A.n_states + B.n_states
    eps = [set() for _ in range(n)]
    for q in fa:
        eps[q].add(B.start + A.n_states)
    return _determinize(k, n, da + db, eps, {A.start}, fb, max_states)


def star(A: Dfa, max_states: int = MAX_STATES) -> Dfa:
    k = A.n_letters
    da, fa = _as_nfa(A, 1)
    n = A.n_states + 1
    eps = [set() for _ in range(n)]
    eps[0].add(A.start + 1)
    for q in fa:
        eps[q].add(0)
    return _determinize(k, n, [{}] + da, eps, {0}, {0}, max_states)


def lift(A: Dfa, parent_indices: Sequence[int], k: int) -> Dfa:
    """Re-index a DFA over a sub-alphabet into the full alphabet; other letters reject."""
    local = {p: i for i, p in enumerate(parent_indices)}
    rows = []
    for q, row in enumerate(A.table):
        rows.append([row[local[x]] if x in local else A.sink for x in range(k)])
    return minimize(Dfa(k, rows, A.start, A.accept, sink=A.sink))


# -- counting ------------------------------------------------------------------

def count_words(A: Dfa, n: int) -> int:
    """Number of accepted words of length exactly ``n``."""
    return count_sequence(A, n)[n]


def count_sequence(A: Dfa, n: int) -> List[int]:
    """``[count_words(A, 0), ..., count_words(A, n)]`` by transfer-matrix iteration."""
    live = A.live_states()
    vec = {A.start: 1} if A.start in live else {}
    out = []
    for i in range(n + 1):
        out.append(sum(c for q, c in vec.items() if q in A.accept))
        if i == n:
            break
        nxt: Dict[int, int] = {}
        for q, c in vec.items():
            for r in A.table[q]:
                if r in live:
                    nxt[r] = nxt.get(r, 0) + c
        vec = nxt
    return out


# -- text formats ----------------------------------------------------------------

def to_text(A: Dfa) -> str:
    lines = [f"states {A.n_states} start {A.start} alphabet {A.n_letters}"]
    for q, row in enumerate(A.table):
        lines.append(f"{q} {1 if q in A.accept else 0} " + " ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def from_text(text: str, symbols: Optional[Sequence[str]] = None) -> Dfa:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    head = rows[0]
    if len(head) != 6 or head[0] != "states" or head[2] != "start" or head[4] != "alphabet":
        raise PreconditionError(f"bad DFA header {' '.join(head)!r}")
    n, start, k = int(head[1]), int(head[3]), int(head[5])
    if len(rows) - 1 != n:
        raise PreconditionError(f"expected {n} state lines, found {len(rows) - 1}")
    table: List[Tuple[int, ...]] = [()] * n
    accept = set()
    for r in rows[1:]:
        q = int(r[0])
        if r[1] == "1":
            accept.add(q)
        table[q] = tuple(int(t) for t in r[2:])
    return Dfa(k, table, start, accept, symbols=symbols)


def to_dot(A: Dfa, symbols: Optional[Sequence[str]] = None, name: str = "dfa", show_sink: bool = False) -> str:
    symbols = symbols or A.symbols or [str(i) for i in range(A.n_letters)]
    out = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point];', f"  __start -> {A.start};"]
    for q in range(A.n_states):
        if q == A.sink and not show_sink:
            continue
        shape = "doublecircle" if q in A.accept else "circle"
        out.append(f"  {q} [shape={shape}];")
    for q, row in enumerate(A.table):
        if q == A.sink and not show_sink:
            continue
        edges: Dict[int, List[str]] = {}
        for x, r in enumerate(row):
            if r == A.sink and not show_sink:
                continue
            edges.setdefault(r, []).append(symbols[x])
        for r, labs in edges.items():
            label = ",".join(labs).replace('"', '\\"')
            out.append(f'  {q} -> {r} [label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"
