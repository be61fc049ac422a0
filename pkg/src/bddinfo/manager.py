"""Reduced ordered BDD manager.

Nodes live in a unique table keyed by (variable, low child, high child),
so structurally equal functions always share one handle.  Handles are
plain integers: 0 and 1 are the terminals, everything else is an
internal node owned by exactly one manager.  The variable order is a
permutation between levels and variable ids; adjacent levels can be
swapped in place, which is the substrate for all reordering algorithms.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence

ZERO = 0
ONE = 1

AND = "and"
OR = "or"
XOR = "xor"

_OPS = (AND, OR, XOR)

# Disjoint handle ranges per manager, so a handle from another manager
# is detected instead of silently aliasing a node.
_manager_ids = itertools.count()
_ID_SPAN = 1 << 40


class BddError(Exception):
    """Base class for all BDD errors."""


class OrderingError(BddError):
    """A node would be created below one of its children."""


class UsageError(BddError):
    """Operation called with arguments the manager cannot serve."""


class ManagerMismatchError(UsageError):
    """Handle does not belong to this manager (or was retired)."""


class NodeLimitError(BddError):
    """The configured live-node ceiling was reached."""


class InputError(BddError, ValueError):
    """Malformed input data (e.g. a truth vector of bad length)."""


class BddManager:
    """Shared ROBDD store for a fixed set of variables.

    Variables are the integers ``0 .. n-1``.  ``order`` gives the initial
    permutation from levels to variables (default: identity).  Handles
    returned by one manager are meaningless in any other, except the
    terminals ``ZERO`` and ``ONE``.

    A manager is confined to one thread at a time; run independent
    managers for parallelism.
    """

    def __init__(self, n: int, order: Sequence[int] | None = None,
                 node_limit: int | None = None):
        if n < 0:
            raise ValueError("variable count must be nonnegative")
        self.n = n
        if order is None:
            order = range(n)
        order = list(order)
        if sorted(order) != list(range(n)):
            raise ValueError(f"order must be a permutation of 0..{n - 1}")
        self._level_var = order                    # level -> variable
        self._var_level = [0] * n                  # variable -> level
        for level, var in enumerate(order):
            self._var_level[var] = level
        base = next(_manager_ids) * _ID_SPAN
        self._next = base + 2                      # 0/1 reserved for terminals
        self._node: dict[int, tuple[int, int, int]] = {}   # id -> (var, lo, hi)
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}         # apply/negate/cofactor memo
        self._roots: list[int] = []
        self.node_limit = node_limit

    def __len__(self) -> int:
        """Number of live internal nodes (including unreachable ones)."""
        return len(self._node)

    @property
    def order(self) -> tuple[int, ...]:
        """Current variable order, as variable ids from top to bottom."""
        return tuple(self._level_var)

    def level_of_var(self, var: int) -> int:
        self._check_var(var)
        return self._var_level[var]

    def var_at_level(self, level: int) -> int:
        if not 0 <= level < self.n:
            raise UsageError(f"level {level} out of range")
        return self._level_var[level]

    # -- structural queries -------------------------------------------------

    def is_terminal(self, ref: int) -> bool:
        self._check(ref)
        return ref == ZERO or ref == ONE

    def node(self, ref: int) -> tuple[int, int, int]:
        """Return (var, lo, hi) of an internal node."""
        self._check(ref)
        try:
            return self._node[ref]
        except KeyError:
            raise UsageError(f"{ref} is a terminal, not an internal node") from None

    def var_of(self, ref: int) -> int | None:
        """Variable tested by the node, or None for terminals."""
        self._check(ref)
        t = self._node.get(ref)
        return None if t is None else t[0]

    def level_of(self, ref: int) -> int:
        """Level of the node's variable; terminals sit at level n."""
        self._check(ref)
        t = self._node.get(ref)
        return self.n if t is None else self._var_level[t[0]]

    # -- construction -------------------------------------------------------

    def mk_node(self, var: int, lo: int, hi: int) -> int:
        """Intern the node (var, lo, hi), applying both reduction rules."""
        self._check_var(var)
        self._check(lo)
        self._check(hi)
        if lo == hi:
            return lo
        level = self._var_level[var]
        if level >= self._ref_level(lo) or level >= self._ref_level(hi):
            raise OrderingError(
                f"variable {var} at level {level} cannot test a child at or "
                f"above that level")
        key = (var, lo, hi)
        found = self._unique.get(key)
        if found is not None:
            return found
        if self.node_limit is not None and len(self._node) >= self.node_limit:
            raise NodeLimitError(f"node limit {self.node_limit} reached")
        ref = self._next
        self._next += 1
        self._node[ref] = key
        self._unique[key] = ref
        return ref

    def literal(self, var: int, phase: int = 1) -> int:
        """BDD of the variable itself (phase 1) or its complement (phase 0)."""
        if phase:
            return self.mk_node(var, ZERO, ONE)
        return self.mk_node(var, ONE, ZERO)

    def apply(self, op: str, a: int, b: int) -> int:
        """Reduced BDD of (a op b) for op in {AND, OR, XOR}; memoized."""
        if op not in _OPS:
            raise UsageError(f"unknown operator {op!r}")
        self._check(a)
        self._check(b)
        return self._apply(op, a, b)

    def _apply(self, op: str, a: int, b: int) -> int:
        if op == AND:
            if a == ZERO or b == ZERO:
                return ZERO
            if a == ONE:
                return b
            if b == ONE:
                return a
            if a == b:
                return a
        elif op == OR:
            if a == ONE or b == ONE:
                return ONE
            if a == ZERO:
                return b
            if b == ZERO:
                return a
            if a == b:
                return a
        else:  # XOR
            if a == b:
                return ZERO
            if a == ZERO:
                return b
            if b == ZERO:
                return a
            if a == ONE:
                return self._negate(b)
            if b == ONE:
                return self._negate(a)
        if a > b:
            a, b = b, a
        key = (op, a, b)
        found = self._cache.get(key)
        if found is not None:
            return found
        la = self._ref_level(a)
        lb = self._ref_level(b)
        level = min(la, lb)
        var = self._level_var[level]
        a0, a1 = (self._node[a][1], self._node[a][2]) if la == level else (a, a)
        b0, b1 = (self._node[b][1], self._node[b][2]) if lb == level else (b, b)
        r0 = self._apply(op, a0, b0)
        r1 = self._apply(op, a1, b1)
        r = r0 if r0 == r1 else self.mk_node(var, r0, r1)
        self._cache[key] = r
        return r

    def negate(self, a: int) -> int:
        """Reduced BDD of the complement (no complement edges are used)."""
        self._check(a)
        return self._negate(a)

    def _negate(self, a: int) -> int:
        if a == ZERO:
            return ONE
        if a == ONE:
            return ZERO
        key = ("not", a)
        found = self._cache.get(key)
        if found is not None:
            return found
        var, lo, hi = self._node[a]
        r = self.mk_node(var, self._negate(lo), self._negate(hi))
        self._cache[key] = r
        return r

    def cofactor(self, a: int, var: int, value: int) -> int:
        """BDD of the restriction with ``var`` pinned to ``value``."""
        self._check(a)
        self._check_var(var)
        if value not in (0, 1):
            raise UsageError(f"value must be 0 or 1, got {value!r}")
        return self._cofactor(a, self._var_level[var], var, value)

    def _cofactor(self, a: int, target_level: int, var: int, value: int) -> int:
        la = self._ref_level(a)
        if la > target_level:
            return a
        v, lo, hi = self._node[a]
        if la == target_level:
            return hi if value else lo
        key = ("co", a, var, value)
        found = self._cache.get(key)
        if found is not None:
            return found
        r0 = self._cofactor(lo, target_level, var, value)
        r1 = self._cofactor(hi, target_level, var, value)
        r = r0 if r0 == r1 else self.mk_node(v, r0, r1)
        self._cache[key] = r
        return r

    def build_from_truth_vector(self, bits) -> int:
        """Build the function whose truth vector is ``bits``.

        ``bits`` is a string over '01' or a sequence of 0/1 of length 2**n.
        Index i is read as the assignment (x1, ..., xn) given by the binary
        digits of i with x1 (variable 0) most significant.
        """
        vec = _coerce_bits(bits)
        length = len(vec)
        if length == 0 or length & (length - 1):
            raise InputError(f"truth vector length {length} is not a power of two")
        if length > 1 << 24:
            raise InputError("truth vector longer than 2**24 is not supported")
        if length != 1 << self.n:
            raise InputError(
                f"truth vector length {length} does not match {self.n} variables")
        return self._from_vec(vec, 0, list(range(self.n)))

    def _from_vec(self, vec: list[int], level: int, rem: list[int]) -> int:
        if level == self.n:
            return ONE if vec[0] else ZERO
        var = self._level_var[level]
        r = rem.index(var)
        stride = 1 << (len(rem) - 1 - r)
        lo: list[int] = []
        hi: list[int] = []
        for base in range(0, len(vec), stride * 2):
            lo.extend(vec[base:base + stride])
            hi.extend(vec[base + stride:base + stride * 2])
        nrem = rem[:r] + rem[r + 1:]
        l = self._from_vec(lo, level + 1, nrem)
        h = self._from_vec(hi, level + 1, nrem)
        return l if l == h else self.mk_node(var, l, h)

    def evaluate(self, root: int, assignment: Sequence[int]) -> int:
        """Evaluate at an assignment indexed by variable id."""
        self._check(root)
        if len(assignment) != self.n:
            raise UsageError(f"assignment must have {self.n} entries")
        u = root
        while u != ZERO and u != ONE:
            var, lo, hi = self._node[u]
            u = hi if assignment[var] else lo
        return u

    # -- roots, counting, garbage -------------------------------------------

    def register_root(self, ref: int) -> int:
        """Mark a function as an output kept alive across swaps and sweeps."""
        self._check(ref)
        self._roots.append(ref)
        return ref

    @property
    def registered_roots(self) -> tuple[int, ...]:
        return tuple(self._roots)

    def count_nodes(self, roots: Iterable[int]) -> int:
        """Distinct internal nodes reachable from any root; terminals excluded."""
        return len(self._reachable(roots))

    def shared_size(self) -> int:
        """count_nodes over the registered roots."""
        return self.count_nodes(self._roots)

    def _reachable(self, roots: Iterable[int]) -> set[int]:
        seen: set[int] = set()
        stack = []
        for r in roots:
            self._check(r)
            stack.append(r)
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            t = self._node.get(u)
            if t is None:
                continue
            seen.add(u)
            stack.append(t[1])
            stack.append(t[2])
        return seen

    def collect_garbage(self, extra_roots: Iterable[int] = ()) -> int:
        """Sweep nodes unreachable from the registered (plus extra) roots.

        Returns the number of retired nodes.  Handles not covered by a
        root are invalid afterwards; retired ids are never reused.
        """
        keep = self._reachable(list(self._roots) + list(extra_roots))
        dead = [u for u in self._node if u not in keep]
        for u in dead:
            key = self._node.pop(u)
            if self._unique.get(key) == u:
                del self._unique[key]
        if dead:
            self._cache.clear()
        return len(dead)

    # -- reordering substrate -----------------------------------------------

    def swap_adjacent_levels(self, level: int) -> None:
        """Exchange the variables at ``level`` and ``level + 1`` in place.

        Every registered root keeps its handle and its function; only
        nodes at the two affected levels are rewritten or created.
        Operation caches are invalidated.
        """
        if not 0 <= level < self.n - 1:
            raise UsageError(f"level {level} out of range for swapping")
        x = self._level_var[level]
        y = self._level_var[level + 1]
        reachable = self._reachable(self._roots)
        xnodes = [(u, self._node[u]) for u in sorted(reachable)
                  if self._node[u][0] == x]
        # Swap the order maps first so node creation below sees x under y.
        self._level_var[level] = y
        self._level_var[level + 1] = x
        self._var_level[x] = level + 1
        self._var_level[y] = level
        for u, (_, f0, f1) in xnodes:
            t0 = self._node.get(f0)
            t1 = self._node.get(f1)
            y0 = t0 is not None and t0[0] == y
            y1 = t1 is not None and t1[0] == y
            if not (y0 or y1):
                continue  # independent of y: keeps its label one level down
            del self._unique[(x, f0, f1)]
            f00, f01 = (t0[1], t0[2]) if y0 else (f0, f0)
            f10, f11 = (t1[1], t1[2]) if y1 else (f1, f1)
            g0 = self.mk_node(x, f00, f10)
            g1 = self.mk_node(x, f01, f11)
            if g0 == g1:
                raise AssertionError("swap lost a dependence on the lower variable")
            stale = self._unique.get((y, g0, g1))
            if stale is not None:
                # Leftover garbage from an earlier swap; retire it for good.
                if stale in reachable:
                    raise AssertionError("live node collided during level swap")
                del self._node[stale]
                del self._unique[(y, g0, g1)]
            self._node[u] = (y, g0, g1)
            self._unique[(y, g0, g1)] = u
        self._cache.clear()

    def set_order(self, order: Sequence[int]) -> None:
        """Migrate to the given variable order via adjacent swaps."""
        target = list(order)
        if sorted(target) != list(range(self.n)):
            raise UsageError(f"order must be a permutation of 0..{self.n - 1}")
        for level, var in enumerate(target):
            cur = self._var_level[var]
            while cur > level:
                self.swap_adjacent_levels(cur - 1)
                cur -= 1

    def clone(self) -> "BddManager":
        """Independent copy sharing handle values with this manager."""
        m = BddManager(self.n, order=self.order, node_limit=self.node_limit)
        m._node = dict(self._node)
        m._unique = dict(self._unique)
        m._next = self._next
        m._roots = list(self._roots)
        return m

    # -- internal helpers ---------------------------------------------------

    def _ref_level(self, ref: int) -> int:
        t = self._node.get(ref)
        return self.n if t is None else self._var_level[t[0]]

    def _check(self, ref: int) -> None:
        if ref == ZERO or ref == ONE:
            return
        if ref not in self._node:
            raise ManagerMismatchError(
                f"handle {ref!r} does not belong to this manager")

    def _check_var(self, var: int) -> None:
        if not isinstance(var, int) or not 0 <= var < self.n:
            raise UsageError(f"unknown variable {var!r}")


def copy_function(src: BddManager, ref: int, dst: BddManager,
                  _memo: dict[int, int] | None = None) -> int:
    """Rebuild a function from one manager inside another.

    Variable ids carry over; the destination's own order is respected,
    so this also converts between orders.
    """
    src._check(ref)
    memo = {} if _memo is None else _memo

    def rec(u: int) -> int:
        if u == ZERO or u == ONE:
            return u
        r = memo.get(u)
        if r is not None:
            return r
        var, lo, hi = src._node[u]
        l = rec(lo)
        h = rec(hi)
        x = dst.literal(var)
        r = dst.apply(OR,
                      dst.apply(AND, dst.negate(x), l),
                      dst.apply(AND, x, h))
        memo[u] = r
        return r

    return rec(ref)


def _coerce_bits(bits) -> list[int]:
    if isinstance(bits, str):
        bits = bits.strip()
        vec = []
        for ch in bits:
            if ch not in "01":
                raise InputError(f"truth vector character {ch!r} is not 0/1")
            vec.append(ch == "1")
        return [int(b) for b in vec]
    vec = []
    for b in bits:
        if b not in (0, 1, False, True):
            raise InputError(f"truth vector entry {b!r} is not 0/1")
        vec.append(int(b))
    return vec
