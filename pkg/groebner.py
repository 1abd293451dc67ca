"""
Buchberger's algorithm with the Gebauer-Moeller pair criteria, normal
forms, ideal membership, elimination ideals and ideal equality.

Reduced bases are cached per (ring, generators, order) in `gb_cache`;
`stats` counts work done across the process.
"""
import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from arith import Raw
from config import config
from errors import ExponentOverflow, RingMismatch, ResourceLimitExceeded
from poly import (
    Block, GrevLex, Monomial, Polynomial, Ring, TermOrder,
    monomial_div, monomial_divides, monomial_lcm
)

logger = logging.getLogger(__name__)

Terms = Dict[Monomial, Raw]


# ============================================================================
# Ideals and bases
# ============================================================================

@dataclass(frozen=True)
class IdealPresentation:
    """A presented ideal; an empty generator list presents the zero ideal"""
    ring: Ring
    generators: Tuple[Polynomial, ...]
    primality_asserted: bool = False

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for i, g in enumerate(gens):
            if g.ring != self.ring:
                raise RingMismatch(f"generator {i} lives in {g.ring}, not {self.ring}")
            if g.is_zero():
                raise ValueError(f"generator {i} is zero")

    @classmethod
    def parse(cls, ring: Ring, texts: Iterable[str], primality_asserted: bool = False) -> "IdealPresentation":
        return cls(ring, tuple(ring.parse(t) for t in texts), primality_asserted)

    @property
    def n(self) -> int:
        return self.ring.n

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def structural_key(self) -> tuple:
        return (self.ring, self.generators)

    def with_primality(self, flag: bool) -> "IdealPresentation":
        return IdealPresentation(self.ring, self.generators, flag)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: IdealPresentation
    order: TermOrder
    basis: Tuple[Polynomial, ...]

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.basis]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()


# ============================================================================
# Statistics and cache
# ============================================================================

class GroebnerStats:
    """Thread-safe work counters"""

    FIELDS = ("computations", "cache_hits", "pairs_reduced", "zero_reductions",
              "product_criterion", "chain_criterion")

    def __init__(self):
        self._lock = threading.Lock()
        self.reset()

    def reset(self):
        with self._lock:
            self._counts = {name: 0 for name in self.FIELDS}

    def bump(self, **counts: int):
        with self._lock:
            for name, value in counts.items():
                self._counts[name] += value

    def snapshot(self) -> Dict[str, int]:
        with self._lock:
            return dict(self._counts)


class GroebnerCache:
    """LRU map from (ring, generators, order) to reduced bases; last write wins"""

    def __init__(self, max_size: Optional[int] = None):
        self._lock = threading.Lock()
        self._entries: "OrderedDict[tuple, GroebnerBasis]" = OrderedDict()
        self.max_size = max_size

    def get(self, key: tuple) -> Optional[GroebnerBasis]:
        with self._lock:
            gb = self._entries.get(key)
            if gb is not None:
                self._entries.move_to_end(key)
            return gb

    def put(self, key: tuple, gb: GroebnerBasis) -> None:
        limit = self.max_size or config.groebner.cache_size
        with self._lock:
            self._entries[key] = gb
            self._entries.move_to_end(key)
            while len(self._entries) > limit:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


stats = GroebnerStats()
gb_cache = GroebnerCache()


# ============================================================================
# Engine (raw term dicts)
# ============================================================================

def _memo_key(order: TermOrder) -> Callable[[Monomial], tuple]:
    memo: Dict[Monomial, tuple] = {}
    raw_key = order.key

    def key(m: Monomial) -> tuple:
        k = memo.get(m)
        if k is None:
            k = memo[m] = raw_key(m)
        return k
    return key


def _reduce(terms: Terms, basis: Sequence[Tuple[Monomial, Terms]], field, key) -> Terms:
    """Full reduction of `terms` by monic basis elements (lm, terms)"""
    p = dict(terms)
    r: Terms = {}
    zero = field.zero()
    sub, mul, is_zero = field.sub, field.mul, field.is_zero
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if monomial_divides(lm, m):
                q = monomial_div(m, lm)
                for gm, gc in g.items():
                    t = tuple(a + b for a, b in zip(gm, q))
                    v = sub(p.get(t, zero), mul(c, gc))
                    if is_zero(v):
                        p.pop(t, None)
                    else:
                        p[t] = v
                break
        else:
            r[m] = c
            del p[m]
    return r


def _monic(terms: Terms, field, key) -> Tuple[Monomial, Terms]:
    lm = max(terms, key=key)
    inv = field.inv(terms[lm])
    return lm, {m: field.mul(inv, c) for m, c in terms.items()}


def _s_polynomial(f: Tuple[Monomial, Terms], g: Tuple[Monomial, Terms], field) -> Terms:
    lcm = monomial_lcm(f[0], g[0])
    limit = config.groebner.max_exponent
    if any(e > limit for e in lcm):
        raise ExponentOverflow(f"S-polynomial exponent exceeds the limit {limit}")
    qf, qg = monomial_div(lcm, f[0]), monomial_div(lcm, g[0])
    out: Terms = {}
    for m, c in f[1].items():
        out[tuple(a + b for a, b in zip(m, qf))] = c
    zero = field.zero()
    for m, c in g[1].items():
        t = tuple(a + b for a, b in zip(m, qg))
        v = field.sub(out.get(t, zero), c)
        if field.is_zero(v):
            out.pop(t, None)
        else:
            out[t] = v
    return out


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _Buchberger:
    """One Buchberger run; indices into `polys` stay stable, `active` is the current basis"""

    def __init__(self, ring: Ring, order: TermOrder):
        self.ring = ring
        self.field = ring.field
        self.order = order
        self.key = _memo_key(order)
        self.polys: List[Tuple[Monomial, Terms]] = []
        self.active: List[int] = []
        self.pairs: List[Tuple[tuple, Monomial, int, int]] = []
        self.pairs_reduced = 0
        self.zero_reductions = 0
        self.product_skips = 0
        self.chain_skips = 0

    def basis_view(self) -> List[Tuple[Monomial, Terms]]:
        return [self.polys[i] for i in self.active]

    def insert(self, terms: Terms) -> None:
        lm, monic = _monic(terms, self.field, self.key)
        if not any(lm):
            # unit ideal
            self.polys.append((lm, monic))
            self.active = [len(self.polys) - 1]
            self.pairs = []
            return
        self.polys.append((lm, monic))
        h = len(self.polys) - 1
        if len(self.polys) > config.groebner.max_basis_size:
            raise ResourceLimitExceeded(f"basis size exceeds {config.groebner.max_basis_size}")
        self._update(h)

    def _update(self, h: int) -> None:
        lms = [p[0] for p in self.polys]
        h_lm = lms[h]

        candidates = list(self.active)
        kept: List[int] = []
        for idx, g in enumerate(candidates):
            if _coprime(h_lm, lms[g]):
                kept.append(g)
                continue
            lcm_hg = monomial_lcm(h_lm, lms[g])
            others = candidates[idx + 1:] + kept
            if any(monomial_divides(monomial_lcm(h_lm, lms[o]), lcm_hg) for o in others):
                self.chain_skips += 1
            else:
                kept.append(g)
        new_pairs = []
        for g in kept:
            if _coprime(h_lm, lms[g]):
                self.product_skips += 1
            else:
                new_pairs.append(g)

        surviving = []
        for entry in self.pairs:
            _, lcm_ij, i, j = entry
            if (monomial_divides(h_lm, lcm_ij)
                    and monomial_lcm(lms[i], h_lm) != lcm_ij
                    and monomial_lcm(h_lm, lms[j]) != lcm_ij):
                self.chain_skips += 1
                continue
            surviving.append(entry)
        for g in new_pairs:
            lcm = monomial_lcm(lms[g], h_lm)
            surviving.append((self.key(lcm), lcm, g, h))
        self.pairs = surviving

        self.active = [g for g in self.active if not monomial_divides(h_lm, lms[g])] + [h]

    def run(self, generators: Sequence[Polynomial]) -> List[Tuple[Monomial, Terms]]:
        for f in generators:
            if self.active and not any(self.polys[self.active[0]][0]):
                break
            h = _reduce(f._terms, self.basis_view(), self.field, self.key)
            if h:
                self.insert(h)

        max_pairs = config.groebner.max_pairs
        while self.pairs:
            # normal strategy: smallest lcm, ties by index
            best = min(range(len(self.pairs)), key=lambda k: (self.pairs[k][0], self.pairs[k][2], self.pairs[k][3]))
            _, _, i, j = self.pairs.pop(best)
            self.pairs_reduced += 1
            if self.pairs_reduced > max_pairs:
                raise ResourceLimitExceeded(f"more than {max_pairs} S-pairs processed")
            s = _s_polynomial(self.polys[i], self.polys[j], self.field)
            h = _reduce(s, self.basis_view(), self.field, self.key)
            if h:
                logger.debug(f"pair ({i}, {j}) gave a new element of {len(h)} terms")
                self.insert(h)
            else:
                self.zero_reductions += 1

        return self._interreduce()

    def _interreduce(self) -> List[Tuple[Monomial, Terms]]:
        basis = self.basis_view()
        out = []
        for k, (lm, terms) in enumerate(basis):
            others = basis[:k] + basis[k + 1:]
            tail = {m: c for m, c in terms.items() if m != lm}
            reduced = _reduce(tail, others, self.field, self.key)
            reduced[lm] = self.field.one()
            out.append((lm, reduced))
        out.sort(key=lambda p: self.key(p[0]), reverse=True)
        return out


def buchberger(ideal: IdealPresentation, order: Optional[TermOrder] = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal under `order` (GrevLex by default)"""
    order = order or GrevLex()
    cache_key = ideal.structural_key() + (order,)
    cached = gb_cache.get(cache_key)
    if cached is not None:
        stats.bump(cache_hits=1)
        if cached.ideal.primality_asserted != ideal.primality_asserted:
            return GroebnerBasis(ideal, order, cached.basis)
        return cached

    engine = _Buchberger(ideal.ring, order)
    reduced = engine.run(ideal.generators)
    basis = tuple(Polynomial(ideal.ring, terms, _trusted=True) for _, terms in reduced)
    gb = GroebnerBasis(ideal, order, basis)

    stats.bump(computations=1, pairs_reduced=engine.pairs_reduced,
               zero_reductions=engine.zero_reductions,
               product_criterion=engine.product_skips, chain_criterion=engine.chain_skips)
    logger.info(f"Groebner basis in {ideal.ring.n} variables under {order}: "
                f"{len(ideal.generators)} generators -> {len(basis)} elements, "
                f"{engine.pairs_reduced} pairs reduced")
    gb_cache.put(cache_key, gb)
    return gb


# ============================================================================
# Ideal operations
# ============================================================================

def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if f.ring != gb.ring:
        raise RingMismatch(f"{f.ring} vs {gb.ring}")
    key = _memo_key(gb.order)
    basis = [(g.leading_monomial(gb.order), g._terms) for g in gb.basis]
    return Polynomial(f.ring, _reduce(f._terms, basis, f.ring.field, key), _trusted=True)


def ideal_membership(f: Polynomial, ideal: IdealPresentation, order: Optional[TermOrder] = None) -> bool:
    return normal_form(f, buchberger(ideal, order)).is_zero()


def is_groebner(gb: GroebnerBasis) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero"""
    field = gb.ring.field
    key = _memo_key(gb.order)
    monic = [_monic(g._terms, field, key) for g in gb.basis]
    for i in range(len(monic)):
        for j in range(i + 1, len(monic)):
            s = _s_polynomial(monic[i], monic[j], field)
            if _reduce(s, monic, field, key):
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    field = gb.ring.field
    lms = gb.leading_monomials()
    for k, g in enumerate(gb.basis):
        if not field.is_one(g.leading_term(gb.order)[1]):
            return False
        for m in g._terms:
            if any(monomial_divides(lm, m) for i, lm in enumerate(lms) if i != k):
                return False
    return True


def elimination_ideal(ideal: IdealPresentation, keep: Iterable[str]) -> IdealPresentation:
    """I ∩ k[keep] as an ideal of the sub-ring on `keep`"""
    ring = ideal.ring
    keep_set = set(keep)
    sub_ring = ring.restrict(keep_set)
    eliminated = [v for v in ring.vars if v not in keep_set]

    if not eliminated:
        gb = buchberger(ideal)
        return IdealPresentation(ring, gb.basis, ideal.primality_asserted)

    if not keep_set:
        gb = buchberger(ideal)
        gens = (sub_ring.one(),) if gb.is_unit() else ()
        return IdealPresentation(sub_ring, gens, ideal.primality_asserted)

    gb = buchberger(ideal, Block.eliminating(ring, eliminated))
    keep_idx = frozenset(ring.indices(keep_set))
    index_map = [sub_ring.vars.index(v) if v in keep_set else None for v in ring.vars]
    members = tuple(g.change_ring(sub_ring, index_map) for g in gb.basis if g.support_indices() <= keep_idx)
    return IdealPresentation(sub_ring, members, ideal.primality_asserted)


def ideal_equal(a: IdealPresentation, b: IdealPresentation) -> bool:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    gb_a, gb_b = buchberger(a), buchberger(b)
    return all(gb_a.contains(g) for g in b.generators) and all(gb_b.contains(g) for g in a.generators)


def ring_extend(ideal: IdealPresentation, new_vars: Sequence[str],
                extra_gens: Sequence[Union[Polynomial, str]] = (),
                primality_asserted: Optional[bool] = None) -> IdealPresentation:
    ring = ideal.ring.extend(new_vars)
    gens = [g.change_ring(ring) for g in ideal.generators]
    for g in extra_gens:
        gens.append(ring.parse(g) if isinstance(g, str) else g)
    flag = ideal.primality_asserted if primality_asserted is None else primality_asserted
    return IdealPresentation(ring, tuple(gens), flag)


def reduced_presentation(ideal: IdealPresentation) -> IdealPresentation:
    """The ideal presented by its reduced GrevLex basis"""
    return IdealPresentation(ideal.ring, buchberger(ideal).basis, ideal.primality_asserted)


def relabel(ideal: IdealPresentation, names: Sequence[str]) -> IdealPresentation:
    """Rename variables positionally"""
    ring = Ring(ideal.ring.field, tuple(names))
    return IdealPresentation(ring, tuple(g.rename(ring) for g in ideal.generators), ideal.primality_asserted)
