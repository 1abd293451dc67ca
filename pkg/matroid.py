"""
Matroids stored by their bases (bitmask subsets), the algebraic-matroid
oracle via elimination, linear matroids, and comparison/isomorphism.

Bit i of a mask is ground-set element i (labels[i]).
"""
import asyncio
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from arith import FieldSpec, Scalar
from config import config
from errors import GroundSetMismatch, GroundSetTooLarge, NotAMatroid
from groebner import IdealPresentation, elimination_ideal
from poly import Polynomial
from quotfield import KMatrix, QMatrix, rank, rank_over_field
from utils import indices_of, mask_of, names_of, popcount

logger = logging.getLogger(__name__)

Oracle = Callable[[int], bool]


# ============================================================================
# Matroid values
# ============================================================================

def _sort_masks(masks: Iterable[int]) -> List[int]:
    """By size, then lexicographically on the sorted index lists"""
    return sorted(masks, key=lambda m: (popcount(m), indices_of(m)))


@dataclass(frozen=True)
class Matroid:
    n: int
    labels: Tuple[str, ...]
    rank: int
    bases: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "bases", frozenset(self.bases))
        if len(self.labels) != self.n:
            raise ValueError(f"{len(self.labels)} labels for {self.n} elements")
        if len(set(self.labels)) != self.n:
            raise ValueError("matroid labels must be distinct")
        if not self.bases:
            raise NotAMatroid("a matroid has at least one basis")
        for b in self.bases:
            if b >> self.n:
                raise ValueError(f"basis {b:b} outside the ground set")
            if popcount(b) != self.rank:
                raise NotAMatroid(f"basis {indices_of(b)} has size {popcount(b)}, rank is {self.rank}")

    @classmethod
    def from_bases(cls, labels: Sequence[str], bases: Iterable[Union[int, Iterable[str]]]) -> "Matroid":
        """Bases as masks or as iterables of labels"""
        labels = tuple(labels)
        masks = set()
        for b in bases:
            masks.add(b if isinstance(b, int) else mask_of(labels.index(x) for x in b))
        ranks = {popcount(m) for m in masks}
        if len(ranks) != 1:
            raise NotAMatroid(f"bases of different sizes {sorted(ranks)}")
        return cls(len(labels), labels, ranks.pop(), frozenset(masks))

    # --- subsets ------------------------------------------------------------

    def mask(self, names: Iterable[str]) -> int:
        try:
            return mask_of(self.labels.index(x) for x in names)
        except ValueError:
            raise GroundSetMismatch(f"unknown element in {list(names)}") from None

    def names(self, mask: int) -> List[str]:
        return names_of(mask, self.labels)

    @cached_property
    def independent_masks(self) -> FrozenSet[int]:
        out = set()
        for b in self.bases:
            sub = b
            while True:
                out.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & b
        return frozenset(out)

    def is_independent(self, subset: Union[int, Iterable[str]]) -> bool:
        mask = subset if isinstance(subset, int) else self.mask(subset)
        return mask in self.independent_masks

    def rank_of(self, subset: Union[int, Iterable[str]]) -> int:
        mask = subset if isinstance(subset, int) else self.mask(subset)
        return max(popcount(mask & b) for b in self.bases)

    def loops(self) -> List[int]:
        return [i for i in range(self.n) if not any(b >> i & 1 for b in self.bases)]

    def coloops(self) -> List[int]:
        return [i for i in range(self.n) if all(b >> i & 1 for b in self.bases)]

    def sorted_bases(self) -> List[List[int]]:
        return [indices_of(b) for b in _sort_masks(self.bases)]

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "labels": list(self.labels),
            "rank": self.rank,
            "bases": self.sorted_bases(),
            "circuits": [indices_of(c) for c in circuits(self)],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Matroid":
        return cls(data["n"], tuple(data["labels"]), data["rank"],
                   frozenset(mask_of(b) for b in data["bases"]))

    def __str__(self) -> str:
        return f"Matroid(rank {self.rank} on {{{', '.join(self.labels)}}}, {len(self.bases)} bases)"


def uniform_matroid(r: int, n: int, labels: Optional[Sequence[str]] = None) -> Matroid:
    labels = tuple(labels) if labels else tuple(str(i + 1) for i in range(n))
    return Matroid(n, labels, r, frozenset(mask_of(c) for c in itertools.combinations(range(n), r)))


def free_matroid(labels: Sequence[str]) -> Matroid:
    return Matroid(len(labels), tuple(labels), len(labels), frozenset({(1 << len(labels)) - 1}))


# ============================================================================
# Enumeration from an independence oracle
# ============================================================================

def _next_level(level: List[int], n: int) -> List[int]:
    """Candidates one element larger whose co-size-1 subsets are all independent"""
    members = set(level)
    out = []
    for mask in level:
        top = mask.bit_length()
        for e in range(top, n):
            candidate = mask | (1 << e)
            if all((candidate & ~(1 << i)) in members for i in indices_of(candidate)):
                out.append(candidate)
    return out


async def _evaluate_async(candidates: List[int], oracle: Oracle, jobs: int) -> Dict[int, bool]:
    semaphore = asyncio.Semaphore(jobs)

    async def one(mask: int) -> Tuple[int, bool]:
        async with semaphore:
            return mask, await asyncio.to_thread(oracle, mask)

    results = await asyncio.gather(*(one(m) for m in candidates))
    return dict(results)


def _check_levels(levels: List[List[int]]) -> None:
    for k in range(len(levels) - 1):
        upper = levels[k + 1]
        for mask in levels[k]:
            if not any(mask & u == mask for u in upper):
                raise NotAMatroid(f"maximal independent set {indices_of(mask)} is smaller than the rank")


async def enumerate_bases_async(n: int, oracle: Oracle, jobs: int = 1) -> Tuple[int, FrozenSet[int]]:
    """Monotone level search; returns (rank, bases)"""
    levels = [[0]]
    while True:
        candidates = _next_level(levels[-1], n)
        if not candidates:
            break
        if jobs > 1:
            results = await _evaluate_async(candidates, oracle, jobs)
        else:
            results = {m: oracle(m) for m in candidates}
        independent = [m for m in candidates if results[m]]
        logger.info(f"level {len(levels)}: {len(independent)}/{len(candidates)} candidates independent")
        if not independent:
            break
        levels.append(independent)
    _check_levels(levels)
    return len(levels) - 1, frozenset(levels[-1])


def enumerate_bases(n: int, oracle: Oracle, jobs: int = 1) -> Tuple[int, FrozenSet[int]]:
    if jobs > 1:
        return asyncio.run(enumerate_bases_async(n, oracle, jobs))
    levels = [[0]]
    while True:
        candidates = _next_level(levels[-1], n)
        independent = [m for m in candidates if oracle(m)]
        if not independent:
            break
        logger.info(f"level {len(levels)}: {len(independent)}/{len(candidates)} candidates independent")
        levels.append(independent)
    _check_levels(levels)
    return len(levels) - 1, frozenset(levels[-1])


# ============================================================================
# Algebraic matroids
# ============================================================================

@dataclass(frozen=True)
class IndependenceReport:
    subset: Tuple[str, ...]
    independent: bool
    certificate: Optional[Polynomial] = None

    @property
    def reason(self) -> str:
        return "zero elimination ideal" if self.independent else f"witness {self.certificate}"

    def to_json(self) -> Dict[str, Any]:
        return {
            "subset": list(self.subset),
            "independent": self.independent,
            "certificate": None if self.certificate is None else str(self.certificate),
        }


def _check_ground_set(ideal: IdealPresentation) -> None:
    if ideal.n > config.matroid.max_ground_set:
        raise GroundSetTooLarge(f"{ideal.n} variables exceed the limit {config.matroid.max_ground_set}")
    if not ideal.primality_asserted:
        logger.warning("algebraic matroid of an ideal not asserted prime")


def is_independent_algebraic(ideal: IdealPresentation, subset: Iterable[str]) -> IndependenceReport:
    ring = ideal.ring
    names = tuple(v for v in ring.vars if v in set(subset))
    eliminated = elimination_ideal(ideal, names)
    if eliminated.is_zero_ideal():
        return IndependenceReport(names, True)
    # smallest support first, then basis order
    witness = min(enumerate(eliminated.generators), key=lambda t: (len(t[1].support_indices()), t[0]))[1]
    return IndependenceReport(names, False, witness.change_ring(ring))


def algebraic_matroid(ideal: IdealPresentation, jobs: Optional[int] = None) -> Matroid:
    """M(P): S independent iff P ∩ k[S] = 0"""
    _check_ground_set(ideal)
    ring = ideal.ring
    if ideal.is_zero_ideal():
        return free_matroid(ring.vars)

    def oracle(mask: int) -> bool:
        return elimination_ideal(ideal, [ring.vars[i] for i in indices_of(mask)]).is_zero_ideal()

    r, bases = enumerate_bases(ring.n, oracle, jobs or config.run.jobs)
    logger.info(f"algebraic matroid: rank {r}, {len(bases)} bases on {ring.n} elements")
    return Matroid(ring.n, ring.vars, r, bases)


async def algebraic_matroid_async(ideal: IdealPresentation, jobs: Optional[int] = None) -> Matroid:
    _check_ground_set(ideal)
    ring = ideal.ring
    if ideal.is_zero_ideal():
        return free_matroid(ring.vars)

    def oracle(mask: int) -> bool:
        return elimination_ideal(ideal, [ring.vars[i] for i in indices_of(mask)]).is_zero_ideal()

    r, bases = await enumerate_bases_async(ring.n, oracle, jobs or config.run.jobs)
    return Matroid(ring.n, ring.vars, r, bases)


# ============================================================================
# Linear matroids
# ============================================================================

def linear_matroid(M: Union[QMatrix, KMatrix], labels: Optional[Sequence[str]] = None,
                   field: Optional[FieldSpec] = None, jobs: int = 1) -> Matroid:
    """Column matroid of a matrix over k(P) or over the ground field"""
    if isinstance(M, QMatrix):
        n = M.ncols
        labels = tuple(labels) if labels else M.ctx.ring.vars

        def oracle(mask: int) -> bool:
            cols = indices_of(mask)
            return rank(M.columns(cols)) == len(cols)
    else:
        rows = [list(r) for r in M]
        n = len(rows[0]) if rows else len(labels or ())
        if field is None:
            first = next((x for row in rows for x in row if isinstance(x, Scalar)), None)
            if first is None:
                raise ValueError("cannot infer the field of a matrix without Scalar entries")
            field = first.field
        labels = tuple(labels) if labels else tuple(str(i + 1) for i in range(n))

        def oracle(mask: int) -> bool:
            cols = indices_of(mask)
            return rank_over_field([[row[j] for j in cols] for row in rows], field, len(cols)) == len(cols)

    if n > config.matroid.max_ground_set:
        raise GroundSetTooLarge(f"{n} columns exceed the limit {config.matroid.max_ground_set}")
    r, bases = enumerate_bases(n, oracle, jobs)
    return Matroid(n, labels, r, bases)


# ============================================================================
# Derived structure and comparison
# ============================================================================

def circuits(M: Matroid) -> List[int]:
    """Minimal dependent sets, sorted by size then lexicographically"""
    independent = M.independent_masks
    out = []
    for size in range(1, min(M.rank + 1, M.n) + 1):
        for combo in itertools.combinations(range(M.n), size):
            mask = mask_of(combo)
            if mask in independent:
                continue
            if all((mask & ~(1 << i)) in independent for i in combo):
                out.append(mask)
    return out


def check_axioms(M: Matroid) -> bool:
    """Basis exchange always; independence augmentation by brute force for small ground sets"""
    bases = M.bases
    for b1 in bases:
        for b2 in bases:
            if b1 == b2:
                continue
            for x in indices_of(b1 & ~b2):
                if not any(((b1 & ~(1 << x)) | (1 << y)) in bases for y in indices_of(b2 & ~b1)):
                    return False
    if M.n <= config.matroid.axiom_check_limit:
        independent = M.independent_masks
        if 0 not in independent:
            return False
        for i in independent:
            if any((i & ~(1 << x)) not in independent for x in indices_of(i)):
                return False
        for i in independent:
            for j in independent:
                if popcount(i) < popcount(j):
                    if not any((i | (1 << e)) in independent for e in indices_of(j & ~i)):
                        return False
    return True


def _aligned(M1: Matroid, M2: Matroid) -> FrozenSet[int]:
    """M2's bases re-indexed onto M1's labels"""
    if M1.n != M2.n or set(M1.labels) != set(M2.labels):
        raise GroundSetMismatch(f"ground sets {list(M1.labels)} and {list(M2.labels)} differ")
    if M1.labels == M2.labels:
        return M2.bases
    target = [M1.labels.index(label) for label in M2.labels]
    return frozenset(mask_of(target[i] for i in indices_of(b)) for b in M2.bases)


def matroid_equal(M1: Matroid, M2: Matroid) -> bool:
    return M1.rank == M2.rank and M1.bases == _aligned(M1, M2)


def distinguishing_sets(M1: Matroid, M2: Matroid) -> List[int]:
    """Minimal subsets (in M1's indexing) independent in exactly one of the two matroids"""
    aligned = Matroid(M1.n, M1.labels, M2.rank, _aligned(M1, M2))
    ind1, ind2 = M1.independent_masks, aligned.independent_masks
    found: List[int] = []
    for size in range(1, M1.n + 1):
        for combo in itertools.combinations(range(M1.n), size):
            mask = mask_of(combo)
            if (mask in ind1) != (mask in ind2) and not any(f & mask == f for f in found):
                found.append(mask)
    return found


def _element_signature(M: Matroid, circs: List[int], i: int) -> tuple:
    degree = sum(1 for b in M.bases if b >> i & 1)
    sizes = sorted(popcount(c) for c in circs if c >> i & 1)
    return (degree, tuple(sizes))


def matroid_isomorphic(M1: Matroid, M2: Matroid) -> Optional[Tuple[int, ...]]:
    """A bijection perm (element i of M1 -> perm[i] of M2) carrying bases onto bases, or None"""
    limit = config.matroid.max_isomorphism_ground_set
    if max(M1.n, M2.n) > limit:
        raise GroundSetTooLarge(f"isomorphism search is limited to {limit} elements")
    if M1.n != M2.n or M1.rank != M2.rank or len(M1.bases) != len(M2.bases):
        return None
    n = M1.n
    c1, c2 = circuits(M1), circuits(M2)
    if sorted(map(popcount, c1)) != sorted(map(popcount, c2)):
        return None
    c2_set = set(c2)
    sig1 = [_element_signature(M1, c1, i) for i in range(n)]
    sig2 = [_element_signature(M2, c2, j) for j in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None

    options = {i: [j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)}
    order = sorted(range(n), key=lambda i: (len(options[i]), i))
    perm = [-1] * n
    used = [False] * n

    def consistent(domain: int) -> bool:
        image = mask_of(perm[i] for i in indices_of(domain))
        inside1 = 0
        for c in c1:
            if c & domain == c:
                inside1 += 1
                if mask_of(perm[i] for i in indices_of(c)) not in c2_set:
                    return False
        inside2 = sum(1 for c in c2 if c & image == c)
        return inside1 == inside2

    def search(k: int, domain: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in options[i]:
            if used[j]:
                continue
            perm[i], used[j] = j, True
            if consistent(domain | (1 << i)) and search(k + 1, domain | (1 << i)):
                return True
            perm[i], used[j] = -1, False
        return False

    if not search(0, 0):
        return None
    mapped = frozenset(mask_of(perm[i] for i in indices_of(b)) for b in M1.bases)
    if mapped != M2.bases:
        return None
    return tuple(perm)


def isomorphism_labels(M1: Matroid, M2: Matroid, perm: Sequence[int]) -> Dict[str, str]:
    return {M1.labels[i]: M2.labels[j] for i, j in enumerate(perm)}
