"""Property B and Property B(j) deciders.

Both problems are phrased as one labelling search.  Every element of [ell]
gets a label from ``0..j``; a set family is satisfied when each member sees
every *required* label.

* Property B: labels {0 = outside B, 1 = inside B}, both required.
* Property B(j): labels {0 = unused, 1..j = which B_i}, labels 1..j required.

Branching is on the lowest unlabelled element, labels in increasing order,
so the returned witness is deterministic.
"""

from __future__ import annotations

from .core import SetFamily, Witness, popcount


def _label_search(sets: tuple[int, ...], ell: int, nlabels: int, required: tuple[int, ...]):
    """Return per-label element masks of the first satisfying labelling, or None."""
    unlabelled = (1 << ell) - 1
    lab = [0] * nlabels

    def propagate(lab, free):
        changed = True
        while changed:
            changed = False
            for s in sets:
                s_free = s & free
                missing = [i for i in required if not s & lab[i]]
                if not missing:
                    continue
                nfree = popcount(s_free)
                if len(missing) > nfree:
                    return None
                if nfree == 1:
                    # len(missing) == 1 here
                    lab[missing[0]] |= s_free
                    free &= ~s_free
                    changed = True
        return free

    def solve(lab, free):
        free = propagate(lab, free)
        if free is None:
            return None
        if not free:
            return lab
        e = free & -free
        for i in range(nlabels):
            nxt = lab[:]
            nxt[i] |= e
            res = solve(nxt, free & ~e)
            if res is not None:
                return res
        return None

    return solve(lab, unlabelled)


def find_property_b_witness(F: SetFamily) -> Witness | None:
    """A set B meeting every member of F and containing none, or None if F lacks Property B."""
    lab = _label_search(F.sets, F.ell, 2, (0, 1))
    if lab is None:
        return None
    return Witness((lab[1],), single=True)


def find_property_bj_witness(F: SetFamily, j: int) -> Witness | None:
    """Mutually disjoint transversals B_1..B_j of F, or None if F lacks Property B(j)."""
    if not 2 <= j <= F.ell:
        raise ValueError(f"j={j} must satisfy 2 <= j <= l={F.ell}")
    lab = _label_search(F.sets, F.ell, j + 1, tuple(range(1, j + 1)))
    if lab is None:
        return None
    return Witness(tuple(lab[1:]))


def has_property_b(F: SetFamily) -> bool:
    return find_property_b_witness(F) is not None


def has_property_bj(F: SetFamily, j: int) -> bool:
    return find_property_bj_witness(F, j) is not None


def check_witness(F: SetFamily, w: Witness, j: int = 2) -> bool:
    """Verify a witness directly against the definitions.

    A single-set witness is checked as Property B (meets every set, contains
    none) and only makes sense for ``j == 2``.  Otherwise ``w`` must hold
    ``j`` mutually disjoint sets, each meeting every member of ``F``.
    """
    universe = (1 << F.ell) - 1
    if any(b & ~universe for b in w.sets):
        return False
    if w.single:
        if j != 2:
            return False
        (b,) = w.sets
        return all(s & b and s & ~b for s in F.sets)
    if len(w.sets) != j:
        return False
    seen = 0
    for b in w.sets:
        if b & seen:
            return False
        seen |= b
    return all(s & b for b in w.sets for s in F.sets)
