"""Pure-Python kernel implementations.

These are the reference semantics for the compiled backend in ``_native.pyx``:
every function here must produce bit-identical results to its native twin
(same floating-point operations in the same order), so results never depend
on which backend was importable.
"""

from __future__ import annotations

BACKEND = "pure"


def w1_accumulate(p_mass, q_mass, gaps) -> float:
    """Closed-form 1-D transport cost: sum |cdf_p - cdf_q| * gap.

    ``p_mass``/``q_mass`` are point masses aligned on a merged sorted support
    of size n; ``gaps`` holds the n-1 consecutive support differences.
    """
    total = 0.0
    cp = 0.0
    cq = 0.0
    for k in range(len(gaps)):
        cp += p_mass[k]
        cq += q_mass[k]
        total += abs(cp - cq) * gaps[k]
    return total


def ks_statistic(a, b) -> float:
    """Sup-norm gap between the empirical CDFs of two sorted samples."""
    n = len(a)
    m = len(b)
    i = 0
    j = 0
    d = 0.0
    while i < n and j < m:
        x = a[i] if a[i] <= b[j] else b[j]
        while i < n and a[i] == x:
            i += 1
        while j < m and b[j] == x:
            j += 1
        diff = abs(i / n - j / m)
        if diff > d:
            d = diff
    return d


def suffix_match_lengths(tokens) -> list:
    """Longest repeated-suffix length at each position.

    out[i] is the largest L such that the L tokens ending at i also occur
    ending at some other position j != i. Computed by running the classic
    upper-triangular correlative matrix one diagonal at a time (O(n^2) time,
    O(n) space): cell (i, j) extends cell (i-1, j-1) when tokens match.
    """
    n = len(tokens)
    out = [0] * n
    for d in range(1, n):
        run = 0
        for i in range(n - d):
            if tokens[i] == tokens[i + d]:
                run += 1
                if run > out[i]:
                    out[i] = run
            else:
                run = 0
    return out


def greedy_occurrences(tokens, start: int, length: int) -> list:
    """Leftmost non-overlapping occurrence starts of tokens[start:start+length]."""
    n = len(tokens)
    occs = []
    pos = 0
    while pos + length <= n:
        hit = True
        for k in range(length):
            if tokens[pos + k] != tokens[start + k]:
                hit = False
                break
        if hit:
            occs.append(pos)
            pos += length
        else:
            pos += 1
    return occs
