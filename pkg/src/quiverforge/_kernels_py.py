"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Signatures and results are identical; the compiled module is preferred at
import time when it is available.
"""
import numpy as np

BACKEND = "python"


def normal_form_counts(n_vertices, n_second, tails, heads, kinds, factor_edge,
                       first_ids, second_ids, source, max_len):
    tails = [int(x) for x in tails]
    heads = [int(x) for x in heads]
    kinds = [int(x) for x in kinds]
    factor_edge = [int(x) for x in factor_edge]
    out = [[] for _ in range(n_vertices)]
    for e, t in enumerate(tails):
        out[t].append(e)
    counts = np.zeros((n_vertices, max_len + 1), dtype=np.int64)
    seen = set()
    # stack entries: (vertex, first-factor word, second-factor word)
    stack = [(source, (), ())]
    while stack:
        v, first, second = stack.pop()
        key = (first, second)
        if key not in seen:
            seen.add(key)
            counts[v, len(first) + len(second)] += 1
        if len(first) + len(second) == max_len:
            continue
        for e in out[v]:
            if kinds[e] == 0:
                stack.append((heads[e], first + (factor_edge[e],), second))
            else:
                stack.append((heads[e], first, second + (factor_edge[e],)))
    return counts


def scan_closed_subsets(succ_masks, weights, n):
    """Scan proper nonempty subsets of ``range(n)`` closed under ``succ_masks``.

    The score of a subset ``S`` is ``w(S) * n - w(all) * |S|``; positive means
    its slope exceeds the total slope.  Returns ``(best_score, best_mask,
    zero_mask)`` where ``best_mask`` is the first subset of maximal score and
    ``zero_mask`` the first subset of score zero (``-1`` when absent).
    """
    succ = [int(x) for x in succ_masks]
    w = [int(x) for x in weights]
    total = sum(w)
    full = (1 << n) - 1
    best_score, best_mask, zero_mask = 0, -1, -1
    for mask in range(1, full):
        closed = True
        weight = 0
        size = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                if succ[i] & ~mask:
                    closed = False
                    break
                weight += w[i]
                size += 1
            m >>= 1
            i += 1
        if not closed:
            continue
        score = weight * n - total * size
        if best_mask < 0 or score > best_score:
            best_score, best_mask = score, mask
        if score == 0 and zero_mask < 0:
            zero_mask = mask
    return best_score, best_mask, zero_mask
