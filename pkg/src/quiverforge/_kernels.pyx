# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels: tensor-path normal-form counting and thin subset scans.

Mirrors ``_kernels_py``; the Python wrapper decides when a problem fits the
64-bit encodings used here and falls back otherwise.
"""
import numpy as np
cimport numpy as cnp
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cnp.import_array()

BACKEND = "cython"


def normal_form_counts(Py_ssize_t n_vertices, Py_ssize_t n_second,
                       const long long[:] tails, const long long[:] heads,
                       const long long[:] kinds, const long long[:] factor_edge,
                       const long long[:, :] first_ids, const long long[:, :] second_ids,
                       long long source, Py_ssize_t max_len):
    cdef Py_ssize_t n_edges = tails.shape[0]
    cdef Py_ssize_t e, depth, k, v
    cdef long long base = 2
    for e in range(n_edges):
        if factor_edge[e] + 2 > base:
            base = factor_edge[e] + 2
    # key digits: leading 1, first word, separator 0, second word
    cdef double bound = 1.0
    for k in range(max_len + 2):
        bound *= base
    if bound >= 9.0e18:
        raise OverflowError("normal-form key does not fit in 64 bits")

    # CSR adjacency by tail
    cdef vector[long long] start
    start.assign(n_vertices + 1, 0)
    cdef vector[long long] adj
    adj.assign(n_edges, 0)
    for e in range(n_edges):
        start[tails[e] + 1] += 1
    for v in range(n_vertices):
        start[v + 1] += start[v]
    cdef vector[long long] fill
    fill.assign(n_vertices, 0)
    for e in range(n_edges):
        v = tails[e]
        adj[start[v] + fill[v]] = e
        fill[v] += 1

    counts_np = np.zeros((n_vertices, max_len + 1), dtype=np.int64)
    cdef long long[:, :] counts = counts_np
    cdef unordered_set[long long] seen
    cdef vector[long long] word
    word.assign(max_len + 1, 0)
    cdef vector[long long] cursor
    cursor.assign(max_len + 2, 0)
    cdef vector[long long] at
    at.assign(max_len + 2, 0)
    cdef long long key, cur, nf, ns
    at[0] = source
    cursor[0] = start[source]
    depth = 0
    # visit root
    seen.insert(base * 1)  # leading 1 then separator
    counts[source, 0] += 1
    while depth >= 0:
        v = at[depth]
        if depth == max_len or cursor[depth] >= start[v + 1]:
            depth -= 1
            continue
        e = adj[cursor[depth]]
        cursor[depth] += 1
        word[depth] = e
        depth += 1
        at[depth] = heads[e]
        cursor[depth] = start[heads[e]]
        key = 1
        for k in range(depth):
            if kinds[word[k]] == 0:
                key = key * base + factor_edge[word[k]] + 1
        key = key * base
        for k in range(depth):
            if kinds[word[k]] != 0:
                key = key * base + factor_edge[word[k]] + 1
        if seen.find(key) == seen.end():
            seen.insert(key)
            counts[heads[e], depth] += 1
    return counts_np


def scan_closed_subsets(const long long[:] succ_masks, const long long[:] weights, int n):
    cdef long long total = 0
    cdef int i
    for i in range(n):
        total += weights[i]
    cdef long long full = (1LL << n) - 1
    cdef long long mask, m, weight, size, score
    cdef long long best_score = 0, best_mask = -1, zero_mask = -1
    cdef bint closed
    mask = 1
    while mask < full:
        closed = True
        weight = 0
        size = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                if succ_masks[i] & ~mask:
                    closed = False
                    break
                weight += weights[i]
                size += 1
            m >>= 1
            i += 1
        if closed:
            score = weight * n - total * size
            if best_mask < 0 or score > best_score:
                best_score = score
                best_mask = mask
            if score == 0 and zero_mask < 0:
                zero_mask = mask
        mask += 1
    return best_score, best_mask, zero_mask
