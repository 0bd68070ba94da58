# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gray-code scan kernels.

Mirrors ``reference`` exactly: same enumeration order, same tie rule, same
results.  Patterns are handled as arrays of 64-bit words so the cell count is
not limited to one machine word.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc

ctypedef unsigned long long u64
ctypedef long long i64


cdef struct CellLists:
    int *starts   # len nrows+1
    int *cells    # flattened cell indices


cdef int _fill_cell_lists(object rows, int ncells, CellLists *out) except -1:
    cdef int nrows = len(rows)
    cdef int total = 0
    cdef object r
    for r in rows:
        total += bin(r).count("1")
    out.starts = <int *> PyMem_Malloc((nrows + 1) * sizeof(int))
    out.cells = <int *> PyMem_Malloc(max(total, 1) * sizeof(int))
    if out.starts == NULL or out.cells == NULL:
        raise MemoryError()
    cdef int pos = 0, i, c
    for i in range(nrows):
        out.starts[i] = pos
        r = rows[i]
        for c in range(ncells):
            if (r >> c) & 1:
                out.cells[pos] = c
                pos += 1
    out.starts[nrows] = pos
    return 0


cdef void _free_cell_lists(CellLists *cl):
    PyMem_Free(cl.starts)
    PyMem_Free(cl.cells)


cdef inline int _ctz(u64 x):
    cdef int c = 0
    while not (x & 1):
        x >>= 1
        c += 1
    return c


cdef u64 *_pattern_words(object bits, int nwords) except NULL:
    cdef u64 *words = <u64 *> PyMem_Malloc(nwords * sizeof(u64))
    if words == NULL:
        raise MemoryError()
    cdef int w
    for w in range(nwords):
        words[w] = <u64> ((bits >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
    return words


cdef object _words_to_int(u64 *words, int nwords):
    cdef object out = 0
    cdef int w
    for w in range(nwords):
        out |= (<object> words[w]) << (64 * w)
    return out


cdef bint _lex_less(u64 *a, u64 *b, u64 *tie, int nwords):
    # bit-string order on (x ^ tie), bit 0 first
    cdef int w
    cdef u64 xa, xb, d, low
    for w in range(nwords):
        xa = a[w] ^ tie[w]
        xb = b[w] ^ tie[w]
        d = xa ^ xb
        if d:
            low = d & (~d + 1)
            return (xa & low) == 0
    return False


def min_affine_weight(start, rows, weights, tie_mask=0):
    """Compiled twin of ``reference.min_affine_weight``."""
    cdef int ncells = len(weights)
    cdef int nwords = (ncells + 63) // 64
    if nwords == 0:
        nwords = 1
    cdef int nrows = len(rows)
    if nrows > 30:
        raise ValueError("affine scan limited to 2**30 points")

    cdef CellLists cl
    _fill_cell_lists(rows, ncells, &cl)
    cdef i64 *w_arr = <i64 *> PyMem_Malloc(max(ncells, 1) * sizeof(i64))
    cdef u64 *cur = _pattern_words(start, nwords)
    cdef u64 *best = _pattern_words(start, nwords)
    cdef u64 *tie = _pattern_words(tie_mask, nwords)
    if w_arr == NULL:
        raise MemoryError()
    cdef int i
    for i in range(ncells):
        w_arr[i] = weights[i]

    cdef i64 w = 0
    for i in range(ncells):
        if (cur[i >> 6] >> (i & 63)) & 1:
            w += w_arr[i]
    cdef i64 best_w = w
    cdef u64 t, steps = (<u64> 1) << nrows
    cdef int idx, c, j
    try:
        for t in range(1, steps):
            idx = _ctz(t)
            for j in range(cl.starts[idx], cl.starts[idx + 1]):
                c = cl.cells[j]
                cur[c >> 6] ^= (<u64> 1) << (c & 63)
                if (cur[c >> 6] >> (c & 63)) & 1:
                    w += w_arr[c]
                else:
                    w -= w_arr[c]
            if w < best_w or (w == best_w and _lex_less(cur, best, tie, nwords)):
                best_w = w
                for j in range(nwords):
                    best[j] = cur[j]
        return int(best_w), _words_to_int(best, nwords)
    finally:
        _free_cell_lists(&cl)
        PyMem_Free(w_arr)
        PyMem_Free(cur)
        PyMem_Free(best)
        PyMem_Free(tie)


def min_ratio_scan(u_rows, u_img_rows, z_rows, weights_lo, weights_hi):
    """Compiled twin of ``reference.min_ratio_scan``."""
    cdef int nlo = len(weights_lo)
    cdef int nhi = len(weights_hi)
    cdef int nu = len(u_rows)
    cdef int nz = len(z_rows)
    if nu == 0:
        raise ValueError("no nonzero cosets to scan")
    if nu > 30 or nz > 30:
        raise ValueError("ratio scan limited to 2**30 points per layer")

    cdef CellLists ucl, icl, zcl
    _fill_cell_lists(u_rows, nlo, &ucl)
    _fill_cell_lists(u_img_rows, nhi, &icl)
    _fill_cell_lists(z_rows, nlo, &zcl)

    cdef int nwlo = (nlo + 63) // 64
    if nwlo == 0:
        nwlo = 1
    cdef int nwhi = (nhi + 63) // 64
    if nwhi == 0:
        nwhi = 1
    cdef u64 *cur_lo = _pattern_words(0, nwlo)
    cdef u64 *cur_hi = _pattern_words(0, nwhi)
    cdef i64 *wlo_arr = <i64 *> PyMem_Malloc(max(nlo, 1) * sizeof(i64))
    cdef i64 *whi_arr = <i64 *> PyMem_Malloc(max(nhi, 1) * sizeof(i64))
    if wlo_arr == NULL or whi_arr == NULL:
        raise MemoryError()
    cdef int i
    for i in range(nlo):
        wlo_arr[i] = weights_lo[i]
    for i in range(nhi):
        whi_arr[i] = weights_hi[i]

    cdef i64 w_lo = 0, w_hi = 0, min_w, best_num = -1, best_den = 1
    cdef u64 t, s
    cdef u64 outer_steps = (<u64> 1) << nu
    cdef u64 inner_steps = (<u64> 1) << nz
    cdef int idx, c, j

    try:
        for t in range(1, outer_steps):
            idx = _ctz(t)
            for j in range(ucl.starts[idx], ucl.starts[idx + 1]):
                c = ucl.cells[j]
                cur_lo[c >> 6] ^= (<u64> 1) << (c & 63)
                if (cur_lo[c >> 6] >> (c & 63)) & 1:
                    w_lo += wlo_arr[c]
                else:
                    w_lo -= wlo_arr[c]
            for j in range(icl.starts[idx], icl.starts[idx + 1]):
                c = icl.cells[j]
                cur_hi[c >> 6] ^= (<u64> 1) << (c & 63)
                if (cur_hi[c >> 6] >> (c & 63)) & 1:
                    w_hi += whi_arr[c]
                else:
                    w_hi -= whi_arr[c]
            min_w = w_lo
            if nz:
                for s in range(1, inner_steps):
                    idx = _ctz(s)
                    for j in range(zcl.starts[idx], zcl.starts[idx + 1]):
                        c = zcl.cells[j]
                        cur_lo[c >> 6] ^= (<u64> 1) << (c & 63)
                        if (cur_lo[c >> 6] >> (c & 63)) & 1:
                            w_lo += wlo_arr[c]
                        else:
                            w_lo -= wlo_arr[c]
                    if w_lo < min_w:
                        min_w = w_lo
                # a full Gray walk ends one top-row flip away from its start
                for j in range(zcl.starts[nz - 1], zcl.starts[nz]):
                    c = zcl.cells[j]
                    cur_lo[c >> 6] ^= (<u64> 1) << (c & 63)
                    if (cur_lo[c >> 6] >> (c & 63)) & 1:
                        w_lo += wlo_arr[c]
                    else:
                        w_lo -= wlo_arr[c]
            if best_num < 0 or w_hi * best_den < best_num * min_w:
                best_num = w_hi
                best_den = min_w
        return int(best_num), int(best_den)
    finally:
        _free_cell_lists(&ucl)
        _free_cell_lists(&icl)
        _free_cell_lists(&zcl)
        PyMem_Free(cur_lo)
        PyMem_Free(cur_hi)
        PyMem_Free(wlo_arr)
        PyMem_Free(whi_arr)
