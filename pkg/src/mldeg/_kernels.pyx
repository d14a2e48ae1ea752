# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled matroid kernels (bitmask bases, ground sets of at most 16 elements)."""
from libc.stdlib cimport malloc, calloc, free


cdef inline int _popcount(unsigned int x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef int _fill_rank(unsigned int* bases, Py_ssize_t nb, int n, signed char* rk) nogil:
    cdef unsigned int size = 1u << n
    cdef unsigned int x, y, low
    cdef Py_ssize_t k
    cdef signed char best, v
    cdef unsigned char* indep = <unsigned char*> calloc(size, 1)
    if indep == NULL:
        return -1
    for k in range(nb):
        indep[bases[k]] = 1
    x = size - 1
    while x > 0:
        if indep[x]:
            y = x
            while y:
                low = y & (~y + 1)
                indep[x ^ low] = 1
                y ^= low
        x -= 1
    rk[0] = 0
    for x in range(1, size):
        if indep[x]:
            rk[x] = <signed char> _popcount(x)
        else:
            best = 0
            y = x
            while y:
                low = y & (~y + 1)
                v = rk[x ^ low]
                if v > best:
                    best = v
                y ^= low
            rk[x] = best
    free(indep)
    return 0


cdef unsigned int* _to_buffer(bases, Py_ssize_t* nb):
    cdef Py_ssize_t m = len(bases)
    cdef unsigned int* buf = <unsigned int*> malloc((m if m > 0 else 1) * sizeof(unsigned int))
    cdef Py_ssize_t k = 0
    if buf == NULL:
        raise MemoryError()
    for b in bases:
        buf[k] = <unsigned int> b
        k += 1
    nb[0] = m
    return buf


def rank_table(bases, int n):
    if n < 0 or n > 16:
        raise ValueError("ground set must have at most 16 elements")
    cdef Py_ssize_t nb
    cdef unsigned int* buf = _to_buffer(bases, &nb)
    cdef unsigned int size = 1u << n
    cdef signed char* rk = <signed char*> malloc(size)
    cdef unsigned int x
    try:
        if rk == NULL or _fill_rank(buf, nb, n, rk) != 0:
            raise MemoryError()
        return [rk[x] for x in range(size)]
    finally:
        free(buf)
        free(rk)


def beta_crapo(bases, int n, int r):
    if n < 0 or n > 16:
        raise ValueError("ground set must have at most 16 elements")
    cdef Py_ssize_t nb
    cdef unsigned int* buf = _to_buffer(bases, &nb)
    cdef unsigned int size = 1u << n
    cdef signed char* rk = <signed char*> malloc(size)
    cdef unsigned int x
    cdef long total = 0
    try:
        if rk == NULL or _fill_rank(buf, nb, n, rk) != 0:
            raise MemoryError()
        with nogil:
            for x in range(size):
                if _popcount(x) & 1:
                    total -= rk[x]
                else:
                    total += rk[x]
        return -total if r & 1 else total
    finally:
        free(buf)
        free(rk)


def special_basis(bases, int n, int r):
    if n < 0 or n > 16:
        raise ValueError("ground set must have at most 16 elements")
    cdef Py_ssize_t nb, k
    cdef unsigned int* buf = _to_buffer(bases, &nb)
    cdef unsigned int size = 1u << n
    cdef unsigned char* isb = <unsigned char*> calloc(size, 1)
    cdef unsigned int b, best = 0xFFFFFFFFu
    cdef int i, j, ok
    try:
        if isb == NULL:
            raise MemoryError()
        for k in range(nb):
            isb[buf[k]] = 1
        for k in range(nb):
            b = buf[k]
            if b >= best:
                continue
            ok = 1
            for i in range(n):
                if not (b >> i) & 1:
                    continue
                for j in range(n):
                    if (b >> j) & 1:
                        continue
                    if not isb[(b ^ (1u << i)) | (1u << j)]:
                        ok = 0
                        break
                if not ok:
                    break
            if ok:
                best = b
        return -1 if best == 0xFFFFFFFFu else <long> best
    finally:
        free(buf)
        free(isb)


def beta_many(basis_lists, int n, int r):
    return [beta_crapo(bs, n, r) for bs in basis_lists]
