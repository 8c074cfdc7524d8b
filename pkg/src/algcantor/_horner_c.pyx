# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_horner_py``; same plan layout, same results."""


cdef tuple _eval(object node, Py_ssize_t i, Py_ssize_t n, list degs, list lo, list hi, list den):
    cdef Py_ssize_t e, k
    cdef object a, b, d, acc_lo, acc_hi, p1, p2, p3, p4, scale, child, q_lo, q_hi
    if node is None:
        return (0, 0)
    if i == n:
        return (node, node)
    e = degs[i]
    a = lo[i]
    b = hi[i]
    d = den[i]
    acc_lo, acc_hi = _eval((<tuple>node)[e], i + 1, n, degs, lo, hi, den)
    scale = 1
    for k in range(e - 1, -1, -1):
        if a >= 0:
            if acc_lo >= 0:
                p1 = acc_lo * a
                p4 = acc_hi * b
                acc_lo, acc_hi = p1, p4
            elif acc_hi <= 0:
                p1 = acc_lo * b
                p4 = acc_hi * a
                acc_lo, acc_hi = p1, p4
            else:
                acc_lo, acc_hi = acc_lo * b, acc_hi * b
        else:
            p1 = acc_lo * a
            p2 = acc_lo * b
            p3 = acc_hi * a
            p4 = acc_hi * b
            acc_lo = min(p1, p2, p3, p4)
            acc_hi = max(p1, p2, p3, p4)
        scale *= d
        child = (<tuple>node)[k]
        if child is not None:
            q_lo, q_hi = _eval(child, i + 1, n, degs, lo, hi, den)
            acc_lo += q_lo * scale
            acc_hi += q_hi * scale
    return (acc_lo, acc_hi)


def horner_enclosure(plan, list degs, list lo, list hi, list den):
    return _eval(plan, 0, len(degs), degs, lo, hi, den)
