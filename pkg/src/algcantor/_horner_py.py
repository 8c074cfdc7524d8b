"""Pure-Python interval Horner kernel.

Every variable ``x_i`` ranges over ``[a_i/d_i, b_i/d_i]`` with integer ``a_i, b_i``
and a positive integer ``d_i``.  The polynomial is evaluated over the integers,
scaled by ``D = prod d_i**E_i`` where ``E_i`` is the largest exponent of ``x_i``;
the caller divides the returned pair by ``D``.  No gcd work happens inside the
loop, which is what makes this cheaper than ``Fraction`` arithmetic.

A plan is the nested Horner form of the polynomial: at variable ``i`` a node
is a tuple of ``E_i + 1`` children (coefficient of ``x_i**k`` at index ``k``),
``None`` for a vanishing child, and a plain ``int`` once all variables are
consumed.  ``_horner_c.pyx`` is the compiled twin (it adds sign fast paths
for nonnegative variable ranges but must return identical pairs).
"""


def _eval(node, i, n, degs, lo, hi, den):
    if node is None:
        return 0, 0
    if i == n:
        return node, node
    e = degs[i]
    a = lo[i]
    b = hi[i]
    d = den[i]
    acc_lo, acc_hi = _eval(node[e], i + 1, n, degs, lo, hi, den)
    scale = 1
    for k in range(e - 1, -1, -1):
        p1 = acc_lo * a
        p2 = acc_lo * b
        p3 = acc_hi * a
        p4 = acc_hi * b
        acc_lo = min(p1, p2, p3, p4)
        acc_hi = max(p1, p2, p3, p4)
        scale *= d
        child = node[k]
        if child is not None:
            q_lo, q_hi = _eval(child, i + 1, n, degs, lo, hi, den)
            acc_lo += q_lo * scale
            acc_hi += q_hi * scale
    return acc_lo, acc_hi


def horner_enclosure(plan, degs, lo, hi, den):
    """Return integer ``(L, H)`` bounding the scaled polynomial over the box."""
    return _eval(plan, 0, len(degs), degs, lo, hi, den)
