"""Pure numpy versions of the lattice kernels."""
import numpy as np

_CHUNK_CELLS = 1 << 20


def ratio_lattice_max(p, bs, ss):
    """Max of the two-point ratio over ``b`` in ``bs`` and ``t = b + s``, ``s`` in ``ss``.

    With ``a = 1 - b`` and ``f = |.|^p`` the ratio is
    ``(a f(b) + b f(-a)) / (a |s|^p + b |1 + s|^p)``. Returns ``(best, i, j)``:
    per row the first minimizer of the denominator, across rows the first
    strict maximum.
    """
    bs = np.ascontiguousarray(bs, dtype=np.float64)
    ss = np.ascontiguousarray(ss, dtype=np.float64)
    u = np.abs(ss) ** p
    v = np.abs(1.0 + ss) ** p
    rows = max(1, _CHUNK_CELLS // max(1, ss.size))
    best, bi, bj = -1.0, -1, -1
    for start in range(0, bs.size, rows):
        b = bs[start:start + rows]
        a = 1.0 - b
        num = a * b**p + b * a**p
        den = a[:, None] * u[None, :] + b[:, None] * v[None, :]
        jmin = np.argmin(den, axis=1)
        ratio = num / den[np.arange(b.size), jmin]
        i = int(np.argmax(ratio))
        if ratio[i] > best:
            best, bi, bj = float(ratio[i]), start + i, int(jmin[i])
    return best, bi, bj


def central_moment_ratios(xs, ws, counts, p):
    """Row-wise ``E|X - EX|^p / E|X|^p`` for padded atom/weight arrays.

    Padding entries must carry zero weight.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ws = np.asarray(ws, dtype=np.float64)
    mean = np.sum(ws * xs, axis=1, keepdims=True)
    num = np.sum(ws * np.abs(xs - mean) ** p, axis=1)
    den = np.sum(ws * np.abs(xs) ** p, axis=1)
    return num / den
