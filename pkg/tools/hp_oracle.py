"""Extended-precision anchors for the test suite.

Standalone: uses mpmath only and none of the library code. C_p is found
by bisection on the sign of d/db ln R(p, b) over (0, 1/2), using the
chain-rule derivative evaluated at 50 digits.

    python3 tools/hp_oracle.py > anchors.json
"""
import json

import mpmath as mp

mp.mp.dps = 50


def R(p, b):
    r = p - 1
    return (b**r + (1 - b) ** r) * (b ** (1 / r) + (1 - b) ** (1 / r)) ** r


def b_p(p, iters=160):
    p = mp.mpf(p)
    r = p - 1

    def d(b):
        # chain rule on ln R; only the sign is used
        a1 = (b ** (r - 1) - (1 - b) ** (r - 1)) / (b**r + (1 - b) ** r)
        a2 = (b ** (1 / r - 1) - (1 - b) ** (1 / r - 1)) / (b ** (1 / r) + (1 - b) ** (1 / r))
        return r * a1 + a2
    # ln R rises from b = 0 up to b_p and falls to the flat point 1/2
    # log-spaced probes: b_p sinks toward 0 as p approaches 1
    probe = [mp.mpf(10) ** (-k / mp.mpf(8)) / 2 for k in range(8 * 400, 0, -1)]
    probe.append(mp.mpf("0.5") - mp.mpf("1e-20"))
    # first sign change of the derivative from + to -
    for a, c in zip(probe, probe[1:]):
        if d(a) > 0 and d(c) <= 0:
            lo, hi = a, c
            break
    else:
        raise RuntimeError(f"no bracket at p = {p}")
    for _ in range(iters):
        mid = (lo + hi) / 2
        if d(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def C_p(p):
    return R(mp.mpf(p), b_p(p))


def t_b(p, b):
    p = mp.mpf(p)
    return b - 1 / (1 + ((1 - b) / b) ** (1 / (p - 1)))


def main():
    s7 = mp.sqrt(7)
    out = {
        "C_3_closed": (17 + 7 * s7) / 27,
        "b_3_closed": mp.mpf(1) / 2 - mp.sqrt(1 + 2 * s7) / 6,
        "t_3_closed": -mp.sqrt((13 * s7 - 34) / 2) / 3,
    }
    b3 = b_p(3)
    out["C_3"] = R(mp.mpf(3), b3)
    out["b_3"] = b3
    out["t_3"] = t_b(3, b3)
    out["C_1.5"] = C_p(mp.mpf("1.5"))
    out["C_1.001"] = C_p(mp.mpf("1.001"))
    out["C_4"] = C_p(4)
    out["R_5_0.2"] = R(mp.mpf(5), mp.mpf("0.2"))
    for p in (20, 40, 80, 160, 320):
        out[f"scaled_{p}"] = C_p(p) * mp.sqrt(8 * mp.e * p) / mp.mpf(2) ** p
    print(json.dumps({k: mp.nstr(v, 25) for k, v in out.items()}, indent=2))


if __name__ == "__main__":
    main()
