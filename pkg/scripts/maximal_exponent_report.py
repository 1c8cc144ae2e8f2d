#!/usr/bin/env python
"""Compare the rectangle-maximal split minimum with its stated envelope.

Prints, for d = 2 and gamma = 1, the numeric minimum Z(p), the closed-form
envelope, and the local log-log growth exponent of each over p in [2, 64].
The two agree at p = 1 and separate for larger p; this report shows by how
much, without asserting either as the other.
"""

from __future__ import annotations

import math

import numpy as np

from glscalc.calculus import maximal_envelope, maximal_split_min


def main() -> None:
    gamma, d = 1.0, 2
    ps = np.geomspace(2.0, 64.0, 13)
    rows = [(p, maximal_split_min(gamma, d, p)[0], maximal_envelope(gamma, d, p))
            for p in ps]
    print("p\tnumeric_min\tenvelope\tslope_numeric\tslope_envelope")
    for i, (p, z, e) in enumerate(rows):
        if 0 < i:
            p0, z0, e0 = rows[i - 1]
            sz = (math.log(z) - math.log(z0)) / (math.log(p) - math.log(p0))
            se = (math.log(e) - math.log(e0)) / (math.log(p) - math.log(p0))
            print(f"{p:.6g}\t{z:.6g}\t{e:.6g}\t{sz:.4f}\t{se:.4f}")
        else:
            print(f"{p:.6g}\t{z:.6g}\t{e:.6g}\t\t")


if __name__ == "__main__":
    main()
