"""Regenerate the shipped direction-number file from scipy's Joe-Kuo table."""
import os
import sys

import numpy as np
import scipy.stats._sobol as _sobol

N_DIMS = int(sys.argv[1]) if len(sys.argv) > 1 else 64
OUT = os.path.join(os.path.dirname(__file__), "..", "src", "qmcanneal", "data", "sobol_dirnums.txt")

raw = np.load(os.path.join(os.path.dirname(_sobol.__file__), "_sobol_direction_numbers.npz"))
poly, vinit = raw["poly"], raw["vinit"]

with open(OUT, "w") as fh:
    fh.write("# Sobol direction numbers (Joe & Kuo, new-joe-kuo-6.21201), first %d dimensions.\n" % N_DIMS)
    fh.write("# columns: dim degree a m_1 ... m_degree\n")
    fh.write("# a encodes the interior coefficients of the primitive polynomial.\n")
    fh.write("# dim 1 is the identity generating matrix (van der Corput, base 2).\n")
    fh.write("1 0 0\n")
    for j in range(1, N_DIMS):
        p = int(poly[j])
        deg = p.bit_length() - 1
        a = (p >> 1) & ((1 << (deg - 1)) - 1)
        ms = " ".join(str(int(m)) for m in vinit[j, :deg])
        fh.write("%d %d %d %s\n" % (j + 1, deg, a, ms))
