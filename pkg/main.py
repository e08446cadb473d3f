#!/usr/bin/env python3
"""
scatter-lens command-line entry point.

Direct and inverse scattering for the matrix Schrödinger operator on the
half-line with a selfadjoint boundary condition at the origin:

1. direct: potential Q and boundary matrix U → scattering matrix S(k), Û and
   normalised bound states
2. inverse: scattering data → Q and U through the Marchenko equation
3. roundtrip: both, with an error report
4. stargraph: diagonal potentials inverted edge by edge
5. selftest: analytic cases with known answers

Run ``python main.py --help`` or the installed ``scatter-lens`` script.
"""

import sys

from scatter_lens.cli import main

if __name__ == "__main__":
    sys.exit(main())
