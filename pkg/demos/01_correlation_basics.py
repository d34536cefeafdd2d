"""Autocorrelation and sidelobe metrics of the classical polyphase codes.

Run:  python3 demos/01_correlation_basics.py
"""
from seqforge import autocorrelation, frank, golomb, isl, psl, random_unimodular
from seqforge.seqlib import barker13

# The Barker-13 code is the textbook low-sidelobe sequence: every sidelobe has magnitude <= 1.
r = autocorrelation(barker13())
print(f"Barker-13   PSL={psl(r):.3f}  ISL={isl(r):.1f}")

# Frank and Golomb codes keep PSL near sqrt(N); a random sequence does far worse.
for M in (10, 30, 100):
    N = M * M
    print(f"N={N:>6}  Frank PSL={psl(autocorrelation(frank(M))):7.3f}  "
          f"Golomb PSL={psl(autocorrelation(golomb(N))):7.3f}  "
          f"random PSL={psl(autocorrelation(random_unimodular(N, 0))):8.3f}")
