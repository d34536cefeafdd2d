"""Lower the peak sidelobe of a length-400 Frank sequence.

The l_p norm of the sidelobes approaches the PSL as p grows. A fixed p=100
run is compared with the adaptive schedule p = 2, 4, ..., 8192.

Run:  python3 demos/03_peak_sidelobe.py   (about 20 s)
"""
from seqforge import SolverConfig, autocorrelation, frank, psl, run_solver

print(f"Frank(400) PSL = {psl(autocorrelation(frank(20))):.4f}")

for p, iters in ((10, 5000), (100, 20000)):
    cfg = SolverConfig(method="mm-psl", N=400, p=p, max_iter=iters, rel_tol=1e-300,
                       accelerate=True, init="frank")
    seq, rec = run_solver(cfg)
    print(f"fixed p={p:<5} {rec.iterations:>6} iterations  PSL = {psl(autocorrelation(seq)):.4f}")

cfg = SolverConfig(method="mm-psl-adaptive", N=400, max_iter=2000, accelerate=True, init="frank")
seq, rec = run_solver(cfg)
print(f"adaptive p     {rec.iterations:>6} iterations  PSL = {psl(autocorrelation(seq)):.4f}")
