"""A scaled-down version of the headline experiment (about a minute).

The full acceptance study uses N in {256, 512, 1024} with 20 replicas; this
demo runs smaller lattices with fewer replicas to show the machinery and the
shrinking distance without the wait.
"""

from powergas.harness import ExperimentConfig, hydro_compare

config = ExperimentConfig(
    m=1.5,
    n_list=[128, 256, 512],
    times=[0.05],
    replicas=6,
    eps=1 / 16,
    seed=0,
    pde_cells=1024,
    workers=2,
    threshold=0.05,
)
report = hydro_compare(config)
print("distance between replica-averaged box densities and the matched reference")
for entry in report.per_n:
    print(f"  N={entry['n']:4d} (ell={entry['ell']}):"
          f"  {entry['distance'][0]:.4f} +- {entry['stderr'][0]:.4f}")
print("passed:", report.passed)
print("\nfull-size study: powergas hydro-compare --m 1.5 --n-list 256,512,1024"
      " --replicas 20 --threshold 0.03 --out report.json")
