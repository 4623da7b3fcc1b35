"""A miniature benchmark batch with the statistical report.

The command line drives the same machinery: a cross product of problems,
dimensions and algorithms, repeated runs with derived seeds, one trace CSV
per run, a summary JSON per batch, and an aligned-ranks comparison whenever
at least two algorithms meet at least two problems.  Everything is
deterministic, so rerunning a batch reproduces the files byte for byte.
"""

import json
import tempfile
from pathlib import Path

from ppsde.cli import ExperimentSpec, execute

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "bench"
    spec = ExperimentSpec(
        problems=(("P1-sphere-shifted", 3), ("P2-active-linear", 3),
                  ("P4-disconnected", 3)),
        algorithms=("pps-de", "sf-de"),
        runs=3,
        base_seed=0,
        out_dir=str(out),
        overrides={"max_fes": 9000},
        workers=1,
    )
    code = execute(spec)
    print()
    print("exit code:", code)
    print("files:", ", ".join(sorted(p.name for p in out.iterdir())[:6]), "...")
    print()

    report = json.loads((out / "friedman.json").read_text())
    print("aligned-ranks comparison over the", len(report["problems"]),
          "problem instances:")
    for algo, rank in report["avg_ranks"].items():
        print(f"  {algo:>8}: average rank {rank:.2f}")
    print(f"  statistic {report['statistic']:.3f}, "
          f"p = {report['p_value']:.4f}, "
          f"significant at 0.05: {report['significant_at_0.05']}")
    print()
    print("lower rank is better; the push-pull variant should lead on the")
    print("disconnected problem, which dominates the comparison at this")
    print("tiny budget")
