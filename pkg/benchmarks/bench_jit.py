"""Compiled kernels vs the interpreted fallback on the same search workloads.

Each backend runs in its own interpreter (the fallback is chosen by
HAMLAB_NO_JIT=1 at import time).  Both must report identical node counts.

    python3 benchmarks/bench_jit.py            # default workloads
    python3 benchmarks/bench_jit.py --quick    # smaller, for smoke runs
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import hamlab
from hamlab import InstanceSpec, SearchConfig, solve

specs, cfg_kw = json.loads(sys.argv[1])
# warm-up: loads (or compiles) the kernels outside the timed region
solve(hamlab.graph.cycle_graph(5))
out = []
for text in specs:
    g = InstanceSpec.parse(text).build()
    t0 = time.perf_counter()
    res, stats = solve(g, SearchConfig(**cfg_kw))
    out.append({"spec": text, "outcome": res.kind.value, "nodes": stats.nodes,
                "seconds": time.perf_counter() - t0})
print(json.dumps({"jit": hamlab.JIT_ENABLED, "runs": out}))
"""

WORKLOADS = {
    "iccs": (["iccs:k=2,s=6,seed=%d" % s for s in range(1, 6)],
             {"restarts": False, "check_components": True, "check_cutpoints": True}),
    "gnm": (["gnmk:n=300,k=1.2,seed=%d" % s for s in range(1, 5)], {}),
    "knight": (["knight:a=1,b=2,rows=7,cols=7", "knight:a=2,b=3,rows=6,cols=8"],
               {"node_limit": 20_000}),
}
QUICK = {
    "iccs": (["iccs:k=2,s=6,seed=1"], WORKLOADS["iccs"][1]),
    "gnm": (["gnmk:n=150,k=1.2,seed=1"], {}),
}


def run(specs, cfg_kw, no_jit):
    env = dict(os.environ)
    env.pop("HAMLAB_NO_JIT", None)
    if no_jit:
        env["HAMLAB_NO_JIT"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, json.dumps([specs, cfg_kw])],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    loads = QUICK if args.quick else WORKLOADS

    print(f"{'workload':10s} {'nodes':>10s} {'jit s':>9s} {'numpy s':>9s} {'speedup':>8s}")
    ok = True
    for name, (specs, cfg_kw) in loads.items():
        fast = run(specs, cfg_kw, no_jit=False)
        slow = run(specs, cfg_kw, no_jit=True)
        same = [(a["outcome"], a["nodes"]) for a in fast["runs"]] == \
               [(b["outcome"], b["nodes"]) for b in slow["runs"]]
        ok &= same
        nodes = sum(r["nodes"] for r in fast["runs"])
        tf = sum(r["seconds"] for r in fast["runs"])
        ts = sum(r["seconds"] for r in slow["runs"])
        flag = "" if same else "  MISMATCH"
        print(f"{name:10s} {nodes:10d} {tf:9.3f} {ts:9.3f} {ts / max(tf, 1e-9):7.1f}x{flag}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
