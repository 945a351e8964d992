"""Factor a few composites end to end, printing the run record for each."""
import json

from qnet.measure import make_rng
from qnet.shor import run_factor_find

for N, seed in [(15, 1), (21, 0), (35, 1), (149573, 0)]:
    rec = run_factor_find(N, make_rng(seed))
    print(f"N={N}: factor {rec.factor} via {rec.backend}")
    print("   ", json.dumps(rec.to_json()))
