"""Serve classifications over the line-delimited JSON protocol, then
attack the context store and measure recovery.

Run:  python3 demos/04_server_and_robustness.py
"""

import json

import numpy as np

from phishguard.datasets import Dataset
from phishguard.features import CANONICAL_FEATURES
from phishguard.models import train_linear
from phishguard.robustness import AttackSpec, STRATEGIES, report_table, run_strategy
from phishguard.server import PcsConfig, PhishingServer

rng = np.random.default_rng(0)
X = rng.choice([-1, 0, 1], size=(500, 23)).astype(float)
weights = np.zeros(23)
weights[:8] = rng.uniform(0.8, 2.0, size=8)
y = (X @ weights + rng.normal(0, 1, size=500) > 0).astype(int)
ds = Dataset(X, y, CANONICAL_FEATURES, tuple(["UCI"] * 500))
model = train_linear(ds)

# --- 1. the tool protocol, one line in, one line out ----------------------
server = PhishingServer(model, pcs=PcsConfig(ds, k=5, threshold=0.5))
for request in [
    {"id": "1", "tool": "server_info"},
    {"id": "2", "tool": "classify_url",
     "arguments": {"url": "http://secure-login.bit.ly//x@evil.com"}},
    {"id": "3", "tool": "classify_url", "arguments": {"url": "ht!tp://"}},
]:
    response = json.loads(server.handle_line(json.dumps(request)))
    print(f"request {request['id']}: {json.dumps(response)[:120]}...")

print(f"\naudit log holds {len(server.audit_log)} sealed context(s); "
      f"digest of the first: {server.audit_log[0].seal_digest()[:16]}...")

# --- 2. contaminate contexts and compare mitigation strategies ------------
spec = AttackSpec(contamination_rate=0.3, delta=1.0, seed=0)
pcs = PcsConfig(ds, k=5, threshold=0.5)
rows = {
    name: run_strategy(ds, model, name, spec, pcs=pcs, n_contexts=200)
    for name in STRATEGIES
}
print("\nrobustness report (CIS: context integrity, APF: attack")
print("persistence, MRE: mitigation recovery, CSI: score stability):")
print(report_table(rows))
print("\nisolation refuses foreign state, so nothing persists and there")
print("is no mitigation pass to report; validation restores tampered")
print("contexts from sealed snapshots, recovering integrity exactly.")
