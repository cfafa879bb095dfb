"""Replaying a failure trace against a 15-node cluster.

Three groups of five nodes.  Node 5 is rebuilt cheaply inside its group,
the pair 0, 1 needs a local decode, and four losses in the last group need
the global parities.
"""
import json

from pmds_regen.pmds2 import build_pmds2
from pmds_regen.verify import simulate_cluster

code = build_pmds2(mu=3, n=5, r=2, d=4)
events = [{"event": "fail", "node": k} for k in (0, 1, 5, 10, 11, 12, 13)] + [{"event": "repair"}]
report = simulate_cluster(code, events)
for action in report["events"][-1]["actions"]:
    print(json.dumps(action, default=str))
print(f"recovered={report['recovered']} total traffic={report['total_traffic']} symbols")

# one failure too many
events = [{"event": "fail", "node": k} for k in (10, 11, 12, 13, 14, 0, 1, 2)] + [{"event": "repair"}]
print("data loss at event", simulate_cluster(code, events)["data_loss"])
