"""Two groups of four nodes, each group a Ye-Barg MSR code, with two global parities.

A single lost node is rebuilt from the three other nodes of its group while
downloading half of each helper.  Erasures beyond what one group can handle
are absorbed by the global parities.
"""
import numpy as np

from pmds_regen.pmds2 import build_pmds2, global_decode, local_repair
from pmds_regen.verify import certify_pmds

code = build_pmds2(mu=2, n=4, r=2, d=3)
print(f"field {code.field}, subpacketization {code.ell}, {code.length} nodes")

cert = certify_pmds(code, budget=None)
print(f"PMDS certificate: {bool(cert)} after {cert.checks} rank checks")

rng = np.random.default_rng(7)
word = code.encode(code.random_message(rng))

column, transcript = local_repair(code, word.erase([1]), 1)
print(f"node 1 rebuilt: {np.array_equal(column, word.data[:, 1])}")
print(f"downloaded {transcript.total} symbols from nodes {transcript.helpers}; "
      f"decoding from two full columns would cost {2 * code.ell}")

# two per group plus two more anywhere
lost = [0, 1, 4, 5, 2, 7]
print(f"erasing nodes {lost}: recovered = {global_decode(code, word.erase(lost), lost) == word}")
