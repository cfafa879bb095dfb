"""One global layer that works for any choice of local MDS code.

The family map takes an ``[n, n-r]`` code over GF(8) and returns a PMDS code
over GF(8^4) whose groups span exactly that local code.  Swapping the local
code does not change the global rows.
"""
import numpy as np

from pmds_regen.gf import GF
from pmds_regen.matrix import rank_array
from pmds_regen.mds import random_mds_code
from pmds_regen.universal import (UniversalFamily, build_universal_msr_pmds, family_code,
                                  local_repair_expanded, scalar_pmds)
from pmds_regen.verify import certify_pmds

field = GF(2, 12, None, 3)
fam = UniversalFamily("gabidulin", field, mu=2, n=4, r=2, s=2)

for seed in (1, 2):
    local = random_mds_code(field.subfield, 4, 2, seed=seed)
    code = family_code(fam, local)
    group = code.G[:, :4]
    same_span = rank_array(field, np.vstack([group, field.embed(local.G)])) == rank_array(field, group)
    pmds = bool(certify_pmds(scalar_pmds(fam, local), budget=None))
    print(f"local code {local.H.tolist()}: group 0 spans it = {same_span}, PMDS = {pmds}")

# with Ye-Barg groups over the subfield, repair works on the GF(8) expansion
array_code = build_universal_msr_pmds(fam, n=4, r=2, d=3)
word = array_code.encode(array_code.random_message(np.random.default_rng(0)))
column, tr = local_repair_expanded(array_code, word.erase([6]), 6)
print(f"node 6 rebuilt: {np.array_equal(column, word.data[:, 6])}, "
      f"{tr.total} GF(8) symbols instead of {array_code.expansion_degree * 2 * array_code.ell}")
