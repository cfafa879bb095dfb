"""Partial-MDS array codes with regenerating local and global repair.

Modules:

* :mod:`~pmds_regen.gf`, :mod:`~pmds_regen.matrix`: finite fields and dense linear algebra.
* :mod:`~pmds_regen.mds`, :mod:`~pmds_regen.gabidulin`, :mod:`~pmds_regen.yebarg`: scalar and MSR building blocks.
* :mod:`~pmds_regen.pmds2`, :mod:`~pmds_regen.universal`, :mod:`~pmds_regen.globalmsr`: the PMDS constructions.
* :mod:`~pmds_regen.verify`: certifiers, repair checks and a cluster simulator.
* :mod:`~pmds_regen.sizes`: exact field-size and subpacketization formulas.
"""

from .arrays import ArrayCode, ArrayCodeword, ErasurePattern, RepairTranscript, cut_set_bound
from .errors import *  # noqa: F401,F403
from .gabidulin import GabidulinCode, gabidulin_code, locator_transform
from .gf import GF, FieldElement, GaloisField, conway_polynomial, smallest_prime_power_at_least
from .globalmsr import (GlobalMsrPmdsCode, GroupingTable, SkewYeBargCode, build_global_msr_pmds,
                        build_grouping_matrix, build_skew_yebarg, find_grouping, global_repair,
                        puncture_and_certify_global)
from .matrix import CodeMatrix
from .mds import LinearCode, certify_mds, erasure_decode, minimum_distance, random_mds_code, rs_code
from .pmds2 import LocalMsrPmds2Code, blaum_row_code, build_pmds2, global_decode, local_repair
from .registry import build_code, code_from_descriptor
from .sizes import (ParamPoint, PowerInt, check_comparison_theorem, emit_csv, field_size_bounds,
                    subpacketization)
from .universal import (LocalMsrUniversalPmdsCode, UniversalFamily, build_universal_msr_pmds,
                        family_apply, family_code, find_alpha_set)
from .verify import (Certificate, Counterexample, certify_msr_bandwidth, certify_pmds, certify_sd,
                     simulate_cluster)
from .yebarg import YeBargCode, build_yebarg, repair_node

__version__ = "0.1.0"
