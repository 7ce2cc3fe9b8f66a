"""Constrained Connectivity and iBGP route-reflection overlay toolkit."""

from .generators import (GadgetParams, HittingSetInstance, MinRepInstance, UniqueGamesInstance,
                         gen_hitting_gadget, gen_laminar_hierarchical, gen_minrep_cc, gen_random_metric,
                         gen_unique_games_gap, synthetic_pop_topology)
from .hierarchical import PairClassification, check_symmetric_hierarchical, classify_pairs, hierarchical_greedy
from .ibgp import (RouteAssignment, VerificationReport, check_hot_potato, derive_ibgp_safe_sets,
                   simulate_ibgp, verify_safe_paths)
from .instance import (CCError, DisconnectedTopologyError, FractionalSolution, InfeasibleInstanceError,
                       Overlay, SafeSetSystem, StrictMetric, Topology, ValidationReport, all_pairs_distances,
                       validate_instance)
from .lp import LpProgram, build_flow_lp, round_and_sample, solve_lp
from .oracle import OracleBudget, OracleOutOfRange, oracle_min
from .primal_dual import DualCertificate, Moat, dual_lower_bound, pd_with_sampling, primal_dual_solve
from .report import SolveReport, write_report
from .sampling import SamplePlan, edge_sample, star_sample

__version__ = "0.1.0"
