"""In-tree clustering: points link to their nearest lower-potential
neighbor, undesired inter-cluster edges get cut by one of five methods,
and roots are found by parallel successor doubling."""

from .cutting import (ClickPoint, DecisionGraphPoint, cut_edge, cut_k_longest,
                      decision_graph, identify_edge_by_click, int_dcc_cut_select,
                      k_dcc_cut, labels_separated, supervised_cut)
from .data_model import (ABSENT, AttributeSpec, ClusterAssignment, CutRecord,
                         Dataset, DatasetFormatError, DistanceMatrix, InTree,
                         PotentialField, SupervisionSet, is_absent, load_dataset,
                         validate_distance_matrix, write_dataset)
from .intree import Violation, build_intree, restore_edge, undo_last_cut, \
    validate_intree
from .metrics import (categorical_distance_matrix, distance_matrix_for,
                      euclidean_distance_matrix, load_distance_cache,
                      mixed_distance_matrix, save_distance_cache)
from .pipeline import (AUTO, EvalReport, PermutationStats, RunConfig, SweepRow,
                       evaluate, merge_by_label, partition_disagreement,
                       permutation_experiment, run, sample_supervision,
                       supervised_sweep)
from .potential import auto_sigma, compute_potentials, potential_difference
from .rootfind import (CycleError, compute_tree_height, find_root_sequential,
                       find_roots_doubling, merge_singletons)

__version__ = "0.1.0"
