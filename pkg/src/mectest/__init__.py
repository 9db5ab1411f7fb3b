"""Membership testing of a hidden causal DAG in a Markov equivalence class
using a conditional-independence oracle."""

from .dsep import CiQuery, Oracle, d_separated, d_separated_moral
from .graphs import (
    CycleError,
    CyclicCompletion,
    Dag,
    GraphError,
    Pdag,
    UndirectedGraph,
    acyclic_completion,
    chain_components,
    is_chain_graph,
    max_in_degree,
    relatives,
    skeleton,
    topological_order,
    v_structures,
)
from .mec import (
    EssentialGraph,
    MecStats,
    clique_upstream_extension,
    consistent_extension,
    essential_graph,
    is_chordal,
    markov_equivalent,
    maximal_undirected_cliques,
    mec_size_bruteforce,
    meek_closure,
    undirected_cliques_within,
    validate_cpdag,
)
from .tester import (
    TestPlan,
    TestReport,
    class2_budget,
    class_i_plan,
    class_ii_plan,
    is_minimal_imap_test,
    run_membership_test,
)

__version__ = "0.1.0"
