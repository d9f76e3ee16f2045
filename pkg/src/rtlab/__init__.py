"""Generalized Ramsey-Turán clique densities on weighted graphs."""
from .profile import Profile, candidate_profiles, density_at, optimize_sizes, realize
from .skeleton import is_skeleton_free, max_skeleton_value
from .solver import closed_form, conjecture_profile, counterexample_search, rt_density
from .symmetrize import zykov_reduce
from .wgraph import Dyadic, GraphInputError, WeightedGraph, count_cliques

__version__ = "0.1.0"
